"""Pattern query language: tokenizer, parser, validator, and unparser.

Grammar (keywords and kind names are case-insensitive):

    query    := SELECT proj ("," proj)*
                PATTERNS pattern+
                [ANTIPATTERNS pattern+]
                [WHERE cond (AND cond)*]
                [ORDERBY AVG "(" pattern ")" [ASC|DESC]]
                [LIMIT int]
    pattern  := vatom ("-" eatom "-" vatom)*
    vatom    := VKIND ["(" ident ")"]
    eatom    := EKIND ["." ident]
    proj     := ident "." ident | VKIND "(" ident ")" "." ident
    cond     := lvalue op literal
    lvalue   := ident "." ident | VKIND "(" ident ")" "." ident | VKIND "." ident
    op       := "=" | "!=" | "<" | "<=" | ">" | ">="
    literal  := int | real | string | bare identifier (taken as a string)

Vertex kinds are V_P, V_G, V_D, V_R; edge kinds E_F, E_O, E_D, E_R.
Pattern edges are written without direction; the schema determines which
way a directed edge actually runs. A `VKIND.attr` condition (no variable)
constrains every vertex of that kind matched inside the positive patterns.
The ORDERBY direction defaults to DESC. `.attr` on a pattern edge marks
the attribute an AVG aggregates (at most one tap per pattern).
"""
from __future__ import annotations

from dataclasses import dataclass, field
from typing import Iterable

from .graph import EDGE_ENDPOINTS, EdgeKind, VertexKind

KEYWORDS = {
    "SELECT",
    "PATTERNS",
    "ANTIPATTERNS",
    "WHERE",
    "AND",
    "ORDERBY",
    "AVG",
    "ASC",
    "DESC",
    "LIMIT",
}

VERTEX_KIND_NAMES = {
    "V_P": VertexKind.PLAYER,
    "V_G": VertexKind.GAME,
    "V_D": VertexKind.DEVELOPER,
    "V_R": VertexKind.GENRE,
}
EDGE_KIND_NAMES = {
    "E_F": EdgeKind.FRIEND,
    "E_O": EdgeKind.OWNS,
    "E_D": EdgeKind.DEVELOPED_BY,
    "E_R": EdgeKind.HAS_GENRE,
}
VERTEX_KIND_LABELS = {kind: label for label, kind in VERTEX_KIND_NAMES.items()}
EDGE_KIND_LABELS = {kind: label for label, kind in EDGE_KIND_NAMES.items()}

COMPARISONS = ("<=", ">=", "!=", "<", ">", "=")


class QuerySyntaxError(Exception):
    def __init__(self, line: int, column: int, expected: str, found: str):
        super().__init__(f"{line}:{column}: expected {expected}, found {found}")
        self.line = line
        self.column = column
        self.expected = expected
        self.found = found


class QueryValidationError(Exception):
    pass


class UnboundVariable(QueryValidationError):
    def __init__(self, name: str):
        super().__init__(f"variable {name!r} is not bound by any pattern")
        self.name = name


class KindMismatch(QueryValidationError):
    def __init__(self, var: str, kind1: VertexKind, kind2: VertexKind):
        super().__init__(
            f"variable {var!r} used both as {kind1.value} and as {kind2.value}"
        )
        self.var = var
        self.kinds = (kind1, kind2)


class IllegalEdge(QueryValidationError):
    def __init__(self, edge: EdgeKind, left: VertexKind, right: VertexKind):
        super().__init__(
            f"{EDGE_KIND_LABELS[edge]} cannot join {VERTEX_KIND_LABELS[left]} "
            f"and {VERTEX_KIND_LABELS[right]}"
        )
        self.edge = edge
        self.left = left
        self.right = right


class UntappedAggregate(QueryValidationError):
    pass


# -- AST ---------------------------------------------------------------


@dataclass(frozen=True)
class VertexAtom:
    kind: VertexKind
    var: str | None = None


@dataclass(frozen=True)
class EdgeAtom:
    kind: EdgeKind
    tap: str | None = None


@dataclass(frozen=True)
class Pattern:
    atoms: tuple  # VertexAtom, EdgeAtom, VertexAtom, ... (odd length)

    def vertex_atoms(self) -> tuple[VertexAtom, ...]:
        return self.atoms[0::2]

    def edge_atoms(self) -> tuple[EdgeAtom, ...]:
        return self.atoms[1::2]

    def variables(self) -> tuple[str, ...]:
        seen = []
        for atom in self.vertex_atoms():
            if atom.var is not None and atom.var not in seen:
                seen.append(atom.var)
        return tuple(seen)


@dataclass(frozen=True)
class Projection:
    var: str
    attr: str


@dataclass(frozen=True)
class Condition:
    attr: str
    op: str
    literal: int | float | str
    var: str | None = None
    kind: VertexKind | None = None  # set for VKIND.attr conditions


@dataclass(frozen=True)
class AggExpr:
    pattern: Pattern  # must contain exactly one edge tap


@dataclass(frozen=True)
class QueryAst:
    select: tuple[Projection, ...]
    patterns: tuple[Pattern, ...]
    antipatterns: tuple[Pattern, ...] = ()
    where: tuple[Condition, ...] = ()
    orderby: AggExpr | None = None
    descending: bool = True
    limit: int | None = None
    # kind annotations from V_G(b).attr sugar; surface-only, so excluded
    # from structural equality
    kind_assertions: tuple = field(default=(), compare=False)


@dataclass(frozen=True)
class TypedQuery:
    ast: QueryAst
    var_kinds: dict[str, VertexKind]


# -- tokenizer ---------------------------------------------------------


@dataclass(frozen=True)
class Token:
    type: str  # KEYWORD, VKIND, EKIND, IDENT, INT, REAL, STRING, PUNCT, EOF
    value: object
    line: int
    column: int

    def describe(self) -> str:
        if self.type == "EOF":
            return "end of input"
        if self.type == "VKIND":
            return repr(VERTEX_KIND_LABELS[self.value])
        if self.type == "EKIND":
            return repr(EDGE_KIND_LABELS[self.value])
        return repr(str(self.value))


def _is_ident_start(c: str) -> bool:
    return c.isalpha() or c == "_"


def _is_ident_char(c: str) -> bool:
    return c.isalnum() or c == "_"


def tokenize(text: str) -> list[Token]:
    tokens: list[Token] = []
    i, line, col = 0, 1, 1
    n = len(text)
    while i < n:
        c = text[i]
        if c == "\n":
            i += 1
            line += 1
            col = 1
            continue
        if c.isspace():
            i += 1
            col += 1
            continue
        start_line, start_col = line, col
        if _is_ident_start(c):
            j = i
            while j < n and _is_ident_char(text[j]):
                j += 1
            word = text[i:j]
            upper = word.upper()
            if upper in VERTEX_KIND_NAMES:
                tokens.append(Token("VKIND", VERTEX_KIND_NAMES[upper], start_line, start_col))
            elif upper in EDGE_KIND_NAMES:
                tokens.append(Token("EKIND", EDGE_KIND_NAMES[upper], start_line, start_col))
            elif upper in KEYWORDS:
                tokens.append(Token("KEYWORD", upper, start_line, start_col))
            else:
                tokens.append(Token("IDENT", word, start_line, start_col))
            col += j - i
            i = j
            continue
        if c.isdigit():
            j = i
            is_real = False
            while j < n and text[j].isdigit():
                j += 1
            if j < n and text[j] == "." and j + 1 < n and text[j + 1].isdigit():
                is_real = True
                j += 1
                while j < n and text[j].isdigit():
                    j += 1
            if j < n and text[j] in "eE":
                k = j + 1
                if k < n and text[k] in "+-":
                    k += 1
                if k < n and text[k].isdigit():
                    is_real = True
                    j = k
                    while j < n and text[j].isdigit():
                        j += 1
            word = text[i:j]
            if is_real:
                tokens.append(Token("REAL", float(word), start_line, start_col))
            else:
                tokens.append(Token("INT", int(word), start_line, start_col))
            col += j - i
            i = j
            continue
        if c == '"':
            j = i + 1
            out = []
            while j < n and text[j] != '"':
                if text[j] == "\\" and j + 1 < n:
                    esc = text[j + 1]
                    out.append({"n": "\n", "t": "\t"}.get(esc, esc))
                    j += 2
                elif text[j] == "\n":
                    raise QuerySyntaxError(start_line, start_col, "closing quote", "newline")
                else:
                    out.append(text[j])
                    j += 1
            if j >= n:
                raise QuerySyntaxError(start_line, start_col, "closing quote", "end of input")
            tokens.append(Token("STRING", "".join(out), start_line, start_col))
            col += j + 1 - i
            i = j + 1
            continue
        matched = None
        for op in COMPARISONS:
            if text.startswith(op, i):
                matched = op
                break
        if matched is None and c in ",()-.":
            matched = c
        if matched is None:
            raise QuerySyntaxError(start_line, start_col, "a token", repr(c))
        tokens.append(Token("PUNCT", matched, start_line, start_col))
        i += len(matched)
        col += len(matched)
    tokens.append(Token("EOF", None, line, col))
    return tokens


# -- parser ------------------------------------------------------------


class _Parser:
    def __init__(self, tokens: list[Token]):
        self.tokens = tokens
        self.pos = 0
        self.assertions: list[tuple[str, VertexKind]] = []

    def peek(self, ahead: int = 0) -> Token:
        return self.tokens[min(self.pos + ahead, len(self.tokens) - 1)]

    def next(self) -> Token:
        tok = self.tokens[self.pos]
        if tok.type != "EOF":
            self.pos += 1
        return tok

    def fail(self, expected: str, tok: Token | None = None):
        tok = tok or self.peek()
        raise QuerySyntaxError(tok.line, tok.column, expected, tok.describe())

    def expect_keyword(self, word: str) -> Token:
        tok = self.peek()
        if tok.type != "KEYWORD" or tok.value != word:
            self.fail(word)
        return self.next()

    def expect_punct(self, symbol: str) -> Token:
        tok = self.peek()
        if tok.type != "PUNCT" or tok.value != symbol:
            self.fail(repr(symbol))
        return self.next()

    def expect_ident(self) -> str:
        tok = self.peek()
        if tok.type != "IDENT":
            self.fail("an identifier")
        return self.next().value

    def at_keyword(self, *words: str) -> bool:
        tok = self.peek()
        return tok.type == "KEYWORD" and tok.value in words

    def at_punct(self, symbol: str) -> bool:
        tok = self.peek()
        return tok.type == "PUNCT" and tok.value == symbol

    # lvalue := ident.attr | VKIND(ident).attr | VKIND.attr
    # Returns (var, kind, attr); var is None for the kind-scoped form.
    def parse_lvalue(self) -> tuple[str | None, VertexKind | None, str]:
        tok = self.peek()
        if tok.type == "IDENT":
            var = self.next().value
            self.expect_punct(".")
            return var, None, self.expect_ident()
        if tok.type == "VKIND":
            kind = self.next().value
            if self.at_punct("("):
                self.next()
                var = self.expect_ident()
                self.expect_punct(")")
                self.expect_punct(".")
                self.assertions.append((var, kind))
                return var, None, self.expect_ident()
            self.expect_punct(".")
            return None, kind, self.expect_ident()
        self.fail("a variable or vertex kind")

    def parse_projection(self) -> Projection:
        start = self.peek()
        var, kind, attr = self.parse_lvalue()
        if var is None:
            self.fail("a variable (projections need one)", start)
        return Projection(var=var, attr=attr)

    def parse_vertex_atom(self) -> VertexAtom:
        tok = self.peek()
        if tok.type != "VKIND":
            self.fail("a vertex kind (V_P, V_G, V_D, V_R)")
        kind = self.next().value
        var = None
        if self.at_punct("("):
            self.next()
            var = self.expect_ident()
            self.expect_punct(")")
        return VertexAtom(kind=kind, var=var)

    def parse_edge_atom(self) -> EdgeAtom:
        tok = self.peek()
        if tok.type != "EKIND":
            self.fail("an edge kind (E_F, E_O, E_D, E_R)")
        kind = self.next().value
        tap = None
        if self.at_punct("."):
            self.next()
            tap = self.expect_ident()
        return EdgeAtom(kind=kind, tap=tap)

    def parse_pattern(self) -> Pattern:
        atoms: list = [self.parse_vertex_atom()]
        while self.at_punct("-"):
            self.next()
            atoms.append(self.parse_edge_atom())
            self.expect_punct("-")
            atoms.append(self.parse_vertex_atom())
        return Pattern(atoms=tuple(atoms))

    def parse_pattern_list(self) -> tuple[Pattern, ...]:
        patterns = [self.parse_pattern()]
        while self.peek().type == "VKIND":
            patterns.append(self.parse_pattern())
        return tuple(patterns)

    def parse_literal(self) -> int | float | str:
        tok = self.peek()
        negate = False
        if self.at_punct("-"):
            self.next()
            negate = True
            tok = self.peek()
        if tok.type == "INT":
            return -self.next().value if negate else self.next().value
        if tok.type == "REAL":
            return -self.next().value if negate else self.next().value
        if negate:
            self.fail("a number after '-'")
        if tok.type == "STRING":
            return self.next().value
        if tok.type == "IDENT":  # bare word taken as a string
            return self.next().value
        self.fail("a literal")

    def parse_condition(self) -> Condition:
        var, kind, attr = self.parse_lvalue()
        tok = self.peek()
        if tok.type != "PUNCT" or tok.value not in COMPARISONS:
            self.fail("a comparison operator")
        op = self.next().value
        literal = self.parse_literal()
        return Condition(attr=attr, op=op, literal=literal, var=var, kind=kind)

    def parse_query(self) -> QueryAst:
        self.expect_keyword("SELECT")
        select = [self.parse_projection()]
        while self.at_punct(","):
            self.next()
            select.append(self.parse_projection())

        self.expect_keyword("PATTERNS")
        patterns = self.parse_pattern_list()

        antipatterns: tuple[Pattern, ...] = ()
        if self.at_keyword("ANTIPATTERNS"):
            self.next()
            antipatterns = self.parse_pattern_list()

        where: list[Condition] = []
        if self.at_keyword("WHERE"):
            self.next()
            where.append(self.parse_condition())
            while self.at_keyword("AND"):
                self.next()
                where.append(self.parse_condition())

        orderby = None
        descending = True
        if self.at_keyword("ORDERBY"):
            self.next()
            self.expect_keyword("AVG")
            self.expect_punct("(")
            orderby = AggExpr(pattern=self.parse_pattern())
            self.expect_punct(")")
            if self.at_keyword("ASC"):
                self.next()
                descending = False
            elif self.at_keyword("DESC"):
                self.next()

        limit = None
        if self.at_keyword("LIMIT"):
            self.next()
            tok = self.peek()
            if tok.type != "INT" or tok.value < 1:
                self.fail("a positive integer")
            limit = self.next().value

        tok = self.peek()
        if tok.type != "EOF":
            self.fail("end of query")

        return QueryAst(
            select=tuple(select),
            patterns=patterns,
            antipatterns=antipatterns,
            where=tuple(where),
            orderby=orderby,
            descending=descending,
            limit=limit,
            kind_assertions=tuple(self.assertions),
        )


def parse(text: str) -> QueryAst:
    """Parse query text into an AST; raises QuerySyntaxError with position."""
    return _Parser(tokenize(text)).parse_query()


# -- validation --------------------------------------------------------


def _edge_legal(left: VertexKind, edge: EdgeKind, right: VertexKind) -> bool:
    src, dst = EDGE_ENDPOINTS[edge]
    return (left, right) in ((src, dst), (dst, src))


def _check_pattern(pattern: Pattern, kinds: dict[str, VertexKind], bind: bool) -> None:
    atoms = pattern.atoms
    taps = 0
    for i, atom in enumerate(atoms):
        if i % 2 == 0:
            if atom.var is not None:
                known = kinds.get(atom.var)
                if known is None:
                    if not bind:
                        raise UnboundVariable(atom.var)
                    kinds[atom.var] = atom.kind
                elif known is not atom.kind:
                    raise KindMismatch(atom.var, known, atom.kind)
        else:
            if atom.tap is not None:
                taps += 1
            if not _edge_legal(atoms[i - 1].kind, atom.kind, atoms[i + 1].kind):
                raise IllegalEdge(atom.kind, atoms[i - 1].kind, atoms[i + 1].kind)
    if taps > 1:
        raise QueryValidationError("a pattern may tap at most one edge attribute")


def validate(ast: QueryAst) -> TypedQuery:
    """Kind-check the AST against the graph schema.

    Resolves every variable's vertex kind, checks that each pattern edge can
    legally join its endpoint kinds, and that select/where/orderby only use
    variables bound by the positive patterns.
    """
    kinds: dict[str, VertexKind] = {}
    for pattern in ast.patterns:
        _check_pattern(pattern, kinds, bind=True)
    for pattern in ast.antipatterns:
        _check_pattern(pattern, kinds, bind=False)

    for var, kind in ast.kind_assertions:
        known = kinds.get(var)
        if known is None:
            raise UnboundVariable(var)
        if known is not kind:
            raise KindMismatch(var, known, kind)

    positive_kinds = {
        atom.kind for pattern in ast.patterns for atom in pattern.vertex_atoms()
    }
    for proj in ast.select:
        if proj.var not in kinds:
            raise UnboundVariable(proj.var)
    for cond in ast.where:
        if cond.var is not None:
            if cond.var not in kinds:
                raise UnboundVariable(cond.var)
        else:
            if cond.kind not in positive_kinds:
                raise UnboundVariable(VERTEX_KIND_LABELS[cond.kind])
        if cond.op not in ("=", "!=") and isinstance(cond.literal, str):
            raise QueryValidationError(
                f"operator {cond.op!r} requires a numeric literal"
            )

    if ast.orderby is not None:
        _check_pattern(ast.orderby.pattern, kinds, bind=False)
        if not any(atom.tap for atom in ast.orderby.pattern.edge_atoms()):
            raise UntappedAggregate("AVG pattern must tap an edge attribute")

    return TypedQuery(ast=ast, var_kinds=kinds)


# -- unparse -----------------------------------------------------------


def _literal_text(value: int | float | str) -> str:
    if isinstance(value, str):
        escaped = value.replace("\\", "\\\\").replace('"', '\\"')
        escaped = escaped.replace("\n", "\\n").replace("\t", "\\t")
        return f'"{escaped}"'
    return repr(value)


def _pattern_text(pattern: Pattern) -> str:
    parts = []
    for i, atom in enumerate(pattern.atoms):
        if i % 2 == 0:
            label = VERTEX_KIND_LABELS[atom.kind]
            parts.append(f"{label}({atom.var})" if atom.var else label)
        else:
            label = EDGE_KIND_LABELS[atom.kind]
            parts.append(f"{label}.{atom.tap}" if atom.tap else label)
    return "-".join(parts)


def _condition_text(cond: Condition) -> str:
    subject = cond.var if cond.var is not None else VERTEX_KIND_LABELS[cond.kind]
    return f"{subject}.{cond.attr}{cond.op}{_literal_text(cond.literal)}"


def unparse(ast: QueryAst) -> str:
    """Render an AST as canonical single-line query text."""
    parts = ["SELECT " + ", ".join(f"{p.var}.{p.attr}" for p in ast.select)]
    parts.append("PATTERNS " + " ".join(_pattern_text(p) for p in ast.patterns))
    if ast.antipatterns:
        parts.append("ANTIPATTERNS " + " ".join(_pattern_text(p) for p in ast.antipatterns))
    if ast.where:
        parts.append("WHERE " + " AND ".join(_condition_text(c) for c in ast.where))
    if ast.orderby is not None:
        direction = "DESC" if ast.descending else "ASC"
        parts.append(f"ORDERBY AVG({_pattern_text(ast.orderby.pattern)}) {direction}")
    if ast.limit is not None:
        parts.append(f"LIMIT {ast.limit}")
    return " ".join(parts)
