import numpy as np
import pytest

from attainrec.graph import EdgeKind, VertexKind
from attainrec.querylang import (
    EDGE_KIND_LABELS,
    VERTEX_KIND_LABELS,
    AggExpr,
    Condition,
    EdgeAtom,
    IllegalEdge,
    KindMismatch,
    Pattern,
    Projection,
    QueryAst,
    QuerySyntaxError,
    QueryValidationError,
    UnboundVariable,
    UntappedAggregate,
    VertexAtom,
    parse,
    unparse,
    validate,
)

from conftest import LISTING_QUERY
from randgen import random_ast


def test_full_query_parses():
    ast = parse(LISTING_QUERY)
    assert len(ast.select) == 2
    assert ast.select[0] == Projection(var="b", attr="name")
    assert ast.select[1] == Projection(var="b", attr="cost")
    assert len(ast.patterns) == 2
    assert len(ast.where) == 1
    cond = ast.where[0]
    assert (cond.var, cond.attr, cond.op, cond.literal) == (
        "a",
        "steamid",
        "=",
        76561197960653976,
    )
    assert ast.orderby is not None
    taps = [atom.tap for atom in ast.orderby.pattern.edge_atoms()]
    assert taps == [None, "attainmentRating"]
    tapped = ast.orderby.pattern.atoms[3]
    assert tapped.kind is EdgeKind.OWNS
    assert ast.limit == 5
    assert ast.descending  # default direction


def test_minimal_query():
    ast = parse("SELECT b.name PATTERNS V_G(b)")
    assert ast.patterns == (Pattern(atoms=(VertexAtom(VertexKind.GAME, "b"),)),)
    assert ast.antipatterns == ()
    assert ast.where == ()
    assert ast.orderby is None
    assert ast.limit is None


def test_missing_patterns_clause():
    with pytest.raises(QuerySyntaxError) as err:
        parse("SELECT b.name")
    assert err.value.expected == "PATTERNS"


def test_error_positions_point_into_text():
    cases = [
        "SELECT",
        "SELECT b.name PATTERNS",
        "SELECT b.name PATTERNS V_G(b) LIMIT 0",
        "SELECT b.name PATTERNS V_G(b) LIMIT",
        "SELECT b.name PATTERNS E_O",
        "SELECT b.name PATTERNS V_G(b) WHERE",
        'SELECT b.name PATTERNS V_G(b) WHERE b.name="unclosed',
        "SELECT b.name PATTERNS V_G(b) garbage",
        "SELECT b.name, PATTERNS V_G(b)",
    ]
    for text in cases:
        with pytest.raises(QuerySyntaxError) as err:
            parse(text)
        lines = text.split("\n")
        assert 1 <= err.value.line <= len(lines)
        assert 1 <= err.value.column <= len(lines[err.value.line - 1]) + 1


def test_keywords_case_insensitive():
    ast = parse("select b.name patterns v_g(b) limit 3")
    assert ast.limit == 3
    assert ast.patterns[0].atoms[0].kind is VertexKind.GAME


def test_validate_listing_query():
    typed = validate(parse(LISTING_QUERY))
    assert typed.var_kinds == {"a": VertexKind.PLAYER, "b": VertexKind.GAME}


def test_illegal_edge():
    with pytest.raises(IllegalEdge):
        validate(parse("SELECT a.name PATTERNS V_P(a)-E_D-V_D"))


def test_unbound_orderby_variable():
    text = "SELECT b.name PATTERNS V_G(b) ORDERBY AVG(V_P(c)-E_O.w-V_G(b))"
    with pytest.raises(UnboundVariable) as err:
        validate(parse(text))
    assert err.value.name == "c"


def test_unbound_select_and_where():
    with pytest.raises(UnboundVariable):
        validate(parse("SELECT c.name PATTERNS V_G(b)"))
    with pytest.raises(UnboundVariable):
        validate(parse("SELECT b.name PATTERNS V_G(b) WHERE c.x=1"))


def test_kind_mismatch():
    with pytest.raises(KindMismatch):
        validate(parse("SELECT a.name PATTERNS V_P(a)-E_O-V_G(a)"))
    # sugar form asserts a kind too
    with pytest.raises(KindMismatch):
        validate(parse("SELECT V_P(b).name PATTERNS V_G(b)"))


def test_antipattern_variables_must_be_bound():
    with pytest.raises(UnboundVariable):
        validate(parse("SELECT b.name PATTERNS V_G(b) ANTIPATTERNS V_P(z)-E_O-V_G(b)"))


def test_untapped_aggregate():
    with pytest.raises(UntappedAggregate):
        validate(parse("SELECT b.name PATTERNS V_G(b) ORDERBY AVG(V_P-E_O-V_G(b))"))


def test_multiple_taps_rejected():
    text = "SELECT a.name PATTERNS V_P(a)-E_F.w-V_P-E_F.w-V_P"
    with pytest.raises(QueryValidationError):
        validate(parse(text))


def test_ordering_comparison_requires_numeric_literal():
    with pytest.raises(QueryValidationError):
        validate(parse("SELECT b.name PATTERNS V_G(b) WHERE b.name<abc"))


def test_kind_condition_requires_matching_pattern_atom():
    with pytest.raises(UnboundVariable):
        validate(parse("SELECT b.name PATTERNS V_G(b) WHERE V_R.description=Strategy"))


def test_refinement_clauses_parse_and_validate():
    new_game = (
        LISTING_QUERY.replace("ORDERYBY", "ORDERBY")
        .replace("WHERE", "ANTIPATTERNS V_P(a)-E_O-V_G(b) WHERE")
    )
    ast = validate(parse(new_game)).ast
    assert len(ast.antipatterns) == 1

    strategy = new_game.replace(
        "PATTERNS V_P(a)-E_F-V_P-E_O-V_G(b)",
        "PATTERNS V_P(a)-E_F-V_P-E_O-V_G(b) V_G(b)-E_R-V_R",
    ).replace("WHERE ", "WHERE V_R.description=Strategy AND ")
    typed = validate(parse(strategy))
    kind_conds = [c for c in typed.ast.where if c.var is None]
    assert kind_conds == [
        Condition(attr="description", op="=", literal="Strategy", kind=VertexKind.GENRE)
    ]


def test_bare_identifier_literal_is_a_string():
    ast = parse("SELECT b.name PATTERNS V_G(b) WHERE b.name=Strategy")
    assert ast.where[0].literal == "Strategy"


def test_explicit_asc_direction():
    ast = parse("SELECT b.name PATTERNS V_G(b) ORDERBY AVG(V_P-E_O.w-V_G(b)) ASC")
    assert not ast.descending


def test_unparse_minimal_round_trips_byte_identically():
    text = "SELECT b.name PATTERNS V_G(b)"
    assert unparse(parse(text)) == text
    canonical = unparse(parse(text))
    assert unparse(parse(canonical)) == canonical


def test_listing_round_trips_to_equal_ast():
    ast = parse(LISTING_QUERY)
    assert parse(unparse(ast)) == ast


def test_antipatterns_clause_position():
    ast = parse("SELECT b.name PATTERNS V_G(b) WHERE b.x=1")
    with_anti = QueryAst(
        select=ast.select,
        patterns=ast.patterns,
        antipatterns=(Pattern(atoms=(VertexAtom(VertexKind.GAME, "b"),)),),
        where=ast.where,
    )
    text = unparse(with_anti)
    assert text.index("PATTERNS") < text.index("ANTIPATTERNS") < text.index("WHERE")
    assert parse(text) == with_anti


def test_random_ast_round_trips():
    for seed in range(300):
        ast = random_ast(np.random.default_rng(seed))
        text = unparse(ast)
        assert parse(text) == ast, text


def test_validation_matches_legal_triple_enumeration():
    from attainrec.graph import EDGE_ENDPOINTS

    for left in VertexKind:
        for ekind in EdgeKind:
            for right in VertexKind:
                text = (
                    f"SELECT a.name PATTERNS "
                    f"{VERTEX_KIND_LABELS[left]}(a)-{EDGE_KIND_LABELS[ekind]}-"
                    f"{VERTEX_KIND_LABELS[right]}"
                )
                src, dst = EDGE_ENDPOINTS[ekind]
                legal = (left, right) in ((src, dst), (dst, src))
                if legal:
                    validate(parse(text))
                else:
                    with pytest.raises(IllegalEdge):
                        validate(parse(text))
