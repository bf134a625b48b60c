"""Independent brute-force query evaluator used to cross-check the engine.

Enumerates every assignment of named variables to vertices and every
pattern embedding naively over the edge table. Shares no code with the
engine beyond the AST types.
"""
import itertools
import math

from attainrec.graph import EDGE_ENDPOINTS, EdgeKind


def _literal_matches(value, cond):
    lit = cond.literal
    if value is None:
        return False
    if isinstance(value, str):
        if isinstance(lit, str):
            text = lit
        elif cond.op in ("=", "!=") and isinstance(lit, (int, float)):
            text = repr(lit) if isinstance(lit, float) else str(lit)
        else:
            return False
        return (value == text) if cond.op == "=" else (value != text) if cond.op == "!=" else False
    if isinstance(value, (bool, int, float)) and not isinstance(lit, str):
        return {
            "=": value == lit,
            "!=": value != lit,
            "<": value < lit,
            "<=": value <= lit,
            ">": value > lit,
            ">=": value >= lit,
        }[cond.op]
    return False


def _edge_connects(graph, edge, left_vid, right_vid, ekind):
    if edge.kind is not ekind:
        return False
    if ekind is EdgeKind.FRIEND:
        return {edge.src, edge.dst} == {left_vid, right_vid} or (
            edge.src == left_vid and edge.dst == right_vid
        )
    return (edge.src, edge.dst) in ((left_vid, right_vid), (right_vid, left_vid))


def _all_embeddings(graph, pattern, assignment, kind_conds=None):
    """Every embedding (v0, e0, v1, ...) consistent with the assignment,
    with optional kind-scoped condition filters on every vertex atom."""
    atoms = pattern.atoms
    kind_conds = kind_conds or {}

    def vertex_candidates(atom):
        if atom.var is not None and atom.var in assignment:
            candidates = [assignment[atom.var]]
        else:
            candidates = [v.id for v in graph.vertices() if v.kind is atom.kind]
        out = []
        for vid in candidates:
            if graph.vertex(vid).kind is not atom.kind:
                continue
            ok = True
            for cond in kind_conds.get(atom.kind, ()):
                if not _literal_matches(graph.vertex_attr(vid, cond.attr), cond):
                    ok = False
                    break
            if ok:
                out.append(vid)
        return out

    def local_consistent(seq):
        local = {}
        for i in range(0, len(seq), 2):
            var = atoms[i].var
            if var is not None:
                if var in local and local[var] != seq[i]:
                    return False
                local[var] = seq[i]
        return True

    results = []

    def recurse(seq, pos):
        if pos == len(atoms):
            if local_consistent(seq):
                results.append(tuple(seq))
            return
        if pos % 2 == 0:
            for vid in vertex_candidates(atoms[pos]):
                recurse(seq + [vid], pos + 1)
        else:
            left = seq[-1]
            ekind = atoms[pos].kind
            for edge in graph.edges():
                for vid in vertex_candidates(atoms[pos + 1]):
                    if _edge_connects(graph, edge, left, vid, ekind):
                        recurse(seq + [edge.id, vid], pos + 2)

    recurse([], 0)
    return results


def brute_force_rows(query, graph):
    """Rows exactly as the engine contract specifies: (cells, sort_key)
    pairs in final order, truncated to LIMIT."""
    ast = query.ast
    var_kinds = query.var_kinds
    names = sorted(var_kinds)
    domains = [
        [v.id for v in graph.vertices() if v.kind is var_kinds[name]] for name in names
    ]
    kind_conds = {}
    for cond in ast.where:
        if cond.var is None:
            kind_conds.setdefault(cond.kind, []).append(cond)

    rows = []
    for combo in itertools.product(*domains):
        assignment = dict(zip(names, combo))
        if not all(
            _all_embeddings(graph, pattern, assignment, kind_conds)
            for pattern in ast.patterns
        ):
            continue
        ok = True
        for cond in ast.where:
            if cond.var is None:
                continue
            if not _literal_matches(graph.vertex_attr(assignment[cond.var], cond.attr), cond):
                ok = False
                break
        if not ok:
            continue
        if any(_all_embeddings(graph, anti, assignment) for anti in ast.antipatterns):
            continue
        sort_key = None
        if ast.orderby is not None:
            agg = ast.orderby.pattern
            tap_pos = tap_attr = None
            for i, atom in enumerate(agg.atoms):
                if i % 2 == 1 and atom.tap is not None:
                    tap_pos, tap_attr = i, atom.tap
            values = []
            for emb in _all_embeddings(graph, agg, assignment):
                values.append(float(graph.edge_attr(emb[tap_pos], tap_attr)))
            if values:
                sort_key = math.fsum(values) / len(values)
        cells = tuple(graph.vertex_attr(assignment[p.var], p.attr) for p in ast.select)
        rows.append((cells, sort_key, combo))

    def order_key(row):
        cells, key, combo = row
        if key is None:
            return (1, 0.0, combo)
        return (0, -key if ast.descending else key, combo)

    rows.sort(key=order_key)
    if ast.limit is not None:
        rows = rows[: ast.limit]
    return [(cells, key) for cells, key, _ in rows]
