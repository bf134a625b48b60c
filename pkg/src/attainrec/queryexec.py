"""Query evaluation over a frozen, rating-annotated property graph.

Pattern matching uses homomorphism semantics: two atoms (named or
anonymous) may land on the same vertex as long as kinds agree. Result rows
are the distinct assignments of the named variables such that every
positive pattern embeds at least once, every antipattern embeds zero
times, and all WHERE conditions hold. The AVG aggregate is the mean of the
tapped edge attribute over all distinct embeddings of the aggregate
pattern consistent with the row's binding; rows without any aggregate
embedding sort after all keyed rows. Ties break by ascending bound vertex
ids, so evaluation is fully deterministic.
"""
from __future__ import annotations

import math
from dataclasses import dataclass
from typing import Callable, Iterator

from .graph import EdgeKind, PropertyGraph, VertexKind
from .querylang import Condition, Pattern, TypedQuery


class TapAttributeMissing(Exception):
    def __init__(self, edge: int, attr: str):
        super().__init__(f"edge {edge} lacks numeric attribute {attr!r}")
        self.edge = edge
        self.attr = attr


@dataclass
class ResultRow:
    cells: tuple
    sort_key: float | None
    binding: dict[str, int]


def condition_holds(value, cond: Condition) -> bool:
    """Attribute comparison semantics shared by filters and row checks.

    Missing attributes never satisfy a condition. Equality between a string
    attribute and a numeric literal compares against the literal's decimal
    text, so `a.steamid=76561197960653976` matches the stored id string.
    """
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
        if cond.op == "=":
            return value == text
        if cond.op == "!=":
            return value != text
        return False
    if isinstance(value, (bool, int, float)):
        if isinstance(lit, str):
            return False
        ops = {
            "=": lambda a, b: a == b,
            "!=": lambda a, b: a != b,
            "<": lambda a, b: a < b,
            "<=": lambda a, b: a <= b,
            ">": lambda a, b: a > b,
            ">=": lambda a, b: a >= b,
        }
        return ops[cond.op](value, lit)
    return False  # tuple-valued attributes are not comparable


VertexFilter = Callable[[VertexKind, str | None, int], bool]


def embeddings(
    pattern: Pattern,
    graph: PropertyGraph,
    seed: dict[str, int] | None = None,
    vertex_ok: VertexFilter | None = None,
) -> Iterator[tuple]:
    """Yield each embedding of `pattern` once, as the tuple
    (v0, e0, v1, e1, ...), in deterministic order.

    `seed` pins named variables to vertices. `vertex_ok(kind, var, vid)`
    vetoes candidate vertices (used for condition push-down).
    """
    seed = seed or {}
    atoms = pattern.atoms
    vertex_positions = range(0, len(atoms), 2)

    def candidate_ok(pos: int, vid: int, local: dict[str, int]) -> bool:
        atom = atoms[pos]
        if graph.vertex(vid).kind is not atom.kind:
            return False
        if atom.var is not None:
            pinned = seed.get(atom.var)
            if pinned is not None and vid != pinned:
                return False
            bound = local.get(atom.var)
            if bound is not None and vid != bound:
                return False
        if vertex_ok is not None and not vertex_ok(atom.kind, atom.var, vid):
            return False
        return True

    # start from a seeded atom when possible, else the scarcest vertex kind
    start = None
    for pos in vertex_positions:
        var = atoms[pos].var
        if var is not None and var in seed:
            start = pos
            break
    if start is None:
        start = min(vertex_positions, key=lambda p: graph.count(atoms[p].kind))

    atom = atoms[start]
    if atom.var is not None and atom.var in seed:
        start_candidates = [seed[atom.var]]
    else:
        start_candidates = graph.vertices_of_kind(atom.kind)

    # fill positions right of start first, then left (deterministic order)
    order = list(range(start + 2, len(atoms), 2)) + list(range(start - 2, -1, -2))

    assign: dict[int, int] = {}
    edge_assign: dict[int, int] = {}

    def extend(step: int) -> Iterator[None]:
        if step == len(order):
            yield None
            return
        pos = order[step]
        anchor = pos - 2 if pos > start else pos + 2
        edge_pos = (pos + anchor) // 2
        ekind = atoms[edge_pos].kind
        local = {
            atoms[p].var: v for p, v in assign.items() if atoms[p].var is not None
        }
        for eid, nbr in graph.neighbors(assign[anchor], ekind, "any"):
            if not candidate_ok(pos, nbr, local):
                continue
            assign[pos] = nbr
            edge_assign[edge_pos] = eid
            yield from extend(step + 1)
            del assign[pos]
            del edge_assign[edge_pos]

    for vid in start_candidates:
        if not candidate_ok(start, vid, {}):
            continue
        assign[start] = vid
        for _ in extend(0):
            yield tuple(
                assign[i] if i % 2 == 0 else edge_assign[i] for i in range(len(atoms))
            )
        del assign[start]


def aggregate_avg(
    binding: dict[str, int], agg_pattern: Pattern, graph: PropertyGraph
) -> float | None:
    """Mean of the tapped edge attribute over all embeddings consistent with
    `binding`; None when there are no embeddings."""
    tap_attr = None
    tap_index = None
    for i, atom in enumerate(agg_pattern.atoms):
        if i % 2 == 1 and atom.tap is not None:
            tap_attr = atom.tap
            tap_index = i
    values = []
    seed = {v: binding[v] for v in agg_pattern.variables() if v in binding}
    for emb in embeddings(agg_pattern, graph, seed):
        eid = emb[tap_index]
        value = graph.edge_attr(eid, tap_attr)
        if not isinstance(value, (int, float)) or isinstance(value, bool):
            raise TapAttributeMissing(eid, tap_attr)
        values.append(float(value))
    if not values:
        return None
    return math.fsum(values) / len(values)


def _binding_of(pattern: Pattern, embedding: tuple) -> tuple:
    pairs = []
    seen = set()
    for i, atom in enumerate(pattern.atoms):
        if i % 2 == 0 and atom.var is not None and atom.var not in seen:
            seen.add(atom.var)
            pairs.append((atom.var, embedding[i]))
    return tuple(pairs)


def evaluate(query: TypedQuery, graph: PropertyGraph) -> list[ResultRow]:
    """Evaluate a validated query; rows are sorted and LIMIT is applied."""
    rows, _ = run_query(query, graph)
    return rows


def run_query(query: TypedQuery, graph: PropertyGraph) -> tuple[list[ResultRow], int]:
    """Like :func:`evaluate`, also returning the row count before LIMIT."""
    ast = query.ast

    kind_conds: dict[VertexKind, list[Condition]] = {}
    var_conds: dict[str, list[Condition]] = {}
    for cond in ast.where:
        if cond.var is None:
            kind_conds.setdefault(cond.kind, []).append(cond)
        else:
            var_conds.setdefault(cond.var, []).append(cond)

    def positive_vertex_ok(kind: VertexKind, var: str | None, vid: int) -> bool:
        for cond in kind_conds.get(kind, ()):
            if not condition_holds(graph.vertex_attr(vid, cond.attr), cond):
                return False
        if var is not None:
            for cond in var_conds.get(var, ()):
                if not condition_holds(graph.vertex_attr(vid, cond.attr), cond):
                    return False
        return True

    # join positive patterns left to right over named-variable bindings
    bindings: list[dict[str, int]] = [{}]
    for pattern in ast.patterns:
        pattern_vars = pattern.variables()
        if not pattern_vars:
            satisfied = next(
                iter(embeddings(pattern, graph, None, positive_vertex_ok)), None
            )
            if satisfied is None:
                bindings = []
            continue
        merged: dict[tuple, dict[str, int]] = {}
        for binding in bindings:
            seed = {v: binding[v] for v in pattern_vars if v in binding}
            local: set[tuple] = set()
            for emb in embeddings(pattern, graph, seed, positive_vertex_ok):
                local.add(_binding_of(pattern, emb))
            for extension in local:
                new_binding = dict(binding)
                new_binding.update(extension)
                merged.setdefault(tuple(sorted(new_binding.items())), new_binding)
        bindings = list(merged.values())
        if not bindings:
            break

    rows: list[ResultRow] = []
    for binding in bindings:
        ok = True
        for cond in ast.where:
            if cond.var is None:
                continue
            if not condition_holds(graph.vertex_attr(binding[cond.var], cond.attr), cond):
                ok = False
                break
        if not ok:
            continue
        for anti in ast.antipatterns:
            seed = {v: binding[v] for v in anti.variables() if v in binding}
            if next(iter(embeddings(anti, graph, seed)), None) is not None:
                ok = False
                break
        if not ok:
            continue
        sort_key = None
        if ast.orderby is not None:
            sort_key = aggregate_avg(binding, ast.orderby.pattern, graph)
        cells = tuple(
            graph.vertex_attr(binding[p.var], p.attr) for p in ast.select
        )
        rows.append(ResultRow(cells=cells, sort_key=sort_key, binding=binding))

    def order_key(row: ResultRow):
        ids = tuple(row.binding[v] for v in sorted(row.binding))
        if row.sort_key is None:
            return (1, 0.0, ids)
        key = -row.sort_key if ast.descending else row.sort_key
        return (0, key, ids)

    rows.sort(key=order_key)
    total = len(rows)
    if ast.limit is not None:
        rows = rows[: ast.limit]
    return rows, total
