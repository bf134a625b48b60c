"""Typed in-memory property graph of players, games, developers, and genres.

Vertices and edges carry attribute maps. Friendships are undirected and
stored once; the other three edge kinds are directed (player->game,
game->developer, game->genre). After the build/annotation phase the graph
is frozen and safe to share across threads for read-only queries.
"""
from __future__ import annotations

import math
from dataclasses import dataclass, field
from enum import Enum
from typing import Iterable, Iterator


class VertexKind(Enum):
    PLAYER = "Player"
    GAME = "Game"
    DEVELOPER = "Developer"
    GENRE = "Genre"


class EdgeKind(Enum):
    FRIEND = "Friend"
    OWNS = "Owns"
    DEVELOPED_BY = "DevelopedBy"
    HAS_GENRE = "HasGenre"


# (source kind, destination kind) for each edge kind. FRIEND is undirected;
# the pair is symmetric and src/dst order carries no meaning.
EDGE_ENDPOINTS: dict[EdgeKind, tuple[VertexKind, VertexKind]] = {
    EdgeKind.FRIEND: (VertexKind.PLAYER, VertexKind.PLAYER),
    EdgeKind.OWNS: (VertexKind.PLAYER, VertexKind.GAME),
    EdgeKind.DEVELOPED_BY: (VertexKind.GAME, VertexKind.DEVELOPER),
    EdgeKind.HAS_GENRE: (VertexKind.GAME, VertexKind.GENRE),
}

REQUIRED_ATTRS: dict[VertexKind, tuple[str, ...]] = {
    VertexKind.PLAYER: ("steamid",),
    VertexKind.GAME: ("name",),
    VertexKind.DEVELOPER: ("name",),
    VertexKind.GENRE: ("description",),
}

# Attribute values are tagged scalars, plus tuples of scalars for
# list-valued record fields (content tags, achievement names, per-game
# global completion rates).
AttrValue = bool | int | float | str | tuple


class GraphError(Exception):
    """Base class for graph construction and lookup errors."""


class MissingRequiredAttr(GraphError):
    def __init__(self, kind: VertexKind, attr: str):
        super().__init__(f"{kind.value} vertex requires attribute {attr!r}")
        self.kind = kind
        self.attr = attr


class InvalidAttr(GraphError):
    pass


class EndpointKindMismatch(GraphError):
    pass


class SelfFriend(GraphError):
    pass


class DuplicateEdge(GraphError):
    pass


class UnknownVertex(GraphError):
    pass


class UnknownEdge(GraphError):
    pass


class FrozenGraph(GraphError):
    pass


def _check_attrs(attrs: dict) -> dict:
    out = {}
    for name, value in attrs.items():
        if not isinstance(name, str) or not name:
            raise InvalidAttr(f"attribute name must be a non-empty string, got {name!r}")
        if isinstance(value, bool) or isinstance(value, (int, str)):
            pass
        elif isinstance(value, float):
            if not math.isfinite(value):
                raise InvalidAttr(f"attribute {name!r} must be finite, got {value!r}")
        elif isinstance(value, (tuple, list)):
            ok = all(
                isinstance(x, str)
                or (isinstance(x, (int, float)) and not isinstance(x, bool) and math.isfinite(x))
                for x in value
            )
            if not ok:
                raise InvalidAttr(f"attribute {name!r}: list values must be strings or finite numbers")
            value = tuple(value)
        else:
            raise InvalidAttr(f"attribute {name!r} has unsupported type {type(value).__name__}")
        out[name] = value
    return out


@dataclass
class Vertex:
    id: int
    kind: VertexKind
    attrs: dict[str, AttrValue] = field(default_factory=dict)


@dataclass
class Edge:
    id: int
    kind: EdgeKind
    src: int
    dst: int
    attrs: dict[str, AttrValue] = field(default_factory=dict)


class PropertyGraph:
    """Vertex/edge tables plus per-kind adjacency indexes.

    Mutation is only allowed before :meth:`freeze`. Adjacency lists are kept
    sorted by (neighbor id, edge id) so traversal order is deterministic.
    """

    def __init__(self) -> None:
        self._vertices: list[Vertex] = []
        self._edges: list[Edge] = []
        self._by_kind: dict[VertexKind, list[int]] = {k: [] for k in VertexKind}
        self._edge_counts: dict[EdgeKind, int] = {k: 0 for k in EdgeKind}
        # per vertex: edge kind -> list of (neighbor id, edge id)
        self._out: list[dict[EdgeKind, list[tuple[int, int]]]] = []
        self._in: list[dict[EdgeKind, list[tuple[int, int]]]] = []
        self._edge_keys: set[tuple] = set()
        self._players_by_steamid: dict[str, int] = {}
        self._frozen = False
        self._adjacency_sorted = True

    # -- construction -----------------------------------------------------

    def add_vertex(self, kind: VertexKind, attrs: dict | None = None) -> int:
        if self._frozen:
            raise FrozenGraph("graph is frozen")
        if not isinstance(kind, VertexKind):
            raise GraphError(f"unknown vertex kind {kind!r}")
        attrs = _check_attrs(attrs or {})
        for req in REQUIRED_ATTRS[kind]:
            if req not in attrs:
                raise MissingRequiredAttr(kind, req)
        vid = len(self._vertices)
        self._vertices.append(Vertex(vid, kind, attrs))
        self._by_kind[kind].append(vid)
        self._out.append({})
        self._in.append({})
        if kind is VertexKind.PLAYER:
            self._players_by_steamid.setdefault(str(attrs["steamid"]), vid)
        return vid

    def add_edge(self, kind: EdgeKind, src: int, dst: int, attrs: dict | None = None) -> int:
        if self._frozen:
            raise FrozenGraph("graph is frozen")
        if not isinstance(kind, EdgeKind):
            raise GraphError(f"unknown edge kind {kind!r}")
        for v in (src, dst):
            if not (0 <= v < len(self._vertices)):
                raise UnknownVertex(f"no vertex {v}")
        want_src, want_dst = EDGE_ENDPOINTS[kind]
        have = (self._vertices[src].kind, self._vertices[dst].kind)
        if have != (want_src, want_dst):
            raise EndpointKindMismatch(
                f"{kind.value} edge requires {want_src.value}->{want_dst.value}, "
                f"got {have[0].value}->{have[1].value}"
            )
        if kind is EdgeKind.FRIEND:
            if src == dst:
                raise SelfFriend(f"player {src} cannot befriend itself")
            key = (kind, min(src, dst), max(src, dst))
        else:
            key = (kind, src, dst)
        if key in self._edge_keys:
            raise DuplicateEdge(f"duplicate {kind.value} edge {src}->{dst}")
        self._edge_keys.add(key)
        attrs = _check_attrs(attrs or {})
        eid = len(self._edges)
        self._edges.append(Edge(eid, kind, src, dst, attrs))
        self._edge_counts[kind] += 1
        self._out[src].setdefault(kind, []).append((dst, eid))
        self._in[dst].setdefault(kind, []).append((src, eid))
        if kind is EdgeKind.FRIEND:
            # undirected: visible from both endpoints in both directions
            self._out[dst].setdefault(kind, []).append((src, eid))
            self._in[src].setdefault(kind, []).append((dst, eid))
        self._adjacency_sorted = False
        return eid

    def set_edge_attr(self, eid: int, name: str, value: AttrValue) -> None:
        if self._frozen:
            raise FrozenGraph("graph is frozen")
        if not (0 <= eid < len(self._edges)):
            raise UnknownEdge(f"no edge {eid}")
        self._edges[eid].attrs.update(_check_attrs({name: value}))

    def freeze(self) -> "PropertyGraph":
        self._sort_adjacency()
        self._frozen = True
        return self

    def _sort_adjacency(self) -> None:
        if self._adjacency_sorted:
            return
        for table in (self._out, self._in):
            for per_vertex in table:
                for lst in per_vertex.values():
                    lst.sort()
        self._adjacency_sorted = True

    # -- lookups ----------------------------------------------------------

    @property
    def frozen(self) -> bool:
        return self._frozen

    def vertex(self, vid: int) -> Vertex:
        if not (0 <= vid < len(self._vertices)):
            raise UnknownVertex(f"no vertex {vid}")
        return self._vertices[vid]

    def edge(self, eid: int) -> Edge:
        if not (0 <= eid < len(self._edges)):
            raise UnknownEdge(f"no edge {eid}")
        return self._edges[eid]

    def vertices(self) -> Iterator[Vertex]:
        return iter(self._vertices)

    def edges(self) -> Iterator[Edge]:
        return iter(self._edges)

    def vertices_of_kind(self, kind: VertexKind) -> list[int]:
        return list(self._by_kind[kind])

    def count(self, kind: VertexKind | EdgeKind) -> int:
        if isinstance(kind, VertexKind):
            return len(self._by_kind[kind])
        return self._edge_counts[kind]

    def player_by_steamid(self, steamid: str) -> int | None:
        return self._players_by_steamid.get(str(steamid))

    def vertex_attr(self, vid: int, name: str, default=None):
        return self.vertex(vid).attrs.get(name, default)

    def edge_attr(self, eid: int, name: str, default=None):
        return self.edge(eid).attrs.get(name, default)

    def neighbors(
        self, vid: int, kind: EdgeKind, direction: str = "any"
    ) -> list[tuple[int, int]]:
        """All (edge id, neighbor id) pairs of `kind` at `vid`, ascending by
        neighbor id. FRIEND adjacency is symmetric, so direction is moot there.
        """
        if not (0 <= vid < len(self._vertices)):
            raise UnknownVertex(f"no vertex {vid}")
        if direction not in ("out", "in", "any"):
            raise ValueError(f"direction must be out/in/any, got {direction!r}")
        self._sort_adjacency()
        out = self._out[vid].get(kind, ())
        inc = self._in[vid].get(kind, ())
        if direction == "out":
            pairs = out
        elif direction == "in":
            pairs = inc
        elif kind is EdgeKind.FRIEND:
            pairs = out  # already symmetric; `in` holds the same pairs
        else:
            pairs = sorted(set(out) | set(inc))
        return [(eid, nbr) for nbr, eid in pairs]

    # -- integrity --------------------------------------------------------

    def check_invariants(self) -> None:
        """Full-scan structural validation; raises GraphError on violation."""
        for e in self._edges:
            want = EDGE_ENDPOINTS[e.kind]
            have = (self._vertices[e.src].kind, self._vertices[e.dst].kind)
            if have != want:
                raise GraphError(f"edge {e.id} endpoint kinds {have} violate schema")
            if e.kind is EdgeKind.FRIEND and e.src == e.dst:
                raise GraphError(f"edge {e.id} is a self-friendship")
        for v in self._vertices:
            for kind in EdgeKind:
                got = {(eid, nbr) for eid, nbr in self.neighbors(v.id, kind, "any")}
                naive = set()
                for e in self._edges:
                    if e.kind is not kind:
                        continue
                    if e.src == v.id:
                        naive.add((e.id, e.dst))
                    if e.dst == v.id:
                        naive.add((e.id, e.src))
                if got != naive:
                    raise GraphError(f"adjacency index of vertex {v.id} disagrees with edge table")
