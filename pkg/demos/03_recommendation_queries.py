#!/usr/bin/env python3
"""Run the recommendation refinement chain on an in-memory graph.

Three players: P1 is friends with P2 and P3. P2 and P3 own g2 (a game by
the developer P1 already buys from) with high ratings, so g2 tops the
list; excluding owned games and restricting by genre narrows it further.
"""
from attainrec.graph import EdgeKind, PropertyGraph, VertexKind
from attainrec.presets import genre_query, new_game_query, sample_query
from attainrec.querylang import parse, validate
from attainrec.queryexec import evaluate

g = PropertyGraph()
p1 = g.add_vertex(VertexKind.PLAYER, {"steamid": "76561197960653976"})
p2 = g.add_vertex(VertexKind.PLAYER, {"steamid": "76561197960000002"})
p3 = g.add_vertex(VertexKind.PLAYER, {"steamid": "76561197960000003"})
d1 = g.add_vertex(VertexKind.DEVELOPER, {"name": "D1"})
d2 = g.add_vertex(VertexKind.DEVELOPER, {"name": "D2"})
strategy = g.add_vertex(VertexKind.GENRE, {"description": "Strategy"})
g1 = g.add_vertex(VertexKind.GAME, {"name": "g1", "appid": 10, "cost": 9.99})
g2 = g.add_vertex(VertexKind.GAME, {"name": "g2", "appid": 20, "cost": 19.99})
g3 = g.add_vertex(VertexKind.GAME, {"name": "g3", "appid": 30, "cost": 29.99})
g.add_edge(EdgeKind.FRIEND, p1, p2)
g.add_edge(EdgeKind.FRIEND, p1, p3)
g.add_edge(EdgeKind.DEVELOPED_BY, g1, d1)
g.add_edge(EdgeKind.DEVELOPED_BY, g2, d1)
g.add_edge(EdgeKind.DEVELOPED_BY, g3, d2)
g.add_edge(EdgeKind.HAS_GENRE, g2, strategy)
g.add_edge(EdgeKind.OWNS, p1, g1, {"attainmentRating": 0.5})
g.add_edge(EdgeKind.OWNS, p2, g2, {"attainmentRating": 0.8})
g.add_edge(EdgeKind.OWNS, p2, g3, {"attainmentRating": 0.9})
g.add_edge(EdgeKind.OWNS, p3, g2, {"attainmentRating": 0.4})
g.freeze()

me = "76561197960653976"
for label, text in [
    ("sample", sample_query(me)),
    ("new game", new_game_query(me)),
    ("strategy genre", genre_query(me, "Strategy")),
]:
    rows = evaluate(validate(parse(text)), g)
    print(f"\n{label} query:")
    print(" ", text)
    for row in rows:
        print(f"  -> {row.cells[0]} (cost {row.cells[1]}, avg attainment {row.sort_key:.3f})")
