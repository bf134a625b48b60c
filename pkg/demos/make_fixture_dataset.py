#!/usr/bin/env python3
"""Write the three-player demo dataset to a directory.

P1 is friends with P2 and P3; three games by two developers; ratings are
stored directly on the ownership records. Handy for trying the CLI and
the web console:

    python demos/make_fixture_dataset.py /tmp/fixture
    attainrec serve --data /tmp/fixture --port 8080
"""
import sys

import numpy as np

from attainrec.attainment import AchievementTable
from attainrec.dataset import save_dataset
from attainrec.graph import EdgeKind, PropertyGraph, VertexKind

if len(sys.argv) != 2:
    raise SystemExit(f"usage: {sys.argv[0]} OUTPUT_DIR")

g = PropertyGraph()
p1 = g.add_vertex(VertexKind.PLAYER, {"steamid": "76561197960653976", "name": "P1"})
p2 = g.add_vertex(VertexKind.PLAYER, {"steamid": "76561197960000002", "name": "P2"})
p3 = g.add_vertex(VertexKind.PLAYER, {"steamid": "76561197960000003", "name": "P3"})
d1 = g.add_vertex(VertexKind.DEVELOPER, {"name": "D1"})
d2 = g.add_vertex(VertexKind.DEVELOPER, {"name": "D2"})
action = g.add_vertex(VertexKind.GENRE, {"description": "Action"})
games = {}
for name, appid, cost, n_ach in (("g1", 10, 9.99, 2), ("g2", 20, 19.99, 2), ("g3", 30, 29.99, 1)):
    games[name] = g.add_vertex(
        VertexKind.GAME,
        {
            "appid": appid,
            "name": name,
            "cost": cost,
            "achievement_names": tuple(f"ach_{i}" for i in range(n_ach)),
        },
    )
g.add_edge(EdgeKind.FRIEND, p1, p2)
g.add_edge(EdgeKind.FRIEND, p1, p3)
g.add_edge(EdgeKind.DEVELOPED_BY, games["g1"], d1)
g.add_edge(EdgeKind.DEVELOPED_BY, games["g2"], d1)
g.add_edge(EdgeKind.DEVELOPED_BY, games["g3"], d2)
g.add_edge(EdgeKind.HAS_GENRE, games["g2"], action)
g.add_edge(EdgeKind.OWNS, p1, games["g1"], {"attainmentRating": 0.5})
g.add_edge(EdgeKind.OWNS, p2, games["g2"], {"attainmentRating": 0.8})
g.add_edge(EdgeKind.OWNS, p2, games["g3"], {"attainmentRating": 0.9})
g.add_edge(EdgeKind.OWNS, p3, games["g2"], {"attainmentRating": 0.4})

tables = {}
for name in games:
    gid = games[name]
    owners = tuple(sorted(nbr for _, nbr in g.neighbors(gid, EdgeKind.OWNS, "in")))
    names = g.vertex_attr(gid, "achievement_names")
    tables[gid] = AchievementTable(
        game=gid,
        names=names,
        owners=owners,
        bits=np.zeros((len(owners), len(names)), dtype=np.uint8),
    )

save_dataset(g, tables, sys.argv[1])
print(f"fixture dataset written to {sys.argv[1]}")
