import numpy as np
import pytest

from attainrec.attainment import AchievementTable
from attainrec.graph import EdgeKind, PropertyGraph, VertexKind

P1_STEAMID = "76561197960653976"
P2_STEAMID = "76561197960000002"
P3_STEAMID = "76561197960000003"

LISTING_QUERY = """\
SELECT V_G(b).name, V_G(b).cost
PATTERNS V_P(a)-E_F-V_P-E_O-V_G(b)
V_P(a)-E_O-V_G-E_D-V_D-E_D-V_G(b)
WHERE V_P(a).steamid=76561197960653976
ORDERBY AVG(V_P(a)-E_F-V_P-E_O.attainmentRating-V_G(b))
LIMIT 5"""


def build_fixture_f(genre_of_g2: str = "Action"):
    """Three players, three games, two developers, one genre tag on g2.

    Ratings are attached directly to the ownership edges (they exercise the
    query engine, not the rating computation).
    """
    g = PropertyGraph()
    ids = {}
    ids["p1"] = g.add_vertex(VertexKind.PLAYER, {"steamid": P1_STEAMID, "name": "P1"})
    ids["p2"] = g.add_vertex(VertexKind.PLAYER, {"steamid": P2_STEAMID, "name": "P2"})
    ids["p3"] = g.add_vertex(VertexKind.PLAYER, {"steamid": P3_STEAMID, "name": "P3"})
    ids["d1"] = g.add_vertex(VertexKind.DEVELOPER, {"name": "D1"})
    ids["d2"] = g.add_vertex(VertexKind.DEVELOPER, {"name": "D2"})
    ids["action"] = g.add_vertex(VertexKind.GENRE, {"description": genre_of_g2})
    ids["g1"] = g.add_vertex(VertexKind.GAME, {"name": "g1", "appid": 10, "cost": 9.99})
    ids["g2"] = g.add_vertex(VertexKind.GAME, {"name": "g2", "appid": 20, "cost": 19.99})
    ids["g3"] = g.add_vertex(VertexKind.GAME, {"name": "g3", "appid": 30, "cost": 29.99})
    ids["f1"] = g.add_edge(EdgeKind.FRIEND, ids["p1"], ids["p2"])
    ids["f2"] = g.add_edge(EdgeKind.FRIEND, ids["p1"], ids["p3"])
    g.add_edge(EdgeKind.DEVELOPED_BY, ids["g1"], ids["d1"])
    g.add_edge(EdgeKind.DEVELOPED_BY, ids["g2"], ids["d1"])
    g.add_edge(EdgeKind.DEVELOPED_BY, ids["g3"], ids["d2"])
    g.add_edge(EdgeKind.HAS_GENRE, ids["g2"], ids["action"])
    g.add_edge(EdgeKind.OWNS, ids["p1"], ids["g1"], {"attainmentRating": 0.5})
    g.add_edge(EdgeKind.OWNS, ids["p2"], ids["g2"], {"attainmentRating": 0.8})
    g.add_edge(EdgeKind.OWNS, ids["p2"], ids["g3"], {"attainmentRating": 0.9})
    g.add_edge(EdgeKind.OWNS, ids["p3"], ids["g2"], {"attainmentRating": 0.4})
    return g, ids


def fixture_f_tables(g, ids):
    """All-zero achievement tables matching the fixture's ownership; the
    stored edge ratings are authoritative for this fixture."""
    tables = {}
    for key, n_ach in (("g1", 2), ("g2", 2), ("g3", 1)):
        gid = ids[key]
        owners = tuple(sorted(nbr for _, nbr in g.neighbors(gid, EdgeKind.OWNS, "in")))
        tables[gid] = AchievementTable(
            game=gid,
            names=tuple(f"ach_{i}" for i in range(n_ach)),
            owners=owners,
            bits=np.zeros((len(owners), n_ach), dtype=np.uint8),
        )
    return tables


@pytest.fixture
def fixture_f():
    g, ids = build_fixture_f()
    g.freeze()
    return g, ids


@pytest.fixture
def fixture_f_dataset(tmp_path):
    """Fixture F saved as a dataset directory (ratings stored on ownership
    records, so loading preserves them)."""
    from attainrec.dataset import save_dataset

    g, ids = build_fixture_f()
    # games need achievement_names for the dataset format
    for key, n_ach in (("g1", 2), ("g2", 2), ("g3", 1)):
        v = g.vertex(ids[key])
        v.attrs["achievement_names"] = tuple(f"ach_{i}" for i in range(n_ach))
    tables = fixture_f_tables(g, ids)
    out = tmp_path / "fixture_f"
    save_dataset(g, tables, out)
    return out
