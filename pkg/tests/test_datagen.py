import numpy as np
import pytest

from attainrec.attainment import annotate_graph, rating_upper_bound, score_all
from attainrec.datagen import (
    GenConfig,
    InfeasibleConfig,
    _greedy_unlocks,
    _rarity_ladder,
    build_graph,
    generate,
    plant_attainments,
)
from attainrec.dataset import DEFAULT_FILES, load_dataset
from attainrec.evalstats import LomaxParams
from attainrec.graph import EdgeKind, VertexKind


def test_small_scale_counts_and_validity(tmp_path):
    config = GenConfig(scale=0.01, seed=42)
    out, report = generate(config, tmp_path / "ds")
    assert report.vertex_counts["Player"] == round(4159 * 0.01)
    assert report.vertex_counts["Game"] == round(4487 * 0.01)
    assert report.vertex_counts["Developer"] == round(1904 * 0.01)
    assert report.vertex_counts["Genre"] == max(1, round(30 * 0.01))
    graph, tables = load_dataset(out)
    graph.check_invariants()
    annotate_graph(graph, tables)
    assert report.giant_component_share == 1.0


def test_generation_is_byte_deterministic(tmp_path):
    generate(GenConfig(scale=0.02, seed=7), tmp_path / "a")
    generate(GenConfig(scale=0.02, seed=7), tmp_path / "b")
    for fname in DEFAULT_FILES.values():
        assert (tmp_path / "a" / fname).read_bytes() == (tmp_path / "b" / fname).read_bytes()
    generate(GenConfig(scale=0.02, seed=8), tmp_path / "c")
    assert (tmp_path / "a" / "achievements.jsonl").read_bytes() != (
        tmp_path / "c" / "achievements.jsonl"
    ).read_bytes()


def test_edge_targets_hit_exactly_at_small_scale(tmp_path):
    config = GenConfig(scale=0.05, seed=3)
    _, report = generate(config, tmp_path / "ds")
    for kind in ("Friend", "Owns", "DevelopedBy", "HasGenre"):
        got, want = report.edge_counts[kind], report.edge_targets[kind]
        assert abs(got - want) <= max(1, round(0.05 * want)), kind


def test_infeasible_config_rejected():
    with pytest.raises(InfeasibleConfig):
        GenConfig(scale=1.0, seed=0, players=10, friendships=1000).target_friendships()
    with pytest.raises(InfeasibleConfig):
        GenConfig(scale=-1.0)


def test_genre_memberships_in_range():
    graph, _ = build_graph(GenConfig(scale=0.02, seed=1))
    for gid in graph.vertices_of_kind(VertexKind.GAME):
        k = len(graph.neighbors(gid, EdgeKind.HAS_GENRE, "out"))
        assert 1 <= k <= 5


def test_rarity_ladder_shape():
    for n in (1, 2, 3, 5, 8, 12, 20, 50, 200):
        ladder = _rarity_ladder(n)
        assert ladder.shape == (n,)
        assert (np.diff(ladder) >= 0).all()
        assert 0.0 <= ladder[0] and ladder[-1] <= 1.0
    # the common end is fine-grained enough for near-zero ratings
    ladder = _rarity_ladder(20)
    assert 1.0 - ladder[-1] < 0.005


def test_greedy_unlocks_track_targets():
    rng = np.random.default_rng(5)
    weights = 1.0 - _rarity_ladder(40)
    targets = rng.uniform(0, float(weights.sum()) / 40, size=200)
    bits = _greedy_unlocks(targets.copy(), weights)
    realized = bits @ weights / 40
    assert (realized <= targets + 1e-9).all()
    assert (targets - realized <= weights[-1] / 40 + 1e-9).all()


def test_zero_target_produces_zero_row():
    weights = 1.0 - _rarity_ladder(10)
    bits = _greedy_unlocks(np.array([0.0]), weights)
    assert bits.sum() == 0


def test_single_achievement_ratings_binary():
    # games with one achievement give each owner either 0 or the full weight
    graph, tables = build_graph(GenConfig(scale=0.03, seed=4))
    found = False
    for table in tables.values():
        if table.n_achievements != 1 or not table.owners:
            continue
        found = True
        scores = score_all(table)
        weight = 1.0 - table.global_rates[0]
        for s in scores:
            assert s == pytest.approx(0.0, abs=1e-12) or s == pytest.approx(
                weight, abs=1e-12
            )
    assert found


def test_ratings_respect_upper_bounds():
    graph, tables = build_graph(GenConfig(scale=0.03, seed=2))
    for table in tables.values():
        if not table.owners:
            continue
        scores = score_all(table)
        assert (scores >= 0).all()
        assert (scores <= rating_upper_bound(table) + 1e-12).all()


def test_plant_attainments_rewrites_dataset(tmp_path):
    out, _ = generate(GenConfig(scale=0.02, seed=4), tmp_path / "ds")
    before = (out / "achievements.jsonl").read_bytes()
    plant_attainments(out, LomaxParams(2.0, 0.3), seed=99)
    after = (out / "achievements.jsonl").read_bytes()
    assert before != after
    graph, tables = load_dataset(out)
    annotate_graph(graph, tables)  # still a valid, annotatable dataset


def test_popularity_skew():
    graph, _ = build_graph(GenConfig(scale=0.1, seed=6))
    owns = {}
    for e in graph.edges():
        if e.kind is EdgeKind.OWNS:
            owns[e.dst] = owns.get(e.dst, 0) + 1
    counts = sorted(owns.values(), reverse=True)
    top_decile = sum(counts[: max(1, len(counts) // 10)])
    assert top_decile / sum(counts) >= 0.5
