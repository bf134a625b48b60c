"""Seeded synthetic dataset generator.

Produces dataset directories in the documented format with realistic
shape: a dense, connected friendship network (preferential attachment),
power-law game popularity and studio sizes, 1-5 genres per game, and
achievement data planted so that the recomputed attainment ratings follow
a target heavy-tailed (Lomax) distribution.

Planting works per game: the game publishes a global completion ladder
(the per-achievement rates a storefront's stats endpoint would report),
each owner draws a target rating from the Lomax truncated to the feasible
range, and unlocks the greedy descending-rarity subset whose weights sum
to that target. Ratings recomputed from the written dataset then land
within one minimal rarity weight of the drawn targets.
"""
from __future__ import annotations

import math
from dataclasses import dataclass, field
from pathlib import Path

import numpy as np

from .attainment import AchievementTable, score_all
from .dataset import save_dataset
from .evalstats import LomaxParams, ks_statistic
from .graph import EdgeKind, PropertyGraph, VertexKind


class InfeasibleConfig(Exception):
    pass


GENRE_NAMES = (
    "Action",
    "Strategy",
    "Role-Playing",
    "Adventure",
    "Indie",
    "Simulation",
    "Casual",
    "Sports",
    "Racing",
    "Massively Multiplayer",
    "Puzzle",
    "Platformer",
    "Shooter",
    "Horror",
    "Survival",
    "Stealth",
    "Fighting",
    "Visual Novel",
    "Roguelike",
    "Card Game",
    "Tower Defense",
    "Sandbox",
    "Music",
    "Party",
    "Arcade",
    "Point & Click",
    "Tactical",
    "Flight",
    "Building",
    "Education",
)

# Stylized tail adjustments applied when a game's primary genre matches.
GENRE_SHAPE_MULT = {"Strategy": 1.3, "Role-Playing": 0.8}
GENRE_SCALE_MULT = {"Action": 1.2}

PRICE_POINTS = (0.0, 0.99, 2.99, 4.99, 9.99, 14.99, 19.99, 29.99, 39.99, 59.99)
PRICE_WEIGHTS = (0.08, 0.07, 0.10, 0.15, 0.20, 0.14, 0.12, 0.08, 0.04, 0.02)


@dataclass(frozen=True)
class GenConfig:
    scale: float = 1.0
    seed: int = 0
    players: int = 4159
    games: int = 4487
    developers: int = 1904
    genres: int = 30
    friendships: int = 272888
    ownerships: int = 613769
    developed_links: int = 4589
    genre_links: int = 11229
    attainment: LomaxParams = field(default_factory=lambda: LomaxParams(4.78, 0.61))
    ach_median: float = 20.0
    ach_sigma: float = 0.8
    ach_min: int = 1
    ach_max: int = 200
    popularity_exponent: float = 1.5

    def __post_init__(self) -> None:
        if self.scale <= 0:
            raise InfeasibleConfig("scale must be positive")

    # vertex counts scale linearly (at least one developer/genre); pairwise
    # relations (friendship, ownership) scale with scale^2 so density is
    # preserved, per-game relations scale linearly
    def n_players(self) -> int:
        return max(1, round(self.players * self.scale))

    def n_games(self) -> int:
        return max(1, round(self.games * self.scale))

    def n_developers(self) -> int:
        return max(1, round(self.developers * self.scale))

    def n_genres(self) -> int:
        return max(1, round(self.genres * self.scale))

    def target_friendships(self) -> int:
        n = self.n_players()
        cap = n * (n - 1) // 2
        want = round(self.friendships * self.scale**2)
        if self.scale == 1.0:
            want = self.friendships
        if want > cap:
            raise InfeasibleConfig(f"{want} friendships exceed {cap} player pairs")
        return max(min(n - 1, cap), want) if n > 1 else 0

    def target_ownerships(self) -> int:
        cap = self.n_players() * self.n_games()
        want = round(self.ownerships * self.scale**2)
        if self.scale == 1.0:
            want = self.ownerships
        if want > cap:
            raise InfeasibleConfig(f"{want} ownerships exceed {cap} player-game pairs")
        return max(min(self.n_players(), cap), want)

    def target_developed(self) -> int:
        n_g = self.n_games()
        cap = n_g * self.n_developers()
        want = round(self.developed_links * self.scale)
        if want > cap:
            raise InfeasibleConfig(f"{want} developer links exceed {cap} pairs")
        return max(min(n_g, cap), want)

    def target_genre_links(self) -> int:
        n_g = self.n_games()
        per_game_cap = min(5, self.n_genres())
        cap = n_g * per_game_cap
        want = round(self.genre_links * self.scale)
        return min(cap, max(n_g, want))


@dataclass
class GenReport:
    vertex_counts: dict
    edge_counts: dict
    edge_targets: dict
    ks_attainment: float
    giant_component_share: float

    def format(self) -> str:
        lines = []
        for kind, count in self.vertex_counts.items():
            lines.append(f"vertices\t{kind}\t{count}")
        for kind, count in self.edge_counts.items():
            lines.append(f"edges\t{kind}\t{count}\ttarget\t{self.edge_targets[kind]}")
        lines.append(f"giant_component_share\t{self.giant_component_share:.6f}")
        lines.append(f"ks_attainment\t{self.ks_attainment:.6f}")
        return "\n".join(lines)


def _zipf_weights(n: int, exponent: float) -> np.ndarray:
    ranks = np.arange(1, n + 1, dtype=np.float64)
    w = ranks**-exponent
    return w / w.sum()


def _genre_list(n: int) -> list[str]:
    names = list(GENRE_NAMES[:n])
    for i in range(len(names), n):
        names.append(f"Genre {i + 1:02d}")
    return names


def _spread_counts(total: int, weights: np.ndarray, low: int, high: int, rng) -> np.ndarray:
    """Integer counts summing to `total`, roughly proportional to weights,
    each in [low, high]."""
    n = len(weights)
    if not low * n <= total <= high * n:
        raise InfeasibleConfig(f"cannot spread {total} across {n} slots in [{low},{high}]")
    counts = np.clip(np.round(weights / weights.sum() * total).astype(np.int64), low, high)
    diff = total - int(counts.sum())
    while diff != 0:
        step = 1 if diff > 0 else -1
        room = np.flatnonzero(counts < high) if step > 0 else np.flatnonzero(counts > low)
        take = min(abs(diff), len(room))
        chosen = rng.choice(room, size=take, replace=False)
        counts[chosen] += step
        diff -= step * take
    return counts


def _preferential_friendships(n: int, m: int, rng) -> list[tuple[int, int]]:
    """Connected degree-skewed graph with exactly m edges (m >= n-1)."""
    if n < 2 or m == 0:
        return []
    mean_deg = 2 * m / n
    m0 = min(n, max(2, math.ceil(mean_deg) + 2))
    edges: list[tuple[int, int]] = [(i, i + 1) for i in range(m0 - 1)]  # seed path
    reps = np.empty(2 * m, dtype=np.int64)
    reps[: 2 * (m0 - 1)] = np.asarray(edges).ravel()
    filled = 2 * (m0 - 1)
    adjacency: list[set] = [set() for _ in range(n)]
    for a, b in edges:
        adjacency[a].add(b)
        adjacency[b].add(a)

    budget = m - (m0 - 1)
    newcomers = n - m0
    deficit = 0
    for idx in range(newcomers):
        node = m0 + idx
        quota = budget // newcomers + (1 if idx < budget % newcomers else 0) + deficit
        k = min(quota, node)  # can attach to at most every existing node
        deficit = quota - k
        chosen: set[int] = set()
        while len(chosen) < k:
            batch = reps[rng.integers(0, filled, size=2 * (k - len(chosen)))]
            for target in batch:
                target = int(target)
                if target != node and target not in chosen:
                    chosen.add(target)
                    if len(chosen) == k:
                        break
        for target in sorted(chosen):
            edges.append((node, target))
            adjacency[node].add(target)
            adjacency[target].add(node)
            reps[filled] = node
            reps[filled + 1] = target
            filled += 2

    while deficit > 0:  # dense corner: top up with uniform non-edges
        a = int(rng.integers(0, n))
        b = int(rng.integers(0, n))
        if a != b and b not in adjacency[a]:
            edges.append((a, b))
            adjacency[a].add(b)
            adjacency[b].add(a)
            deficit -= 1
    return edges


def _giant_component_share(n: int, edges: list[tuple[int, int]]) -> float:
    if n == 0:
        return 0.0
    parent = list(range(n))

    def find(x: int) -> int:
        while parent[x] != x:
            parent[x] = parent[parent[x]]
            x = parent[x]
        return x

    for a, b in edges:
        ra, rb = find(a), find(b)
        if ra != rb:
            parent[ra] = rb
    sizes: dict[int, int] = {}
    for v in range(n):
        root = find(v)
        sizes[root] = sizes.get(root, 0) + 1
    return max(sizes.values()) / n


def _truncated_lomax(params: LomaxParams, bound: float, size: int, rng) -> np.ndarray:
    """Inverse-CDF draws rejected at the upper bound."""
    if bound <= 0.0:
        return np.zeros(size)
    x = params.ppf(rng.random(size))
    for _ in range(1000):
        bad = x >= bound
        if not bad.any():
            break
        x[bad] = params.ppf(rng.random(int(bad.sum())))
    x[x >= bound] = 0.0  # unreachable in practice; keeps the invariant hard
    return x


def _rarity_ladder(n_ach: int) -> np.ndarray:
    """Per-game global completion rates, rarest first.

    A power-law head of rare achievements carries the rating range (each is
    worth almost 1/N), and the commonest ranks form a geometric tail whose
    rarity weights halve step by step, so small ratings compose almost
    continuously. The head exponent backs off for games with very few
    achievements.
    """
    if n_ach >= 12:
        kappa = 6.0
    elif n_ach >= 6:
        kappa = 3.0
    elif n_ach >= 3:
        kappa = 2.0
    else:
        kappa = 1.0
    ranks = (np.arange(1, n_ach + 1) - 0.5) / n_ach
    completion = ranks**kappa
    tail = min(8, n_ach - 1)
    if tail >= 1:
        head_end = n_ach - tail - 1
        start_weight = 1.0 - completion[head_end] if head_end >= 0 else 1.0
        halvings = start_weight * 0.5 ** np.arange(1, tail + 1)
        completion[n_ach - tail :] = 1.0 - halvings
    return np.maximum.accumulate(completion)


def _greedy_unlocks(targets: np.ndarray, weights: np.ndarray) -> np.ndarray:
    """Per-owner unlock matrix: greedy descending-weight subset sums.

    `weights` is descending rarity weight per achievement rank. Every owner
    walks the ladder taking each achievement that still fits their remaining
    rating budget, so the realized rating is within the smallest weight of
    the target and never exceeds it.
    """
    n_own = len(targets)
    n_ach = len(weights)
    bits = np.zeros((n_own, n_ach), dtype=np.uint8)
    remaining = targets * n_ach  # budgets in accumulated-weight units
    for j in range(n_ach):
        take = remaining >= weights[j] - 1e-12
        bits[take, j] = 1
        remaining[take] -= weights[j]
    return bits


def _game_target_params(base: LomaxParams, primary_genre: str | None) -> LomaxParams:
    shape = base.shape * GENRE_SHAPE_MULT.get(primary_genre or "", 1.0)
    scale = base.scale * GENRE_SCALE_MULT.get(primary_genre or "", 1.0)
    return LomaxParams(shape, scale)


def plant_bits(
    graph: PropertyGraph, target: LomaxParams, rng
) -> dict[int, AchievementTable]:
    """Fill per-game unlock matrices and global completion stats so the
    recomputed ratings track `target`.

    Each game publishes a global completion ladder (as a storefront's
    achievement stats would) and owners unlock greedy rarity-weighted
    subsets matching their drawn target rating.
    """
    tables: dict[int, AchievementTable] = {}
    for gid in graph.vertices_of_kind(VertexKind.GAME):
        names = tuple(graph.vertex_attr(gid, "achievement_names", ()))
        owners = tuple(sorted(nbr for _, nbr in graph.neighbors(gid, EdgeKind.OWNS, "in")))
        n_own, n_ach = len(owners), len(names)
        bits = np.zeros((n_own, n_ach), dtype=np.uint8)
        rates_by_column = None
        if n_ach > 0:
            ladder = _rarity_ladder(n_ach)  # ascending completion, rarest first
            weights = 1.0 - ladder
            column_of_rank = rng.permutation(n_ach)
            rates_by_column = np.empty(n_ach)
            rates_by_column[column_of_rank] = ladder
            if n_own > 0:
                genre_ids = [
                    nbr for _, nbr in graph.neighbors(gid, EdgeKind.HAS_GENRE, "out")
                ]
                primary = (
                    graph.vertex_attr(min(genre_ids), "description") if genre_ids else None
                )
                params = _game_target_params(target, primary)
                bound = min(1.0 - 1.0 / n_own, float(weights.sum()) / n_ach)
                targets = _truncated_lomax(params, bound, n_own, rng)
                bits_by_rank = _greedy_unlocks(targets, weights)
                bits = bits_by_rank[:, np.argsort(column_of_rank, kind="stable")]
            graph.vertex(gid).attrs["global_completion"] = tuple(
                float(r) for r in rates_by_column
            )
        tables[gid] = AchievementTable(
            game=gid,
            names=names,
            owners=owners,
            bits=bits,
            global_rates=rates_by_column,
        )
    return tables


def build_graph(config: GenConfig) -> tuple[PropertyGraph, dict[int, AchievementTable]]:
    """Construct the synthetic graph and achievement tables in memory."""
    seq = np.random.SeedSequence(config.seed)
    rng_games, rng_dev, rng_genre, rng_friend, rng_own, rng_ach = (
        np.random.default_rng(s) for s in seq.spawn(6)
    )

    n_p, n_g = config.n_players(), config.n_games()
    n_d, n_r = config.n_developers(), config.n_genres()
    graph = PropertyGraph()

    players = [
        graph.add_vertex(
            VertexKind.PLAYER,
            {"steamid": str(76561197960000000 + i), "name": f"Player {i:05d}"},
        )
        for i in range(n_p)
    ]
    developers = [
        graph.add_vertex(VertexKind.DEVELOPER, {"name": f"Dev {i:04d}"}) for i in range(n_d)
    ]
    genres = [
        graph.add_vertex(VertexKind.GENRE, {"description": desc})
        for desc in _genre_list(n_r)
    ]

    ach_counts = np.clip(
        np.round(
            np.exp(rng_games.normal(math.log(config.ach_median), config.ach_sigma, n_g))
        ).astype(np.int64),
        config.ach_min,
        config.ach_max,
    )
    prices = rng_games.choice(PRICE_POINTS, size=n_g, p=PRICE_WEIGHTS)
    games = [
        graph.add_vertex(
            VertexKind.GAME,
            {
                "appid": 10 + 10 * i,
                "name": f"Game {i:04d}",
                "cost": float(prices[i]),
                "achievement_names": tuple(f"ach_{j:03d}" for j in range(ach_counts[i])),
            },
        )
        for i in range(n_g)
    ]

    # one primary developer per game (every developer gets at least one
    # game while supply lasts), then co-developer links up to the target
    dev_weights = _zipf_weights(n_d, 1.5)
    primary_dev = np.empty(n_g, dtype=np.int64)
    first = min(n_d, n_g)
    primary_dev[:first] = rng_dev.permutation(n_d)[:first]
    if n_g > first:
        primary_dev[first:] = rng_dev.choice(n_d, size=n_g - first, p=dev_weights)
    dev_pairs = {(g, int(primary_dev[g])) for g in range(n_g)}
    while len(dev_pairs) < config.target_developed():
        g = int(rng_dev.integers(0, n_g))
        d = int(rng_dev.choice(n_d, p=dev_weights))
        dev_pairs.add((g, d))
    for g, d in sorted(dev_pairs):
        graph.add_edge(EdgeKind.DEVELOPED_BY, games[g], developers[d])

    # 1-5 genres per game, mean pinned by the link target, popular-first
    genre_weights = _zipf_weights(n_r, 1.1)
    per_game_cap = min(5, n_r)
    genre_counts = _spread_counts(
        config.target_genre_links(),
        rng_genre.lognormal(0.0, 0.5, n_g),
        1,
        per_game_cap,
        rng_genre,
    )
    log_gw = np.log(genre_weights)
    for g in range(n_g):
        keys = log_gw + rng_genre.gumbel(size=n_r)
        chosen = np.argpartition(-keys, genre_counts[g] - 1)[: genre_counts[g]]
        for idx in sorted(int(c) for c in chosen):
            graph.add_edge(EdgeKind.HAS_GENRE, games[g], genres[idx])

    for a, b in _preferential_friendships(n_p, config.target_friendships(), rng_friend):
        sa = graph.vertex_attr(players[a], "steamid")
        sb = graph.vertex_attr(players[b], "steamid")
        if sb < sa:
            a, b = b, a
        graph.add_edge(EdgeKind.FRIEND, players[a], players[b])

    game_weights = _zipf_weights(n_g, config.popularity_exponent)
    own_counts = _spread_counts(
        config.target_ownerships(),
        rng_own.lognormal(0.0, 0.9, n_p),
        1 if config.target_ownerships() >= n_p else 0,
        n_g,
        rng_own,
    )
    log_w = np.log(game_weights)
    for p in range(n_p):
        keys = log_w + rng_own.gumbel(size=n_g)
        count = int(own_counts[p])
        chosen = np.argpartition(-keys, count - 1)[:count] if count else np.empty(0, int)
        minutes = np.clip(
            np.round(rng_own.lognormal(math.log(300.0), 1.2, size=count)), 1, 500_000
        ).astype(np.int64)
        for j, g in enumerate(sorted(int(c) for c in chosen)):
            graph.add_edge(
                EdgeKind.OWNS, players[p], games[g], {"playtime_minutes": int(minutes[j])}
            )

    tables = plant_bits(graph, config.attainment, rng_ach)
    return graph, tables


def generate(config: GenConfig, out_dir) -> tuple[Path, GenReport]:
    """Generate a dataset directory; returns its path and a summary report."""
    graph, tables = build_graph(config)
    out = Path(out_dir)
    save_dataset(graph, tables, out)

    ratings = np.concatenate(
        [score_all(t) for t in tables.values() if len(t.owners)]
    )
    friend_edges = [
        (e.src, e.dst) for e in graph.edges() if e.kind is EdgeKind.FRIEND
    ]
    report = GenReport(
        vertex_counts={k.value: graph.count(k) for k in VertexKind},
        edge_counts={k.value: graph.count(k) for k in EdgeKind},
        edge_targets={
            EdgeKind.FRIEND.value: config.target_friendships(),
            EdgeKind.OWNS.value: config.target_ownerships(),
            EdgeKind.DEVELOPED_BY.value: config.target_developed(),
            EdgeKind.HAS_GENRE.value: config.target_genre_links(),
        },
        ks_attainment=ks_statistic(ratings, config.attainment),
        giant_component_share=_giant_component_share(config.n_players(), friend_edges),
    )
    return out, report


def planted_ratings(
    n_users: int = 500,
    n_items: int = 200,
    rank: int = 5,
    density: float = 0.1,
    seed: int = 0,
    spread: float = 0.18,
):
    """Ratings with planted low-rank structure for recommender benchmarks.

    The dense matrix is exactly rank `rank`: a constant column pair carries
    user and item biases, the rest is random interaction structure. Ratings
    are centered at 0.5, scaled to the requested spread, and clipped to
    [0, 1]. A seeded `density` fraction of cells is observed.
    """
    from .cf import RatingsTable

    rng = np.random.default_rng(seed)
    u = np.empty((n_users, rank))
    v = np.empty((n_items, rank))
    u[:, 0] = 1.0
    v[:, 0] = rng.normal(0.0, 1.8, n_items)  # item bias component
    u[:, 1] = rng.normal(0.0, 1.8, n_users)  # user bias component
    v[:, 1] = 1.0
    u[:, 2:] = rng.normal(0.0, 1.0, (n_users, rank - 2))
    v[:, 2:] = rng.normal(0.0, 1.0, (n_items, rank - 2))
    raw = u @ v.T
    raw = (raw - raw.mean()) / raw.std()
    dense = np.clip(0.5 + spread * raw, 0.0, 1.0)

    observed = rng.random((n_users, n_items)) < density
    users, items = np.nonzero(observed)
    triples = [(int(s), int(i), float(dense[s, i])) for s, i in zip(users, items)]
    return RatingsTable.from_triples(triples)


def plant_attainments(dataset_dir, target: LomaxParams, seed: int) -> Path:
    """Re-plant the achievement matrices of an existing dataset so its
    recomputed ratings track `target`; rewrites the dataset in place."""
    from .dataset import load_dataset

    graph, _ = load_dataset(dataset_dir)
    rng = np.random.default_rng(np.random.SeedSequence(seed))
    tables = plant_bits(graph, target, rng)
    save_dataset(graph, tables, dataset_dir)
    return Path(dataset_dir)
