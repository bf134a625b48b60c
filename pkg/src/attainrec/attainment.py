"""Attainment ratings from achievement completion data.

For a game, each owner has a binary unlock vector over the game's
achievements. The global completion rate of achievement i is the fraction
of owners who unlocked it; a player's attainment rating for the game is
the mean of (1 - completion rate) over the achievements they unlocked,
divided by the total achievement count. Rare unlocks therefore contribute
close to 1/N and ubiquitous ones close to nothing, and every rating lies
in [0, 1 - 1/(number of owners)].
"""
from __future__ import annotations

from dataclasses import dataclass

import numpy as np

from .graph import EdgeKind, PropertyGraph

RATING_ATTR = "attainmentRating"


class AttainmentError(Exception):
    pass


class NoOwners(AttainmentError):
    pass


class NotAnOwner(AttainmentError):
    pass


class MissingAchievementRow(AttainmentError):
    def __init__(self, player: int, game: int):
        super().__init__(f"no achievement row for player {player} on game {game}")
        self.player = player
        self.game = game


@dataclass
class AchievementTable:
    """Per-game unlock matrix: one row per owner, one column per achievement.

    `owners` lists the owning players' vertex ids in ascending order and
    fixes the row order; `names` fixes the column order. `global_rates`,
    when present, holds externally supplied completion percentages (as from
    a storefront's global achievement stats) that take precedence over
    rates recomputed from the local owner rows.
    """

    game: int
    names: tuple[str, ...]
    owners: tuple[int, ...]
    bits: np.ndarray
    global_rates: np.ndarray | None = None

    def __post_init__(self) -> None:
        self.bits = np.asarray(self.bits, dtype=np.uint8)
        if self.bits.shape != (len(self.owners), len(self.names)):
            raise ValueError(
                f"bits shape {self.bits.shape} != ({len(self.owners)}, {len(self.names)})"
            )
        if self.bits.size and self.bits.max() > 1:
            raise ValueError("bits entries must be 0 or 1")
        if self.global_rates is not None:
            self.global_rates = np.asarray(self.global_rates, dtype=np.float64)
            if self.global_rates.shape != (len(self.names),):
                raise ValueError("global_rates length must match the achievement count")
            if self.global_rates.size and (
                self.global_rates.min() < 0.0 or self.global_rates.max() > 1.0
            ):
                raise ValueError("global_rates must lie in [0, 1]")

    @property
    def n_achievements(self) -> int:
        return len(self.names)

    def row(self, player: int) -> int:
        try:
            return self.owners.index(player)
        except ValueError:
            raise NotAnOwner(f"player {player} does not own game {self.game}") from None


@dataclass
class CompletionRates:
    game: int
    rates: np.ndarray


def completion_rates(table: AchievementTable) -> CompletionRates:
    """Fraction of owners who unlocked each achievement; a stored global
    completion override takes precedence over the local recomputation."""
    if table.global_rates is not None:
        return CompletionRates(game=table.game, rates=table.global_rates.copy())
    if not table.owners:
        raise NoOwners(f"game {table.game} has no owners")
    rates = table.bits.sum(axis=0, dtype=np.float64) / len(table.owners)
    return CompletionRates(game=table.game, rates=rates)


def attainment_score(table: AchievementTable, rates: CompletionRates, player: int) -> float:
    """Rarity-weighted unlock fraction for one owner; 0.0 for games without
    achievements."""
    row = table.row(player)
    n = table.n_achievements
    if n == 0:
        return 0.0
    weights = 1.0 - rates.rates
    return float(table.bits[row].astype(np.float64) @ weights / n)


def score_all(table: AchievementTable) -> np.ndarray:
    """Ratings for every owner of one game, in `owners` order."""
    if not table.owners:
        return np.zeros(0)
    n = table.n_achievements
    if n == 0:
        return np.zeros(len(table.owners))
    rates = completion_rates(table).rates
    return table.bits.astype(np.float64) @ (1.0 - rates) / n


def rating_upper_bound(table: AchievementTable) -> float:
    """Largest rating any owner can reach: 1 - 1/owners when rates are
    recomputed locally, the full remaining rarity weight with an override."""
    if table.n_achievements == 0:
        return 0.0
    if table.global_rates is not None:
        return float(np.sum(1.0 - table.global_rates) / table.n_achievements)
    if not table.owners:
        return 0.0
    return 1.0 - 1.0 / len(table.owners)


def annotate_graph(graph: PropertyGraph, tables: dict[int, AchievementTable]) -> int:
    """Write each ownership edge's attainment rating; returns edges written.

    The graph must still be mutable (annotate before freezing).
    """
    scores: dict[tuple[int, int], float] = {}
    for gid, table in tables.items():
        values = score_all(table)
        for pid, value in zip(table.owners, values):
            scores[(pid, gid)] = float(value)

    written = 0
    for edge in graph.edges():
        if edge.kind is not EdgeKind.OWNS:
            continue
        key = (edge.src, edge.dst)
        if key not in scores:
            raise MissingAchievementRow(edge.src, edge.dst)
        graph.set_edge_attr(edge.id, RATING_ATTR, scores[key])
        written += 1
    return written


def rating_sample(graph: PropertyGraph) -> np.ndarray:
    """All ownership-edge ratings, in edge id order."""
    values = [
        e.attrs[RATING_ATTR]
        for e in graph.edges()
        if e.kind is EdgeKind.OWNS and RATING_ATTR in e.attrs
    ]
    return np.asarray(values, dtype=np.float64)
