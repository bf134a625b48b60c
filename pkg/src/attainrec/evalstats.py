"""Prediction metrics and distribution analysis for attainment ratings.

Covers RMSE/MAE, threshold-based precision/recall at n, a heavy-tailed
(Lomax) maximum-likelihood fit with a profiled shape parameter, the
Kolmogorov-Smirnov statistic, and density-normalized per-genre histograms.
"""
from __future__ import annotations

import math
from dataclasses import dataclass

import numpy as np

from .attainment import RATING_ATTR
from .graph import EdgeKind, PropertyGraph, VertexKind


class LengthMismatch(Exception):
    pass


class EmptySample(Exception):
    pass


class DegenerateSample(Exception):
    pass


@dataclass(frozen=True)
class LomaxParams:
    """Pareto distribution shifted to start at zero:
    CDF F(x) = 1 - (1 + x/scale)^(-shape) for x >= 0."""

    shape: float
    scale: float

    def __post_init__(self) -> None:
        if self.shape <= 0 or self.scale <= 0:
            raise ValueError("shape and scale must be positive")

    def cdf(self, x):
        x = np.asarray(x, dtype=np.float64)
        return np.where(x < 0, 0.0, 1.0 - np.power(1.0 + x / self.scale, -self.shape))

    def ppf(self, u):
        u = np.asarray(u, dtype=np.float64)
        return self.scale * (np.power(1.0 - u, -1.0 / self.shape) - 1.0)

    def sample(self, n: int, rng: np.random.Generator) -> np.ndarray:
        return self.ppf(rng.random(n))

    def log_likelihood(self, sample: np.ndarray) -> float:
        xs = np.asarray(sample, dtype=np.float64)
        n = len(xs)
        return float(
            n * math.log(self.shape)
            - n * math.log(self.scale)
            - (self.shape + 1.0) * np.log1p(xs / self.scale).sum()
        )


@dataclass(frozen=True)
class PrPoint:
    threshold: float
    n: int
    precision: float
    recall: float
    users_counted: int


@dataclass(frozen=True)
class HistogramSpec:
    group: str
    edges: tuple[float, ...]
    densities: tuple[float, ...]
    count: int


def rmse(pred, truth) -> float:
    pred = np.asarray(pred, dtype=np.float64)
    truth = np.asarray(truth, dtype=np.float64)
    if pred.shape != truth.shape:
        raise LengthMismatch(f"{pred.shape} vs {truth.shape}")
    if pred.size == 0:
        raise EmptySample("no predictions")
    return float(np.sqrt(np.mean((pred - truth) ** 2)))


def mae(pred, truth) -> float:
    pred = np.asarray(pred, dtype=np.float64)
    truth = np.asarray(truth, dtype=np.float64)
    if pred.shape != truth.shape:
        raise LengthMismatch(f"{pred.shape} vs {truth.shape}")
    if pred.size == 0:
        raise EmptySample("no predictions")
    return float(np.mean(np.abs(pred - truth)))


DEFAULT_THRESHOLDS = tuple(round(0.05 * i, 2) for i in range(11))  # 0.00 .. 0.50


def precision_recall_at_n(
    model,
    test_triples,
    n: int,
    thresholds=DEFAULT_THRESHOLDS,
) -> list[PrPoint]:
    """Mean precision/recall of top-n recommendations per threshold.

    For each user, test items are ranked by predicted rating; at threshold t
    the recommended set is the top n of those predicted >= t and the
    relevant set is the items truly rated >= t. Users with an empty
    recommended (resp. relevant) set are skipped for precision (resp.
    recall). `users_counted` is the number of users contributing to either
    mean.
    """
    from .cf import predict

    if n < 1:
        raise ValueError("n must be at least 1")
    by_user: dict = {}
    for user, item, rating in test_triples:
        by_user.setdefault(user, []).append((item, float(rating)))

    ranked: dict = {}
    for user, pairs in by_user.items():
        scored = [(item, predict(model, user, item), truth) for item, truth in pairs]
        scored.sort(key=lambda t: (-t[1], repr(t[0])))
        ranked[user] = scored

    points = []
    for t in thresholds:
        precisions, recalls, counted = [], [], set()
        for user, scored in ranked.items():
            recommended = [item for item, pred, _ in scored[:n] if pred >= t]
            relevant = {item for item, _, truth in scored if truth >= t}
            hits = sum(1 for item in recommended if item in relevant)
            if recommended:
                precisions.append(hits / len(recommended))
                counted.add(user)
            if relevant:
                recalls.append(hits / len(relevant))
                counted.add(user)
        points.append(
            PrPoint(
                threshold=float(t),
                n=n,
                precision=float(np.mean(precisions)) if precisions else 0.0,
                recall=float(np.mean(recalls)) if recalls else 0.0,
                users_counted=len(counted),
            )
        )
    return points


def _golden_section_max(f, lo: float, hi: float, tol: float) -> float:
    """Deterministic golden-section search for a maximum on [lo, hi]."""
    inv_phi = (math.sqrt(5.0) - 1.0) / 2.0
    a, b = lo, hi
    c = b - inv_phi * (b - a)
    d = a + inv_phi * (b - a)
    fc, fd = f(c), f(d)
    while b - a > tol:
        if fc >= fd:
            b, d, fd = d, c, fc
            c = b - inv_phi * (b - a)
            fc = f(c)
        else:
            a, c, fc = c, d, fd
            d = a + inv_phi * (b - a)
            fd = f(d)
    return (a + b) / 2.0


LOMAX_SCALE_BOUNDS = (1e-4, 1e4)


def lomax_fit(sample, tol: float = 1e-8) -> LomaxParams:
    """Maximum-likelihood Lomax fit.

    For a fixed scale the optimal shape is n / sum(log1p(x/scale)); the
    scale maximizes the resulting profiled log-likelihood via golden-section
    search over log(scale).
    """
    xs = np.asarray(sample, dtype=np.float64)
    if len(xs) < 10:
        raise ValueError("need at least 10 samples")
    if (xs < 0).any():
        raise ValueError("samples must be nonnegative")
    if not (xs > 0).any():
        raise DegenerateSample("all samples are zero")
    n = len(xs)

    def profile(log_scale: float) -> float:
        scale = math.exp(log_scale)
        s = float(np.log1p(xs / scale).sum())
        # n*log(n/s) - n*log(scale) - (n/s + 1)*s, dropping the constant n*log(n) - n
        return -n * math.log(s) - n * log_scale - s

    lo, hi = (math.log(bound) for bound in LOMAX_SCALE_BOUNDS)
    log_scale = _golden_section_max(profile, lo, hi, tol)
    scale = math.exp(log_scale)
    shape = n / float(np.log1p(xs / scale).sum())
    return LomaxParams(shape=shape, scale=scale)


def ks_statistic(sample, params: LomaxParams) -> float:
    """Supremum distance between the sample ECDF and the Lomax CDF."""
    xs = np.sort(np.asarray(sample, dtype=np.float64))
    n = len(xs)
    if n == 0:
        raise EmptySample("empty sample")
    cdf = params.cdf(xs)
    upper = np.arange(1, n + 1) / n - cdf
    lower = cdf - np.arange(0, n) / n
    return float(max(upper.max(), lower.max()))


def _histogram(values: np.ndarray, group: str, bins: int) -> HistogramSpec:
    densities, edges = np.histogram(values, bins=bins, range=(0.0, 1.0), density=True)
    return HistogramSpec(
        group=group,
        edges=tuple(float(e) for e in edges),
        densities=tuple(float(d) for d in densities),
        count=len(values),
    )


def rating_histogram(graph: PropertyGraph, bins: int = 50) -> HistogramSpec:
    """Single density histogram over every annotated ownership rating."""
    from .attainment import rating_sample

    return _histogram(rating_sample(graph), "all", bins)


def genre_histograms(graph: PropertyGraph, bins: int = 50) -> list[HistogramSpec]:
    """One density-normalized histogram per genre with at least one rated
    ownership edge; a game in k genres contributes its ratings to all k."""
    ratings_by_game: dict[int, list[float]] = {}
    for edge in graph.edges():
        if edge.kind is EdgeKind.OWNS and RATING_ATTR in edge.attrs:
            ratings_by_game.setdefault(edge.dst, []).append(float(edge.attrs[RATING_ATTR]))

    specs = []
    for genre_id in graph.vertices_of_kind(VertexKind.GENRE):
        values: list[float] = []
        for _, game in graph.neighbors(genre_id, EdgeKind.HAS_GENRE, "in"):
            values.extend(ratings_by_game.get(game, ()))
        if not values:
            continue
        specs.append(
            _histogram(np.asarray(values), graph.vertex_attr(genre_id, "description"), bins)
        )
    specs.sort(key=lambda spec: spec.group)
    return specs
