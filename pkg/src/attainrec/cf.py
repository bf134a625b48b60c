"""SVD++ matrix factorization over (player, game, attainment rating) triples.

The prediction is mu + b_u + b_i + q_i . (p_u + |N(u)|^-1/2 * sum_{j in N(u)} y_j)
where N(u) is the set of items the user rated; every owned game carries a
rating (possibly 0), so the rated set doubles as the implicit-feedback set.
Training is plain SGD with one shared learning rate and L2 regularization,
deterministic for a fixed seed.
"""
from __future__ import annotations

from dataclasses import dataclass, field

import numpy as np

from .attainment import RATING_ATTR
from .graph import EdgeKind, PropertyGraph


class EmptyData(Exception):
    pass


class TooFewRatings(Exception):
    pass


@dataclass
class TrainParams:
    factors: int = 20
    epochs: int = 20
    lr: float = 0.007
    reg: float = 0.02
    init_noise: float = 0.1
    seed: int = 0

    def __post_init__(self) -> None:
        if self.factors < 1 or self.epochs < 0 or self.lr <= 0 or self.reg < 0:
            raise ValueError("factors/epochs/lr/reg out of range")


@dataclass
class RatingsTable:
    """Deduplicated (user, item, rating) triples with external-id maps."""

    users: np.ndarray  # int index per triple
    items: np.ndarray
    ratings: np.ndarray  # float64 in [0, 1]
    user_ids: tuple  # external user ids by index
    item_ids: tuple

    def __len__(self) -> int:
        return len(self.ratings)

    @property
    def n_users(self) -> int:
        return len(self.user_ids)

    @property
    def n_items(self) -> int:
        return len(self.item_ids)

    @classmethod
    def from_triples(cls, triples) -> "RatingsTable":
        user_index: dict = {}
        item_index: dict = {}
        users, items, ratings = [], [], []
        seen = set()
        for user, item, rating in triples:
            if not 0.0 <= rating <= 1.0:
                raise ValueError(f"rating {rating} outside [0, 1]")
            if (user, item) in seen:
                raise ValueError(f"duplicate rating for ({user!r}, {item!r})")
            seen.add((user, item))
            users.append(user_index.setdefault(user, len(user_index)))
            items.append(item_index.setdefault(item, len(item_index)))
            ratings.append(float(rating))
        return cls(
            users=np.asarray(users, dtype=np.int64),
            items=np.asarray(items, dtype=np.int64),
            ratings=np.asarray(ratings, dtype=np.float64),
            user_ids=tuple(user_index),
            item_ids=tuple(item_index),
        )

    @classmethod
    def from_graph(cls, graph: PropertyGraph) -> "RatingsTable":
        """Triples from annotated ownership edges, keyed by steamid/appid."""
        triples = []
        for edge in graph.edges():
            if edge.kind is not EdgeKind.OWNS or RATING_ATTR not in edge.attrs:
                continue
            triples.append(
                (
                    graph.vertex_attr(edge.src, "steamid"),
                    graph.vertex_attr(edge.dst, "appid"),
                    float(edge.attrs[RATING_ATTR]),
                )
            )
        return cls.from_triples(triples)

    def subset(self, index: np.ndarray) -> "RatingsTable":
        """View of selected triple positions; id maps are unchanged."""
        return RatingsTable(
            users=self.users[index],
            items=self.items[index],
            ratings=self.ratings[index],
            user_ids=self.user_ids,
            item_ids=self.item_ids,
        )


@dataclass
class SvdppModel:
    mu: float
    b_user: np.ndarray
    b_item: np.ndarray
    p_user: np.ndarray  # (n_users, factors)
    q_item: np.ndarray  # (n_items, factors)
    y_item: np.ndarray  # (n_items, factors) implicit factors
    rated_items: list  # per user index: np.ndarray of item indices
    user_ids: tuple
    item_ids: tuple
    seed: int = 0
    user_index: dict = field(default_factory=dict)
    item_index: dict = field(default_factory=dict)

    def __post_init__(self) -> None:
        if not self.user_index:
            self.user_index = {u: i for i, u in enumerate(self.user_ids)}
        if not self.item_index:
            self.item_index = {it: i for i, it in enumerate(self.item_ids)}

    @property
    def factors(self) -> int:
        return self.p_user.shape[1]

    def user_profile(self, u: int) -> np.ndarray:
        """p_u plus the normalized sum of implicit item factors."""
        rated = self.rated_items[u]
        if len(rated) == 0:
            return self.p_user[u]
        return self.p_user[u] + self.y_item[rated].sum(axis=0) / np.sqrt(len(rated))


def _raw_predict(model: SvdppModel, u: int | None, i: int | None) -> float:
    value = model.mu
    if u is not None:
        value += model.b_user[u]
    if i is not None:
        value += model.b_item[i]
    if u is not None and i is not None:
        value += float(model.q_item[i] @ model.user_profile(u))
    return value


def predict(model: SvdppModel, user, item) -> float:
    """Clamped prediction; unknown users/items fall back to bias terms."""
    u = model.user_index.get(user)
    i = model.item_index.get(item)
    return float(min(1.0, max(0.0, _raw_predict(model, u, i))))


def train(data: RatingsTable, params: TrainParams | None = None) -> SvdppModel:
    """SGD-train an SVD++ model; bit-identical results for identical inputs.

    Initialization draws p, q, y entries (in that order) from a seeded
    normal with the configured noise scale; biases start at zero. Each
    epoch visits all triples once in a freshly shuffled order.
    """
    params = params or TrainParams()
    n = len(data)
    if n == 0:
        raise EmptyData("no ratings to train on")
    rng = np.random.default_rng(params.seed)
    n_users, n_items, f = data.n_users, data.n_items, params.factors

    mu = float(data.ratings.mean())
    b_user = np.zeros(n_users)
    b_item = np.zeros(n_items)
    p = rng.normal(0.0, params.init_noise, (n_users, f))
    q = rng.normal(0.0, params.init_noise, (n_items, f))
    y = rng.normal(0.0, params.init_noise, (n_items, f))

    rated_items = [np.empty(0, dtype=np.int64) for _ in range(n_users)]
    by_user: dict[int, list[int]] = {}
    for u, i in zip(data.users, data.items):
        by_user.setdefault(int(u), []).append(int(i))
    for u, items in by_user.items():
        rated_items[u] = np.asarray(sorted(items), dtype=np.int64)

    lr, reg = params.lr, params.reg
    for _ in range(params.epochs):
        order = rng.permutation(n)
        for idx in order:
            u = int(data.users[idx])
            i = int(data.items[idx])
            r = data.ratings[idx]
            rated = rated_items[u]
            norm = 1.0 / np.sqrt(len(rated))
            implicit = y[rated].sum(axis=0) * norm
            profile = p[u] + implicit
            qi = q[i].copy()
            err = r - (mu + b_user[u] + b_item[i] + qi @ profile)
            b_user[u] += lr * (err - reg * b_user[u])
            b_item[i] += lr * (err - reg * b_item[i])
            p[u] += lr * (err * qi - reg * p[u])
            q[i] += lr * (err * profile - reg * qi)
            y[rated] += lr * (err * norm * qi - reg * y[rated])

    return SvdppModel(
        mu=mu,
        b_user=b_user,
        b_item=b_item,
        p_user=p,
        q_item=q,
        y_item=y,
        rated_items=rated_items,
        user_ids=data.user_ids,
        item_ids=data.item_ids,
        seed=params.seed,
    )


def training_mse(model: SvdppModel, data: RatingsTable) -> float:
    """Mean squared error of unclamped predictions over the triples."""
    total = 0.0
    for u, i, r in zip(data.users, data.items, data.ratings):
        err = r - _raw_predict(model, int(u), int(i))
        total += err * err
    return total / len(data)


def example_gradients(
    model: SvdppModel, u: int, i: int, r: float, reg: float
) -> dict[str, np.ndarray]:
    """Analytic gradients of the single-example regularized half squared
    error, per parameter block (matches the SGD update directions)."""
    rated = model.rated_items[u]
    norm = 1.0 / np.sqrt(len(rated))
    implicit = model.y_item[rated].sum(axis=0) * norm
    profile = model.p_user[u] + implicit
    qi = model.q_item[i]
    err = r - (model.mu + model.b_user[u] + model.b_item[i] + qi @ profile)
    return {
        "b_user": np.array([-err + reg * model.b_user[u]]),
        "b_item": np.array([-err + reg * model.b_item[i]]),
        "p_user": -err * qi + reg * model.p_user[u],
        "q_item": -err * profile + reg * qi,
        "y_item": (-err * norm * qi)[None, :] + reg * model.y_item[rated],
    }


def example_loss(model: SvdppModel, u: int, i: int, r: float, reg: float) -> float:
    """Regularized half squared error for one example (gradient-check target)."""
    rated = model.rated_items[u]
    err = r - _raw_predict(model, u, i)
    penalty = (
        model.b_user[u] ** 2
        + model.b_item[i] ** 2
        + float(model.p_user[u] @ model.p_user[u])
        + float(model.q_item[i] @ model.q_item[i])
        + float((model.y_item[rated] ** 2).sum())
    )
    return 0.5 * err * err + 0.5 * reg * penalty


def cross_validate(
    data: RatingsTable, params: TrainParams | None = None, k: int = 5
) -> list[tuple[float, float]]:
    """Per-fold (RMSE, MAE) over a seeded random k-way partition."""
    from .evalstats import mae, rmse

    params = params or TrainParams()
    if k < 2:
        raise ValueError("k must be at least 2")
    if len(data) < k:
        raise TooFewRatings(f"{len(data)} ratings cannot fill {k} folds")
    rng = np.random.default_rng(params.seed)
    order = rng.permutation(len(data))
    folds = np.array_split(order, k)
    results = []
    for fold in folds:
        mask = np.ones(len(data), dtype=bool)
        mask[fold] = False
        model = train(data.subset(np.flatnonzero(mask)), params)
        preds = [
            predict(model, data.user_ids[int(data.users[t])], data.item_ids[int(data.items[t])])
            for t in fold
        ]
        truth = [data.ratings[t] for t in fold]
        results.append((rmse(preds, truth), mae(preds, truth)))
    return results


def recommend_top_n(
    model: SvdppModel,
    user,
    candidates,
    n: int,
    exclude_rated: bool = False,
) -> list[tuple[object, float]]:
    """Top-n candidate items by predicted rating, ties by ascending item id."""
    if n < 1:
        raise ValueError("n must be at least 1")
    rated: set = set()
    u = model.user_index.get(user)
    if exclude_rated and u is not None:
        rated = {model.item_ids[j] for j in model.rated_items[u]}
    scored = [
        (item, predict(model, user, item)) for item in candidates if item not in rated
    ]
    scored.sort(key=lambda pair: (-pair[1], pair[0]))
    return scored[:n]


MODEL_FORMAT_VERSION = 1


def save_model(model: SvdppModel, path) -> None:
    """Versioned npz snapshot; loading reproduces bit-identical predictions."""
    flat = np.concatenate([r for r in model.rated_items]) if model.rated_items else np.empty(0, dtype=np.int64)
    lengths = np.asarray([len(r) for r in model.rated_items], dtype=np.int64)
    with open(path, "wb") as fh:
        np.savez(
            fh,
            version=np.int64(MODEL_FORMAT_VERSION),
            factors=np.int64(model.factors),
            n_users=np.int64(len(model.user_ids)),
            n_items=np.int64(len(model.item_ids)),
            seed=np.int64(model.seed),
            mu=np.float64(model.mu),
            b_user=model.b_user,
            b_item=model.b_item,
            p_user=model.p_user,
            q_item=model.q_item,
            y_item=model.y_item,
            rated_flat=flat.astype(np.int64),
            rated_lengths=lengths,
            user_ids=np.asarray([repr(u) for u in model.user_ids], dtype=object),
            item_ids=np.asarray([repr(i) for i in model.item_ids], dtype=object),
        )


def load_model(path) -> SvdppModel:
    from ast import literal_eval

    with np.load(path, allow_pickle=True) as data:
        if int(data["version"]) != MODEL_FORMAT_VERSION:
            raise ValueError(f"unsupported model version {int(data['version'])}")
        if data["p_user"].shape != (int(data["n_users"]), int(data["factors"])):
            raise ValueError("model header disagrees with parameter shapes")
        lengths = data["rated_lengths"]
        flat = data["rated_flat"]
        rated_items = []
        offset = 0
        for length in lengths:
            rated_items.append(flat[offset : offset + int(length)])
            offset += int(length)
        return SvdppModel(
            mu=float(data["mu"]),
            b_user=data["b_user"],
            b_item=data["b_item"],
            p_user=data["p_user"],
            q_item=data["q_item"],
            y_item=data["y_item"],
            rated_items=rated_items,
            user_ids=tuple(literal_eval(u) for u in data["user_ids"]),
            item_ids=tuple(literal_eval(i) for i in data["item_ids"]),
            seed=int(data["seed"]),
        )
