"""Tree ensembles: two gradient-boosting variants, AdaBoost, and bagging.

All four learners consume a :class:`~pdvox.dataset.Dataset` and produce an
immutable model whose ``score`` is a real number and whose ``probability``
is monotone in that score, so every model feeds the same ROC machinery.

* GBDT — additive Newton trees on logistic-loss gradients; the leaf-wise
  variant grows best-gain-first to a leaf budget, the level-wise variant
  grows breadth-first to a depth limit.
* AdaBoost — weighted-error decision stumps with the classic half-log-odds
  round weights.
* Bagging — full CART trees on bootstrap resamples, majority vote.
"""

from __future__ import annotations

from dataclasses import dataclass

import numpy as np

from .dataset import Dataset
from .errors import ConfigError, ValidationError
from .rng import derive_key, stream
from .tree import BinMap, Tree, TreeParams, build_bins, fit_cart, predict_many, take_rows

VARIANTS = ("leaf-wise", "level-wise")


def _sigmoid(z):
    z = np.asarray(z, dtype=np.float64)
    out = np.empty_like(z)
    pos = z >= 0
    out[pos] = 1.0 / (1.0 + np.exp(-z[pos]))
    ez = np.exp(z[~pos])
    out[~pos] = ez / (1.0 + ez)
    return out


def _log_loss(margins: np.ndarray, y: np.ndarray) -> float:
    """Mean logistic loss of raw margins against 0/1 labels."""
    signed = np.where(y == 1, -margins, margins)
    return float(np.mean(np.logaddexp(0.0, signed)))


def _require_both_classes(data: Dataset, learner: str) -> None:
    n0, n1 = data.class_counts()
    if n0 == 0 or n1 == 0:
        raise ValidationError(
            f"{learner} needs both classes in the training set "
            f"(got {n1} positive, {n0} negative)"
        )


@dataclass(frozen=True)
class GbdtParams:
    """Boosting settings; growth limit depends on the variant.

    leaf-wise uses ``max_leaves`` (best-first growth); level-wise uses
    ``max_depth`` (breadth-first). ``min_samples_leaf`` defaults follow
    the upstream conventions each variant mimics (20 and 1).
    """

    variant: str = "leaf-wise"
    rounds: int = 100
    learning_rate: float = 0.1
    max_leaves: int = 31
    max_depth: int = 6
    lam: float = 1.0
    gamma: float = 0.0
    max_bins: int = 255
    min_samples_leaf: int | None = None

    def __post_init__(self):
        if self.variant not in VARIANTS:
            raise ConfigError(f"variant must be one of {VARIANTS}, got {self.variant!r}")
        if self.rounds < 0:
            raise ConfigError("rounds must be >= 0")
        if not 0.0 < self.learning_rate <= 1.0:
            raise ConfigError("learning_rate must be in (0, 1]")

    def resolved_min_samples_leaf(self) -> int:
        if self.min_samples_leaf is not None:
            return self.min_samples_leaf
        return 20 if self.variant == "leaf-wise" else 1

    def tree_params(self) -> TreeParams:
        growth = (
            {"max_leaves": self.max_leaves}
            if self.variant == "leaf-wise"
            else {"max_depth": self.max_depth}
        )
        return TreeParams(
            objective="newton",
            min_samples_leaf=self.resolved_min_samples_leaf(),
            lam=self.lam,
            gamma=self.gamma,
            **growth,
        )


@dataclass(frozen=True)
class GbdtModel:
    base_score: float
    trees: tuple[Tree, ...]
    learning_rate: float
    variant: str
    loss_trace: tuple[float, ...]  # entry 0 at base_score, then one per round
    n_features: int


@dataclass(frozen=True)
class AdaBoostParams:
    rounds: int = 100

    def __post_init__(self):
        if self.rounds < 0:
            raise ConfigError("rounds must be >= 0")


@dataclass(frozen=True)
class AdaBoostModel:
    stumps: tuple[Tree, ...]
    alphas: tuple[float, ...]
    epsilons: tuple[float, ...]  # weighted error of each kept stump
    weight_sums: tuple[float, ...]  # total row weight after each round's renorm
    n_features: int


@dataclass(frozen=True)
class BaggingParams:
    n_trees: int = 100
    max_depth: int = 10
    bootstrap: bool = True  # test hook: False fits every tree on the full set

    def __post_init__(self):
        if self.n_trees < 1:
            raise ConfigError("n_trees must be >= 1")
        if self.max_depth < 0:
            raise ConfigError("max_depth must be >= 0")


@dataclass(frozen=True)
class BaggingModel:
    trees: tuple[Tree, ...]
    seeds: tuple[int, ...]  # per-tree PRNG stream keys
    n_features: int


def fit_gbdt(train: Dataset, params: GbdtParams = GbdtParams()) -> GbdtModel:
    """Boost Newton trees on the logistic loss.

    The initial score is the training log-odds ln(n1/n0); each round fits
    a tree to gradients g = p - y with hessians h = p(1 - p) and adds
    ``learning_rate`` times its prediction to every margin. Training
    log-loss is recorded at the base score and after every round.
    """
    _require_both_classes(train, "gradient boosting")
    n0, n1 = train.class_counts()
    X = train.features
    y = train.labels
    base = float(np.log(n1 / n0))
    margins = np.full(train.n_records, base, dtype=np.float64)
    bins = build_bins(X, params.max_bins)
    tree_params = params.tree_params()
    trees: list[Tree] = []
    trace = [_log_loss(margins, y)]
    for _ in range(params.rounds):
        p = _sigmoid(margins)
        g = p - y
        h = p * (1.0 - p)
        if not np.any(h > 0):
            break  # numerically saturated fit; further rounds are no-ops
        tree = fit_cart(X, g, h, tree_params, bins)
        margins += params.learning_rate * predict_many(tree, X)
        trees.append(tree)
        trace.append(_log_loss(margins, y))
    return GbdtModel(
        base_score=base,
        trees=tuple(trees),
        learning_rate=params.learning_rate,
        variant=params.variant,
        loss_trace=tuple(trace),
        n_features=train.n_features,
    )


def fit_adaboost(train: Dataset, params: AdaBoostParams = AdaBoostParams()) -> AdaBoostModel:
    """Boost depth-1 gini stumps with exponential weight updates.

    Round weights start uniform. A stump with weighted error eps_t >= 0.5
    is discarded and boosting stops; a perfect stump (eps_t = 0) is kept
    with a capped weight and boosting stops; otherwise alpha_t =
    0.5 ln((1-eps)/eps), misclassified rows are up-weighted by e^alpha,
    the rest down-weighted, and weights renormalize to sum 1.
    """
    _require_both_classes(train, "adaboost")
    X = train.features
    y = train.labels.astype(np.float64)
    n = train.n_records
    bins = build_bins(X)
    stump_params = TreeParams(objective="gini", max_depth=1)
    w = np.full(n, 1.0 / n, dtype=np.float64)
    stumps: list[Tree] = []
    alphas: list[float] = []
    epsilons: list[float] = []
    weight_sums: list[float] = []
    for _ in range(params.rounds):
        stump = fit_cart(X, y, w, stump_params, bins)
        predicted = predict_many(stump, X)
        miss = predicted != y
        eps = float(np.sum(w[miss]))
        if eps >= 0.5:
            break
        if eps == 0.0:
            alpha = 0.5 * np.log((1.0 - eps) / (eps + 1e-10))
            stumps.append(stump)
            alphas.append(float(alpha))
            epsilons.append(eps)
            weight_sums.append(float(w.sum()))
            break
        alpha = 0.5 * np.log((1.0 - eps) / eps)
        stumps.append(stump)
        alphas.append(float(alpha))
        epsilons.append(eps)
        w *= np.exp(np.where(miss, alpha, -alpha))
        w /= w.sum()
        weight_sums.append(float(w.sum()))
    return AdaBoostModel(
        stumps=tuple(stumps),
        alphas=tuple(alphas),
        epsilons=tuple(epsilons),
        weight_sums=tuple(weight_sums),
        n_features=train.n_features,
    )


def fit_bagging(
    train: Dataset, params: BaggingParams = BaggingParams(), seed: int = 0
) -> BaggingModel:
    """Fit gini CART trees on size-n bootstrap resamples.

    Tree t draws its sample from its own PRNG stream keyed by
    (seed, "bagging", t), so trees are independent of fit order and a
    fixed master seed reproduces the ensemble exactly.
    """
    if train.n_records == 0:
        raise ValidationError("bagging needs a non-empty training set")
    X = train.features
    y = train.labels.astype(np.float64)
    n = train.n_records
    bins = build_bins(X)
    tree_params = TreeParams(objective="gini", max_depth=params.max_depth)
    trees: list[Tree] = []
    seeds: list[int] = []
    ones = np.ones(n, dtype=np.float64)
    for t in range(params.n_trees):
        seeds.append(derive_key(seed, "bagging", t))
        if params.bootstrap:
            gen = stream(seed, "bagging", t)
            idx = np.fromiter((gen.below(n) for _ in range(n)), dtype=np.int64, count=n)
        else:
            idx = np.arange(n, dtype=np.int64)
        trees.append(
            fit_cart(X[idx], y[idx], ones, tree_params, take_rows(bins, idx))
        )
    return BaggingModel(trees=tuple(trees), seeds=tuple(seeds), n_features=train.n_features)


def _check_matrix(X, n_features: int) -> np.ndarray:
    M = np.asarray(X, dtype=np.float64)
    if M.ndim != 2 or M.shape[1] != n_features:
        raise ValidationError(
            f"expected (n, {n_features}) feature matrix, got shape {M.shape}"
        )
    return M


def ensemble_scores(model, X) -> tuple[np.ndarray, np.ndarray]:
    """(scores, probabilities) for every row of X, per the model's link."""
    if isinstance(model, GbdtModel):
        M = _check_matrix(X, model.n_features)
        scores = np.full(M.shape[0], model.base_score, dtype=np.float64)
        for tree in model.trees:
            scores += model.learning_rate * predict_many(tree, M)
        return scores, _sigmoid(scores)
    if isinstance(model, AdaBoostModel):
        M = _check_matrix(X, model.n_features)
        scores = np.zeros(M.shape[0], dtype=np.float64)
        for alpha, stump in zip(model.alphas, model.stumps):
            scores += alpha * (2.0 * predict_many(stump, M) - 1.0)
        return scores, _sigmoid(2.0 * scores)
    if isinstance(model, BaggingModel):
        M = _check_matrix(X, model.n_features)
        votes = np.zeros(M.shape[0], dtype=np.float64)
        for tree in model.trees:
            votes += predict_many(tree, M)
        frac = votes / len(model.trees)
        return frac, frac
    raise ConfigError(f"unknown model type {type(model).__name__}")


def ensemble_predict(model, x) -> tuple[float, float]:
    """(score, probability) for a single feature vector."""
    v = np.asarray(x, dtype=np.float64)
    if v.ndim != 1:
        raise ValidationError("ensemble_predict takes a single feature vector")
    scores, probs = ensemble_scores(model, v[None, :])
    return float(scores[0]), float(probs[0])
