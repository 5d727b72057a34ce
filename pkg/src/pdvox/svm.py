"""Soft-margin RBF-kernel SVM trained by sequential minimal optimization.

Training standardizes features internally (z-scores fitted on the
training rows), maps labels to {-1, +1}, and ascends the dual objective

    W(alpha) = sum(alpha) - 1/2 * (alpha*y)' K (alpha*y)

two coordinates at a time, always along the equality constraint
sum(alpha*y) = 0. The pair step is analytic when the kernel-induced
curvature eta = K11 + K22 - 2*K12 is positive and an endpoint-objective
comparison otherwise. Convergence means a full deterministic sweep finds
no KKT violation beyond the tolerance; every accepted step appends the
dual objective to a trace so optimizer progress is auditable.
"""

from __future__ import annotations

from dataclasses import dataclass

import numpy as np

from .dataset import Dataset, Standardizer, fit_standardizer, transform_features
from .errors import ConfigError, ValidationError

#: Minimum multiplier movement for a step to count as progress.
_STEP_EPS = 1e-12

#: Absolute safety limit on full sweeps (convergence normally takes far fewer).
_SWEEP_CAP = 1000


@dataclass(frozen=True)
class SvmParams:
    """gamma may be a positive real or the string "scale", which resolves
    to 1 / (n_features * mean per-feature sample variance) on the
    standardized training matrix (variance with n-1 denominator)."""

    C: float = 1.0
    gamma: float | str = "scale"
    tol: float = 1e-3
    max_passes: int = 10

    def __post_init__(self):
        if self.C <= 0:
            raise ConfigError("C must be > 0")
        if isinstance(self.gamma, str):
            if self.gamma != "scale":
                raise ConfigError(f"gamma must be positive or 'scale', got {self.gamma!r}")
        elif self.gamma <= 0:
            raise ConfigError("gamma must be > 0")
        if self.tol <= 0:
            raise ConfigError("tol must be > 0")
        if self.max_passes < 1:
            raise ConfigError("max_passes must be >= 1")


@dataclass(frozen=True)
class SvmModel:
    """Fitted solver state plus diagnostics.

    ``support_vectors`` are standardized rows with alpha > 0 and
    ``dual_coef`` holds their alpha_i * y_i. ``alphas`` keeps the full
    multiplier vector (training-row order) and ``objective_trace`` the
    dual objective after each accepted step, for auditing.
    """

    support_vectors: np.ndarray
    dual_coef: np.ndarray
    bias: float
    gamma: float
    standardizer: Standardizer
    alphas: tuple[float, ...]
    objective_trace: tuple[float, ...]
    sweeps: int
    converged: bool
    n_features: int

    def __post_init__(self):
        for name in ("support_vectors", "dual_coef"):
            arr = np.asarray(getattr(self, name), dtype=np.float64)
            arr.flags.writeable = False
            object.__setattr__(self, name, arr)


def rbf_kernel(x, z, gamma: float) -> float:
    """exp(-gamma * ||x - z||^2) for a single pair of vectors."""
    a = np.asarray(x, dtype=np.float64)
    b = np.asarray(z, dtype=np.float64)
    if a.shape != b.shape:
        raise ValidationError(f"shape mismatch: {a.shape} vs {b.shape}")
    diff = a - b
    return float(np.exp(-gamma * np.dot(diff, diff)))


def _kernel_matrix(A: np.ndarray, B: np.ndarray, gamma: float) -> np.ndarray:
    sq = (
        np.sum(A * A, axis=1)[:, None]
        + np.sum(B * B, axis=1)[None, :]
        - 2.0 * (A @ B.T)
    )
    np.maximum(sq, 0.0, out=sq)
    return np.exp(-gamma * sq)


def _resolve_gamma(params: SvmParams, Xs: np.ndarray) -> float:
    if not isinstance(params.gamma, str):
        return float(params.gamma)
    d = Xs.shape[1]
    if Xs.shape[0] < 2:
        return 1.0
    mean_var = float(np.mean(Xs.var(axis=0, ddof=1)))
    if mean_var <= 0 or d == 0:
        return 1.0
    return 1.0 / (d * mean_var)


class _SmoState:
    """Mutable solver workspace over a fixed kernel matrix."""

    def __init__(self, K: np.ndarray, y: np.ndarray, C: float, tol: float):
        self.K = K
        self.y = y
        self.C = C
        self.tol = tol
        self.n = y.shape[0]
        self.alpha = np.zeros(self.n, dtype=np.float64)
        self.b = 0.0
        self.E = -y.astype(np.float64)  # f(x) = 0 everywhere at the start
        self.trace: list[float] = [0.0]

    def refresh_errors(self) -> None:
        v = self.alpha * self.y
        self.E = self.K @ v + self.b - self.y

    def objective(self) -> float:
        """Dual objective from the (incrementally maintained) error cache."""
        F = self.E + self.y - self.b
        return float(np.sum(self.alpha) - 0.5 * np.dot(self.alpha * self.y, F))

    def take_step(self, i1: int, i2: int) -> bool:
        if i1 == i2:
            return False
        alpha, y, K, C = self.alpha, self.y, self.K, self.C
        a1o, a2o = alpha[i1], alpha[i2]
        y1, y2 = y[i1], y[i2]
        E1, E2 = self.E[i1], self.E[i2]
        s = y1 * y2
        if s < 0:
            L = max(0.0, a2o - a1o)
            H = min(C, C + a2o - a1o)
        else:
            L = max(0.0, a1o + a2o - C)
            H = min(C, a1o + a2o)
        if L >= H:
            return False
        k11, k22, k12 = K[i1, i1], K[i2, i2], K[i1, i2]
        eta = k11 + k22 - 2.0 * k12
        if eta > 0:
            a2 = a2o + y2 * (E1 - E2) / eta
            a2 = min(max(a2, L), H)
        else:
            # flat or concave direction: compare the dual objective at the
            # two box endpoints and move to the better one
            F1 = E1 + y1 - self.b
            F2 = E2 + y2 - self.b
            best_gain, a2 = 0.0, a2o
            for cand in (L, H):
                d2 = cand - a2o
                d1 = s * (a2o - cand)
                gain = (
                    d1 + d2
                    - d1 * y1 * F1
                    - d2 * y2 * F2
                    - 0.5 * (d1 * d1 * k11 + d2 * d2 * k22)
                    - d1 * d2 * s * k12
                )
                if gain > best_gain + _STEP_EPS:
                    best_gain, a2 = gain, cand
            if a2 == a2o:
                return False
        if abs(a2 - a2o) < _STEP_EPS * (a2 + a2o + _STEP_EPS):
            return False
        a1 = a1o + s * (a2o - a2)
        # snap multiplier dust onto the box so bound classification is exact
        if a1 < _STEP_EPS:
            a1 = 0.0
        elif a1 > C - _STEP_EPS:
            a1 = C
        if a2 < _STEP_EPS:
            a2 = 0.0
        elif a2 > C - _STEP_EPS:
            a2 = C
        d1, d2 = a1 - a1o, a2 - a2o
        b1 = self.b - E1 - y1 * d1 * k11 - y2 * d2 * k12
        b2 = self.b - E2 - y1 * d1 * k12 - y2 * d2 * k22
        if 0.0 < a1 < C:
            b_new = b1
        elif 0.0 < a2 < C:
            b_new = b2
        else:
            b_new = 0.5 * (b1 + b2)
        self.E += y1 * d1 * K[:, i1] + y2 * d2 * K[:, i2] + (b_new - self.b)
        alpha[i1], alpha[i2] = a1, a2
        self.b = b_new
        self.trace.append(self.objective())
        return True

    def examine(self, i: int) -> bool:
        """Try to improve the pair (j, i) for the best-looking j."""
        E = self.E
        non_bound = np.flatnonzero((self.alpha > 0) & (self.alpha < self.C))
        if non_bound.size > 1:
            j = int(non_bound[np.argmax(np.abs(E[i] - E[non_bound]))])
            if self.take_step(j, i):
                return True
        for j in non_bound:
            if self.take_step(int(j), i):
                return True
        for j in range(self.n):
            if self.take_step(j, i):
                return True
        return False

    def solve(self, max_passes: int) -> tuple[int, bool]:
        """Sweep all points until KKT holds or progress stalls.

        Returns (sweeps, converged); converged means a full sweep saw no
        KKT violation beyond tol.
        """
        quiet = 0
        sweeps = 0
        converged = False
        while quiet < max_passes and sweeps < _SWEEP_CAP:
            self.refresh_errors()
            violations = 0
            changed = 0
            for i in range(self.n):
                r = self.y[i] * self.E[i]
                if (r < -self.tol and self.alpha[i] < self.C) or (
                    r > self.tol and self.alpha[i] > 0
                ):
                    violations += 1
                    if self.examine(i):
                        changed += 1
            sweeps += 1
            if violations == 0:
                converged = True
                break
            quiet = quiet + 1 if changed == 0 else 0
        return sweeps, converged


def fit_svm(train: Dataset, params: SvmParams = SvmParams()) -> SvmModel:
    """Train on a Dataset; see the module docstring for the procedure."""
    n0, n1 = train.class_counts()
    if n0 == 0 or n1 == 0:
        raise ValidationError(
            f"SVM needs both classes in the training set (got {n1} positive, {n0} negative)"
        )
    standardizer = fit_standardizer(train)
    Xs = transform_features(standardizer, train.features)
    y = (2 * train.labels - 1).astype(np.float64)
    gamma = _resolve_gamma(params, Xs)
    K = _kernel_matrix(Xs, Xs, gamma)
    state = _SmoState(K, y, params.C, params.tol)
    sweeps, converged = state.solve(params.max_passes)
    support = np.flatnonzero(state.alpha > 0)
    return SvmModel(
        support_vectors=Xs[support].copy(),
        dual_coef=(state.alpha * y)[support],
        bias=state.b,
        gamma=gamma,
        standardizer=standardizer,
        alphas=tuple(float(a) for a in state.alpha),
        objective_trace=tuple(state.trace),
        sweeps=sweeps,
        converged=converged,
        n_features=train.n_features,
    )


def decision_scores(model: SvmModel, X) -> np.ndarray:
    """Margin f(x) for every row of a raw (unstandardized) matrix."""
    M = np.asarray(X, dtype=np.float64)
    if M.ndim != 2 or M.shape[1] != model.n_features:
        raise ValidationError(
            f"expected (n, {model.n_features}) feature matrix, got shape {M.shape}"
        )
    Ms = transform_features(model.standardizer, M)
    if model.support_vectors.shape[0] == 0:
        return np.full(M.shape[0], model.bias, dtype=np.float64)
    K = _kernel_matrix(Ms, model.support_vectors, model.gamma)
    return K @ model.dual_coef + model.bias


def decision_function(model: SvmModel, x) -> float:
    """Margin for one raw feature vector; classify positive at f >= 0."""
    v = np.asarray(x, dtype=np.float64)
    if v.ndim != 1:
        raise ValidationError("decision_function takes a single feature vector")
    return float(decision_scores(model, v[None, :])[0])
