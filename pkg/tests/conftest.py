"""Shared fixtures and independent oracles for the test suite.

The oracles here deliberately reimplement behavior in the most naive way
possible (pairwise rank counting, recursive path walking, projected
gradient on the SVM dual) so the production implementations are checked
against genuinely different computations.
"""

from __future__ import annotations

import math
import os
from pathlib import Path

import numpy as np
import pytest

from pdvox.dataset import Dataset

REPO_ROOT = Path(__file__).resolve().parent.parent
SYNTHETIC_CSV = REPO_ROOT / "data" / "synthetic_vocal.csv"
UCI_CSV = REPO_ROOT / "data" / "parkinsons.data"


def resolve_data_path() -> Path:
    """Evaluation data: PDVOX_DATA, else the original recordings file if
    fetched into data/, else the committed synthetic stand-in."""
    env = os.environ.get("PDVOX_DATA")
    if env and Path(env).exists():
        return Path(env)
    if UCI_CSV.exists():
        return UCI_CSV
    return SYNTHETIC_CSV


def resolve_uci_path() -> Path | None:
    """The original recordings file only, or None if not fetched."""
    env = os.environ.get("PDVOX_DATA")
    if env and Path(env).exists():
        return Path(env)
    if UCI_CSV.exists():
        return UCI_CSV
    return None


@pytest.fixture(scope="session")
def data_path() -> Path:
    path = resolve_data_path()
    if not path.exists():
        pytest.skip(f"no evaluation data file at {path}")
    return path


@pytest.fixture(scope="session")
def uci_path() -> Path:
    path = resolve_uci_path()
    if path is None:
        pytest.skip(
            "original recordings file not present (run scripts/fetch_uci_parkinsons.py); "
            "file-specific expectations are skipped"
        )
    return path


def make_dataset(X, y, names=None) -> Dataset:
    X = np.asarray(X, dtype=np.float64)
    if names is None:
        names = tuple(f"f{i}" for i in range(X.shape[1]))
    return Dataset(
        ids=tuple(f"r{i}" for i in range(X.shape[0])),
        features=X,
        labels=np.asarray(y, dtype=np.int64),
        feature_names=names,
    )


# ---------------------------------------------------------------- oracles


def brute_force_auc(scores, labels) -> float:
    """Pairwise rank statistic: P(s+ > s-) + 0.5 P(s+ = s-)."""
    scores = np.asarray(scores, dtype=np.float64)
    labels = np.asarray(labels)
    pos = scores[labels == 1]
    neg = scores[labels == 0]
    total = 0.0
    for p in pos:
        for q in neg:
            if p > q:
                total += 1.0
            elif p == q:
                total += 0.5
    return total / (len(pos) * len(neg))


def walk_tree_naive(tree, x) -> float:
    """Recursive single-row router, independent of predict_tree/predict_many."""

    def descend(node: int) -> float:
        feat = int(tree.feature[node])
        if feat < 0:
            return float(tree.value[node])
        if float(x[feat]) <= float(tree.threshold[node]):
            return descend(int(tree.left[node]))
        return descend(int(tree.right[node]))

    return descend(0)


def naive_gini_stump(X, y, w):
    """Exhaustive best single split by weighted Gini decrease.

    Thresholds are midpoints between adjacent unique values per feature;
    ties resolve to the lowest feature index, then lowest threshold —
    mirroring the production tie rule through an unrelated code path.
    Returns (gain, feature, threshold) or None. Gains use exact
    accumulation over row subsets.
    """
    X = np.asarray(X, dtype=np.float64)
    y = np.asarray(y, dtype=np.float64)
    w = np.asarray(w, dtype=np.float64)

    def weighted_impurity(mask) -> float:
        total = math.fsum(w[mask].tolist())
        if total == 0.0:
            return 0.0
        w1 = math.fsum((w[mask] * y[mask]).tolist())
        return 2.0 * w1 * (total - w1) / total

    parent = weighted_impurity(np.ones(len(y), dtype=bool))
    best = None
    for f in range(X.shape[1]):
        uniq = np.unique(X[:, f])
        for a, b in zip(uniq[:-1], uniq[1:]):
            threshold = (a + b) / 2.0
            left = X[:, f] <= threshold
            if math.fsum(w[left].tolist()) == 0.0 or math.fsum(w[~left].tolist()) == 0.0:
                continue
            gain = parent - weighted_impurity(left) - weighted_impurity(~left)
            if best is None or gain > best[0] + 1e-15:
                best = (gain, f, threshold)
    if best is None or best[0] <= 1e-12:
        return None
    return best


def project_box_hyperplane(z, y, C) -> np.ndarray:
    """Euclidean projection of z onto {0 <= a <= C, sum(a*y) = 0}.

    The projection is clip(z - nu*y, 0, C) for the nu that zeroes the
    constraint; that inner product is monotone in nu, so bisection finds it.
    """
    z = np.asarray(z, dtype=np.float64)
    y = np.asarray(y, dtype=np.float64)

    def constraint(nu: float) -> float:
        return float(np.sum(np.clip(z - nu * y, 0.0, C) * y))

    span = float(np.max(np.abs(z))) + C + 1.0
    lo, hi = -span, span
    # constraint is non-increasing in nu
    if constraint(lo) < 0 or constraint(hi) > 0:  # degenerate scaling; widen
        lo *= 1e3
        hi *= 1e3
    for _ in range(80):
        mid = 0.5 * (lo + hi)
        if constraint(mid) > 0:
            lo = mid
        else:
            hi = mid
    nu = 0.5 * (lo + hi)
    return np.clip(z - nu * y, 0.0, C)


def projected_gradient_svm(K, y, C, iters=4000) -> tuple[np.ndarray, float]:
    """Reference dual maximizer: projected gradient ascent on
    W(a) = sum(a) - 0.5 (a*y)' K (a*y). Returns (alpha, W)."""
    K = np.asarray(K, dtype=np.float64)
    y = np.asarray(y, dtype=np.float64)
    n = len(y)
    alpha = project_box_hyperplane(np.full(n, 0.5 * C), y, C)
    eig_bound = float(np.max(np.sum(np.abs(K), axis=1)))  # Gershgorin
    step = 1.0 / max(eig_bound, 1e-9)
    for _ in range(iters):
        grad = 1.0 - y * (K @ (alpha * y))
        alpha = project_box_hyperplane(alpha + step * grad, y, C)
    v = alpha * y
    objective = float(np.sum(alpha) - 0.5 * v @ K @ v)
    return alpha, objective


def dual_objective(K, y, alpha) -> float:
    v = np.asarray(alpha, dtype=np.float64) * np.asarray(y, dtype=np.float64)
    return float(np.sum(alpha) - 0.5 * v @ K @ v)


def recover_interpolation_u(base, neighbor, synth, tol=1e-9):
    """The single u with synth = base + u*(neighbor - base), or None.

    Coordinates where neighbor == base are consistent with any u; the
    others must agree on one u in [0, 1] within tol.
    """
    base = np.asarray(base, dtype=np.float64)
    neighbor = np.asarray(neighbor, dtype=np.float64)
    synth = np.asarray(synth, dtype=np.float64)
    span = neighbor - base
    live = np.abs(span) > 1e-12 * (1.0 + np.abs(base) + np.abs(neighbor))
    if not live.any():
        return 0.0 if np.allclose(synth, base, atol=tol) else None
    us = (synth[live] - base[live]) / span[live]
    u = float(us[0])
    if np.max(np.abs(us - u)) > tol:
        return None
    if u < -tol or u > 1.0 + tol:
        return None
    # the dead coordinates must still match the base point
    dead = ~live
    if dead.any() and np.max(np.abs(synth[dead] - base[dead])) > tol * (
        1.0 + np.max(np.abs(base))
    ):
        return None
    return u


# ------------------------------------------------- acceptance summary hook

_ACCEPTANCE_RESULTS: dict[str, str] = {}


@pytest.hookimpl(hookwrapper=True)
def pytest_runtest_makereport(item, call):
    outcome = yield
    report = outcome.get_result()
    if item.get_closest_marker("acceptance") is None:
        return
    if report.when == "call" or (report.when == "setup" and report.outcome != "passed"):
        _ACCEPTANCE_RESULTS[item.nodeid] = report.outcome.upper()


def pytest_terminal_summary(terminalreporter):
    if not _ACCEPTANCE_RESULTS:
        return
    terminalreporter.write_sep("=", "acceptance criteria")
    for nodeid, outcome in sorted(_ACCEPTANCE_RESULTS.items()):
        label = {"PASSED": "PASS", "FAILED": "FAIL", "SKIPPED": "SKIP"}.get(
            outcome, outcome
        )
        terminalreporter.write_line(f"{label}  {nodeid}")
