"""Synthetic minority oversampling for class balance.

New minority rows are interpolations ``x + u * (x_nn - x)`` between a
minority row and one of its k nearest minority neighbours (Euclidean
distance on raw feature values), with u drawn uniformly from [0, 1].
Enough rows are synthesized to equalize the class counts exactly.
"""

from __future__ import annotations

from dataclasses import dataclass

import numpy as np

from .dataset import Dataset
from .errors import ValidationError
from .rng import stream


@dataclass(frozen=True)
class SmoteConfig:
    """k_neighbors is clamped to minority_count - 1 at fit time."""

    k_neighbors: int = 5
    seed: int = 0

    def __post_init__(self):
        if self.k_neighbors < 1:
            raise ValidationError("k_neighbors must be >= 1")


def _minority_neighbor_table(minority: np.ndarray, k: int) -> np.ndarray:
    """(m, k) indices of each minority row's k nearest minority rows.

    Distance ties are broken toward the lower row index (stable sort);
    a row is never its own neighbour.
    """
    diffs = minority[:, None, :] - minority[None, :, :]
    sq_dist = np.einsum("ijk,ijk->ij", diffs, diffs)
    np.fill_diagonal(sq_dist, np.inf)
    order = np.argsort(sq_dist, axis=1, kind="stable")
    return order[:, :k]


def smote(train: Dataset, cfg: SmoteConfig) -> Dataset:
    """Balanced copy of ``train``: all original rows plus synthetic ones.

    Synthetic rows carry the minority label and fresh ids prefixed
    ``synth-``. Output is deterministic for a given (train, cfg).
    """
    n0, n1 = train.class_counts()
    if n0 == 0 or n1 == 0:
        raise ValidationError("SMOTE needs both classes present")
    if n0 == n1:
        return train
    minority_label = 0 if n0 < n1 else 1
    minority_count = min(n0, n1)
    if minority_count < 2:
        raise ValidationError(
            "cannot interpolate: minority class has fewer than 2 records"
        )
    n_synth = abs(n1 - n0)
    k = min(cfg.k_neighbors, minority_count - 1)
    minority_rows = np.flatnonzero(train.labels == minority_label)
    minority = train.features[minority_rows]
    neighbors = _minority_neighbor_table(minority, k)
    gen = stream(cfg.seed, "smote")
    synth = np.empty((n_synth, train.n_features), dtype=np.float64)
    for i in range(n_synth):
        base = gen.below(minority_count)
        nn = neighbors[base, gen.below(k)]
        u = gen.random()
        synth[i] = minority[base] + u * (minority[nn] - minority[base])
    return Dataset(
        ids=train.ids + tuple(f"synth-{i}" for i in range(n_synth)),
        features=np.vstack([train.features, synth]),
        labels=np.concatenate(
            [train.labels, np.full(n_synth, minority_label, dtype=np.int64)]
        ),
        feature_names=train.feature_names,
    )
