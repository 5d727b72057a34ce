"""Vocal-feature table ingestion, validation, splitting, and standardization.

The on-disk format is the 24-column comma-separated layout used by the
sustained-phonation recordings table: a text ``name`` identifier, 22
numeric vocal features (jitter family, shimmer family, noise ratios,
nonlinear dynamics measures), and a binary ``status`` label where 0 marks
a healthy speaker and 1 a speaker with Parkinson's disease.
"""

from __future__ import annotations

import csv
import io
import math
import warnings
from dataclasses import dataclass
from itertools import zip_longest

import numpy as np

from .errors import ConfigError, SchemaError, ValidationError
from .rng import stream

CANONICAL_HEADER: tuple[str, ...] = (
    "name",
    "MDVP:Fo(Hz)",
    "MDVP:Fhi(Hz)",
    "MDVP:Flo(Hz)",
    "MDVP:Jitter(%)",
    "MDVP:Jitter(Abs)",
    "MDVP:RAP",
    "MDVP:PPQ",
    "Jitter:DDP",
    "MDVP:Shimmer",
    "MDVP:Shimmer(dB)",
    "Shimmer:APQ3",
    "Shimmer:APQ5",
    "MDVP:APQ",
    "Shimmer:DDA",
    "NHR",
    "HNR",
    "status",
    "RPDE",
    "DFA",
    "spread1",
    "spread2",
    "D2",
    "PPE",
)

_STATUS_POS = CANONICAL_HEADER.index("status")

#: The 22 numeric predictor names, in on-disk order with ``status`` removed.
CANONICAL_FEATURES: tuple[str, ...] = (
    CANONICAL_HEADER[1:_STATUS_POS] + CANONICAL_HEADER[_STATUS_POS + 1 :]
)


def _frozen(array: np.ndarray) -> np.ndarray:
    out = np.ascontiguousarray(array)
    if out is array:
        out = array.copy()
    out.flags.writeable = False
    return out


@dataclass(frozen=True)
class Dataset:
    """Immutable record table: ids, a features matrix, and binary labels.

    ``features`` is (n, d) float64 and ``labels`` is (n,) int64 with values
    in {0, 1}; both arrays are read-only. ``feature_names`` fixes the
    column order and must match the matrix width.
    """

    ids: tuple[str, ...]
    features: np.ndarray
    labels: np.ndarray
    feature_names: tuple[str, ...]

    def __post_init__(self):
        features = np.asarray(self.features, dtype=np.float64)
        labels = np.asarray(self.labels, dtype=np.int64)
        if features.ndim != 2:
            raise ValidationError("features must be a 2-D matrix")
        n, d = features.shape
        if len(self.ids) != n or labels.shape != (n,):
            raise ValidationError(
                f"inconsistent lengths: {len(self.ids)} ids, "
                f"{n} feature rows, {labels.shape[0] if labels.ndim == 1 else '?'} labels"
            )
        if d != len(self.feature_names):
            raise ValidationError(
                f"feature matrix has {d} columns but {len(self.feature_names)} names"
            )
        if not np.all(np.isfinite(features)):
            raise ValidationError("features must be finite (no NaN/inf)")
        bad = (labels != 0) & (labels != 1)
        if bad.any():
            raise ValidationError(f"labels must be 0 or 1; saw {labels[bad][0]}")
        object.__setattr__(self, "ids", tuple(self.ids))
        object.__setattr__(self, "feature_names", tuple(self.feature_names))
        object.__setattr__(self, "features", _frozen(features))
        object.__setattr__(self, "labels", _frozen(labels))

    @property
    def n_records(self) -> int:
        return self.features.shape[0]

    @property
    def n_features(self) -> int:
        return self.features.shape[1]

    def class_counts(self) -> tuple[int, int]:
        """(negatives, positives) = (# status 0, # status 1)."""
        counts = np.bincount(self.labels, minlength=2)
        return int(counts[0]), int(counts[1])


def subset(data: Dataset, indices) -> Dataset:
    """New Dataset holding ``data``'s rows at ``indices`` (order kept)."""
    idx = np.asarray(indices, dtype=np.int64)
    return Dataset(
        ids=tuple(data.ids[i] for i in idx),
        features=data.features[idx],
        labels=data.labels[idx],
        feature_names=data.feature_names,
    )


def concat(first: Dataset, second: Dataset) -> Dataset:
    """Stack two datasets with identical feature columns."""
    if first.feature_names != second.feature_names:
        raise ValidationError("cannot concatenate datasets with different columns")
    return Dataset(
        ids=first.ids + second.ids,
        features=np.vstack([first.features, second.features]),
        labels=np.concatenate([first.labels, second.labels]),
        feature_names=first.feature_names,
    )


def _parse_status(token: str, line_no: int) -> int:
    try:
        value = float(token)
    except ValueError:
        raise ValidationError(
            f"line {line_no}: status {token!r} is not numeric"
        ) from None
    if value == 0.0:
        return 0
    if value == 1.0:
        return 1
    raise ValidationError(f"line {line_no}: status must be 0 or 1, saw {token!r}")


def load_dataset(path) -> Dataset:
    """Read the canonical 24-column CSV into a validated Dataset.

    The header must match :data:`CANONICAL_HEADER` exactly; the first
    mismatched column name is reported. Feature cells must parse as
    finite numbers and ``status`` must be 0 or 1 (errors carry the
    1-based file line number).
    """
    with open(path, newline="", encoding="utf-8") as handle:
        reader = csv.reader(handle)
        try:
            header = next(reader)
        except StopIteration:
            raise SchemaError(f"{path}: empty file, expected header row") from None
        for pos, (expected, actual) in enumerate(
            zip_longest(CANONICAL_HEADER, header)
        ):
            if expected != actual:
                if expected is None:
                    raise SchemaError(
                        f"{path}: unexpected extra column {actual!r} at position {pos}"
                    )
                raise SchemaError(
                    f"{path}: header mismatch at position {pos}: expected "
                    f"{expected!r}, found {actual!r}"
                )
        ids: list[str] = []
        rows: list[list[float]] = []
        labels: list[int] = []
        for line_no, row in enumerate(reader, start=2):
            if not row:
                continue
            if len(row) != len(CANONICAL_HEADER):
                raise ValidationError(
                    f"line {line_no}: expected {len(CANONICAL_HEADER)} fields, "
                    f"got {len(row)}"
                )
            ids.append(row[0])
            labels.append(_parse_status(row[_STATUS_POS], line_no))
            values = []
            for pos, token in enumerate(row):
                if pos == 0 or pos == _STATUS_POS:
                    continue
                try:
                    value = float(token)
                except ValueError:
                    raise ValidationError(
                        f"line {line_no}: column {CANONICAL_HEADER[pos]!r} value "
                        f"{token!r} is not numeric"
                    ) from None
                if not np.isfinite(value):
                    raise ValidationError(
                        f"line {line_no}: column {CANONICAL_HEADER[pos]!r} value "
                        f"{token!r} is not finite"
                    )
                values.append(value)
            rows.append(values)
    if not rows:
        raise ValidationError(f"{path}: no data rows")
    return Dataset(
        ids=tuple(ids),
        features=np.array(rows, dtype=np.float64),
        labels=np.array(labels, dtype=np.int64),
        feature_names=CANONICAL_FEATURES,
    )


def _format_value(value: float) -> str:
    """Shortest decimal text that parses back to the same float."""
    if value == int(value) and abs(value) < 1e16:
        return str(int(value))
    return repr(float(value))


def write_dataset_csv(data: Dataset, path) -> None:
    """Write ``data`` in the canonical 24-column layout, value-exact."""
    if data.feature_names != CANONICAL_FEATURES:
        raise SchemaError("CSV writer requires the canonical 22-feature schema")
    with open(path, "w", newline="", encoding="utf-8") as handle:
        writer = csv.writer(handle)
        writer.writerow(CANONICAL_HEADER)
        for i in range(data.n_records):
            row = [data.ids[i]]
            row.extend(_format_value(v) for v in data.features[i, :_STATUS_POS - 1])
            row.append(str(int(data.labels[i])))
            row.extend(_format_value(v) for v in data.features[i, _STATUS_POS - 1 :])
            writer.writerow(row)


def correlation_matrix(data: Dataset) -> np.ndarray:
    """Pearson correlation between every pair of feature columns.

    Symmetric with unit diagonal. Constant columns cannot support a
    correlation; their off-diagonal entries are set to 0.0 and a warning
    is issued. Sums use exactly-rounded accumulation (math.fsum), so the
    result is bit-identical under any permutation of the rows.
    """
    if data.n_records < 2:
        raise ValidationError("correlation requires at least 2 records")
    X = data.features
    n, d = X.shape
    constant = np.all(X == X[0], axis=0)
    if constant.any():
        names = [data.feature_names[i] for i in np.flatnonzero(constant)]
        warnings.warn(
            f"constant columns have undefined correlation, reported as 0: {names}",
            stacklevel=2,
        )
    means = np.array([math.fsum(X[:, j].tolist()) / n for j in range(d)])
    centered = X - means
    centered[:, constant] = 0.0
    norms = np.array(
        [
            math.sqrt(math.fsum((centered[:, j] * centered[:, j]).tolist()))
            for j in range(d)
        ]
    )
    corr = np.eye(d, dtype=np.float64)
    for j in range(d):
        for k in range(j + 1, d):
            if norms[j] == 0.0 or norms[k] == 0.0:
                r = 0.0
            else:
                r = math.fsum((centered[:, j] * centered[:, k]).tolist()) / (
                    norms[j] * norms[k]
                )
                r = min(1.0, max(-1.0, r))
            corr[j, k] = r
            corr[k, j] = r
    return corr


def correlation_csv_text(data: Dataset) -> str:
    """Correlation matrix as CSV text with feature-name header row/column."""
    corr = correlation_matrix(data)
    buffer = io.StringIO()
    writer = csv.writer(buffer, lineterminator="\n")
    writer.writerow(("", *data.feature_names))
    for name, row in zip(data.feature_names, corr):
        writer.writerow((name, *(repr(float(v)) for v in row)))
    return buffer.getvalue()


def write_correlation_csv(data: Dataset, path) -> None:
    """Export the correlation matrix with feature-name header row/column."""
    with open(path, "w", newline="", encoding="utf-8") as handle:
        handle.write(correlation_csv_text(data))


def _round_half_up(x: float) -> int:
    return int(np.floor(x + 0.5))


@dataclass(frozen=True)
class SplitPair:
    """A stratified train/test partition plus the settings that made it."""

    train: Dataset
    test: Dataset
    seed: int
    test_fraction: float


def stratified_split(data: Dataset, test_fraction: float, seed: int) -> SplitPair:
    """Seeded per-class hold-out split.

    Each class is shuffled independently with the toolkit PRNG and its
    first ``round_half_up(class_count * test_fraction)`` records go to the
    test side. Surviving indices are re-sorted so both partitions keep the
    source row order.
    """
    if not 0.0 < test_fraction < 1.0:
        raise ConfigError(f"test_fraction must be in (0,1), got {test_fraction}")
    gen = stream(seed, "split")
    test_parts: list[np.ndarray] = []
    for cls in (0, 1):
        members = np.flatnonzero(data.labels == cls)
        if members.size == 0:
            raise ValidationError(
                f"stratified split requires both classes; class {cls} is empty"
            )
        order = list(range(members.size))
        gen.shuffle(order)
        n_test = _round_half_up(members.size * test_fraction)
        n_test = min(max(n_test, 0), members.size)
        test_parts.append(members[order[:n_test]])
    test_idx = np.sort(np.concatenate(test_parts))
    mask = np.ones(data.n_records, dtype=bool)
    mask[test_idx] = False
    train_idx = np.flatnonzero(mask)
    return SplitPair(
        train=subset(data, train_idx),
        test=subset(data, test_idx),
        seed=seed,
        test_fraction=test_fraction,
    )


@dataclass(frozen=True)
class Standardizer:
    """Per-column z-score transform fitted on training rows only.

    Constant training columns are flagged and map to all-zero output.
    ``stds`` holds the sample (n-1 denominator) standard deviation, with
    1.0 stored in flagged slots so the transform stays division-safe.
    """

    means: np.ndarray
    stds: np.ndarray
    constant: np.ndarray

    def __post_init__(self):
        object.__setattr__(self, "means", _frozen(np.asarray(self.means, float)))
        object.__setattr__(self, "stds", _frozen(np.asarray(self.stds, float)))
        object.__setattr__(self, "constant", _frozen(np.asarray(self.constant, bool)))


def fit_standardizer(train: Dataset) -> Standardizer:
    if train.n_records == 0:
        raise ValidationError("cannot fit standardizer on an empty dataset")
    X = train.features
    means = X.mean(axis=0)
    constant = np.all(X == X[0], axis=0)
    if train.n_records == 1:
        constant = np.ones(X.shape[1], dtype=bool)
    if constant.any():
        names = [train.feature_names[i] for i in np.flatnonzero(constant)]
        warnings.warn(f"constant columns standardize to zero: {names}", stacklevel=2)
    stds = np.ones(X.shape[1], dtype=np.float64)
    live = ~constant
    if live.any():
        stds[live] = X[:, live].std(axis=0, ddof=1)
    return Standardizer(means=means, stds=stds, constant=constant)


def transform_features(s: Standardizer, X: np.ndarray) -> np.ndarray:
    """Apply the z-score transform to a raw feature matrix."""
    X = np.asarray(X, dtype=np.float64)
    out = (X - s.means) / s.stds
    out[..., s.constant] = 0.0
    return out


def apply_standardizer(s: Standardizer, data: Dataset) -> Dataset:
    if data.n_features != s.means.shape[0]:
        raise ValidationError(
            f"standardizer fitted on {s.means.shape[0]} columns, "
            f"data has {data.n_features}"
        )
    return Dataset(
        ids=data.ids,
        features=transform_features(s, data.features),
        labels=data.labels,
        feature_names=data.feature_names,
    )
