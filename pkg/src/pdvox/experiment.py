"""Experiment orchestration: one config in, one reproducible report out.

Pipeline order: load -> (optional whole-dataset resample) -> stratified
split -> (optional training-split resample) -> fit the selected models ->
score the untouched test split -> metrics. Every stochastic stage draws
from a named substream of the single master seed, and the report embeds
the resolved config plus a dataset fingerprint, so a report can be
regenerated bit-identically from its own contents.
"""

from __future__ import annotations

import hashlib
import json
import math
from contextlib import contextmanager
from dataclasses import asdict, dataclass, field

from . import __version__
from .dataset import Dataset, load_dataset, stratified_split
from .ensemble import (
    AdaBoostParams,
    BaggingParams,
    GbdtParams,
    ensemble_scores,
    fit_adaboost,
    fit_bagging,
    fit_gbdt,
)
from .errors import ConfigError, PdvoxError
from .metrics import (
    ConfusionMatrix,
    MetricSet,
    RocCurve,
    classification_metrics,
    confusion,
    format_percent,
    roc_auc,
)
from .resample import SmoteConfig, smote
from .svm import SvmParams, decision_scores, fit_svm

#: Canonical model order for "all" runs and comparison tables.
MODEL_NAMES = ("lightgbm-like", "xgboost-like", "adaboost", "bagging", "svm")

FORMATS = ("table", "csv", "structured")

TABLE_HEADER = "Model  Accuracy %  Sensitivity %  Specificity %  AUC %  F1-score %"


@dataclass(frozen=True)
class RunConfig:
    """Everything a run depends on; serialized whole into each report.

    ``seed`` is the master seed: the split, the resampler, and each
    bagging tree consume independent named substreams of it. Per-model
    hyperparameters are override points for programmatic use; the CLI
    always runs the documented defaults.
    """

    data: str
    model: str = "all"
    seed: int = 42
    test_fraction: float = 0.2
    smote: bool = True
    smote_before_split: bool = False
    smote_k: int = 5
    gbdt_leafwise: GbdtParams = field(
        default_factory=lambda: GbdtParams(variant="leaf-wise")
    )
    gbdt_levelwise: GbdtParams = field(
        default_factory=lambda: GbdtParams(variant="level-wise")
    )
    adaboost: AdaBoostParams = field(default_factory=AdaBoostParams)
    bagging: BaggingParams = field(default_factory=BaggingParams)
    svm: SvmParams = field(default_factory=SvmParams)

    def __post_init__(self):
        if self.model != "all" and self.model not in MODEL_NAMES:
            raise ConfigError(
                f"model must be 'all' or one of {MODEL_NAMES}, got {self.model!r}"
            )
        if not 0.0 < self.test_fraction < 1.0:
            raise ConfigError("test_fraction must be in (0, 1)")
        if self.gbdt_leafwise.variant != "leaf-wise":
            raise ConfigError("gbdt_leafwise must use the leaf-wise variant")
        if self.gbdt_levelwise.variant != "level-wise":
            raise ConfigError("gbdt_levelwise must use the level-wise variant")

    def selected_models(self) -> tuple[str, ...]:
        return MODEL_NAMES if self.model == "all" else (self.model,)


@dataclass(frozen=True)
class DatasetFingerprint:
    rows: int
    positives: int
    negatives: int
    sha256: str


@dataclass(frozen=True)
class SplitSummary:
    train_rows: int
    test_rows: int
    train_rows_after_resample: int


@dataclass(frozen=True)
class ModelResult:
    """Test-set evaluation of one fitted model.

    ``threshold`` is the score cut used for the confusion matrix: 0.0 for
    margin-scored models, 0.5 for bagging's vote fraction.
    """

    model: str
    threshold: float
    confusion: ConfusionMatrix
    metrics: MetricSet
    roc: RocCurve


@dataclass(frozen=True)
class ExperimentReport:
    toolkit_version: str
    config: RunConfig
    fingerprint: DatasetFingerprint
    split: SplitSummary
    results: tuple[ModelResult, ...]


@contextmanager
def _stage(name: str):
    """Prefix toolkit errors with the pipeline stage that raised them."""
    try:
        yield
    except PdvoxError as exc:
        raise type(exc)(f"{name}: {exc}") from exc


def _fit_and_score(name: str, cfg: RunConfig, train: Dataset, test: Dataset) -> ModelResult:
    X = test.features
    if name == "lightgbm-like":
        model = fit_gbdt(train, cfg.gbdt_leafwise)
        scores, _ = ensemble_scores(model, X)
        threshold = 0.0
    elif name == "xgboost-like":
        model = fit_gbdt(train, cfg.gbdt_levelwise)
        scores, _ = ensemble_scores(model, X)
        threshold = 0.0
    elif name == "adaboost":
        model = fit_adaboost(train, cfg.adaboost)
        scores, _ = ensemble_scores(model, X)
        threshold = 0.0
    elif name == "bagging":
        model = fit_bagging(train, cfg.bagging, seed=cfg.seed)
        scores, _ = ensemble_scores(model, X)
        threshold = 0.5
    elif name == "svm":
        model = fit_svm(train, cfg.svm)
        scores = decision_scores(model, X)
        threshold = 0.0
    else:  # pragma: no cover - guarded by RunConfig validation
        raise ConfigError(f"unknown model {name!r}")
    cm = confusion(scores, test.labels, threshold)
    curve, auc = roc_auc(scores, test.labels)
    return ModelResult(
        model=name,
        threshold=threshold,
        confusion=cm,
        metrics=classification_metrics(cm).with_auc(auc),
        roc=curve,
    )


def run_experiment(cfg: RunConfig) -> ExperimentReport:
    with _stage("load"):
        data = load_dataset(cfg.data)
    with open(cfg.data, "rb") as handle:
        digest = hashlib.sha256(handle.read()).hexdigest()
    n_neg, n_pos = data.class_counts()
    fingerprint = DatasetFingerprint(
        rows=data.n_records, positives=n_pos, negatives=n_neg, sha256=digest
    )
    if cfg.smote and cfg.smote_before_split:
        with _stage("resample"):
            data = smote(data, SmoteConfig(k_neighbors=cfg.smote_k, seed=cfg.seed))
    with _stage("split"):
        pair = stratified_split(data, cfg.test_fraction, cfg.seed)
    train = pair.train
    if cfg.smote and not cfg.smote_before_split:
        with _stage("resample"):
            train = smote(train, SmoteConfig(k_neighbors=cfg.smote_k, seed=cfg.seed))
    results = []
    for name in cfg.selected_models():
        with _stage(f"fit {name}"):
            results.append(_fit_and_score(name, cfg, train, pair.test))
    return ExperimentReport(
        toolkit_version=__version__,
        config=cfg,
        fingerprint=fingerprint,
        split=SplitSummary(
            train_rows=pair.train.n_records,
            test_rows=pair.test.n_records,
            train_rows_after_resample=train.n_records,
        ),
        results=tuple(results),
    )


def _roc_dict(curve: RocCurve) -> dict:
    return {
        # the (0,0) anchor's +inf threshold is stored as null (strict JSON)
        "thresholds": [None if math.isinf(t) else float(t) for t in curve.thresholds],
        "fpr": [float(v) for v in curve.fpr],
        "tpr": [float(v) for v in curve.tpr],
    }


def report_to_json(report: ExperimentReport) -> str:
    obj = {
        "toolkit_version": report.toolkit_version,
        "config": asdict(report.config),
        "fingerprint": asdict(report.fingerprint),
        "split": asdict(report.split),
        "results": [
            {
                "model": r.model,
                "threshold": r.threshold,
                "confusion": asdict(r.confusion),
                "metrics": asdict(r.metrics),
                "roc": _roc_dict(r.roc),
            }
            for r in report.results
        ],
    }
    return json.dumps(obj, sort_keys=True, indent=2, allow_nan=False) + "\n"


def _config_from_dict(obj: dict) -> RunConfig:
    return RunConfig(
        data=obj["data"],
        model=obj["model"],
        seed=obj["seed"],
        test_fraction=obj["test_fraction"],
        smote=obj["smote"],
        smote_before_split=obj["smote_before_split"],
        smote_k=obj["smote_k"],
        gbdt_leafwise=GbdtParams(**obj["gbdt_leafwise"]),
        gbdt_levelwise=GbdtParams(**obj["gbdt_levelwise"]),
        adaboost=AdaBoostParams(**obj["adaboost"]),
        bagging=BaggingParams(**obj["bagging"]),
        svm=SvmParams(**obj["svm"]),
    )


def parse_report(text: str) -> ExperimentReport:
    """Inverse of :func:`report_to_json` (structured-format round trip)."""
    obj = json.loads(text)
    results = tuple(
        ModelResult(
            model=r["model"],
            threshold=float(r["threshold"]),
            confusion=ConfusionMatrix(**r["confusion"]),
            metrics=MetricSet(**r["metrics"]),
            roc=RocCurve(
                thresholds=[math.inf if t is None else t for t in r["roc"]["thresholds"]],
                fpr=r["roc"]["fpr"],
                tpr=r["roc"]["tpr"],
            ),
        )
        for r in obj["results"]
    )
    return ExperimentReport(
        toolkit_version=obj["toolkit_version"],
        config=_config_from_dict(obj["config"]),
        fingerprint=DatasetFingerprint(**obj["fingerprint"]),
        split=SplitSummary(**obj["split"]),
        results=results,
    )


def _csv_cell(value: float | None) -> str:
    return "" if value is None else repr(float(value))


def emit_comparison(report: ExperimentReport, fmt: str = "table") -> str:
    """Render the per-model comparison; see FORMATS.

    table: fixed header, percentages at 2 decimals, 'n/a' for undefined.
    csv: full-precision ratios, empty cell for undefined.
    structured: the complete JSON report (parse_report inverts it).
    """
    if fmt == "structured":
        return report_to_json(report)
    if fmt == "csv":
        lines = ["model,accuracy,sensitivity,specificity,auc,f1"]
        for r in report.results:
            m = r.metrics
            lines.append(
                ",".join(
                    (
                        r.model,
                        _csv_cell(m.accuracy),
                        _csv_cell(m.sensitivity),
                        _csv_cell(m.specificity),
                        _csv_cell(m.auc),
                        _csv_cell(m.f1),
                    )
                )
            )
        return "\n".join(lines) + "\n"
    if fmt == "table":
        name_width = max(5, *(len(r.model) for r in report.results)) if report.results else 5
        lines = [TABLE_HEADER]
        for r in report.results:
            m = r.metrics
            lines.append(
                f"{r.model:<{name_width}}  "
                f"{format_percent(m.accuracy):>10}  "
                f"{format_percent(m.sensitivity):>13}  "
                f"{format_percent(m.specificity):>13}  "
                f"{format_percent(m.auc):>5}  "
                f"{format_percent(m.f1):>10}"
            )
        return "\n".join(lines) + "\n"
    raise ConfigError(f"format must be one of {FORMATS}, got {fmt!r}")
