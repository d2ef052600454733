"""Repeated split / PCA / fit / score cycles and the four reported metrics.

Each run ``r`` uses seed ``base_seed + r`` for its shuffle split; PCA is fit
on the training rows only and reused for the test rows and the external
image. Averages are plain means over runs.
"""
from __future__ import annotations

import csv
import hashlib
import io
import math
import os
from dataclasses import dataclass, field
from typing import Any, Callable, Sequence

import numpy as np

from .classifiers import KernelSpec, adaboost_fit, forest_fit, svm_fit, tree_fit
from .dataset import Dataset, GrayImage, image_to_features, load_image
from .errors import EvaluationError, UndefinedMetricError
from .pca import PcaModel, pca_fit, pca_transform

ALGORITHMS = ("tree", "forest", "adaboost", "svm")
ALGORITHM_NAMES = {"tree": "Decision Tree", "forest": "Random Forest",
                   "adaboost": "Adaboost", "svm": "SVM"}
# best SVM cell reported for the MRI data; used when no kernel is given
DEFAULT_SVM = KernelSpec(kind="rbf", C=4.0, gamma_mode="scale", degree=2)
DEFAULT_K_PCA = 60
DEFAULT_RUNS = 10
DEFAULT_SEED = 42


@dataclass(frozen=True)
class SplitSpec:
    train_fraction: float = 0.8
    seed: int = 0

    def __post_init__(self):
        if not 0.0 < self.train_fraction < 1.0:
            raise ValueError("train_fraction must lie strictly between 0 and 1")


def split_indices(n: int, spec: SplitSpec) -> tuple[np.ndarray, np.ndarray]:
    n_train = int(math.floor(spec.train_fraction * n))
    if n < 2 or n_train < 1 or n_train >= n:
        raise ValueError(f"split of {n} rows at fraction {spec.train_fraction} leaves an empty side")
    perm = np.random.default_rng(spec.seed).permutation(n)
    return perm[:n_train], perm[n_train:]


def train_test_split(ds: Dataset, spec: SplitSpec) -> tuple[Dataset, Dataset]:
    """Seeded, unstratified shuffle split: floor(fraction * n) training rows."""
    tr, te = split_indices(ds.n, spec)
    return ds.subset(tr), ds.subset(te)


def _check_pair(preds, truth) -> tuple[np.ndarray, np.ndarray]:
    p = np.asarray(preds).ravel()
    t = np.asarray(truth).ravel()
    if p.size != t.size:
        raise ValueError(f"{p.size} predictions for {t.size} labels")
    if t.size == 0:
        raise ValueError("cannot score an empty prediction set")
    return p, t


def accuracy(preds, truth) -> float:
    p, t = _check_pair(preds, truth)
    return 100.0 * np.count_nonzero(p == t) / t.size


def class_recall(preds, truth, cls: int) -> float:
    """Percentage of rows with ``truth == cls`` that were predicted as ``cls``."""
    p, t = _check_pair(preds, truth)
    mask = t == cls
    if not mask.any():
        raise UndefinedMetricError(f"recall of class {cls} is undefined: no such rows in the truth")
    return 100.0 * np.count_nonzero(p[mask] == cls) / np.count_nonzero(mask)


# ----------------------------------------------------------------------------
# algorithm registry
# ----------------------------------------------------------------------------

Fitter = Callable[[np.ndarray, np.ndarray, int], Any]


def make_fitter(algorithm: str, params: dict | None = None) -> Fitter:
    """Return ``fit(X, y, seed) -> model`` for one of :data:`ALGORITHMS`.

    ``params`` overrides the defaults: tree ``max_depth``/``min_samples_split``;
    forest ``n_trees``/``max_depth``/``features_per_split``; adaboost
    ``rounds``; svm ``kernel``/``C``/``gamma``/``degree`` (or ``spec``).
    """
    params = dict(params or {})
    if algorithm == "tree":
        kw = {"max_depth": params.pop("max_depth", None),
              "min_samples_split": int(params.pop("min_samples_split", 2))}
        fit = lambda X, y, seed: tree_fit(X, y, **kw)  # noqa: E731
    elif algorithm == "forest":
        kw = {"n_trees": int(params.pop("n_trees", 100)),
              "max_depth": params.pop("max_depth", None),
              "features_per_split": params.pop("features_per_split", None)}
        fit = lambda X, y, seed: forest_fit(X, y, seed=seed, **kw)  # noqa: E731
    elif algorithm == "adaboost":
        rounds = int(params.pop("rounds", 50))
        fit = lambda X, y, seed: adaboost_fit(X, y, rounds=rounds)  # noqa: E731
    elif algorithm == "svm":
        spec = params.pop("spec", None)
        if spec is None:
            spec = KernelSpec(kind=params.pop("kernel", DEFAULT_SVM.kind),
                              C=float(params.pop("C", DEFAULT_SVM.C)),
                              gamma_mode=params.pop("gamma", DEFAULT_SVM.gamma_mode),
                              degree=int(params.pop("degree", DEFAULT_SVM.degree)))
        tol = float(params.pop("tol", 1e-3))
        fit = lambda X, y, seed: svm_fit(X, y, spec, tol=tol)  # noqa: E731
    else:
        raise ValueError(f"unknown algorithm {algorithm!r}; choose from {', '.join(ALGORITHMS)}")
    if params:
        raise ValueError(f"unused parameters for {algorithm}: {sorted(params)}")
    return fit


# ----------------------------------------------------------------------------
# repeated evaluation
# ----------------------------------------------------------------------------

@dataclass(frozen=True)
class PreparedRun:
    """One run's split, already projected through its training-only PCA."""

    run: int
    seed: int
    train_idx: np.ndarray
    test_idx: np.ndarray
    pca: PcaModel
    Z_train: np.ndarray
    y_train: np.ndarray
    Z_test: np.ndarray
    y_test: np.ndarray
    z_external: np.ndarray | None

    @property
    def split_hash(self) -> str:
        return hashlib.sha1(np.sort(self.test_idx).astype(np.int64).tobytes()).hexdigest()[:16]


@dataclass
class RunRecord:
    run: int
    seed: int
    split_hash: str
    n_test: int
    n_test_pos: int
    n_test_neg: int
    accuracy: float
    recall_sick: float | None
    recall_not_sick: float | None
    external_pred: int | None = None

    @property
    def flagged(self) -> bool:
        """True when a class was missing from this run's test split."""
        return self.recall_sick is None or self.recall_not_sick is None


@dataclass
class EvalReport:
    algorithm: str
    model_accuracy_pct: float
    pct_sick: float | None
    pct_not_sick: float | None
    pct_test: float | None
    runs: int
    records: list[RunRecord] = field(default_factory=list)

    @property
    def flagged_runs(self) -> list[int]:
        return [r.run for r in self.records if r.flagged]

    def table(self) -> str:
        return format_table([self])

    def csv_row(self) -> list[str]:
        return [self.algorithm, _fmt(self.model_accuracy_pct), _fmt(self.pct_sick),
                _fmt(self.pct_not_sick), _fmt(self.pct_test), str(self.runs)]


REPORT_CSV_HEADER = ["algorithm", "model_accuracy_pct", "pct_sick", "pct_not_sick", "pct_test", "runs"]


def _fmt(x: float | None, digits: int = 4) -> str:
    return "" if x is None else f"{x:.{digits}f}"


def format_table(reports: Sequence[EvalReport]) -> str:
    """Aligned text table with the four metric columns."""
    head = ["Algorithm", "Model Accuracy (%)", "P. sick (%)", "P. not sick (%)", "P. Test (%)"]
    rows = [[ALGORITHM_NAMES.get(r.algorithm, r.algorithm), _fmt(r.model_accuracy_pct, 2),
             _fmt(r.pct_sick, 2) or "-", _fmt(r.pct_not_sick, 2) or "-", _fmt(r.pct_test, 2) or "-"]
            for r in reports]
    widths = [max(len(c[i]) for c in [head] + rows) for i in range(len(head))]
    lines = [" | ".join(c.ljust(w) if i == 0 else c.rjust(w) for i, (c, w) in enumerate(zip(row, widths)))
             for row in [head] + rows]
    lines.insert(1, "-+-".join("-" * w for w in widths))
    return "\n".join(lines)


def reports_to_csv(reports: Sequence[EvalReport]) -> str:
    buf = io.StringIO()
    w = csv.writer(buf, lineterminator="\n")
    w.writerow(REPORT_CSV_HEADER)
    for r in reports:
        w.writerow(r.csv_row())
    return buf.getvalue()


def external_features(image, side: int | None, d: int) -> np.ndarray:
    """Feature row for the external image: a path, a GrayImage, or a ready feature vector."""
    if isinstance(image, np.ndarray) and image.ndim == 1:
        if image.size != d:
            raise ValueError(f"external feature vector has length {image.size}, expected {d}")
        return image.astype(np.float64)
    if side is None:
        side = math.isqrt(d)
        if side * side != d:
            raise ValueError(f"cannot infer a square image side from d={d}; pass side explicitly")
    img = image if isinstance(image, GrayImage) else load_image(image)
    return image_to_features(img, side)


def prepare_runs(ds: Dataset, k_pca: int = DEFAULT_K_PCA, runs: int = DEFAULT_RUNS,
                 external_image=None, base_seed: int = DEFAULT_SEED,
                 train_fraction: float = 0.8, side: int | None = None) -> list[PreparedRun]:
    """Split and PCA-project each run once so several classifiers can share the work."""
    if runs < 1:
        raise ValueError("runs must be at least 1")
    ext = None if external_image is None else external_features(external_image, side, ds.d)
    prepared = []
    for r in range(runs):
        seed = base_seed + r
        try:
            tr, te = split_indices(ds.n, SplitSpec(train_fraction, seed))
            pca = pca_fit(ds.features[tr], k_pca)
            prepared.append(PreparedRun(
                run=r, seed=seed, train_idx=tr, test_idx=te, pca=pca,
                Z_train=pca_transform(pca, ds.features[tr]), y_train=ds.labels[tr],
                Z_test=pca_transform(pca, ds.features[te]), y_test=ds.labels[te],
                z_external=None if ext is None else pca_transform(pca, ext)))
        except Exception as exc:
            raise EvaluationError(r, exc) from exc
    return prepared


def _score_run(p: PreparedRun, model) -> RunRecord:
    preds = np.asarray(model.predict(p.Z_test)).ravel()
    recalls = []
    for cls in (1, 0):
        try:
            recalls.append(class_recall(preds, p.y_test, cls))
        except UndefinedMetricError:
            recalls.append(None)
    ext = None
    if p.z_external is not None:
        ext = int(np.asarray(model.predict(p.z_external[None, :])).ravel()[0])
    n_pos = int(p.y_test.sum())
    return RunRecord(run=p.run, seed=p.seed, split_hash=p.split_hash, n_test=p.y_test.size,
                     n_test_pos=n_pos, n_test_neg=p.y_test.size - n_pos,
                     accuracy=accuracy(preds, p.y_test), recall_sick=recalls[0],
                     recall_not_sick=recalls[1], external_pred=ext)


def aggregate(algorithm: str, records: Sequence[RunRecord]) -> EvalReport:
    def mean(vals):
        vals = [v for v in vals if v is not None]
        return float(np.mean(vals)) if vals else None

    runs = len(records)
    ext = [r.external_pred for r in records]
    pct_test = None if any(e is None for e in ext) else 100.0 * sum(ext) / runs
    return EvalReport(algorithm=algorithm,
                      model_accuracy_pct=float(np.mean([r.accuracy for r in records])),
                      pct_sick=mean(r.recall_sick for r in records),
                      pct_not_sick=mean(r.recall_not_sick for r in records),
                      pct_test=pct_test, runs=runs, records=list(records))


def evaluate_prepared(prepared: Sequence[PreparedRun], algorithm: str,
                      params: dict | None = None, fitter: Fitter | None = None) -> EvalReport:
    fit = fitter or make_fitter(algorithm, params)
    records = []
    for p in prepared:
        try:
            model = fit(p.Z_train, p.y_train, p.seed)
            records.append(_score_run(p, model))
        except Exception as exc:
            raise EvaluationError(p.run, exc) from exc
    return aggregate(algorithm, records)


def repeated_evaluate(ds: Dataset, algorithm: str, params: dict | None = None,
                      k_pca: int = DEFAULT_K_PCA, runs: int = DEFAULT_RUNS,
                      external_image: str | os.PathLike | GrayImage | np.ndarray | None = None,
                      base_seed: int = DEFAULT_SEED, train_fraction: float = 0.8,
                      side: int | None = None) -> EvalReport:
    """Average accuracy, both class recalls and the external-image hit rate over ``runs``."""
    prepared = prepare_runs(ds, k_pca, runs, external_image, base_seed, train_fraction, side)
    return evaluate_prepared(prepared, algorithm, params)
