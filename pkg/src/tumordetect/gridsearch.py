"""Exhaustive SVM hyperparameter search over kernel x C x gamma x degree."""
from __future__ import annotations

import csv
import io
import itertools
from dataclasses import dataclass, field
from typing import Sequence

from .classifiers import KernelSpec
from .dataset import Dataset
from .evaluation import (DEFAULT_K_PCA, DEFAULT_RUNS, DEFAULT_SEED, EvalReport,
                         evaluate_prepared, prepare_runs, _fmt)

GRID_KERNELS = ("linear", "sigmoid", "rbf", "polynomial")
GRID_C = (0.1, 1.0, 2.0, 3.0, 4.0)
GRID_GAMMA = ("auto", "scale")
GRID_DEGREE = (2, 3, 4, 5)

GRID_CSV_HEADER = ["kernel", "C", "gamma_mode", "degree", "model_accuracy_pct",
                   "pct_sick", "pct_not_sick", "pct_test", "status"]


def enumerate_grid() -> list[KernelSpec]:
    """All 160 cells, kernel-major, degree varying fastest (kept even where inert)."""
    return [KernelSpec(kind=k, C=c, gamma_mode=g, degree=d)
            for k, c, g, d in itertools.product(GRID_KERNELS, GRID_C, GRID_GAMMA, GRID_DEGREE)]


@dataclass
class GridResult:
    index: int
    spec: KernelSpec
    report: EvalReport

    @property
    def rank_key(self) -> tuple:
        pct_test = self.report.pct_test if self.report.pct_test is not None else -1.0
        return (-self.report.model_accuracy_pct, -pct_test, self.index)


@dataclass
class GridFailure:
    index: int
    spec: KernelSpec
    error: str


@dataclass
class GridSearchResult:
    results: list[GridResult]            # ranked, best first
    failures: list[GridFailure] = field(default_factory=list)

    @property
    def best(self) -> GridResult | None:
        return self.results[0] if self.results else None

    def to_csv(self) -> str:
        """One row per cell in enumeration order, with status ``ok`` or the error."""
        cells: list = sorted(self.results + self.failures, key=lambda c: c.index)
        buf = io.StringIO()
        w = csv.writer(buf, lineterminator="\n")
        w.writerow(GRID_CSV_HEADER)
        for c in cells:
            s = c.spec
            head = [s.kind, f"{s.C:g}", s.gamma_mode, str(s.degree)]
            if isinstance(c, GridResult):
                r = c.report
                w.writerow(head + [_fmt(r.model_accuracy_pct), _fmt(r.pct_sick),
                                   _fmt(r.pct_not_sick), _fmt(r.pct_test), "ok"])
            else:
                w.writerow(head + ["", "", "", "", f"failed: {c.error}"])
        return buf.getvalue()

    def best_summary(self) -> str:
        b = self.best
        if b is None:
            return "no grid cell completed"
        s, r = b.spec, b.report
        head = ["Kernel", "C", "Gamma", "Degree", "Accuracy (%)", "P. Test (%)"]
        row = [s.kind, f"{s.C:g}", s.gamma_mode, str(s.degree),
               _fmt(r.model_accuracy_pct, 2), _fmt(r.pct_test, 2) or "-"]
        widths = [max(len(a), len(b_)) for a, b_ in zip(head, row)]
        return "\n".join(" | ".join(c.rjust(w) for c, w in zip(line, widths)) for line in (head, row))


def rank_results(results: Sequence[GridResult]) -> list[GridResult]:
    """Accuracy descending, then external-image rate descending, then grid order."""
    return sorted(results, key=lambda r: r.rank_key)


def grid_search(ds: Dataset, runs: int = DEFAULT_RUNS, k_pca: int = DEFAULT_K_PCA,
                external_image=None, base_seed: int = DEFAULT_SEED,
                grid: Sequence[KernelSpec] | None = None, train_fraction: float = 0.8,
                side: int | None = None, progress=None) -> GridSearchResult:
    """Evaluate every cell on the same seeded splits and rank the outcomes.

    The splits and PCA projections are computed once and shared by all cells,
    so any two cells are compared on identical data. A cell that raises is
    recorded as a failure and left out of the ranking.
    """
    grid = enumerate_grid() if grid is None else list(grid)
    prepared = prepare_runs(ds, k_pca, runs, external_image, base_seed, train_fraction, side)
    results, failures = [], []
    for i, spec in enumerate(grid):
        try:
            report = evaluate_prepared(prepared, "svm", {"spec": spec})
            results.append(GridResult(i, spec, report))
        except Exception as exc:  # one bad cell must not end the search
            failures.append(GridFailure(i, spec, str(exc)))
        if progress is not None:
            progress(i, spec, results[-1] if results and results[-1].index == i else failures[-1])
    return GridSearchResult(rank_results(results), failures)
