"""Command-line entry point: preprocess, eval, grid, predict."""
from __future__ import annotations

import argparse
import logging
import sys
from dataclasses import dataclass, field
from pathlib import Path

import numpy as np

from . import __version__
from .classifiers import load_model, save_model
from .dataset import DEFAULT_SIDE, build_dataset, load_dataset, preprocess_file, save_dataset
from .errors import TumorDetectError
from .evaluation import (ALGORITHMS, DEFAULT_K_PCA, DEFAULT_RUNS, DEFAULT_SEED,
                         format_table, make_fitter, repeated_evaluate, reports_to_csv)
from .gridsearch import grid_search
from .pca import pca_fit, pca_transform

log = logging.getLogger("tumordetect")


@dataclass
class RunConfig:
    subcommand: str
    datasets: list[Path] = field(default_factory=list)
    algorithm: str | None = None
    params: dict = field(default_factory=dict)
    k_pca: int = DEFAULT_K_PCA
    runs: int = DEFAULT_RUNS
    seed: int = DEFAULT_SEED
    out: Path | None = None
    test_image: Path | None = None

    @classmethod
    def from_args(cls, args: argparse.Namespace) -> "RunConfig":
        datasets = [getattr(args, a) for a in ("dataset", "tumor_dir", "healthy_dir")
                    if getattr(args, a, None) is not None]
        return cls(subcommand=args.subcommand, datasets=datasets,
                   algorithm=getattr(args, "algo", None),
                   params=parse_params(getattr(args, "param", None)),
                   k_pca=getattr(args, "k_pca", DEFAULT_K_PCA),
                   runs=getattr(args, "runs", DEFAULT_RUNS),
                   seed=getattr(args, "seed", DEFAULT_SEED),
                   out=getattr(args, "out", None),
                   test_image=getattr(args, "test_image", None) or getattr(args, "image", None))


class UsageError(Exception):
    pass


def _parse_value(text: str):
    if text.lower() == "none":
        return None
    for cast in (int, float):
        try:
            return cast(text)
        except ValueError:
            pass
    return text


def parse_params(pairs: list[str] | None) -> dict:
    params = {}
    for pair in pairs or []:
        key, sep, value = pair.partition("=")
        if not sep or not key:
            raise UsageError(f"--param expects KEY=VALUE, got {pair!r}")
        params[key] = _parse_value(value)
    return params


def _require_file(path: Path | None, what: str) -> None:
    if path is not None and not path.is_file():
        raise UsageError(f"{what} not found: {path}")


def build_parser() -> argparse.ArgumentParser:
    p = argparse.ArgumentParser(prog="tumordetect",
                                description="Brain-MRI tumor classification pipeline.")
    p.add_argument("--version", action="version", version=__version__)
    p.add_argument("-v", "--verbose", action="store_true", help="log progress to stderr")
    sub = p.add_subparsers(dest="subcommand", required=True)

    pp = sub.add_parser("preprocess", help="turn two image folders into a dataset text file")
    pp.add_argument("tumor_dir", type=Path)
    pp.add_argument("healthy_dir", type=Path)
    pp.add_argument("out", type=Path)
    pp.add_argument("--side", type=int, default=DEFAULT_SIDE, help="resize target (default 300)")

    def common(sp):
        sp.add_argument("dataset", type=Path)
        sp.add_argument("--runs", type=int, default=DEFAULT_RUNS)
        sp.add_argument("--k", type=int, default=DEFAULT_K_PCA, dest="k_pca", help="PCA components")
        sp.add_argument("--test-image", type=Path, default=None, help="external tumor image")
        sp.add_argument("--seed", type=int, default=DEFAULT_SEED)
        sp.add_argument("--out", type=Path, default=None, help="CSV output path")

    ev = sub.add_parser("eval", help="repeated train/test evaluation of one algorithm")
    common(ev)
    ev.add_argument("--algo", required=True, choices=ALGORITHMS)
    ev.add_argument("--param", action="append", metavar="KEY=VALUE",
                    help="hyperparameter override, e.g. kernel=rbf or max_depth=5")

    gr = sub.add_parser("grid", help="SVM grid search over kernel, C, gamma and degree")
    common(gr)

    pr = sub.add_parser("predict", help="classify one image")
    pr.add_argument("image", type=Path)
    src = pr.add_mutually_exclusive_group(required=True)
    src.add_argument("--model", type=Path, help="model file written by --save-model")
    src.add_argument("--dataset", type=Path, help="retrain on this dataset first")
    pr.add_argument("--algo", choices=ALGORITHMS, default="svm")
    pr.add_argument("--param", action="append", metavar="KEY=VALUE")
    pr.add_argument("--k", type=int, default=DEFAULT_K_PCA, dest="k_pca")
    pr.add_argument("--seed", type=int, default=DEFAULT_SEED)
    pr.add_argument("--side", type=int, default=None, help="image side (default: inferred)")
    pr.add_argument("--save-model", type=Path, default=None)
    return p


def cmd_preprocess(args) -> int:
    for d in (args.tumor_dir, args.healthy_dir):
        if not d.is_dir():
            raise UsageError(f"directory not found: {d}")
    ds = build_dataset(args.tumor_dir, args.healthy_dir, side=args.side)
    save_dataset(ds, args.out)
    healthy, tumor = ds.label_counts()
    print(f"n={ds.n} d={ds.d} tumor={tumor} healthy={healthy} -> {args.out}")
    return 0


def _write_or_print_csv(text: str, out: Path | None) -> None:
    if out is None:
        return
    out.write_text(text, encoding="ascii")
    log.info("wrote %s", out)


def cmd_eval(args) -> int:
    _require_file(args.dataset, "dataset")
    _require_file(args.test_image, "test image")
    params = parse_params(args.param)
    make_fitter(args.algo, params)  # reject bad overrides before the heavy work
    ds = load_dataset(args.dataset)
    report = repeated_evaluate(ds, args.algo, params, k_pca=args.k_pca, runs=args.runs,
                               external_image=args.test_image, base_seed=args.seed)
    for rec in report.records:
        if rec.flagged:
            missing = "tumor" if rec.recall_sick is None else "healthy"
            print(f"run {rec.run}: no {missing} rows in the test split; recall undefined",
                  file=sys.stderr)
    print(format_table([report]))
    _write_or_print_csv(reports_to_csv([report]), args.out)
    return 0


def cmd_grid(args) -> int:
    _require_file(args.dataset, "dataset")
    _require_file(args.test_image, "test image")
    ds = load_dataset(args.dataset)

    def progress(i, spec, outcome):
        log.info("cell %d %s C=%g %s deg=%d: %s", i, spec.kind, spec.C, spec.gamma_mode, spec.degree,
                 getattr(getattr(outcome, "report", None), "model_accuracy_pct", "failed"))

    res = grid_search(ds, runs=args.runs, k_pca=args.k_pca, external_image=args.test_image,
                      base_seed=args.seed, progress=progress)
    for f in res.failures:
        print(f"cell {f.index} ({f.spec.kind}, C={f.spec.C:g}, {f.spec.gamma_mode}, "
              f"degree {f.spec.degree}) failed: {f.error}", file=sys.stderr)
    csv_text = res.to_csv()
    if args.out is not None:
        _write_or_print_csv(csv_text, args.out)
    else:
        sys.stdout.write(csv_text)
    print(res.best_summary())
    return 0 if res.results else 1


def cmd_predict(args) -> int:
    _require_file(args.image, "image")
    if args.model is not None:
        _require_file(args.model, "model")
        model, pca, side = load_model(args.model)
        if pca is None:
            raise UsageError(f"{args.model} has no PCA block; save it with predict --save-model")
        side = args.side or side
    else:
        _require_file(args.dataset, "dataset")
        params = parse_params(args.param)
        fit = make_fitter(args.algo, params)
        ds = load_dataset(args.dataset)
        pca = pca_fit(ds.features, args.k_pca)
        model = fit(pca_transform(pca, ds.features), ds.labels, args.seed)
        side = args.side
        if args.save_model is not None:
            save_model(model, args.save_model, pca=pca, side=side or _infer_side(ds.d))
    side = side or _infer_side(pca.d)
    x = pca_transform(pca, preprocess_file(args.image, side))
    label = int(np.asarray(model.predict(x[None, :])).ravel()[0])
    print("tumor" if label == 1 else "no tumor")
    return 0


def _infer_side(d: int) -> int:
    side = int(round(d ** 0.5))
    if side * side != d:
        raise UsageError(f"feature length {d} is not a square image; pass --side")
    return side


COMMANDS = {"preprocess": cmd_preprocess, "eval": cmd_eval, "grid": cmd_grid, "predict": cmd_predict}


def main(argv: list[str] | None = None) -> int:
    parser = build_parser()
    args = parser.parse_args(argv)
    logging.basicConfig(level=logging.INFO if args.verbose else logging.WARNING,
                        format="%(levelname)s %(message)s", stream=sys.stderr)
    try:
        log.info("%s", RunConfig.from_args(args))
        return COMMANDS[args.subcommand](args)
    except UsageError as exc:
        parser.error(str(exc))  # exits 2
    except (TumorDetectError, OSError, ValueError) as exc:
        print(f"error: {exc}", file=sys.stderr)
        return 1


if __name__ == "__main__":
    sys.exit(main())
