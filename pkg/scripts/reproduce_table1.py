"""Tree, forest and AdaBoost (plus the default SVM) on shared splits, printed as one table.

Usage: python3 scripts/reproduce_table1.py IMAGE_ROOT [--test-image PATH]
where IMAGE_ROOT holds yes/ (tumor) and no/ (healthy) image folders.
"""
import argparse
import time
from pathlib import Path

from tumordetect.dataset import build_dataset
from tumordetect.evaluation import ALGORITHMS, evaluate_prepared, format_table, prepare_runs, reports_to_csv


def main():
    p = argparse.ArgumentParser(description=__doc__, formatter_class=argparse.RawDescriptionHelpFormatter)
    p.add_argument("root", type=Path)
    p.add_argument("--test-image", type=Path, default=None)
    p.add_argument("--side", type=int, default=300)
    p.add_argument("--k", type=int, default=60)
    p.add_argument("--runs", type=int, default=10)
    p.add_argument("--seed", type=int, default=42)
    p.add_argument("--csv", type=Path, default=None)
    args = p.parse_args()

    start = time.perf_counter()
    ds = build_dataset(args.root / "yes", args.root / "no", side=args.side)
    prepared = prepare_runs(ds, args.k, args.runs, args.test_image, base_seed=args.seed)
    print(f"loaded n={ds.n} d={ds.d}, prepared {len(prepared)} splits in {time.perf_counter() - start:.1f}s")
    reports = [evaluate_prepared(prepared, algo) for algo in ALGORITHMS]
    print(format_table(reports))
    if args.csv is not None:
        args.csv.write_text(reports_to_csv(reports))


if __name__ == "__main__":
    main()
