"""Run the 160-cell SVM grid on an image folder and write the per-cell CSV."""
import argparse
import time
from pathlib import Path

from tumordetect.dataset import build_dataset
from tumordetect.gridsearch import grid_search


def main():
    p = argparse.ArgumentParser(description=__doc__)
    p.add_argument("root", type=Path, help="folder with yes/ and no/")
    p.add_argument("--test-image", type=Path, default=None)
    p.add_argument("--side", type=int, default=300)
    p.add_argument("--k", type=int, default=60)
    p.add_argument("--runs", type=int, default=10)
    p.add_argument("--seed", type=int, default=42)
    p.add_argument("--out", type=Path, default=Path("grid.csv"))
    args = p.parse_args()

    ds = build_dataset(args.root / "yes", args.root / "no", side=args.side)
    start = time.perf_counter()
    res = grid_search(ds, runs=args.runs, k_pca=args.k, external_image=args.test_image,
                      base_seed=args.seed)
    args.out.write_text(res.to_csv())
    print(f"{len(res.results)} cells ok, {len(res.failures)} failed, "
          f"{time.perf_counter() - start:.1f}s -> {args.out}")
    print(res.best_summary())
    for r in res.results[:5]:
        s = r.spec
        print(f"  {s.kind:10s} C={s.C:<5g} {s.gamma_mode:5s} deg={s.degree}  "
              f"acc={r.report.model_accuracy_pct:.2f}")


if __name__ == "__main__":
    main()
