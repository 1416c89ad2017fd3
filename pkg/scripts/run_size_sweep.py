#!/usr/bin/env python3
"""Sweep the three-objective subsample size N3 and plot GD/IGD boxplots.

Reproduces the sample-size study: the skeleton fit's accuracy should flatten
after a handful of points per two-dimensional face.
"""

import argparse
import sys
from pathlib import Path

sys.path.insert(0, str(Path(__file__).resolve().parent.parent / "src"))

from bsf.harness import ExperimentConfig, run_sweep, write_rows
from bsf.plotting import boxplot_svg


def main() -> int:
    parser = argparse.ArgumentParser(description=__doc__)
    parser.add_argument("--problem", default="med5")
    parser.add_argument("--n1", type=int, default=1)
    parser.add_argument("--n2", type=int, default=2)
    parser.add_argument("--n3-max", type=int, default=10)
    parser.add_argument("--trials", type=int, default=10)
    parser.add_argument("--seed", type=int, default=1)
    parser.add_argument("--jobs", type=int, default=1)
    parser.add_argument("--out", default="results/sweep")
    args = parser.parse_args()

    cfg = ExperimentConfig(
        problem=args.problem,
        methods=("inductive",),
        sizes=(args.n1, args.n2, 1),
        trials=args.trials,
        seed=args.seed,
        jobs=args.jobs,
    )
    rows = run_sweep(cfg, range(1, args.n3_max + 1))
    out = Path(args.out)
    out.mkdir(parents=True, exist_ok=True)
    write_rows(rows, out / "results.csv")
    panels = []
    for name, pick in (("GD", lambda r: r.gd), ("IGD", lambda r: r.igd)):
        groups = {}
        for r in rows:
            if r.error is None:
                groups.setdefault(r.sizes[2], []).append(pick(r))
        panels.append((name, groups))
    (out / "sweep.svg").write_text(boxplot_svg(panels))
    for n3 in sorted({r.sizes[2] for r in rows}):
        igds = sorted(r.igd for r in rows if r.sizes[2] == n3 and r.error is None)
        median = igds[len(igds) // 2] if len(igds) % 2 else 0.5 * (
            igds[len(igds) // 2 - 1] + igds[len(igds) // 2]
        )
        print(f"N3={n3:2d}  median IGD {median:.4e}  ({len(igds)} trials)")
    print(f"wrote {out / 'results.csv'} and {out / 'sweep.svg'}")
    return 0


if __name__ == "__main__":
    sys.exit(main())
