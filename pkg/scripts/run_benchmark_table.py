#!/usr/bin/env python3
"""Desk-scale benchmark table: GD/IGD (mean +/- sd over trials) per problem
and method, with a one-tailed U test between the two Bezier fitters.

Writes results.csv and summary.json per problem under --out and prints a
compact table. Two-objective problems use sizes (1,3); three- and
five-objective problems use (1,2,1).
"""

import argparse
import sys
from pathlib import Path

sys.path.insert(0, str(Path(__file__).resolve().parent.parent / "src"))

from bsf.harness import ExperimentConfig, run_experiment, write_rows, write_summary

PROBLEMS = {
    "schaffer": (1, 3),
    "constrex": (1, 3),
    "osyczka2": (1, 3),
    "med3": (1, 2, 1),
    "viennet2": (1, 2, 1),
    "med5": (1, 2, 1),
}


def main() -> int:
    parser = argparse.ArgumentParser(description=__doc__)
    parser.add_argument("--trials", type=int, default=20)
    parser.add_argument("--seed", type=int, default=0)
    parser.add_argument("--jobs", type=int, default=1)
    parser.add_argument("--problems", nargs="*", default=list(PROBLEMS))
    parser.add_argument("--out", default="results/table")
    args = parser.parse_args()

    out_root = Path(args.out)
    header = f"{'problem':10} {'method':17} {'GD':>23} {'IGD':>23} {'iters':>6}"
    print(header)
    print("-" * len(header))
    for name in args.problems:
        sizes = PROBLEMS[name]
        cfg = ExperimentConfig(
            problem=name,
            methods=("inductive", "all-at-once", "response-surface"),
            sizes=sizes,
            trials=args.trials,
            seed=args.seed,
            jobs=args.jobs,
        )
        rows = run_experiment(cfg)
        out = out_root / name
        out.mkdir(parents=True, exist_ok=True)
        write_rows(rows, out / "results.csv")
        summary = write_summary(rows, cfg, out / "summary.json")
        for method, entry in summary["methods"].items():
            if not entry.get("trials"):
                print(f"{name:10} {method:17} all trials failed")
                continue
            iters = entry.get("iterations_mean")
            print(
                f"{name:10} {method:17} "
                f"{entry['gd_mean']:.3e} +/- {entry['gd_sd']:.2e} "
                f"{entry['igd_mean']:.3e} +/- {entry['igd_sd']:.2e} "
                f"{'' if iters is None else f'{iters:5.2f}'}"
            )
    return 0


if __name__ == "__main__":
    sys.exit(main())
