#!/usr/bin/env python3
"""Run every bound-verification experiment at desk scale and write reports.

Usage:
    python scripts/run_all_bounds.py [--out out/] [--seed 7] [--fast]

``--fast`` trims the trial counts for a quick smoke run.  Exit status is the
worst exit status across experiments (0 = all bounds held, 2 = violation).
"""
import argparse
import sys
import time
from pathlib import Path

sys.path.insert(0, str(Path(__file__).resolve().parent.parent / "src"))

from mixcara.harness import ExperimentConfig, run_experiment

FULL_TRIALS = {
    "univariate-gaussian-bound": 100,
    "lognormal-bound": 100,
    "gap-homotopy": 50,
    "na-table": 30,
    "reduction-stress": 500,
    "prescribe-check": 20,
}

FAST_TRIALS = {
    "univariate-gaussian-bound": 10,
    "lognormal-bound": 10,
    "gap-homotopy": 5,
    "na-table": 10,
    "reduction-stress": 25,
    "prescribe-check": 5,
}


def main() -> int:
    parser = argparse.ArgumentParser(description=__doc__)
    parser.add_argument("--out", default="out")
    parser.add_argument("--seed", type=int, default=7)
    parser.add_argument("--fast", action="store_true")
    args = parser.parse_args()

    trials = FAST_TRIALS if args.fast else FULL_TRIALS
    worst = 0
    print(f"{'experiment':32s} {'result':10s} {'rate':>8s} {'time':>8s}")
    for experiment, n in trials.items():
        config = ExperimentConfig(
            experiment=experiment, trials=n, seed=args.seed, out_dir=args.out
        )
        start = time.perf_counter()
        report = run_experiment(config)
        elapsed = time.perf_counter() - start
        agg = report.aggregate
        verdict = "held" if report.bound_held else "VIOLATED"
        print(
            f"{experiment:32s} {verdict:10s} "
            f"{agg['successes']:>4d}/{agg['trials']:<4d} {elapsed:7.1f}s"
        )
        worst = max(worst, report.exit_status)
    print(f"reports written to {Path(args.out).resolve()}")
    return worst


if __name__ == "__main__":
    raise SystemExit(main())
