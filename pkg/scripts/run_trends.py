#!/usr/bin/env python3
"""Run every experiment sweep on one scenario and write a CSV per sweep.

Produces ablation.csv, count-sweep.csv, estimator-compare.csv, and full.csv
in the output directory.  The estimator comparison runs without adversaries
(it contrasts evidence kinds, not robustness); the other sweeps stress the
aggregator with a quarter adversarial reporters, matching the CLI defaults.
"""

import argparse
import sys
import time
from pathlib import Path

REPO_ROOT = Path(__file__).resolve().parent.parent
sys.path.insert(0, str(REPO_ROOT / "src"))

from mlt.cli import format_csv
from mlt.config import load_scenario_file
from mlt.experiments import ESTIMATOR_COMPARE, KINDS, ExperimentSpec, run_experiment_suite

DEFAULT_SCENARIO = REPO_ROOT / "scenarios" / "acceptance_base.json"


def parse_args(argv=None):
    parser = argparse.ArgumentParser(description=__doc__.splitlines()[0])
    parser.add_argument("--scenario", default=str(DEFAULT_SCENARIO),
                        help="scenario JSON file (default: %(default)s)")
    parser.add_argument("--replications", type=int, default=1000)
    parser.add_argument("--out-dir", default="results",
                        help="directory for the CSV files (default: %(default)s)")
    parser.add_argument("--jobs", type=int, default=1,
                        help="parallel worker processes per sweep")
    return parser.parse_args(argv)


def main(argv=None) -> int:
    args = parse_args(argv)
    scenario, thresholds = load_scenario_file(args.scenario)
    out_dir = Path(args.out_dir)
    out_dir.mkdir(parents=True, exist_ok=True)

    for kind in KINDS:
        spec = ExperimentSpec(
            kind=kind,
            replications=args.replications,
            thresholds=thresholds,
            adversary_frac=0.0 if kind == ESTIMATOR_COMPARE else 0.25,
        )
        start = time.perf_counter()
        results = run_experiment_suite(scenario, spec, jobs=args.jobs)
        elapsed = time.perf_counter() - start
        path = out_dir / f"{kind}.csv"
        path.write_text(format_csv(kind, results), encoding="utf-8")
        span = f"{min(r.accuracy for r in results):.3f}..{max(r.accuracy for r in results):.3f}"
        print(f"{kind}: {len(results)} rows, accuracy {span}, {elapsed:.1f}s -> {path}")
    return 0


if __name__ == "__main__":
    sys.exit(main())
