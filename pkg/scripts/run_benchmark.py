#!/usr/bin/env python3
"""Benchmark sweep runner: every (dataset, mode, seed) to one CSV.

    python3 scripts/run_benchmark.py --data tests/data/ucr \\
        --datasets BeetleFly Chinatown --modes coeye sax_only sfa_only \\
        --seeds 0 1 2 3 4 --out results.csv
"""

import argparse
import os
import sys

from coeye import CoEyeConfig
from coeye.evaluate import BENCHMARK_MODES, run_benchmark


def main() -> int:
    parser = argparse.ArgumentParser(description=__doc__)
    parser.add_argument("--data", default=os.environ.get("COEYE_DATA_DIR"), required=False)
    parser.add_argument("--datasets", nargs="+", required=True)
    parser.add_argument("--modes", nargs="*", default=["coeye"], choices=BENCHMARK_MODES)
    parser.add_argument("--seeds", nargs="*", type=int, default=[0, 1, 2, 3, 4])
    parser.add_argument("--out", required=True)
    parser.add_argument("--trees", type=int, default=100)
    parser.add_argument("--threads", type=int, default=os.cpu_count())
    args = parser.parse_args()
    if not args.data:
        parser.error("--data is required (or set COEYE_DATA_DIR)")

    config = CoEyeConfig(trees=args.trees, threads=args.threads)
    failures = 0
    for mode in args.modes:
        reports = run_benchmark(args.data, args.datasets, mode, args.seeds, args.out, config)
        for r in reports:
            if r.status == "ok":
                print(
                    f"{r.dataset:<24} {mode:<13} seed={r.seed} "
                    f"acc={r.accuracy:.4f} macroF1={r.macro_f1:.4f} "
                    f"lenses={r.n_sax_lenses}+{r.n_sfa_lenses} "
                    f"total={r.timings['total']:.1f}s"
                )
            else:
                failures += 1
                print(f"{r.dataset:<24} {mode:<13} seed={r.seed} {r.status}")
    print(f"rows appended to {args.out}")
    return 1 if failures else 0


if __name__ == "__main__":
    sys.exit(main())
