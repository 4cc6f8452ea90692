#!/usr/bin/env python3
"""Write the synthetic fixture datasets as flat files for CLI experiments.

    python3 scripts/make_fixtures.py --dest /tmp/fixtures
    coeye train --data /tmp/fixtures --dataset waves --out /tmp/waves.model.json
"""

import argparse
import sys
from pathlib import Path

sys.path.insert(0, str(Path(__file__).resolve().parent.parent / "tests"))

from conftest import synth_dataset  # noqa: E402

from coeye import write_ucr  # noqa: E402


def main() -> int:
    parser = argparse.ArgumentParser(description=__doc__)
    parser.add_argument("--dest", type=Path, default=Path("fixtures"))
    parser.add_argument("--kinds", nargs="*", default=["waves", "trends", "bumps"])
    parser.add_argument("--length", type=int, default=32)
    parser.add_argument("--per-class", type=int, default=10)
    args = parser.parse_args()
    args.dest.mkdir(parents=True, exist_ok=True)
    for kind in args.kinds:
        for split, seed in (("TRAIN", 1), ("TEST", 2)):
            ds = synth_dataset(kind, seed=seed, n=args.length, per_class=args.per_class)
            path = args.dest / f"{kind}_{split}.tsv"
            write_ucr(ds, path)
            print(f"wrote {path} ({len(ds)} series of length {ds.n})")
    return 0


if __name__ == "__main__":
    sys.exit(main())
