#!/usr/bin/env python3
"""Download benchmark datasets into the layout the tests and CLI expect.

Fetches ``<Name>.zip`` archives from timeseriesclassification.com and
unpacks the ``<Name>_TRAIN.txt`` / ``<Name>_TEST.txt`` splits to
``tests/data/ucr`` (or ``--dest``). Needs network access.

    python3 scripts/fetch_ucr.py                  # BeetleFly + Chinatown
    python3 scripts/fetch_ucr.py --datasets FordA --dest /data/ucr
"""

import argparse
import io
import sys
import urllib.request
import zipfile
from pathlib import Path

BASE_URL = "https://www.timeseriesclassification.com/aeon-toolkit/{name}.zip"
DEFAULT_DATASETS = ["BeetleFly", "Chinatown"]


def fetch(name: str, dest: Path) -> None:
    url = BASE_URL.format(name=name)
    print(f"downloading {url} ...")
    with urllib.request.urlopen(url, timeout=120) as response:
        payload = response.read()
    archive = zipfile.ZipFile(io.BytesIO(payload))
    found = set()
    for split in ("TRAIN", "TEST"):
        for member in archive.namelist():
            base = Path(member).name
            if base == f"{name}_{split}.txt":
                text = archive.read(member).decode("utf-8")
                out = dest / f"{name}_{split}.tsv"
                out.write_text(normalize_whitespace(text))
            elif base == f"{name}_{split}.ts":
                text = archive.read(member).decode("utf-8")
                out = dest / f"{name}_{split}.tsv"
                out.write_text(flatten_ts(text))
            else:
                continue
            found.add(split)
            print(f"  wrote {out}")
            break
    missing = {"TRAIN", "TEST"} - found
    if missing:
        raise RuntimeError(f"{name}: archive lacked the {sorted(missing)} split(s)")


def normalize_whitespace(text: str) -> str:
    """Space-padded archive rows become single-tab-separated rows."""
    lines = []
    for line in text.splitlines():
        if not line.strip():
            continue
        if "\t" in line or "," in line:
            lines.append(line.strip())
        else:
            lines.append("\t".join(line.split()))
    return "\n".join(lines) + "\n"


def flatten_ts(text: str) -> str:
    """Convert sktime-style ``v1,v2,...:label`` rows to label-first flat rows."""
    lines = []
    in_data = False
    for line in text.splitlines():
        line = line.strip()
        if not line:
            continue
        if line.lower().startswith("@data"):
            in_data = True
            continue
        if not in_data or line.startswith(("#", "@")):
            continue
        values, label = line.rsplit(":", 1)
        lines.append("\t".join([str(int(float(label)))] + values.split(",")))
    return "\n".join(lines) + "\n"


def main() -> int:
    parser = argparse.ArgumentParser(description=__doc__)
    parser.add_argument("--datasets", nargs="*", default=DEFAULT_DATASETS)
    parser.add_argument(
        "--dest",
        type=Path,
        default=Path(__file__).resolve().parent.parent / "tests" / "data" / "ucr",
    )
    args = parser.parse_args()
    args.dest.mkdir(parents=True, exist_ok=True)
    failures = 0
    for name in args.datasets:
        try:
            fetch(name, args.dest)
        except Exception as exc:
            print(f"error fetching {name}: {exc}", file=sys.stderr)
            failures += 1
    return 1 if failures else 0


if __name__ == "__main__":
    sys.exit(main())
