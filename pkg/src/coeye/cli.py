"""Command-line front end: train, predict, lenses, inspect, transform, benchmark.

Exit codes: 0 success, 2 usage or data errors, 3 training errors, 4 series
shape mismatches. Human-readable output goes to stdout, diagnostics to
stderr, machine output only to ``--out`` files. ``--data`` defaults to the
COEYE_DATA_DIR environment variable.
"""

from __future__ import annotations

import argparse
import os
import sys

import numpy as np

from . import __version__
from .config import CoEyeConfig
from .data import Dataset, load_ucr
from .ensemble import classify, load_model, predict_dataset, save_model, train
from .errors import (
    CoEyeError,
    EmptyDataset,
    EmptyEnsemble,
    EmptyTrainingSet,
    FeatureMismatch,
    ModelParseError,
    NoFeasibleLens,
    NoMinorityClass,
    ParseError,
    RaggedData,
    SeriesLengthMismatch,
    UnknownLabel,
    UnsupportedModelVersion,
)
from .evaluate import BENCHMARK_MODES, find_split, run_benchmark
from .lenses import SFA, LensGrid, search_lenses, search_sfa_with_normalization
from .symbolic import fit_mcb, fit_sax_binning, sax, sax_training_paa, sfa

_DATA_ERRORS = (
    RaggedData, ParseError, EmptyDataset, UnknownLabel,
    ModelParseError, UnsupportedModelVersion,
    FileNotFoundError, IsADirectoryError, PermissionError, ValueError,
)
_TRAIN_ERRORS = (NoFeasibleLens, NoMinorityClass, EmptyTrainingSet, EmptyEnsemble)
_SHAPE_ERRORS = (SeriesLengthMismatch, FeatureMismatch)


def _add_config_flags(p: argparse.ArgumentParser) -> None:
    p.add_argument("--seed", type=int, default=42, help="global random seed (default: 42)")
    p.add_argument("--trees", type=int, default=100, help="trees per forest (default: 100)")
    p.add_argument("--folds", type=int, default=5, help="cross-validation folds (default: 5)")
    p.add_argument("--sax-alphas", default=None,
                   help="comma list of SAX alphabet sizes (default: 3..26)")
    p.add_argument("--sfa-alphas", default=None,
                   help="comma list of SFA alphabet sizes (default: 3..26)")
    p.add_argument("--sax-w", default=None,
                   help="comma list of SAX word lengths (default: one uniform word of min(n, 128))")
    p.add_argument("--sfa-w", default=None,
                   help="comma list of SFA word lengths (default: 10..min(130, n) step 10)")
    p.add_argument("--sax-mode", choices=("minmax", "gaussian"), default="minmax",
                   help="SAX binning mode (default: minmax)")
    p.add_argument("--smote", choices=("on", "off"), default="on",
                   help="oversample imbalanced training data (default: on)")
    p.add_argument("--threads", type=int, default=os.cpu_count(),
                   help="worker count for search and training (default: all cores)")


def _int_list(text):
    if text is None:
        return None
    return tuple(int(v) for v in str(text).replace(",", " ").split())


def _config_from_args(args) -> CoEyeConfig:
    return CoEyeConfig(
        seed=args.seed,
        trees=args.trees,
        folds=args.folds,
        sax_alphas=_int_list(args.sax_alphas) or tuple(range(3, 27)),
        sax_word_lengths=_int_list(args.sax_w),
        sfa_alphas=_int_list(args.sfa_alphas) or tuple(range(3, 27)),
        sfa_word_lengths=_int_list(args.sfa_w),
        sax_mode=args.sax_mode,
        smote=args.smote == "on",
        threads=args.threads,
    )


def _add_data_flags(p: argparse.ArgumentParser, dataset_required: bool = True) -> None:
    p.add_argument("--data", default=os.environ.get("COEYE_DATA_DIR"),
                   help="dataset directory (default: $COEYE_DATA_DIR)")
    p.add_argument("--dataset", required=dataset_required, help="dataset name, e.g. BeetleFly")


def _load_split(args, split: str) -> Dataset:
    if not args.data:
        raise ValueError("--data is required (or set COEYE_DATA_DIR)")
    path = find_split(args.data, args.dataset, split)
    loaded = load_ucr(path)
    return Dataset(loaded.X, loaded.y, name=args.dataset)


def _load_values_only(path) -> np.ndarray:
    """Read a label-free series file: one series per line, tab or comma separated."""
    rows = []
    with open(path, "r", encoding="utf-8") as fh:
        for line in fh:
            line = line.strip()
            if not line:
                continue
            sep = "\t" if "\t" in line else ","
            rows.append([float(v) for v in line.split(sep)])
    if not rows:
        raise EmptyDataset(f"{path}: no series found")
    widths = {len(r) for r in rows}
    if len(widths) != 1:
        raise ValueError(f"{path}: ragged rows in input file")
    return np.asarray(rows, dtype=np.float64)


def _resolve_input(args) -> tuple[np.ndarray, np.ndarray | None]:
    """(values matrix, labels or None) from --input or --data/--dataset."""
    if getattr(args, "input", None):
        return _load_values_only(args.input), None
    if args.data and args.dataset:
        test = _load_split(args, "TEST")
        return test.X, test.y
    raise ValueError("provide --input FILE or --data/--dataset for the _TEST split")


def cmd_train(args) -> int:
    train_set = _load_split(args, "TRAIN")
    config = _config_from_args(args)
    model = train(train_set, config)
    save_model(model, args.out)
    report = model.smote_report
    print(f"dataset: {model.dataset_name}")
    print(f"sax lenses: {model.sax_count}")
    print(f"sfa lenses: {model.sfa_count}")
    drop_dc = any(e.lens.drop_dc for e in model.eyes if e.lens.s == SFA)
    print(f"sfa drop_dc: {drop_dc}")
    print(f"smote percentage: {report.smote_percentage:.4f}")
    added = sum(report.added_counts.values())
    print(f"smote added: {added} synthetic series")
    print(f"model written to {args.out}")
    return 0


def cmd_predict(args) -> int:
    model = load_model(args.model)
    X, y_true = _resolve_input(args)
    preds = predict_dataset(model, X)
    has_truth = y_true is not None
    lines = ["index,predicted,confidence,round" + (",true,correct" if has_truth else "")]
    correct = 0
    for i, p in enumerate(preds):
        row = f"{i},{p.label},{p.confidence:.6f},{p.round}"
        if has_truth:
            ok = int(p.label == int(y_true[i]))
            correct += ok
            row += f",{int(y_true[i])},{ok}"
        lines.append(row)
    text = "\n".join(lines) + "\n"
    if args.out:
        with open(args.out, "w", encoding="utf-8") as fh:
            fh.write(text)
    else:
        sys.stdout.write(text)
    if has_truth:
        print(f"accuracy: {correct / len(preds):.6f}")
    return 0


def cmd_lenses(args) -> int:
    train_set = _load_split(args, "TRAIN")
    config = _config_from_args(args)
    grid = LensGrid.from_config(config)
    sax_lenses = search_lenses(train_set, "sax", grid, seed=config.seed, trees=config.trees,
                               sax_mode=config.sax_mode, workers=config.threads)
    _, sfa_lenses = search_sfa_with_normalization(train_set, grid, seed=config.seed,
                                                  trees=config.trees, workers=config.threads)
    print("representation,alpha,w,drop_dc,cv_accuracy")
    for lens in sax_lenses + sfa_lenses:
        print(f"{lens.representation},{lens.alpha},{lens.w},{int(lens.drop_dc)},{lens.cv_accuracy:.6f}")
    return 0


def cmd_inspect(args) -> int:
    model = load_model(args.model)
    X, _ = _resolve_input(args)
    if not 0 <= args.index < X.shape[0]:
        raise ValueError(f"--index {args.index} outside input with {X.shape[0]} series")
    pred = classify(model, X[args.index], include_per_eye=True)
    print("eye_index,representation,alpha,w,class,probability")
    for j, eye in enumerate(model.eyes):
        for ci, label in enumerate(model.class_labels):
            print(f"{j},{eye.lens.representation},{eye.lens.alpha},{eye.lens.w},"
                  f"{int(label)},{pred.per_eye[j, ci]:.6f}")
    print(f"vote sax_best: {pred.sax_label if pred.sax_label is not None else '-'}")
    print(f"vote sfa_best: {pred.sfa_label if pred.sfa_label is not None else '-'}")
    print(f"vote round: {pred.round}")
    print(f"final label: {pred.label} (confidence {pred.confidence:.6f})")
    return 0


def cmd_transform(args) -> int:
    train_set = _load_split(args, "TRAIN")
    if not 0 <= args.index < len(train_set):
        raise ValueError(f"--index {args.index} outside dataset with {len(train_set)} series")
    values = train_set.X[args.index]
    if args.rep == "sax":
        binning = fit_sax_binning(sax_training_paa(train_set.X, args.w), args.alpha, args.sax_mode)
        word = sax(values, args.w, binning)
    else:
        table = fit_mcb(train_set, args.alpha, args.w, drop_dc=args.drop_dc)
        word = sfa(values, table)
    print(word.to_text())
    return 0


def cmd_benchmark(args) -> int:
    if not args.data:
        raise ValueError("--data is required (or set COEYE_DATA_DIR)")
    names = []
    if args.manifest:
        with open(args.manifest, "r", encoding="utf-8") as fh:
            names = [line.strip() for line in fh if line.strip()]
    if args.datasets:
        names.extend(n for n in str(args.datasets).replace(",", " ").split())
    if not names:
        raise ValueError("provide --datasets or --manifest")
    modes = [m for m in str(args.modes).replace(",", " ").split()]
    for mode in modes:
        if mode not in BENCHMARK_MODES:
            raise ValueError(f"unknown mode {mode!r}; choose from {', '.join(BENCHMARK_MODES)}")
    seeds = [int(s) for s in str(args.seeds).replace(",", " ").split()]
    config = _config_from_args(args)

    all_reports = []
    for mode in modes:
        all_reports.extend(run_benchmark(args.data, names, mode, seeds, args.out, config))
    ok = sum(1 for r in all_reports if r.status == "ok")
    print(f"benchmark rows written: {len(all_reports)} ({ok} ok) -> {args.out}")
    return 0 if ok > 0 else 3


def build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(
        prog="coeye",
        description="Multi-resolution symbolic time-series classification.",
    )
    parser.add_argument("--version", action="version", version=f"%(prog)s {__version__}")
    sub = parser.add_subparsers(dest="command", required=True)

    p = sub.add_parser("train", help="fit a model on <dataset>_TRAIN and save it")
    _add_data_flags(p)
    p.add_argument("--out", required=True, help="output model file")
    _add_config_flags(p)
    p.set_defaults(func=cmd_train)

    p = sub.add_parser("predict", help="classify series with a saved model")
    p.add_argument("--model", required=True, help="model file from `coeye train`")
    p.add_argument("--input", default=None, help="label-free series file (one series per line)")
    _add_data_flags(p, dataset_required=False)
    p.add_argument("--out", default=None, help="output CSV (default: stdout)")
    p.set_defaults(func=cmd_predict)

    p = sub.add_parser("lenses", help="print the lenses the search selects for a dataset")
    _add_data_flags(p)
    _add_config_flags(p)
    p.set_defaults(func=cmd_lenses)

    p = sub.add_parser("inspect", help="per-lens confidence table and vote trace for one series")
    p.add_argument("--model", required=True)
    p.add_argument("--input", default=None, help="label-free series file")
    _add_data_flags(p, dataset_required=False)
    p.add_argument("--index", type=int, default=0, help="series index within the input (default: 0)")
    p.set_defaults(func=cmd_inspect)

    p = sub.add_parser("transform", help="print the symbolic word of one training series")
    _add_data_flags(p)
    p.add_argument("--rep", choices=("sax", "sfa"), required=True)
    p.add_argument("--alpha", type=int, required=True, help="alphabet size (2..26)")
    p.add_argument("--w", type=int, required=True, help="word size")
    p.add_argument("--drop-dc", action="store_true", help="drop the DC coefficient (sfa only)")
    p.add_argument("--sax-mode", choices=("minmax", "gaussian"), default="minmax")
    p.add_argument("--index", type=int, default=0, help="series index (default: 0)")
    p.set_defaults(func=cmd_transform)

    p = sub.add_parser("benchmark", help="train/test sweeps appended to a results CSV")
    p.add_argument("--data", default=os.environ.get("COEYE_DATA_DIR"),
                   help="dataset directory (default: $COEYE_DATA_DIR)")
    p.add_argument("--datasets", default=None, help="comma list of dataset names")
    p.add_argument("--manifest", default=None, help="file with one dataset name per line")
    p.add_argument("--modes", default="coeye",
                   help=f"comma list from: {', '.join(BENCHMARK_MODES)} (default: coeye)")
    p.add_argument("--seeds", default="42", help="comma list of seeds (default: 42)")
    p.add_argument("--out", required=True, help="results CSV, appended to")
    _add_config_flags(p)
    p.set_defaults(func=cmd_benchmark)

    return parser


def main(argv=None) -> int:
    parser = build_parser()
    try:
        args = parser.parse_args(argv)
    except SystemExit as exc:
        return 2 if exc.code not in (0, None) else 0
    try:
        return args.func(args)
    except _SHAPE_ERRORS as exc:
        print(f"error: {exc}", file=sys.stderr)
        return 4
    except _TRAIN_ERRORS as exc:
        print(f"error: {exc}", file=sys.stderr)
        return 3
    except _DATA_ERRORS as exc:
        print(f"error: {exc}", file=sys.stderr)
        return 2
    except CoEyeError as exc:
        print(f"error: {exc}", file=sys.stderr)
        return 2


def entry_point() -> None:
    sys.exit(main())


if __name__ == "__main__":
    entry_point()
