"""Hyper-parameter search over (alphabet size, word size) pairs.

Every feasible pair of a representation's grid is scored by seeded,
stratified k-fold cross-validated forest accuracy on the training set
(leave-one-out when some class has a single instance). For each alphabet,
all word sizes within a 0.01 margin of that alphabet's best score are
kept as lenses, so every alphabet contributes its sharpest view. Fold
assignment is fixed once per search and reused across the grid; grid
points may be evaluated concurrently, with results gathered by grid index
so the selected set does not depend on scheduling.
"""

from __future__ import annotations

from concurrent.futures import ProcessPoolExecutor
from dataclasses import dataclass

import numpy as np

from .config import CoEyeConfig
from .data import Dataset, znormalize_rows
from .errors import NoFeasibleLens
from .forest import fit_forest, predict
from .symbolic import (
    MAX_ALPHABET,
    dft_lowpass,
    digitize_columns,
    fit_sax_binning,
    mcb_from_coeffs,
    sax_symbols,
    sax_training_paa,
)

SAX = 0
SFA = 1

ACCURACY_MARGIN = 0.01
_MARGIN_SLACK = 1e-12

# namespace tags keeping derived seed streams disjoint
_NS_SEARCH = 1
_NS_TRAIN = 2
_NS_SMOTE = 3
_NS_FOLDS = 4
_NS_RANDOM_LENSES = 5


@dataclass(frozen=True)
class Lens:
    """One parameterised symbolic view: representation, alphabet, word size."""

    s: int
    alpha: int
    w: int
    drop_dc: bool = False
    cv_accuracy: float = 0.0

    def __post_init__(self):
        if self.s not in (SAX, SFA):
            raise ValueError("representation flag must be 0 (SAX) or 1 (SFA)")
        if not 2 <= self.alpha <= MAX_ALPHABET:
            raise ValueError(f"alphabet size must be in [2, {MAX_ALPHABET}]")

    @property
    def representation(self) -> str:
        return "sax" if self.s == SAX else "sfa"

    def to_dict(self) -> dict:
        return {
            "s": self.s,
            "alpha": self.alpha,
            "w": self.w,
            "drop_dc": self.drop_dc,
            "cv_accuracy": self.cv_accuracy,
        }

    @staticmethod
    def from_dict(payload: dict) -> "Lens":
        return Lens(
            int(payload["s"]),
            int(payload["alpha"]),
            int(payload["w"]),
            bool(payload["drop_dc"]),
            float(payload["cv_accuracy"]),
        )


@dataclass(frozen=True)
class LensGrid:
    """Candidate (alpha, w) pairs per representation, before feasibility filtering.

    ``None`` word lengths mean the defaults: a single uniform SAX word of
    min(n, 128), and even SFA words 10..min(130, n) step 10.
    """

    sax_alphas: tuple[int, ...] = tuple(range(3, 27))
    sax_word_lengths: tuple[int, ...] | None = None
    sfa_alphas: tuple[int, ...] = tuple(range(3, 27))
    sfa_word_lengths: tuple[int, ...] | None = None
    folds: int = 5

    def __post_init__(self):
        for alpha in tuple(self.sax_alphas) + tuple(self.sfa_alphas):
            if not 2 <= alpha <= MAX_ALPHABET:
                raise ValueError(f"alphabet size {alpha} outside [2, {MAX_ALPHABET}]")

    @staticmethod
    def from_config(config: CoEyeConfig) -> "LensGrid":
        return LensGrid(
            sax_alphas=config.sax_alphas,
            sax_word_lengths=config.sax_word_lengths,
            sfa_alphas=config.sfa_alphas,
            sfa_word_lengths=config.sfa_word_lengths,
            folds=config.folds,
        )

    def sax_pairs(self, n: int) -> list[tuple[int, int]]:
        if self.sax_word_lengths is None:
            words = [min(n, 128)]
        else:
            words = [w for w in self.sax_word_lengths if 1 <= w <= n]
        return [(a, w) for a in sorted(self.sax_alphas) for w in sorted(words)]

    def sfa_pairs(self, n: int) -> list[tuple[int, int]]:
        if self.sfa_word_lengths is None:
            words = list(range(10, min(130, n) + 1, 10))
        else:
            words = list(self.sfa_word_lengths)
        words = [w for w in words if w % 2 == 0 and 2 <= w <= n]
        return [(a, w) for a in sorted(self.sfa_alphas) for w in sorted(words)]

    def pairs(self, representation: int, n: int) -> list[tuple[int, int]]:
        return self.sax_pairs(n) if representation == SAX else self.sfa_pairs(n)


def _rep_flag(representation) -> int:
    if representation in (SAX, SFA):
        return representation
    name = str(representation).lower()
    if name == "sax":
        return SAX
    if name == "sfa":
        return SFA
    raise ValueError(f"unknown representation {representation!r}")


def _derived_seed(*components) -> int:
    return int(np.random.SeedSequence(list(components)).generate_state(1)[0])


def stratified_fold_assignment(y, n_folds: int, seed: int) -> np.ndarray:
    """Seeded fold ids; per-fold class counts deviate from even by <= 1."""
    y = np.asarray(y)
    rng = np.random.default_rng(np.random.SeedSequence([seed, _NS_FOLDS]))
    fold = np.empty(y.shape[0], dtype=np.int64)
    for rank, label in enumerate(np.unique(y)):
        idx = np.nonzero(y == label)[0]
        rng.shuffle(idx)
        fold[idx] = (np.arange(idx.shape[0]) + rank) % n_folds
    return fold


def cross_val_accuracy(symbols, y, fold_ids, trees, seed) -> float:
    """Pooled accuracy of per-fold forests predicting their held-out rows."""
    symbols = np.asarray(symbols)
    y = np.asarray(y)
    correct = 0
    for f in np.unique(fold_ids):
        val = fold_ids == f
        if not val.any() or val.all():
            continue
        model = fit_forest(symbols[~val], y[~val], n_trees=trees, seed=_derived_seed(seed, int(f)))
        correct += int(np.sum(predict(model, symbols[val]) == y[val]))
    return correct / y.shape[0]


def _eval_grid_point(args) -> tuple[int, float]:
    """Score one (alpha, w) pair; module-level so worker processes can pickle it."""
    (index, rep, alpha, w, drop_dc, X, y, fold_ids, trees, seed, sax_mode) = args
    if rep == SAX:
        binning = fit_sax_binning(sax_training_paa(X, w), alpha, sax_mode)
        symbols = sax_symbols(X, w, binning)
    else:
        coeffs = dft_lowpass(znormalize_rows(X), w, drop_dc)
        table = mcb_from_coeffs(coeffs, alpha, w, drop_dc)
        symbols = digitize_columns(coeffs, table)
    # dc flag excluded from the stream so both flag variants are compared
    # on identical forest randomness
    acc = cross_val_accuracy(symbols, y, fold_ids, trees, _derived_seed(seed, _NS_SEARCH, rep, alpha, w))
    return index, acc


def select_within_margin(accuracies, margin: float = ACCURACY_MARGIN):
    """Indices of all grid points scoring >= max - margin."""
    accs = np.asarray(accuracies, dtype=np.float64)
    threshold = accs.max() - margin - _MARGIN_SLACK
    return [i for i in range(accs.shape[0]) if accs[i] >= threshold]


def select_per_alpha(pairs, accuracies, margin: float = ACCURACY_MARGIN):
    """Margin selection applied within each alphabet's word-length row.

    For every alphabet, all word sizes scoring within ``margin`` of that
    alphabet's best are kept; the union over alphabets (in grid order) is
    returned. Every alphabet therefore contributes at least its best word
    size.
    """
    accs = np.asarray(accuracies, dtype=np.float64)
    keep = []
    for alpha in sorted({a for a, _ in pairs}):
        row = [i for i, (a, _) in enumerate(pairs) if a == alpha]
        row_best = accs[row].max()
        keep.extend(i for i in row if accs[i] >= row_best - margin - _MARGIN_SLACK)
    return sorted(keep)


def _fold_ids_for(train: Dataset, folds: int, seed: int) -> np.ndarray:
    counts = train.class_counts()
    if min(counts.values()) == 1:
        return np.arange(len(train))  # leave-one-out
    return stratified_fold_assignment(train.y, folds, seed)


def _score_grid(train, rep, pairs, drop_dc, trees, seed, sax_mode, fold_ids, workers):
    tasks = [
        (i, rep, alpha, w, drop_dc, train.X, train.y, fold_ids, trees, seed, sax_mode)
        for i, (alpha, w) in enumerate(pairs)
    ]
    accs = np.empty(len(pairs), dtype=np.float64)
    if workers is not None and workers > 1 and len(tasks) > 1:
        with ProcessPoolExecutor(max_workers=workers) as pool:
            for index, acc in pool.map(_eval_grid_point, tasks, chunksize=4):
                accs[index] = acc
    else:
        for task in tasks:
            index, acc = _eval_grid_point(task)
            accs[index] = acc
    return accs


def search_lenses(
    train: Dataset,
    representation,
    grid: LensGrid | None = None,
    seed: int = 0,
    drop_dc: bool = False,
    trees: int = 100,
    sax_mode: str = "minmax",
    workers: int | None = None,
) -> list[Lens]:
    """Score the representation's grid by CV accuracy, keep the 1% bands.

    The margin is applied per alphabet: for each alpha, every word size
    within 0.01 of that alpha's best cross-validation accuracy is kept.
    Returns lenses ordered by ascending alpha then w, each carrying its
    cv_accuracy. Raises NoFeasibleLens when feasibility filtering empties
    the grid.
    """
    rep = _rep_flag(representation)
    grid = grid or LensGrid()
    pairs = grid.pairs(rep, train.n)
    if not pairs:
        raise NoFeasibleLens(f"no feasible (alpha, w) pairs for series length {train.n}")
    fold_ids = _fold_ids_for(train, grid.folds, seed)
    accs = _score_grid(train, rep, pairs, drop_dc, trees, seed, sax_mode, fold_ids, workers)
    keep = select_per_alpha(pairs, accs)
    return [Lens(rep, pairs[i][0], pairs[i][1], drop_dc if rep == SFA else False, float(accs[i])) for i in keep]


def search_lenses_random(
    train: Dataset,
    representation,
    budget: int,
    seed: int = 0,
    grid: LensGrid | None = None,
    drop_dc: bool = False,
) -> list[Lens]:
    """Sample ``budget`` distinct grid pairs uniformly, skipping CV entirely.

    Ablation baseline; the sampled lenses carry cv_accuracy 0. Budgets
    beyond the grid size are clipped.
    """
    if budget < 1:
        raise ValueError("budget must be at least 1")
    rep = _rep_flag(representation)
    grid = grid or LensGrid()
    pairs = grid.pairs(rep, train.n)
    if not pairs:
        raise NoFeasibleLens(f"no feasible (alpha, w) pairs for series length {train.n}")
    budget = min(budget, len(pairs))
    rng = np.random.default_rng(np.random.SeedSequence([seed, _NS_RANDOM_LENSES, rep]))
    chosen = sorted(rng.choice(len(pairs), size=budget, replace=False))
    return [Lens(rep, pairs[i][0], pairs[i][1], drop_dc if rep == SFA else False, 0.0) for i in chosen]


def search_sfa_with_normalization(
    train: Dataset,
    grid: LensGrid | None = None,
    seed: int = 0,
    trees: int = 100,
    workers: int | None = None,
) -> tuple[bool, list[Lens]]:
    """Search the SFA grid under both DC conventions, keep the better one.

    Returns (drop_dc, lenses). The flag whose best CV accuracy is higher
    wins; an exact tie keeps the DC term.
    """
    keep_dc = search_lenses(train, SFA, grid, seed, drop_dc=False, trees=trees, workers=workers)
    drop_dc = search_lenses(train, SFA, grid, seed, drop_dc=True, trees=trees, workers=workers)
    best_keep = max(l.cv_accuracy for l in keep_dc)
    best_drop = max(l.cv_accuracy for l in drop_dc)
    if best_drop > best_keep:
        return True, drop_dc
    return False, keep_dc


def choose_sfa_normalization(
    train: Dataset,
    grid: LensGrid | None = None,
    seed: int = 0,
    trees: int = 100,
    workers: int | None = None,
) -> bool:
    """Pick the DC convention for a dataset from training CV accuracy."""
    flag, _ = search_sfa_with_normalization(train, grid, seed, trees, workers)
    return flag
