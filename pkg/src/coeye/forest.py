"""CART decision trees and random forests over symbolic feature vectors.

Features are symbol indices, i.e. small ordered integers, so split search
uses threshold tests with candidate thresholds at midpoints between
consecutive values present at a node. Determinism contract: a forest is a
pure function of (X, y, n_trees, seed) — each tree draws from its own RNG
stream derived from (seed, tree_index), so results do not depend on the
worker count or scheduling.
"""

from __future__ import annotations

import math
from concurrent.futures import ThreadPoolExecutor
from dataclasses import dataclass

import numpy as np

from .errors import EmptyTrainingSet, FeatureMismatch

_MIN_DECREASE = 1e-12


@dataclass(eq=False)
class DecisionTree:
    """Flat-array tree: feature < 0 marks a leaf; counts holds per-node class counts."""

    feature: np.ndarray
    threshold: np.ndarray
    left: np.ndarray
    right: np.ndarray
    counts: np.ndarray
    bootstrap_unique: int = 0

    @property
    def n_nodes(self) -> int:
        return self.feature.shape[0]


@dataclass(eq=False)
class RandomForestModel:
    trees: list[DecisionTree]
    class_labels: np.ndarray
    n_features: int
    seed: int

    @property
    def n_classes(self) -> int:
        return self.class_labels.shape[0]


def _gini_from_counts(counts, n):
    return 1.0 - np.sum((counts / n) ** 2)


def _grow_tree(Xb, yb, n_values, n_classes, max_features, rng):
    """Grow one unpruned CART tree on a bootstrap sample."""
    feature, threshold, left, right, counts = [], [], [], [], []

    def alloc():
        feature.append(-1)
        threshold.append(0.0)
        left.append(-1)
        right.append(-1)
        counts.append(None)
        return len(feature) - 1

    root = alloc()
    stack = [(np.arange(Xb.shape[0]), root)]
    while stack:
        rows, idx = stack.pop()
        node_counts = np.bincount(yb[rows], minlength=n_classes).astype(np.float64)
        counts[idx] = node_counts
        n_node = rows.shape[0]
        nonzero = np.count_nonzero(node_counts)
        if n_node < 2 or nonzero <= 1:
            continue

        parent_gini = _gini_from_counts(node_counts, n_node)
        feats = np.sort(rng.choice(Xb.shape[1], size=max_features, replace=False))
        cols = Xb[rows][:, feats]
        # one histogram per sampled feature: (m, n_values, n_classes)
        codes = (np.arange(feats.shape[0]) * n_values + cols) * n_classes + yb[rows][:, None]
        hist = np.bincount(codes.ravel(), minlength=feats.shape[0] * n_values * n_classes)
        hist = hist.reshape(feats.shape[0], n_values, n_classes)
        # candidate boundary after value v: left bin = values <= v, threshold v + 0.5
        cum = hist.cumsum(axis=1)[:, :-1, :].astype(np.float64)
        n_left = cum.sum(axis=2)
        n_right = n_node - n_left
        valid = (n_left > 0) & (n_right > 0)
        with np.errstate(divide="ignore", invalid="ignore"):
            gini_l = 1.0 - np.sum((cum / n_left[..., None]) ** 2, axis=2)
            gini_r = 1.0 - np.sum(((node_counts - cum) / n_right[..., None]) ** 2, axis=2)
            dec = parent_gini - (n_left * gini_l + n_right * gini_r) / n_node
        dec[~valid] = -np.inf
        if dec.size == 0:  # every feature constant at this node
            continue
        # flat argmax keeps the first maximum: lowest feature index, then
        # lowest threshold (features were sorted ascending)
        flat = int(np.argmax(dec))
        fi, v = divmod(flat, n_values - 1)
        if not np.isfinite(dec[fi, v]) or dec[fi, v] <= _MIN_DECREASE:
            continue
        best_f = int(feats[fi])
        best_t = v + 0.5
        best_mask = cols[:, fi] <= best_t
        feature[idx] = best_f
        threshold[idx] = best_t
        li, ri = alloc(), alloc()
        left[idx], right[idx] = li, ri
        stack.append((rows[best_mask], li))
        stack.append((rows[~best_mask], ri))

    return (
        np.asarray(feature, dtype=np.int32),
        np.asarray(threshold, dtype=np.float64),
        np.asarray(left, dtype=np.int32),
        np.asarray(right, dtype=np.int32),
        np.vstack(counts),
    )


def _fit_one_tree(X, y_enc, n_values, n_classes, max_features, seed, tree_index):
    rng = np.random.default_rng(np.random.SeedSequence([seed, tree_index]))
    boot = rng.integers(0, X.shape[0], size=X.shape[0])
    arrays = _grow_tree(X[boot], y_enc[boot], n_values, n_classes, max_features, rng)
    return DecisionTree(*arrays, bootstrap_unique=np.unique(boot).shape[0])


def fit_forest(X, y, n_trees: int = 100, seed: int = 0, threads: int | None = None) -> RandomForestModel:
    """Fit ``n_trees`` bootstrap CART trees with sqrt-width feature subsets.

    Trees are grown until pure or until no split improves Gini impurity; no
    depth limit, minimum split size 2. Tie-breaks go to the lowest feature
    index, then the lowest threshold.
    """
    X = np.ascontiguousarray(X, dtype=np.int64)
    y = np.asarray(y, dtype=np.int64)
    if X.ndim != 2 or X.shape[0] == 0:
        raise EmptyTrainingSet("training set must contain at least one row")
    if y.shape != (X.shape[0],):
        raise ValueError("y length must match rows of X")
    if seed < 0:
        raise ValueError("seed must be non-negative")

    class_labels = np.unique(y)
    y_enc = np.searchsorted(class_labels, y)
    n_classes = class_labels.shape[0]
    n_values = int(X.max()) + 1
    max_features = max(1, math.ceil(math.sqrt(X.shape[1])))

    def build(t):
        return _fit_one_tree(X, y_enc, n_values, n_classes, max_features, seed, t)

    if threads is not None and threads > 1:
        with ThreadPoolExecutor(max_workers=threads) as pool:
            trees = list(pool.map(build, range(n_trees)))
    else:
        trees = [build(t) for t in range(n_trees)]
    return RandomForestModel(trees, class_labels, X.shape[1], int(seed))


def _route(tree: DecisionTree, X: np.ndarray) -> np.ndarray:
    """Leaf index reached by each row."""
    idx = np.zeros(X.shape[0], dtype=np.int32)
    active = tree.feature[idx] >= 0
    while active.any():
        rows = np.nonzero(active)[0]
        nd = idx[rows]
        go_left = X[rows, tree.feature[nd]] <= tree.threshold[nd]
        idx[rows] = np.where(go_left, tree.left[nd], tree.right[nd])
        active[rows] = tree.feature[idx[rows]] >= 0
    return idx


def predict_proba(model: RandomForestModel, X) -> np.ndarray:
    """Average leaf class frequencies over trees; rows sum to 1."""
    X = np.ascontiguousarray(X, dtype=np.int64)
    if X.ndim != 2 or X.shape[1] != model.n_features:
        raise FeatureMismatch(
            f"expected {model.n_features} features, got {X.shape[1] if X.ndim == 2 else 'non-matrix'}"
        )
    acc = np.zeros((X.shape[0], model.n_classes))
    for tree in model.trees:
        leaf_counts = tree.counts[_route(tree, X)]
        acc += leaf_counts / leaf_counts.sum(axis=1, keepdims=True)
    return acc / len(model.trees)


def predict(model: RandomForestModel, X) -> np.ndarray:
    """Argmax class labels (lowest label wins intra-row probability ties)."""
    proba = predict_proba(model, X)
    return model.class_labels[np.argmax(proba, axis=1)]


def forest_to_dict(model: RandomForestModel) -> dict:
    return {
        "seed": model.seed,
        "n_features": model.n_features,
        "class_labels": [int(c) for c in model.class_labels],
        "trees": [
            {
                "feature": tree.feature.tolist(),
                "threshold": tree.threshold.tolist(),
                "left": tree.left.tolist(),
                "right": tree.right.tolist(),
                "counts": tree.counts.tolist(),
            }
            for tree in model.trees
        ],
    }


def forest_from_dict(payload: dict) -> RandomForestModel:
    trees = [
        DecisionTree(
            np.asarray(t["feature"], dtype=np.int32),
            np.asarray(t["threshold"], dtype=np.float64),
            np.asarray(t["left"], dtype=np.int32),
            np.asarray(t["right"], dtype=np.int32),
            np.asarray(t["counts"], dtype=np.float64),
        )
        for t in payload["trees"]
    ]
    return RandomForestModel(
        trees,
        np.asarray(payload["class_labels"], dtype=np.int64),
        int(payload["n_features"]),
        int(payload["seed"]),
    )
