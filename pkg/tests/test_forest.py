import numpy as np
import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

from coeye.errors import EmptyTrainingSet, FeatureMismatch
from coeye.forest import (
    fit_forest,
    forest_from_dict,
    forest_to_dict,
    predict,
    predict_proba,
)


def separable_fixture(seed=0, rows_per_class=50, width=10):
    """Two symbol populations with disjoint value ranges."""
    rng = np.random.default_rng(seed)
    X = np.vstack(
        [
            rng.integers(0, 3, size=(rows_per_class, width)),
            rng.integers(4, 7, size=(rows_per_class, width)),
        ]
    )
    y = np.array([1] * rows_per_class + [2] * rows_per_class)
    return X, y


class TestFit:
    def test_single_class_pure_probability(self):
        X = np.random.default_rng(0).integers(0, 4, size=(12, 6))
        y = np.full(12, 3)
        model = fit_forest(X, y, n_trees=10, seed=1)
        proba = predict_proba(model, X)
        assert np.array_equal(proba, np.ones((12, 1)))
        assert np.all(predict(model, X) == 3)

    def test_separable_fixture_perfect_train_accuracy(self):
        X, y = separable_fixture()
        model = fit_forest(X, y, n_trees=100, seed=7)
        assert np.mean(predict(model, X) == y) == 1.0
        proba = predict_proba(model, X)
        assert np.all(np.argmax(proba, axis=1) == (y == 2).astype(int))

    def test_deterministic_given_seed(self):
        X, y = separable_fixture(seed=3)
        probe = np.random.default_rng(9).integers(0, 7, size=(20, 10))
        a = predict_proba(fit_forest(X, y, n_trees=30, seed=5), probe)
        b = predict_proba(fit_forest(X, y, n_trees=30, seed=5), probe)
        assert np.array_equal(a, b)

    def test_different_seeds_differ(self):
        X, y = separable_fixture(seed=3)
        probe = np.random.default_rng(9).integers(0, 7, size=(50, 10))
        a = predict_proba(fit_forest(X, y, n_trees=5, seed=1), probe)
        b = predict_proba(fit_forest(X, y, n_trees=5, seed=2), probe)
        assert not np.array_equal(a, b)

    def test_worker_counts_bit_identical(self):
        import os

        X, y = separable_fixture(seed=4)
        probe = np.random.default_rng(2).integers(0, 7, size=(25, 10))
        reference = predict_proba(fit_forest(X, y, n_trees=40, seed=11, threads=1), probe)
        for threads in (2, os.cpu_count()):
            got = predict_proba(fit_forest(X, y, n_trees=40, seed=11, threads=threads), probe)
            assert np.array_equal(reference, got)

    def test_empty_training_set(self):
        with pytest.raises(EmptyTrainingSet):
            fit_forest(np.empty((0, 4), dtype=int), np.empty(0, dtype=int))

    def test_tree_count(self):
        X, y = separable_fixture(rows_per_class=5)
        assert len(fit_forest(X, y, n_trees=17, seed=0).trees) == 17

    def test_leaf_counts_positive(self):
        X, y = separable_fixture(seed=8, rows_per_class=10)
        model = fit_forest(X, y, n_trees=20, seed=0)
        for tree in model.trees:
            leaves = tree.feature < 0
            assert np.all(tree.counts[leaves].sum(axis=1) > 0)

    def test_bootstrap_unique_fraction(self):
        # n draws with replacement leave ~63.2% unique on average
        X, y = separable_fixture(seed=1, rows_per_class=25)
        model = fit_forest(X, y, n_trees=100, seed=13)
        fraction = np.mean([t.bootstrap_unique / X.shape[0] for t in model.trees])
        assert 0.58 <= fraction <= 0.68


class TestPredict:
    def test_rows_sum_to_one(self):
        X, y = separable_fixture(seed=2)
        model = fit_forest(X, y, n_trees=25, seed=3)
        probe = np.random.default_rng(0).integers(0, 7, size=(40, 10))
        proba = predict_proba(model, probe)
        assert np.allclose(proba.sum(axis=1), 1.0, atol=1e-9)
        assert np.all(proba >= 0)

    def test_single_tree_pure_leaf_one_hot(self):
        X = np.array([[0, 0], [5, 5]])
        y = np.array([1, 2])
        model = fit_forest(X, y, n_trees=1, seed=21)
        proba = predict_proba(model, np.array([[0, 0], [5, 5]]))
        for row in proba:
            assert set(row.tolist()) <= {0.0, 1.0}

    def test_width_mismatch(self):
        X, y = separable_fixture()
        model = fit_forest(X, y, n_trees=2, seed=0)
        with pytest.raises(FeatureMismatch):
            predict_proba(model, np.zeros((3, 4), dtype=int))

    @given(st.integers(0, 2**31 - 1), st.integers(2, 5))
    @settings(max_examples=25, deadline=None)
    def test_probability_rows_always_normalized(self, seed, n_classes):
        rng = np.random.default_rng(seed)
        X = rng.integers(0, 6, size=(20, 5))
        y = rng.integers(0, n_classes, size=20)
        model = fit_forest(X, y, n_trees=10, seed=seed)
        proba = predict_proba(model, rng.integers(0, 6, size=(10, 5)))
        assert np.allclose(proba.sum(axis=1), 1.0, atol=1e-9)


class TestSerialization:
    def test_round_trip_predictions(self):
        X, y = separable_fixture(seed=6)
        model = fit_forest(X, y, n_trees=15, seed=2)
        clone = forest_from_dict(forest_to_dict(model))
        probe = np.random.default_rng(1).integers(0, 7, size=(30, 10))
        assert np.array_equal(predict_proba(model, probe), predict_proba(clone, probe))
