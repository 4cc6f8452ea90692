import numpy as np
import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

from coeye import Dataset, choose_sfa_normalization, search_lenses, search_lenses_random
from coeye.errors import NoFeasibleLens
from coeye.lenses import (
    SAX,
    SFA,
    Lens,
    LensGrid,
    select_per_alpha,
    select_within_margin,
    stratified_fold_assignment,
)
from tests.conftest import synth_dataset


class TestSelectionRule:
    def test_margin_example(self):
        # one alphabet, word sizes scoring {10: 0.90, 20: 0.895, 30: 0.70}
        selected = select_within_margin([0.90, 0.895, 0.70])
        assert selected == [0, 1]

    def test_single_pair_always_selected(self):
        assert select_within_margin([0.12]) == [0]

    def test_exact_boundary_included(self):
        assert select_within_margin([1.0, 0.99, 0.9899999]) == [0, 1]

    @given(st.lists(st.floats(0, 1, allow_nan=False), min_size=1, max_size=40))
    @settings(max_examples=200, deadline=None)
    def test_selected_equals_within_margin_set(self, accs):
        selected = set(select_within_margin(accs))
        best = max(accs)
        expected = {i for i, a in enumerate(accs) if a >= best - 0.01 - 1e-12}
        assert selected == expected
        assert selected  # the max itself always qualifies

    def test_per_alpha_rows_filtered_independently(self):
        pairs = [(3, 10), (3, 20), (4, 10), (4, 20), (5, 10), (5, 20)]
        accs = [0.90, 0.895, 0.70, 0.80, 0.50, 0.50]
        # alpha 3 keeps both, alpha 4 keeps only w=20, alpha 5 ties keep both
        assert select_per_alpha(pairs, accs) == [0, 1, 3, 4, 5]

    def test_per_alpha_every_alphabet_contributes(self):
        rng = np.random.default_rng(0)
        pairs = [(a, w) for a in (3, 4, 5, 6) for w in (10, 20, 30)]
        for _ in range(50):
            accs = rng.uniform(0, 1, len(pairs))
            keep = select_per_alpha(pairs, accs)
            assert {pairs[i][0] for i in keep} == {3, 4, 5, 6}
            for alpha in (3, 4, 5, 6):
                row = [i for i, (a, _) in enumerate(pairs) if a == alpha]
                row_best = max(accs[i] for i in row)
                expected = {i for i in row if accs[i] >= row_best - 0.01 - 1e-12}
                assert set(keep) & set(row) == expected


class TestGrid:
    def test_default_sax_single_uniform_word(self):
        grid = LensGrid()
        assert grid.sax_pairs(64) == [(a, 64) for a in range(3, 27)]
        assert grid.sax_pairs(500) == [(a, 128) for a in range(3, 27)]

    def test_default_sfa_words(self):
        grid = LensGrid(sfa_alphas=(3,))
        assert grid.sfa_pairs(24) == [(3, 10), (3, 20)]
        assert grid.sfa_pairs(512) == [(3, w) for w in range(10, 131, 10)]

    def test_sfa_words_filtered_to_even_and_feasible(self):
        grid = LensGrid(sfa_alphas=(4,), sfa_word_lengths=(5, 6, 8, 200))
        assert grid.sfa_pairs(16) == [(4, 6), (4, 8)]

    def test_sax_words_filtered_to_feasible(self):
        grid = LensGrid(sax_alphas=(3,), sax_word_lengths=(4, 99))
        assert grid.sax_pairs(8) == [(3, 4)]

    def test_alpha_bounds_validated(self):
        with pytest.raises(ValueError):
            LensGrid(sax_alphas=(27,))
        with pytest.raises(ValueError):
            LensGrid(sfa_alphas=(1,))

    def test_lens_validation(self):
        with pytest.raises(ValueError):
            Lens(2, 4, 8)
        with pytest.raises(ValueError):
            Lens(SAX, 30, 8)


class TestFolds:
    @given(
        labels=st.lists(st.integers(0, 4), min_size=10, max_size=80),
        folds=st.integers(2, 6),
        seed=st.integers(0, 1000),
    )
    @settings(max_examples=100, deadline=None)
    def test_stratified_deviation_at_most_one(self, labels, folds, seed):
        y = np.asarray(labels)
        fold = stratified_fold_assignment(y, folds, seed)
        for label in np.unique(y):
            per_fold = np.bincount(fold[y == label], minlength=folds)
            assert per_fold.max() - per_fold.min() <= 1

    def test_deterministic(self):
        y = np.array([0, 0, 0, 1, 1, 1, 1, 2, 2, 2])
        a = stratified_fold_assignment(y, 3, 5)
        b = stratified_fold_assignment(y, 3, 5)
        assert np.array_equal(a, b)

    def test_every_fold_used(self):
        y = np.array([0] * 10 + [1] * 10)
        fold = stratified_fold_assignment(y, 5, 1)
        assert set(fold.tolist()) == {0, 1, 2, 3, 4}


class TestSearch:
    def small_grid(self):
        return LensGrid(sax_alphas=(3, 4), sfa_alphas=(3, 4), folds=3)

    def test_selected_within_margin_of_alpha_best(self, waves):
        grid = LensGrid(sfa_alphas=(3, 4), sfa_word_lengths=(10, 12, 14, 16), folds=3)
        lenses = search_lenses(waves, "sfa", grid, seed=1, trees=15)
        assert {l.alpha for l in lenses} == {3, 4}  # every alphabet contributes
        for alpha in (3, 4):
            row = [l.cv_accuracy for l in lenses if l.alpha == alpha]
            assert max(row) - min(row) <= 0.01 + 1e-12

    def test_sax_lens_count_tracks_alphabet_count(self, waves):
        lenses = search_lenses(waves, "sax", self.small_grid(), seed=1, trees=15)
        # a single uniform word per alphabet: each alphabet keeps its only pair
        assert [l.alpha for l in lenses] == [3, 4]
        assert all(l.s == SAX and not l.drop_dc for l in lenses)

    def test_order_ascending_alpha_then_w(self, waves):
        grid = LensGrid(sfa_alphas=(4, 3), sfa_word_lengths=(12, 10), folds=3)
        lenses = search_lenses(waves, "sfa", grid, seed=0, trees=10)
        keys = [(l.alpha, l.w) for l in lenses]
        assert keys == sorted(keys)

    def test_deterministic_and_worker_independent(self, waves):
        grid = self.small_grid()
        a = search_lenses(waves, "sfa", grid, seed=3, trees=10)
        b = search_lenses(waves, "sfa", grid, seed=3, trees=10)
        c = search_lenses(waves, "sfa", grid, seed=3, trees=10, workers=2)
        assert a == b == c

    def test_separable_data_gets_high_accuracy(self, waves):
        lenses = search_lenses(waves, "sfa", self.small_grid(), seed=0, trees=25)
        assert max(l.cv_accuracy for l in lenses) >= 0.9

    def test_no_feasible_lens(self):
        tiny = Dataset(np.random.default_rng(0).normal(size=(6, 8)), np.array([0, 0, 0, 1, 1, 1]))
        with pytest.raises(NoFeasibleLens):
            search_lenses(tiny, "sfa", LensGrid(), seed=0, trees=5)

    def test_loo_used_for_singleton_class(self):
        rng = np.random.default_rng(2)
        X = np.vstack([rng.normal(0, 1, (5, 16)), rng.normal(8, 1, (1, 16))])
        y = np.array([0] * 5 + [1])
        ds = Dataset(X, y)
        lenses = search_lenses(ds, "sax", LensGrid(sax_alphas=(3,), folds=5), seed=0, trees=10)
        assert lenses  # LOO path executes without error and returns the single pair


class TestRandomSearch:
    def test_budget_distinct_pairs(self, waves):
        grid = LensGrid(sfa_alphas=tuple(range(3, 11)))
        lenses = search_lenses_random(waves, "sfa", budget=5, seed=0, grid=grid)
        assert len(lenses) == 5
        assert len({(l.alpha, l.w) for l in lenses}) == 5

    def test_budget_clipped_to_grid(self, waves):
        grid = LensGrid(sax_alphas=(3, 4, 5))
        lenses = search_lenses_random(waves, "sax", budget=99, seed=0, grid=grid)
        assert len(lenses) == len(grid.sax_pairs(waves.n))

    def test_deterministic(self, waves):
        grid = LensGrid(sfa_alphas=tuple(range(3, 11)))
        a = search_lenses_random(waves, "sfa", budget=4, seed=6, grid=grid)
        b = search_lenses_random(waves, "sfa", budget=4, seed=6, grid=grid)
        assert a == b


class TestSfaNormalization:
    def test_shifted_constant_classes_exact_tie_keeps_dc(self):
        # constant series normalize to zeros: both conventions see identical
        # features, tie resolves to keeping the DC coefficient
        X = np.vstack([np.full((5, 16), 5.0), np.full((5, 16), 9.0)])
        ds = Dataset(X, np.array([0] * 5 + [1] * 5))
        grid = LensGrid(sfa_alphas=(3,), folds=5)
        assert choose_sfa_normalization(ds, grid, seed=0, trees=10) is False

    def test_deterministic(self, waves):
        grid = LensGrid(sfa_alphas=(3, 4), folds=3)
        flags = {choose_sfa_normalization(waves, grid, seed=5, trees=10) for _ in range(2)}
        assert len(flags) == 1

    def test_shape_classes_return_valid_flag(self):
        ds = synth_dataset("bumps", seed=3)
        grid = LensGrid(sfa_alphas=(3,), folds=3)
        assert choose_sfa_normalization(ds, grid, seed=1, trees=10) in (True, False)
