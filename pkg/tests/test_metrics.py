import numpy as np
import pytest

from app.common.exceptions import InvalidInputError, UndefinedMetricError
from app.core.schema import FineLabel, Subcategory
from app.metrics import (
    ScoredSample,
    aggregate_runs,
    auc,
    auc_fg,
    auc_from_groups,
    auc_pairwise,
    midranks,
    uncertain_spread,
)

ATY, TYP = Subcategory.ATYPICAL, Subcategory.TYPICAL


def random_instance(rng):
    n0, n1 = rng.integers(1, 201, size=2)
    # coarse rounding forces plenty of ties
    decimals = rng.integers(1, 4)
    s0 = np.round(rng.uniform(0, 1, n0), decimals)
    s1 = np.round(rng.uniform(0, 1, n1) ** 0.7, decimals)
    return s0, s1


class TestAuc:
    def test_perfect_separation(self):
        assert auc_from_groups([0.2], [0.8]) == 1.0

    def test_complete_tie(self):
        assert auc_from_groups([0.5], [0.5]) == 0.5

    def test_pairwise_example(self):
        assert auc_from_groups([0.1, 0.4, 0.35], [0.8, 0.3]) == pytest.approx(4 / 6, abs=1e-12)

    def test_scored_samples(self):
        samples = [
            ScoredSample(score=0.1, group=0),
            ScoredSample(score=0.9, group=1),
            ScoredSample(score=0.4, group=1),
        ]
        assert auc(samples) == 1.0

    def test_empty_group(self):
        with pytest.raises(UndefinedMetricError):
            auc_from_groups([], [0.3])

    def test_non_finite_scores(self):
        with pytest.raises(InvalidInputError):
            auc_from_groups([float("nan")], [0.3])

    def test_midranks(self):
        np.testing.assert_array_equal(midranks(np.array([0.3, 0.1, 0.3, 0.2])), [3.5, 1.0, 3.5, 2.0])

    def test_matches_pairwise_oracle(self):
        rng = np.random.default_rng(2024)
        for _ in range(500):
            s0, s1 = random_instance(rng)
            assert abs(auc_from_groups(s0, s1) - auc_pairwise(s0, s1)) <= 1e-12

    def test_invariant_under_increasing_transform(self):
        rng = np.random.default_rng(5)
        for _ in range(50):
            s0, s1 = random_instance(rng)
            transformed = auc_from_groups(np.exp(3.0 * s0) - 7.0, np.exp(3.0 * s1) - 7.0)
            assert transformed == pytest.approx(auc_from_groups(s0, s1), abs=1e-12)

    def test_flipped_groups_sum_to_one(self):
        rng = np.random.default_rng(6)
        for _ in range(50):
            s0, s1 = random_instance(rng)
            assert auc_from_groups(s0, s1) + auc_from_groups(s1, s0) == pytest.approx(1.0, abs=1e-12)

    def test_constant_scores(self):
        assert auc_from_groups(np.full(7, 0.3), np.full(4, 0.3)) == 0.5


class TestAucFg:
    def test_examples(self):
        assert auc_fg([(0.1, ATY), (0.9, TYP)]) == 1.0
        assert auc_fg([(0.9, ATY), (0.1, TYP)]) == 0.0

    def test_accepts_fine_labels(self):
        assert auc_fg([(0.1, FineLabel(subcategory=TYP)), (0.9, FineLabel(subcategory=TYP))] + [(0.0, ATY)]) == 1.0

    def test_missing_subcategory(self):
        with pytest.raises(UndefinedMetricError):
            auc_fg([(0.1, TYP), (0.4, TYP)])

    def test_matches_oracle(self):
        rng = np.random.default_rng(50)
        aty, typ = rng.uniform(size=50), rng.uniform(size=50)
        positives = [(s, ATY) for s in aty] + [(s, TYP) for s in typ]
        assert auc_fg(positives) == pytest.approx(auc_pairwise(aty, typ), abs=1e-12)


class TestAggregateRuns:
    def test_constant(self):
        report = aggregate_runs([0.8, 0.8, 0.8])
        assert report.mean == pytest.approx(0.8)
        assert report.std == pytest.approx(0.0, abs=1e-15)

    def test_two_runs(self):
        report = aggregate_runs([0.7, 0.9], name="auc_fg")
        assert report.mean == pytest.approx(0.8)
        assert report.std == pytest.approx(0.14142, abs=1e-5)
        assert report.name == "auc_fg"
        assert report.per_run == (0.7, 0.9)

    def test_single_run(self):
        report = aggregate_runs([0.8038])
        assert (report.mean, report.std) == (0.8038, 0.0)

    def test_empty(self):
        with pytest.raises(InvalidInputError):
            aggregate_runs([])


class TestUncertainSpread:
    def test_uniform_predictions(self):
        assert uncertain_spread([0.5, 0.5]) == 0.0

    def test_mean_distance(self):
        assert uncertain_spread([0.1, 0.7]) == pytest.approx(0.3)

    def test_empty(self):
        with pytest.raises(UndefinedMetricError):
            uncertain_spread([])
