import math

import numpy as np
import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

from leximax import rounding, sampling
from leximax.errors import RangeError, ValidationError
from leximax.model import Instance, MarginalVector


class TestDependentRounding:
    def test_integral_unchanged(self):
        cohort = rounding.dependent_round([1.0, 0.0, 1.0], 5)
        assert cohort.selected == (0, 2)
        assert cohort.indicator.tolist() == [1, 0, 1]

    def test_near_integral_snapped(self):
        assert rounding.dependent_round([1 - 1e-10, 1e-10], 0).selected == (0,)

    def test_half_half(self):
        picks = rounding.dependent_round_many([0.5, 0.5], 100_000, 1)
        assert np.all(picks.sum(axis=1) == 1)
        assert abs(picks[:, 0].mean() - 0.5) <= 0.005

    def test_non_integral_sum(self):
        with pytest.raises(ValidationError):
            rounding.dependent_round([0.3, 0.3], 0)

    def test_accepts_marginal_vector(self):
        x = MarginalVector([0.25, 0.25, 0.5], 1)
        assert len(rounding.dependent_round(x, 3)) == 1

    def test_seed_reproducible(self):
        x = [0.3, 0.7, 0.5, 0.5]
        assert np.array_equal(rounding.dependent_round_many(x, 100, 9),
                              rounding.dependent_round_many(x, 100, 9))

    def test_negative_correlation(self):
        picks = rounding.dependent_round_many([0.5, 0.5], 20_000, 2).astype(float)
        cov = np.cov(picks.T)[0, 1]
        assert cov == pytest.approx(-0.25, abs=0.01)

    @settings(max_examples=60, deadline=None)
    @given(st.integers(2, 12), st.integers(0, 10**6))
    def test_exact_size(self, n, seed):
        rng = np.random.default_rng(seed)
        k = int(rng.integers(1, n + 1))
        x = np.mean([rng.permutation(n) < k for _ in range(5)], axis=0)
        picks = rounding.dependent_round_many(x, 200, seed)
        assert np.all(picks.sum(axis=1) == k)
        assert set(np.unique(picks)) <= {0, 1}


class TestSampling:
    def test_extremes(self):
        assert rounding.Cohort.from_indicator([0, 0]).selected == ()
        assert sampling.sample_cohort(MarginalVector([0.0, 0.0], 0), 1).selected == ()
        assert sampling.sample_cohort(MarginalVector([1.0, 1.0], 2), 1).selected == (0, 1)

    def test_mean_size(self):
        trials = 100_000
        picks = sampling.sample_cohorts(MarginalVector(np.full(10, 0.5), 5), trials, 3)
        sizes = picks.sum(axis=1)
        assert abs(sizes.mean() - 5) <= 4 * math.sqrt(2.5 / trials)

    def test_marginals(self):
        x = MarginalVector([0.1, 0.4, 0.5, 1.0], 2)
        trials = 100_000
        freq = sampling.sample_cohorts(x, trials, 4).mean(axis=0)
        assert np.all(np.abs(freq - x.x) <= 4 * np.sqrt(x.x * (1 - x.x) / trials) + 1e-12)

    def test_bound_formula(self):
        assert sampling.chernoff_bound(25, 100) == pytest.approx(3.7267e-6, rel=1e-4)
        assert sampling.chernoff_bound(10, 100) == pytest.approx(math.exp(-2))

    def test_delta_beyond_k_gives_zero_tail(self):
        inst = Instance.from_values(np.random.default_rng(5).random((20, 3)), 4)
        x = MarginalVector(np.full(20, 0.2), 4)
        report = sampling.concentration_report(inst, x, 4.0, 20_000, 6)
        assert all(g.empirical_tail == 0.0 for g in report.groups)
        assert report.all_within_bound

    def test_report_fields(self):
        inst = Instance.from_values(np.full((4, 2), 0.5), 2)
        report = sampling.concentration_report(inst, MarginalVector(np.full(4, 0.5), 2), 0.5, 1000, 7)
        assert [g.group for g in report.groups] == ["G1", "G2"]
        assert report.groups[0].expected_utility == pytest.approx(1.0)
        assert report.trials == 1000 and report.seed == 7

    def test_bad_arguments(self):
        inst = Instance.from_values(np.full((2, 1), 0.5), 1)
        x = MarginalVector([0.5, 0.5], 1)
        with pytest.raises(RangeError):
            sampling.concentration_report(inst, x, 0.0, 10, 1)
        with pytest.raises(RangeError):
            sampling.concentration_report(inst, x, 0.1, 0, 1)

    def test_chunking_matches_single_pass(self, monkeypatch):
        inst = Instance.from_values(np.random.default_rng(8).random((6, 2)), 3)
        x = MarginalVector(np.full(6, 0.5), 3)
        whole = sampling.tail_counts(inst, x, [0.5], 1000, 9)
        monkeypatch.setattr(sampling, "CHUNK", 1000)
        assert np.array_equal(whole, sampling.tail_counts(inst, x, [0.5], 1000, 9))
