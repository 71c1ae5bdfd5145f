"""KS machinery, K-function and tail diagnostics."""

import numpy as np
import pytest

import ginibre_balls as gb


class TestKSTwoSample:
    def test_identical_samples(self):
        x = np.random.default_rng(0).normal(size=300)
        rep = gb.ks_two_sample(x, x.copy())
        assert rep.statistic == 0.0
        assert rep.passed

    def test_disjoint_supports(self):
        x = np.random.default_rng(1).normal(size=200)
        rep = gb.ks_two_sample(x, x + 10.0)
        assert rep.statistic == 1.0
        assert rep.p_value < 1e-10
        assert not rep.passed

    def test_needs_sample_size(self):
        with pytest.raises(ValueError):
            gb.ks_two_sample(np.arange(10.0), np.arange(100.0))

    def test_degenerate_samples(self):
        with pytest.raises(ValueError):
            gb.ks_two_sample(np.ones(100), np.ones(100))

    def test_calibration_at_one_percent(self):
        rng = np.random.default_rng(42)
        rejections = 0
        trials = 1000
        for _ in range(trials):
            a = rng.normal(size=1000)
            b = rng.normal(size=1000)
            if not gb.ks_two_sample(a, b, level=0.01).passed:
                rejections += 1
        # binomial(1000, ~0.01): allow a generous +-3.5 sigma band around 1%
        assert 0.002 <= rejections / trials <= 0.023

    def test_split_half_self_consistency(self):
        rng = np.random.default_rng(7)
        passes = 0
        trials = 300
        for _ in range(trials):
            x = rng.normal(size=2000)
            if gb.ks_two_sample(x[:1000], x[1000:], level=0.01).passed:
                passes += 1
        assert passes / trials >= 0.95


class TestHolm:
    def test_all_large_pvalues_pass(self):
        assert not gb.holm_reject([0.5, 0.9, 0.2], level=0.01).any()

    def test_step_down_ordering(self):
        rej = gb.holm_reject([1e-6, 0.02, 0.5], level=0.05)
        assert rej.tolist() == [True, True, False]

    def test_single_pvalue(self):
        assert gb.holm_reject([0.005], level=0.01).tolist() == [True]


class TestKTheoretical:
    def test_zero(self):
        assert gb.k_theoretical(10.0, 0.0) == 0.0

    def test_reference_value(self):
        # pi * exp(-1) at c = 1, r = 1
        assert gb.k_theoretical(1.0, 1.0) == pytest.approx(1.1557273497909217, rel=1e-12)

    def test_poisson_limit(self):
        gap = np.pi * 1.0**2 - gb.k_theoretical(1e4, 1.0)
        assert 0 < gap < 1e-3

    def test_repulsion_deficit_positive(self):
        r = np.linspace(0.01, 1.0, 20)
        deficit = np.pi * r**2 - gb.k_theoretical(50.0, r)
        assert np.all(deficit > 0)


class TestRipleyK:
    def _poisson_patterns(self, n_rep=250, intensity=30 / np.pi, seed=3):
        w = gb.DiskWindow(0j, 1.0)
        return [
            gb.sample_poisson(intensity, w, gb.replicate_rng(seed, 0, r)) for r in range(n_rep)
        ]

    def test_poisson_matches_pi_r_squared(self):
        pats = self._poisson_patterns()
        r_grid = np.linspace(0.05, 0.45, 9)
        est = gb.ripley_k_estimate(pats, r_grid)
        target = np.pi * r_grid**2
        assert np.all(np.abs(est.k_hat - target) <= 3.5 * est.band)

    def test_ginibre_deficit_and_match(self):
        w = gb.DiskWindow(0j, 1.0)
        pats = [
            gb.sample_ginibre(gb.GinibreConfig(c=50.0), w, gb.replicate_rng(5, 0, r))
            for r in range(250)
        ]
        r_grid = np.linspace(0.05, 0.45, 9)
        est = gb.ripley_k_estimate(pats, r_grid)
        theo = gb.k_theoretical(50.0, r_grid)
        assert np.all(np.abs(est.k_hat - theo) <= 3.5 * est.band)
        small = r_grid <= 0.2
        assert np.all(est.k_hat[small] < np.pi * r_grid[small] ** 2)

    def test_k_hat_monotone(self):
        pats = self._poisson_patterns(n_rep=200)
        est = gb.ripley_k_estimate(pats, np.linspace(0.05, 0.45, 9))
        assert np.all(np.diff(est.k_hat) >= 0)

    def test_replicate_guard(self):
        pats = self._poisson_patterns(n_rep=10)
        with pytest.raises(ValueError):
            gb.ripley_k_estimate(pats, np.array([0.2]))

    def test_grid_range_guard(self):
        pats = self._poisson_patterns(n_rep=200)
        with pytest.raises(ValueError):
            gb.ripley_k_estimate(pats, np.array([0.9]))


class TestTailIndex:
    def test_exact_stable_recovers_gamma(self):
        vals = gb.StableOracle(gamma=1.5, scale=1.0).sample(
            np.random.default_rng(102), 100_000
        )
        assert 1.35 <= gb.tail_index_estimate(vals) <= 1.65

    def test_gaussian_flags_no_heavy_tail(self):
        vals = np.random.default_rng(11).normal(size=100_000)
        assert gb.tail_index_estimate(vals) > 3.0

    def test_radius_law_tail(self):
        law = gb.RadiusLaw(beta=3.0)
        vals = law.sample(np.random.default_rng(13), 150_000)
        assert gb.tail_index_estimate(vals) == pytest.approx(3.0, abs=0.15)

    def test_scale_invariance(self):
        vals = gb.StableOracle(gamma=1.5, scale=1.0).sample(
            np.random.default_rng(17), 100_000
        )
        a = gb.tail_index_estimate(vals)
        b = gb.tail_index_estimate(7.3 * vals)
        assert a == pytest.approx(b, abs=1e-9)

    def test_too_few_tail_points(self):
        with pytest.raises(ValueError):
            gb.tail_index_estimate(np.random.default_rng(1).normal(size=1000))


class TestSkewness:
    def test_symmetric_near_zero(self):
        vals = np.random.default_rng(3).normal(size=200_000)
        assert abs(gb.sample_skewness(vals)) < 4 * np.sqrt(6.0 / vals.size)

    def test_exponential_reference(self):
        vals = np.random.default_rng(5).exponential(size=300_000)
        assert gb.sample_skewness(vals) == pytest.approx(2.0, abs=0.1)
