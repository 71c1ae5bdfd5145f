"""Mass-field evaluation, exact centering and truncation bias."""

import numpy as np
import pytest

import ginibre_balls as gb

LAW = gb.RadiusLaw(beta=3.0)
MU = gb.UniformDiskMeasure(0j, 0.4, 1.0)


def _marked(c, rho, window_radius, seed, rep=0):
    window = gb.DiskWindow(0j, window_radius)
    pat = gb.sample_ginibre(gb.GinibreConfig(c=c), window, gb.replicate_rng(seed, 0, rep))
    return gb.mark_pattern(pat, LAW, rho, gb.replicate_rng(seed, 1, rep))


class TestFieldValue:
    def test_empty_pattern(self):
        window = gb.DiskWindow(0j, 2.0)
        pat = gb.PointPattern(np.zeros(0, dtype=complex), window, c=1.0)
        marked = gb.mark_pattern(pat, LAW, 1.0, gb.replicate_rng(0, 0, 0))
        assert gb.field_value(marked, MU, 1.0).value == 0.0

    def test_single_covering_ball(self):
        window = gb.DiskWindow(0j, 6.0)
        marked = gb.MarkedPattern(
            centers=np.array([0j]), radii=np.array([5.0]), window=window, c=1.0, rho=1.0
        )
        assert gb.field_value(marked, MU, 5.5).value == pytest.approx(1.0, rel=1e-12)

    def test_monotone_in_truncation(self):
        marked = _marked(c=20.0, rho=0.5, window_radius=3.0, seed=11)
        vals = [gb.field_value(marked, MU, R).value for R in (0.5, 1.0, 2.0, 2.6)]
        assert all(b >= a for a, b in zip(vals[:-1], vals[1:]))

    def test_edge_guard(self):
        marked = _marked(c=5.0, rho=0.5, window_radius=1.0, seed=2)
        with pytest.raises(gb.EdgeBiasError):
            gb.field_value(marked, MU, 2.0)  # needs window >= 0.4 + 2.0

    def test_exact_linearity(self):
        other = gb.UniformRectMeasure(-0.3, 0.3, -0.3, 0.3, mass=0.5)
        combo = gb.linear_combination([(2.0, MU), (3.0, other)])
        marked = _marked(c=20.0, rho=0.4, window_radius=2.0, seed=5)
        lhs = gb.field_value(marked, combo, 1.2).value
        rhs = 2.0 * gb.field_value(marked, MU, 1.2).value + 3.0 * gb.field_value(
            marked, other, 1.2
        ).value
        assert lhs == rhs  # bitwise: combination evaluators distribute


class TestExpectedMass:
    def test_constructed_identity(self):
        # c rho^2 = pi / V and unit mass gives expectation exactly one
        c = 2.0
        rho = np.sqrt(np.pi / (LAW.mean_volume * c))
        assert gb.expected_mass(MU, LAW, c, rho) == pytest.approx(1.0, rel=1e-12)

    def test_reference_value(self):
        mu = gb.UniformDiskMeasure(0j, 1.0, np.pi)
        # V * mu(C) * c * rho^2 / pi with c = pi, rho = 1: V * pi / pi * pi... = V * pi / pi
        val = gb.expected_mass(mu, LAW, np.pi, 1.0)
        assert val == pytest.approx(LAW.mean_volume * np.pi * np.pi / np.pi, rel=1e-12)
        assert val == pytest.approx(np.pi * 11.0 / 9.0 * np.pi / 1.0 / np.pi * np.pi, rel=1e-9)

    def test_normalized_mean_is_rho_free(self):
        base = gb.expected_mass(MU, LAW, 1.0, 1.0)
        for c, rho in [(2.0, 0.3), (5.0, 0.1), (0.5, 2.0)]:
            val = gb.expected_mass(MU, LAW, c, rho) / (c * rho**2)
            assert val == pytest.approx(base, rel=1e-12)
            assert val == pytest.approx(LAW.mean_volume * MU.total_mass / np.pi, rel=1e-12)

    def test_truncated_matches_untruncated_at_infinity(self):
        assert gb.expected_mass_truncated(MU, LAW, 3.0, 0.2, np.inf) == gb.expected_mass(
            MU, LAW, 3.0, 0.2
        )

    def test_truncated_centering_monte_carlo(self):
        c, rho, R = 15.0, 0.4, 1.0
        window_radius = MU.support_radius + R
        vals = []
        for rep in range(400):
            window = gb.DiskWindow(0j, window_radius)
            pat = gb.sample_ginibre(
                gb.GinibreConfig(c=c), window, gb.replicate_rng(77, 0, rep)
            )
            marked = gb.mark_pattern(pat, LAW, rho, gb.replicate_rng(77, 1, rep))
            vals.append(gb.field_value(marked, MU, R).value)
        vals = np.array(vals)
        se = vals.std(ddof=1) / np.sqrt(vals.size)
        assert abs(vals.mean() - gb.expected_mass_truncated(MU, LAW, c, rho, R)) <= 3.5 * se


class TestTruncationBias:
    def test_vanishes(self):
        assert gb.truncation_bias_bound(MU, LAW, 1.0, 0.5, 1e9) < 1e-8

    def test_power_law_halving(self):
        b1 = gb.truncation_bias_bound(MU, LAW, 1.0, 0.5, 2.0)
        b2 = gb.truncation_bias_bound(MU, LAW, 1.0, 0.5, 4.0)
        assert b1 / b2 == pytest.approx(2.0, rel=1e-12)  # beta = 3

    def test_plugin_value(self):
        # c rho^beta = 1, unit tail constant, unit mass, R = 10 -> 0.1
        mu1 = gb.UniformDiskMeasure(0j, 0.4, 1.0)
        val = gb.truncation_bias_bound(mu1, LAW, 8.0, 0.5, 10.0)
        assert val == pytest.approx(0.1, rel=1e-12)

    def test_requires_tail_truncation(self):
        with pytest.raises(ValueError):
            gb.truncation_bias_bound(MU, LAW, 1.0, 1.0, 0.5)

    def test_empirical_bias_below_bound(self):
        # mean missing mass between R and the window reach sits below the bound
        c, rho = 1.0, 1.0
        R, R_full = 2.0, 8.0
        window = gb.DiskWindow(0j, MU.support_radius + R_full)
        missing = []
        for rep in range(300):
            pat = gb.sample_ginibre(
                gb.GinibreConfig(c=c), window, gb.replicate_rng(99, 0, rep)
            )
            marked = gb.mark_pattern(pat, LAW, rho, gb.replicate_rng(99, 1, rep))
            full = gb.field_value(marked, MU, R_full).value
            trunc = gb.field_value(marked, MU, R).value
            missing.append(full - trunc)
        missing = np.array(missing)
        bound = gb.truncation_bias_bound(MU, LAW, c, rho, R)
        se = missing.std(ddof=1) / np.sqrt(missing.size)
        assert missing.mean() <= bound + 3 * se


class TestFluctuation:
    def test_centered(self):
        c, rho, R = 10.0, 0.4, 1.0
        window = gb.DiskWindow(0j, MU.support_radius + R)
        vals = []
        for rep in range(400):
            pat = gb.sample_ginibre(
                gb.GinibreConfig(c=c), window, gb.replicate_rng(13, 0, rep)
            )
            marked = gb.mark_pattern(pat, LAW, rho, gb.replicate_rng(13, 1, rep))
            vals.append(gb.fluctuation(marked, MU, LAW, R, 1.0).value)
        vals = np.array(vals)
        se = vals.std(ddof=1) / np.sqrt(vals.size)
        assert abs(vals.mean()) <= 3.5 * se

    def test_infinite_truncation_centering_matches_mean(self):
        marked = _marked(c=5.0, rho=0.3, window_radius=6.0, seed=3)
        f = gb.field_value(marked, MU, np.inf).value
        fluct = gb.fluctuation(marked, MU, LAW, np.inf, 2.0)
        expect = (f - gb.expected_mass(MU, LAW, marked.c, marked.rho)) / 2.0
        assert fluct.value == pytest.approx(expect, rel=1e-12)

    def test_variance_matches_exact_formula(self):
        # empirical fluctuation variance against the exact finite-scale
        # second-moment quadrature (Campbell term minus repulsion term)
        rho, R = 0.25, 1.0
        c = rho**-3.0
        mu = gb.UniformDiskMeasure(0j, 0.5, 1.0)
        window = gb.DiskWindow(0j, mu.support_radius + R)
        vals = []
        for rep in range(800):
            pat = gb.sample_ginibre(
                gb.GinibreConfig(c=c), window, gb.replicate_rng(21, 0, rep)
            )
            marked = gb.mark_pattern(pat, LAW, rho, gb.replicate_rng(21, 1, rep))
            vals.append(gb.fluctuation(marked, mu, LAW, R, 1.0).value)
        vals = np.array(vals)
        predicted = gb.field_variance_exact(mu, LAW, c, rho, R)
        assert vals.var(ddof=1) == pytest.approx(predicted, rel=0.10)

    def test_variance_quadrature_approaches_limit_form(self):
        # as rho -> 0 at fixed c rho^beta, the exact variance converges to
        # the limit-field control integral (pure quadrature, no sampling)
        mu = gb.UniformDiskMeasure(0j, 0.5, 1.0)
        R = 1.0
        limit = gb.gaussian_variance(mu, 3.0, r_max=R)
        ratios = []
        for rho in (0.3, 0.1, 0.03, 0.01):
            c = rho**-3.0  # c rho^beta = 1
            ratios.append(gb.field_variance_exact(mu, LAW, c, rho, R) / limit)
        errs = [abs(1.0 - r) for r in ratios]
        assert all(b < a for a, b in zip(errs[:-1], errs[1:]))
        assert errs[-1] < 0.05

    def test_edge_margin(self):
        marked = _marked(c=5.0, rho=0.3, window_radius=3.4, seed=4)
        margin = gb.edge_margin(marked, MU)
        assert margin == pytest.approx(3.0, abs=1e-6)
