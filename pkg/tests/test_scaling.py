"""Schedules, budget guard, determinism and joint sampling."""

import numpy as np
import pytest

import ginibre_balls as gb

LAW = gb.RadiusLaw(beta=3.0)
MU = gb.UniformDiskMeasure(0j, 0.4, 1.0)


class TestSchedules:
    def test_intermediate_plugin(self):
        pts = gb.schedule(gb.Regime.intermediate(a=1.0, beta=3.0), [0.1])
        assert pts[0].c == pytest.approx(1000.0, rel=1e-12)
        assert pts[0].n_rho == 1.0
        assert pts[0].gamma is None

    def test_large_ball_plugin(self):
        pts = gb.schedule(gb.Regime.large_ball(delta=1.0, beta=3.0), [0.1])
        assert pts[0].c == pytest.approx(1.0e4, rel=1e-9)
        assert pts[0].n_rho == pytest.approx(np.sqrt(10.0), rel=1e-12)

    def test_small_ball_plugin(self):
        pts = gb.schedule(gb.Regime.small_ball(delta=1.0, beta=3.0), [0.1])
        assert pts[0].c == pytest.approx(100.0, rel=1e-12)
        assert pts[0].n_rho == pytest.approx(0.1 ** (2.0 / 3.0), rel=1e-12)
        assert pts[0].gamma == 1.5

    def test_c_rho_beta_classifier(self):
        rhos = [0.4, 0.2, 0.1]
        crb = lambda reg: [p.c * p.rho**3.0 for p in gb.schedule(reg, rhos)]
        lb = crb(gb.Regime.large_ball(delta=1.0, beta=3.0))
        assert lb[0] < lb[1] < lb[2]
        im = crb(gb.Regime.intermediate(a=2.0, beta=3.0))
        assert np.allclose(im, 2.0)
        sb = crb(gb.Regime.small_ball(delta=1.0, beta=3.0))
        assert sb[0] > sb[1] > sb[2]

    def test_rho_list_must_decrease(self):
        with pytest.raises(ValueError):
            gb.schedule(gb.Regime.intermediate(a=1.0, beta=3.0), [0.1, 0.2])

    def test_parameter_validation(self):
        with pytest.raises(ValueError):
            gb.Regime.intermediate(a=-1.0, beta=3.0)
        with pytest.raises(ValueError):
            gb.Regime.large_ball(delta=0.0, beta=3.0)
        with pytest.raises(ValueError):
            gb.Regime.intermediate(a=1.0, beta=5.0)


class TestBudgetGuard:
    def test_refusal_with_diagnostic(self):
        pts = gb.schedule(gb.Regime.large_ball(delta=1.0, beta=3.0), [0.05])
        with pytest.raises(gb.BudgetExceededError, match="matrix order"):
            gb.check_budget(pts, gb.DiskWindow(0j, 1.0), max_order=4000)

    def test_passes_small_configs(self):
        pts = gb.schedule(gb.Regime.intermediate(a=1.0, beta=3.0), [0.4, 0.3])
        orders = gb.check_budget(pts, gb.DiskWindow(0j, 1.0), max_order=4000)
        assert all(o <= 4000 for o in orders)


class TestRunRegime:
    def _run(self, seed=11, workers=1):
        return gb.run_regime(
            gb.Regime.intermediate(a=1.0, beta=3.0),
            MU,
            LAW,
            [0.5, 0.4],
            replicates=100,
            root_seed=seed,
            r_trunc=0.6,
            workers=workers,
        )

    def test_deterministic_across_runs_and_workers(self):
        a = self._run()
        b = self._run()
        c = self._run(workers=2)
        for i in range(2):
            assert np.array_equal(a.samples[i], b.samples[i])
            assert np.array_equal(a.samples[i], c.samples[i])

    def test_streams_disjoint_across_points(self):
        run = self._run()
        assert not np.array_equal(run.samples[0], run.samples[1])

    def test_seed_changes_samples(self):
        a = self._run(seed=11)
        b = self._run(seed=12)
        assert not np.array_equal(a.samples[0], b.samples[0])

    def test_replicate_floor(self):
        with pytest.raises(ValueError):
            gb.run_regime(
                gb.Regime.intermediate(a=1.0, beta=3.0),
                MU,
                LAW,
                [0.5],
                replicates=10,
                root_seed=0,
                r_trunc=0.6,
            )

    def test_law_regime_beta_mismatch(self):
        with pytest.raises(ValueError):
            gb.run_regime(
                gb.Regime.intermediate(a=1.0, beta=2.5),
                MU,
                LAW,
                [0.5],
                replicates=100,
                root_seed=0,
                r_trunc=0.6,
            )


class TestFiniteDimVector:
    def test_duplicate_measure_gives_identical_columns(self):
        pt = gb.SchedulePoint(rho=0.5, c=8.0, n_rho=1.0)
        mat = gb.finite_dim_vector(pt, [MU, MU], LAW, 100, 3, 0.6)
        assert np.array_equal(mat[:, 0], mat[:, 1])

    def test_cramer_wold_bit_equality(self):
        a, b = 0.7, 1.3
        other = gb.UniformDiskMeasure(0.2 + 0j, 0.3, 0.5)
        combo = gb.linear_combination([(a, MU), (b, other)])
        pt = gb.SchedulePoint(rho=0.5, c=8.0, n_rho=1.0)
        mat = gb.finite_dim_vector(pt, [MU, other, combo], LAW, 100, 5, 0.6)
        assert np.array_equal(mat[:, 2], a * mat[:, 0] + b * mat[:, 1])

    def test_distant_supports_decorrelate(self):
        mu1 = gb.UniformDiskMeasure(-2.2 + 0j, 0.3, 1.0)
        mu2 = gb.UniformDiskMeasure(+2.2 + 0j, 0.3, 1.0)
        pt = gb.SchedulePoint(rho=0.4, c=10.0, n_rho=1.0)
        mat = gb.finite_dim_vector(pt, [mu1, mu2], LAW, 300, 7, 0.4)
        corr = np.corrcoef(mat[:, 0], mat[:, 1])[0, 1]
        assert abs(corr) < 4.0 / np.sqrt(mat.shape[0])
