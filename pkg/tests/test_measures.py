"""Ball-mass geometry, certificates and the weighted radial integral."""

import numpy as np
import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

import ginibre_balls as gb

DISK = gb.UniformDiskMeasure(0j, 1.0, np.pi)  # unit density
RECT = gb.UniformRectMeasure(-1.0, 2.0, -0.5, 0.5, mass=3.0)  # unit density
BUMP = gb.GaussianBumpMeasure(0j, 0.5, 2.0)


def _dart_area(center, r, xmin, xmax, ymin, ymax, n=2_000_000, seed=0):
    rng = np.random.default_rng(seed)
    ang = rng.random(n) * 2 * np.pi
    rad = r * np.sqrt(rng.random(n))
    x = center.real + rad * np.cos(ang)
    y = center.imag + rad * np.sin(ang)
    inside = (x >= xmin) & (x <= xmax) & (y >= ymin) & (y <= ymax)
    return np.pi * r * r * inside.mean()


class TestDiskMeasure:
    def test_covering_ball_saturates(self):
        assert DISK.ball_mass(0j, 3.0) == pytest.approx(np.pi, rel=1e-14)
        assert DISK.ball_mass(0.5j, 10.0) == pytest.approx(np.pi, rel=1e-14)

    def test_tangent_disks_zero(self):
        assert DISK.ball_mass(2.0 + 0j, 1.0) == pytest.approx(0.0, abs=1e-12)

    def test_half_overlap_symmetric(self):
        # two unit disks at distance d: area = 2 arccos(d/2) - (d/2) sqrt(4 - d^2)
        d = 0.8
        expect = 2 * np.arccos(d / 2) - (d / 2) * np.sqrt(4 - d * d)
        assert DISK.ball_mass(d + 0j, 1.0) == pytest.approx(expect, rel=1e-12)

    def test_translation_invariance(self):
        shifted = gb.UniformDiskMeasure(1.0 + 2.0j, 1.0, np.pi)
        for d in (0.0, 0.4, 1.3, 1.9):
            assert shifted.ball_mass(1.0 + 2.0j + d, 0.7) == pytest.approx(
                DISK.ball_mass(d + 0j, 0.7), rel=1e-12
            )

    @given(
        xr=st.floats(-3, 3),
        xi=st.floats(-3, 3),
        r1=st.floats(0.01, 2.0),
        dr=st.floats(0.0, 2.0),
    )
    @settings(max_examples=150, deadline=None)
    def test_monotone_in_radius(self, xr, xi, r1, dr):
        x = complex(xr, xi)
        assert DISK.ball_mass(x, r1 + dr) >= DISK.ball_mass(x, r1) - 1e-12


class TestRectMeasure:
    def test_full_containment(self):
        # unit-density rectangle fully containing the ball
        assert RECT.ball_mass(0.3 + 0j, 0.2) == pytest.approx(np.pi * 0.04, rel=1e-12)

    def test_covering_ball_saturates(self):
        assert RECT.ball_mass(0.5 + 0j, 10.0) == pytest.approx(3.0, rel=1e-12)

    def test_disjoint(self):
        assert RECT.ball_mass(10.0 + 0j, 1.0) == 0.0

    def test_half_plane_case(self):
        # ball centered on a long edge: half the disk inside
        m = gb.UniformRectMeasure(-50.0, 50.0, 0.0, 50.0, mass=5000.0)  # density 1
        assert m.ball_mass(0j, 1.0) == pytest.approx(np.pi / 2.0, rel=1e-10)

    def test_against_darts(self):
        cases = [
            (0.2 + 0.1j, 0.8),
            (1.8 + 0.4j, 0.9),
            (-1.2 - 0.6j, 1.1),
            (0.0 + 0.45j, 2.5),
        ]
        for i, (x, r) in enumerate(cases):
            exact = RECT.ball_mass(x, r)  # density 1
            darts = _dart_area(x, r, -1.0, 2.0, -0.5, 0.5, seed=i)
            assert exact == pytest.approx(darts, abs=2e-3 * np.pi * r * r)

    def test_additive_split(self):
        # splitting the rectangle in two must not change the total
        left = gb.UniformRectMeasure(-1.0, 0.4, -0.5, 0.5, mass=1.4)
        right = gb.UniformRectMeasure(0.4, 2.0, -0.5, 0.5, mass=1.6)
        for x, r in [(0.4 + 0.2j, 0.7), (-0.8 + 0j, 1.5), (1.0 - 0.3j, 0.4)]:
            assert left.ball_mass(x, r) + right.ball_mass(x, r) == pytest.approx(
                RECT.ball_mass(x, r), rel=1e-10
            )

    @given(
        xr=st.floats(-3, 4),
        xi=st.floats(-2, 2),
        r1=st.floats(0.01, 1.5),
        dr=st.floats(0.0, 1.5),
    )
    @settings(max_examples=150, deadline=None)
    def test_monotone_in_radius(self, xr, xi, r1, dr):
        x = complex(xr, xi)
        assert RECT.ball_mass(x, r1 + dr) >= RECT.ball_mass(x, r1) - 1e-12


class TestGaussianBump:
    def test_interior_matches_numeric(self):
        x, r = 0.3 + 0.2j, 0.6
        exact = BUMP.ball_mass(x, r)
        # brute tensor grid over the ball
        n = 400
        xs = np.linspace(x.real - r, x.real + r, n)
        ys = np.linspace(x.imag - r, x.imag + r, n)
        xx, yy = np.meshgrid(xs, ys)
        zz = xx + 1j * yy
        inside = np.abs(zz - x) <= r
        vals = BUMP.density(zz) * inside
        numeric = vals.sum() * (xs[1] - xs[0]) * (ys[1] - ys[0])
        assert exact == pytest.approx(numeric, rel=2e-3)

    def test_covering_ball_saturates(self):
        assert BUMP.ball_mass(0j, BUMP.enclosing_radius) == pytest.approx(2.0, rel=1e-9)
        assert BUMP.ball_mass(1.0 + 0j, 10.0) == pytest.approx(2.0, rel=1e-12)

    def test_disjoint(self):
        assert BUMP.ball_mass(10.0 + 0j, 1.0) == 0.0

    def test_boundary_crossing_continuity(self):
        # interior formula and arc quadrature must agree where they meet
        d = 1.0
        r_inside = BUMP.enclosing_radius - d - 1e-9
        r_cross = BUMP.enclosing_radius - d + 1e-9
        a = BUMP.ball_mass(d + 0j, r_inside)
        b = BUMP.ball_mass(d + 0j, r_cross)
        assert a == pytest.approx(b, rel=1e-6)

    def test_density_power_integral_closed_form(self):
        gamma = 1.5
        numeric = gb.Measure.density_power_integral(BUMP, gamma)
        assert BUMP.density_power_integral(gamma) == pytest.approx(numeric, rel=1e-6)


class TestLinearCombination:
    def test_identity(self):
        combo = gb.linear_combination([(1.0, DISK)])
        assert combo.ball_mass(0.2 + 0j, 0.5) == pytest.approx(
            DISK.ball_mass(0.2 + 0j, 0.5), rel=1e-15
        )

    def test_exact_linearity(self):
        combo = gb.linear_combination([(2.0, DISK), (0.5, RECT)])
        for x, r in [(0.1 + 0.1j, 0.7), (1.5 - 0.2j, 1.2)]:
            expect = 2.0 * DISK.ball_mass(x, r) + 0.5 * RECT.ball_mass(x, r)
            assert combo.ball_mass(x, r) == expect  # bitwise: evaluators distribute

    def test_total_mass_adds(self):
        combo = gb.linear_combination([(2.0, DISK), (0.5, RECT)])
        assert combo.total_mass == pytest.approx(2 * np.pi + 1.5, rel=1e-14)

    def test_rejects_bad_coefficients(self):
        with pytest.raises(ValueError):
            gb.linear_combination([(-1.0, DISK)])
        with pytest.raises(ValueError):
            gb.linear_combination([(0.0, DISK)])

    def test_scaling_squares_certificate(self):
        lam = 3.0
        scaled = gb.linear_combination([(lam, DISK)])
        for r in (0.3, 1.0, 4.0):
            assert scaled.ball_mass_sq_integral(r) == pytest.approx(
                lam**2 * DISK.ball_mass_sq_integral(r), rel=1e-12
            )


class TestCertificates:
    def test_disk_certificate_all_betas(self):
        for beta in (2.5, 3.0, 3.5):
            report = gb.mbeta_certificate_check(DISK, beta)
            assert report.ok, report.violations
            assert report.p == 2.0 and report.q == 4.0
            assert np.isfinite(report.intensity_integral)

    def test_rect_certificate(self):
        report = gb.mbeta_certificate_check(RECT, 3.0)
        assert report.ok

    def test_bump_certificate(self):
        grid = np.geomspace(0.02, 250.0, 15)
        report = gb.mbeta_certificate_check(BUMP, 3.0, r_grid=grid)
        assert report.ok

    def test_small_r_log_slope_is_q(self):
        rs = np.array([0.01, 0.02])
        gs = [DISK.ball_mass_sq_integral(r) for r in rs]
        slope = np.log(gs[1] / gs[0]) / np.log(rs[1] / rs[0])
        assert slope == pytest.approx(4.0, abs=0.1)

    def test_large_r_log_slope_is_p(self):
        rs = np.array([60.0, 120.0])
        gs = [DISK.ball_mass_sq_integral(r) for r in rs]
        slope = np.log(gs[1] / gs[0]) / np.log(rs[1] / rs[0])
        assert slope == pytest.approx(2.0, abs=0.1)

    def test_violation_reported(self):
        report = gb.mbeta_certificate_check(DISK, 3.0, c_mu=1e-6)
        assert not report.ok
        assert report.violations.size > 0

    def test_grid_span_enforced(self):
        with pytest.raises(ValueError):
            gb.mbeta_certificate_check(DISK, 3.0, r_grid=np.linspace(0.5, 2.0, 10))

    def test_dart_cross_check_of_g(self):
        # spot-check the quadrature g(r) against dart throwing at two radii
        rng = np.random.default_rng(3)
        for r in (0.5, 2.0):
            R_samp = 1.0 + r
            n = 400_000
            x = (rng.random(n) * 2 - 1) * R_samp + 1j * (rng.random(n) * 2 - 1) * R_samp
            vals = DISK.ball_mass(x, r) ** 2
            dart = vals.mean() * (2 * R_samp) ** 2
            assert DISK.ball_mass_sq_integral(r) == pytest.approx(dart, rel=0.02)


class TestRadialIntensityIntegral:
    def test_disk_reference_value(self):
        # independently derived: 128 pi / 9 for the unit-density unit disk at beta = 3
        val = gb.radial_intensity_integral(DISK, 3.0)
        assert val == pytest.approx(128.0 * np.pi / 9.0, rel=1e-3)

    def test_truncation_monotone(self):
        vals = [gb.radial_intensity_integral(DISK, 3.0, r_max=r) for r in (1.0, 4.0, 16.0)]
        assert vals[0] < vals[1] < vals[2]
        assert vals[2] < gb.radial_intensity_integral(DISK, 3.0)

    def test_beta_validation(self):
        with pytest.raises(ValueError):
            gb.radial_intensity_integral(DISK, 4.5)
