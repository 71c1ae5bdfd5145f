"""Samplers and kernel formulas for the scaled Ginibre point process.

The process with intensity parameter ``c`` is the determinantal point
process on the plane with kernel

    K_c(x, y) = (c/pi) * exp(-(c/2)(|x|^2 + |y|^2)) * exp(c * x * conj(y)),

taken against Lebesgue measure; its one-point intensity is the constant
c/pi.  Realizations restricted to a bounded window are produced from the
eigenvalues of an N x N matrix with i.i.d. standard complex Gaussian
entries: those eigenvalues realize the determinantal process whose kernel
is the order-N Taylor truncation of exp(x * conj(y)), which matches the
untruncated kernel away from the circular-law edge at |z| = sqrt(N).
Dividing the eigenvalues by sqrt(c) yields the scaled process.

The only approximation is therefore the edge truncation, and it is
controlled explicitly: the expected number of points the truncation
removes from the window has a closed form (``expected_missing_points``)
and the matrix order is refused or enlarged until that deficit is below a
hard tolerance.

A thinned variant keeps every point independently with probability
``alpha`` and rescales coordinates by sqrt(alpha); this preserves the
intensity c/pi and interpolates towards a Poisson process as alpha -> 0.
"""

from __future__ import annotations

from dataclasses import dataclass, field, replace

import numpy as np
from scipy.special import gammainc

from .seeds import normalize_seed
from .windows import DiskWindow, Window

__all__ = [
    "GinibreConfig",
    "PointPattern",
    "UndersizedMatrixError",
    "expected_missing_points",
    "required_matrix_order",
    "sample_ginibre",
    "sample_poisson",
    "kernel_eval",
    "pair_correlation_theoretical",
    "pcf_estimate",
]

#: expected number of edge-lost points per window above which sampling refuses
MISSING_POINT_TOLERANCE = 1e-3


class UndersizedMatrixError(ValueError):
    """Matrix order too small for the window: the edge deficit would bias counts."""


def expected_missing_points(c: float, radius: float, order: int) -> float:
    """Expected count deficit in B(0, radius) when sampling with a given matrix order.

    The order-N process has intensity (c/pi) * P(Poisson(c|z|^2) < N) at z,
    so the deficit over the disk is the integral of (c/pi) * P(Poisson >= N),
    which reduces to the closed form below (Gamma-CDF identities).
    """
    lam = c * radius * radius
    n = int(order)
    return float(lam * gammainc(n, lam) - n * gammainc(n + 1, lam))


def required_matrix_order(c: float, radius: float, tol: float = MISSING_POINT_TOLERANCE) -> int:
    """Smallest matrix order whose expected edge deficit in B(0, radius) is < tol."""
    lam = c * radius * radius
    lo = max(1, int(np.ceil(lam)))
    if expected_missing_points(c, radius, lo) < tol:
        return lo
    hi = lo + max(8, int(np.ceil(6.0 * np.sqrt(lam) + 10)))
    while expected_missing_points(c, radius, hi) >= tol:
        lo = hi
        hi = 2 * hi
    while hi - lo > 1:
        mid = (lo + hi) // 2
        if expected_missing_points(c, radius, mid) < tol:
            hi = mid
        else:
            lo = mid
    return hi


@dataclass(frozen=True)
class GinibreConfig:
    """Parameters of one scaled (optionally thinned) Ginibre sampler.

    Parameters
    ----------
    c : float
        Intensity parameter; the mean number of points per unit area is c/pi.
    alpha : float
        Thinning parameter in (0, 1]; 1 is the plain scaled process.
    matrix_order : int, optional
        Order N of the Gaussian matrix.  When omitted it is derived from the
        window so that the expected edge deficit is below
        ``MISSING_POINT_TOLERANCE``.
    buffer : float, optional
        Extra radius (same units as the window) appended to the window
        circumradius before deriving N.  When omitted it is implied by the
        derived N.
    """

    c: float
    alpha: float = 1.0
    matrix_order: int | None = None
    buffer: float | None = None

    def __post_init__(self):
        if not (self.c > 0 and np.isfinite(self.c)):
            raise ValueError(f"intensity parameter c must be positive, got {self.c}")
        if not (0.0 < self.alpha <= 1.0):
            raise ValueError(f"alpha must lie in (0, 1], got {self.alpha}")
        if self.matrix_order is not None and self.matrix_order < 1:
            raise ValueError("matrix_order must be a positive integer")
        if self.buffer is not None and self.buffer < 0:
            raise ValueError("buffer must be non-negative")

    def resolve_order(self, window: Window) -> tuple[int, float, float]:
        """Return (order, buffer, sampling_radius) for a window.

        ``sampling_radius`` is the circumradius of the region the raw
        eigenvalues must cover; for alpha < 1 the pattern is generated on the
        window dilated by 1/sqrt(alpha) before thinning and rescaling.
        """
        sampling_radius = window.circumradius / np.sqrt(self.alpha)
        if self.matrix_order is None:
            if self.buffer is not None:
                order = int(np.ceil(self.c * (sampling_radius + self.buffer) ** 2))
                order = max(order, 1)
            else:
                order = required_matrix_order(self.c, sampling_radius)
        else:
            order = int(self.matrix_order)
        buffer = max(0.0, np.sqrt(order / self.c) - sampling_radius)
        needed = self.c * (sampling_radius + (self.buffer or 0.0)) ** 2
        if order < needed - 1e-9:
            raise UndersizedMatrixError(
                f"matrix order {order} < c*(circumradius+buffer)^2 = {needed:.1f}; "
                "the edge of the spectrum would bias the pattern inside the window"
            )
        deficit = expected_missing_points(self.c, sampling_radius, order)
        if deficit >= MISSING_POINT_TOLERANCE:
            raise UndersizedMatrixError(
                f"matrix order {order} leaves an expected deficit of {deficit:.2e} points "
                f"in the window (tolerance {MISSING_POINT_TOLERANCE:g}); "
                f"use matrix_order >= {required_matrix_order(self.c, sampling_radius)}"
            )
        return order, buffer, sampling_radius


@dataclass(frozen=True)
class PointPattern:
    """A finite planar point configuration observed in a window.

    ``points`` is a 1-D complex array.  ``c`` records the intensity
    parameter (mean density c/pi); Poisson patterns store c = pi*intensity
    so that downstream statistics can treat both uniformly.
    """

    points: np.ndarray
    window: Window
    c: float
    alpha: float = 1.0

    def __post_init__(self):
        pts = np.asarray(self.points, dtype=complex)
        object.__setattr__(self, "points", pts)
        if pts.ndim != 1:
            raise ValueError("points must be a 1-D complex array")
        if pts.size and not np.all(np.isfinite(pts)):
            raise ValueError("points must be finite")
        if pts.size and not bool(np.all(self.window.contains(pts))):
            raise ValueError("all points must lie inside the window")

    def __len__(self) -> int:
        return self.points.size

    @property
    def intensity(self) -> float:
        """Mean number of points per unit area, c/pi."""
        return self.c / np.pi


def _resolve_rng(rng_seed) -> np.random.Generator:
    if isinstance(rng_seed, np.random.Generator):
        return rng_seed
    return np.random.default_rng(normalize_seed(rng_seed))


def _ginibre_eigenvalues(order: int, rng: np.random.Generator) -> np.ndarray:
    """Eigenvalues of an order x order matrix of standard complex Gaussians."""
    a = rng.standard_normal((order, order))
    b = rng.standard_normal((order, order))
    g = (a + 1j * b) / np.sqrt(2.0)
    return np.linalg.eigvals(g)


def sample_ginibre(config: GinibreConfig, window: Window, rng_seed) -> PointPattern:
    """One realization of the scaled (alpha-thinned) Ginibre process in a window.

    RNG draw order is fixed (matrix entries, then the thinning mask),
    so a given seed always yields the same pattern bit-for-bit.
    """
    rng = _resolve_rng(rng_seed)
    order, _, _ = config.resolve_order(window)
    eigs = _ginibre_eigenvalues(order, rng)
    points = eigs / np.sqrt(config.c)
    if config.alpha < 1.0:
        keep = rng.random(points.size) < config.alpha
        points = points[keep] * np.sqrt(config.alpha)
    points = points[window.contains(points)]
    return PointPattern(points=points, window=window, c=config.c, alpha=config.alpha)


def sample_poisson(intensity: float, window: Window, rng_seed) -> PointPattern:
    """Homogeneous Poisson pattern with the given intensity (points per unit area)."""
    if not (intensity > 0 and np.isfinite(intensity)):
        raise ValueError(f"intensity must be positive, got {intensity}")
    rng = _resolve_rng(rng_seed)
    n = rng.poisson(intensity * window.area)
    points = window.sample_uniform(rng, n)
    return PointPattern(points=points, window=window, c=np.pi * intensity)


def kernel_eval(c: float, x, y):
    """Evaluate K_c(x, y); broadcasts over complex arrays.

    The two exponential factors are combined into a single complex exponent
    whose real part is -(c/2)|x - y|^2 <= 0, so the evaluation never
    overflows; for widely separated points it underflows cleanly to 0.
    """
    if not c > 0:
        raise ValueError(f"c must be positive, got {c}")
    x = np.asarray(x, dtype=complex)
    y = np.asarray(y, dtype=complex)
    exponent = -(c / 2.0) * (np.abs(x) ** 2 + np.abs(y) ** 2) + c * x * np.conj(y)
    out = (c / np.pi) * np.exp(exponent)
    if out.ndim == 0:
        return complex(out)
    return out


def pair_correlation_theoretical(c: float, r):
    """Pair correlation g(r) = 1 - exp(-c r^2) of the scaled process."""
    if not c > 0:
        raise ValueError(f"c must be positive, got {c}")
    r = np.asarray(r, dtype=float)
    out = 1.0 - np.exp(-c * r * r)
    if out.ndim == 0:
        return float(out)
    return out


def _pair_displacements(points: np.ndarray) -> np.ndarray:
    """All ordered pair displacement vectors x_i - x_j, i != j."""
    diff = points[:, None] - points[None, :]
    iu = ~np.eye(points.size, dtype=bool)
    return diff[iu]


def pcf_estimate(
    patterns: list[PointPattern],
    r_grid,
    bandwidth: float | None = None,
) -> np.ndarray:
    """Kernel-smoothed pair-correlation estimate with translation edge correction.

    Averages the standard Epanechnikov-kernel estimator over replicate
    patterns; empty and singleton patterns are skipped (they carry no pairs).
    The intensity is taken from the patterns' stored ``c`` (known, not
    re-estimated), which all replicates must share.

    Parameters
    ----------
    patterns : list of PointPattern
        Replicate observations of the same process on the same window.
    r_grid : array
        Strictly positive distances at which to evaluate the estimate.
    bandwidth : float, optional
        Epanechnikov half-width; default 0.15 / sqrt(intensity).
    """
    if len(patterns) < 100:
        raise ValueError("pcf_estimate needs at least 100 replicate patterns")
    r_grid = np.asarray(r_grid, dtype=float)
    if r_grid.ndim != 1 or np.any(r_grid <= 0):
        raise ValueError("r_grid must be a 1-D array of positive distances")
    window = patterns[0].window
    lam = patterns[0].intensity
    if bandwidth is None:
        bandwidth = 0.15 / np.sqrt(lam)
    h = float(bandwidth)

    total = np.zeros(r_grid.size)
    used = 0
    for pat in patterns:
        if pat.window != window or pat.c != patterns[0].c:
            raise ValueError("all patterns must share one window and one intensity")
        if len(pat) < 2:
            continue
        used += 1
        v = _pair_displacements(pat.points)
        d = np.abs(v)
        weights = 1.0 / np.asarray(window.translation_overlap(v))
        # Epanechnikov kernel, one pass per grid point over the relevant pairs
        for k, r in enumerate(r_grid):
            u = (r - d) / h
            mask = np.abs(u) < 1.0
            if not np.any(mask):
                continue
            kern = 0.75 * (1.0 - u[mask] ** 2) / h
            total[k] += np.sum(kern * weights[mask]) / (2.0 * np.pi * r * lam**2)
    if used == 0:
        raise ValueError("no pattern with >= 2 points; cannot estimate the PCF")
    return total / used
