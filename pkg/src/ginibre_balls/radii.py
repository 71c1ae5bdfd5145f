"""Heavy-tailed radius laws and independent marking of point patterns.

The radius density is the two-piece family

    f(r) = c0                 for 0 <= r < r0,
    f(r) = r^(-beta-1)        for r >= r0,

with 2 < beta < 4 and c0 fixed by normalization, so the tail satisfies
f(r) * r^(beta+1) = 1 exactly on [r0, inf).  Everything downstream needs
closed forms — CDF, quantile, partial moments — and this family has them
all, which keeps Monte Carlo centering and bias bounds free of quadrature
error.

``mark_pattern`` attaches one i.i.d. radius (scaled by rho) to every point
of a pattern.  The marked configuration is again determinantal, on the
product space plane x (0, inf), with one-point intensity
(c/pi) * f(r/rho)/rho — see ``marked_kernel_diag``.
"""

from __future__ import annotations

from dataclasses import dataclass

import numpy as np

from .ginibre import GinibreConfig, PointPattern
from .windows import Window

__all__ = ["RadiusLaw", "MarkedPattern", "mark_pattern", "marked_kernel_diag"]


@dataclass(frozen=True)
class RadiusLaw:
    """Two-piece radius density with tail index beta in (2, 4).

    Attributes
    ----------
    beta : float
        Tail index; the volume (r^2) has infinite second moment.
    r0 : float
        Onset of the pure power tail.
    c0 : float
        Plateau height on [0, r0), fixed by normalization.
    tail_bound : float
        Global constant C with f(r) <= C / r^(beta+1) for all r >= 0
        (max of 1 and c0 * r0^(beta+1)).
    mean_volume : float
        V = pi * E[r^2], the mean area of a ball.
    """

    beta: float
    r0: float = 1.0

    def __post_init__(self):
        if not (2.0 < self.beta < 4.0):
            raise ValueError(f"beta must lie in (2, 4), got {self.beta}")
        if not (self.r0 > 0 and np.isfinite(self.r0)):
            raise ValueError(f"r0 must be positive, got {self.r0}")
        if self.c0 < 0:
            raise ValueError(
                f"r0={self.r0} too small for beta={self.beta}: the plateau height "
                f"would be negative (need r0 >= beta^(-1/beta))"
            )

    @property
    def c0(self) -> float:
        # c0*r0 + r0^(-beta)/beta = 1
        return (1.0 - self.r0 ** (-self.beta) / self.beta) / self.r0

    @property
    def tail_bound(self) -> float:
        return max(1.0, self.c0 * self.r0 ** (self.beta + 1.0))

    @property
    def mean_volume(self) -> float:
        return np.pi * self.moment(2.0)

    def moment(self, q: float) -> float:
        """E[r^q] in closed form; finite iff q < beta."""
        if q >= self.beta:
            raise ValueError(f"moment of order {q} diverges (beta = {self.beta})")
        return self.c0 * self.r0 ** (q + 1.0) / (q + 1.0) + self.r0 ** (q - self.beta) / (
            self.beta - q
        )

    def partial_second_moment(self, s: float) -> float:
        """Integral of r^2 f(r) over [0, s]; closed form, increasing to E[r^2]."""
        if s <= 0:
            return 0.0
        t = min(s, self.r0)
        total = self.c0 * t**3 / 3.0
        if s > self.r0:
            total += (self.r0 ** (2.0 - self.beta) - s ** (2.0 - self.beta)) / (self.beta - 2.0)
        return total

    def density(self, r):
        r = np.asarray(r, dtype=float)
        out = np.where(r < self.r0, self.c0, 0.0)
        tail = r >= self.r0
        out = np.where(tail, np.power(np.where(tail, r, 1.0), -self.beta - 1.0), out)
        out = np.where(r < 0, 0.0, out)
        if out.ndim == 0:
            return float(out)
        return out

    def cdf(self, r):
        r = np.asarray(r, dtype=float)
        below = self.c0 * np.clip(r, 0.0, self.r0)
        above = np.where(
            r > self.r0,
            (self.r0 ** (-self.beta) - np.power(np.clip(r, self.r0, None), -self.beta))
            / self.beta,
            0.0,
        )
        out = np.clip(below + above, 0.0, 1.0)
        if out.ndim == 0:
            return float(out)
        return out

    def survival(self, r):
        """P(radius > r); equals r^(-beta)/beta on the tail piece."""
        return 1.0 - self.cdf(r)

    def quantile(self, u):
        """Exact inverse CDF.  On the tail piece it is (beta*(1-u))^(-1/beta)."""
        u = np.asarray(u, dtype=float)
        if np.any((u < 0) | (u > 1)):
            raise ValueError("quantile argument must lie in [0, 1]")
        knee = self.c0 * self.r0
        lower = u / self.c0 if self.c0 > 0 else np.zeros_like(u)
        upper = np.power(self.beta * np.clip(1.0 - u, 1e-300, None), -1.0 / self.beta)
        out = np.where(u < knee, lower, upper)
        if out.ndim == 0:
            return float(out)
        return out

    def sample(self, rng: np.random.Generator, size=None):
        return self.quantile(rng.random(size))

    def describe(self) -> dict:
        return {"beta": self.beta, "r0": self.r0}


@dataclass(frozen=True)
class MarkedPattern:
    """Centers with strictly positive radii, plus the scales that produced them."""

    centers: np.ndarray
    radii: np.ndarray
    window: Window
    c: float
    rho: float
    alpha: float = 1.0

    def __post_init__(self):
        centers = np.asarray(self.centers, dtype=complex)
        radii = np.asarray(self.radii, dtype=float)
        object.__setattr__(self, "centers", centers)
        object.__setattr__(self, "radii", radii)
        if centers.shape != radii.shape or centers.ndim != 1:
            raise ValueError("centers and radii must be 1-D arrays of equal length")
        if radii.size and not np.all(radii > 0):
            raise ValueError("radii must be strictly positive")
        if not self.rho > 0:
            raise ValueError(f"rho must be positive, got {self.rho}")

    def __len__(self) -> int:
        return self.centers.size


def mark_pattern(
    pattern: PointPattern, law: RadiusLaw, rho: float, rng: np.random.Generator
) -> MarkedPattern:
    """Attach i.i.d. radii rho * r, r ~ law, independently of the centers."""
    if not rho > 0:
        raise ValueError(f"rho must be positive, got {rho}")
    radii = rho * law.sample(rng, len(pattern))
    return MarkedPattern(
        centers=pattern.points,
        radii=radii,
        window=pattern.window,
        c=pattern.c,
        rho=rho,
        alpha=pattern.alpha,
    )


def marked_kernel_diag(law: RadiusLaw, rho: float, c: float, x, r):
    """One-point intensity (c/pi) * f(r/rho)/rho of the marked configuration.

    Constant in the spatial coordinate x (kept in the signature for clarity
    of units: this is a density on plane x radius).
    """
    if not (rho > 0 and c > 0):
        raise ValueError("rho and c must be positive")
    r = np.asarray(r, dtype=float)
    out = (c / np.pi) * law.density(r / rho) / rho
    x = np.asarray(x)
    out = np.broadcast_arrays(out, np.zeros(x.shape))[0] if x.shape else out
    if np.ndim(out) == 0:
        return float(out)
    return out
