"""The aggregated mass field of a marked pattern and its fluctuations.

Given a marked configuration {(x_i, r_i)} and a test measure mu, the field
value is the total mu-mass collected by the balls,

    M = sum_i mu(B(x_i, r_i)),

optionally truncated to radii below R.  Expectations are exact: the mean
of the truncated field is

    E = c * mu(total) * rho^2 * integral_{0}^{R/rho} u^2 f(u) du,

a closed form for the shipped radius family, so centering carries no
quadrature error.  The mean mass lost to the truncation is bounded by an
explicit power law in R (``truncation_bias_bound``), which is also the
edge-bias bound when a window with margin L stands in for the whole plane.
"""

from __future__ import annotations

from dataclasses import dataclass

import numpy as np

from .measures import LinearCombinationMeasure, Measure
from .radii import MarkedPattern, RadiusLaw

__all__ = [
    "EdgeBiasError",
    "FieldSample",
    "FluctuationSample",
    "expected_mass",
    "expected_mass_truncated",
    "field_value",
    "fluctuation",
    "truncation_bias_bound",
    "edge_margin",
]


class EdgeBiasError(ValueError):
    """The pattern's window is too small for the requested truncation radius."""


@dataclass(frozen=True)
class FieldSample:
    value: float
    c: float
    rho: float
    truncation: float

    def __post_init__(self):
        if self.value < 0:
            raise ValueError("mass field values are nonnegative")


@dataclass(frozen=True)
class FluctuationSample:
    value: float
    normalization: float

    def __post_init__(self):
        if not self.normalization > 0:
            raise ValueError("normalization must be positive")
        if not np.isfinite(self.value):
            raise ValueError("fluctuation value must be finite")


def expected_mass(mu: Measure, law: RadiusLaw, c: float, rho: float) -> float:
    """Exact mean of the untruncated field: V * mu(total) * c * rho^2 / pi."""
    if not (c > 0 and rho > 0):
        raise ValueError("c and rho must be positive")
    return law.mean_volume * mu.total_mass * c * rho**2 / np.pi


def expected_mass_truncated(
    mu: Measure, law: RadiusLaw, c: float, rho: float, r_trunc: float
) -> float:
    """Exact mean of the field truncated to radii < r_trunc.

    Uses the Fubini identity: the spatial integral of mu(B(x, r)) over all
    centers x equals mu(total) * pi * r^2, leaving a 1-D partial moment of
    the radius law that our family evaluates in closed form.
    """
    if not (c > 0 and rho > 0):
        raise ValueError("c and rho must be positive")
    if np.isinf(r_trunc):
        return expected_mass(mu, law, c, rho)
    return c * mu.total_mass * rho**2 * law.partial_second_moment(r_trunc / rho)


def truncation_bias_bound(
    mu: Measure, law: RadiusLaw, c: float, rho: float, r_trunc: float
) -> float:
    """Upper bound on the mean mass carried by balls with radius >= r_trunc.

    Equals c * rho^beta * C_f * mu(total) / ((beta - 2) * r_trunc^(beta-2))
    with C_f the global tail constant of the radius law; it decays to 0 as
    r_trunc grows, halving per doubling when beta = 3.
    """
    if not r_trunc > rho * law.r0:
        raise ValueError("bound requires r_trunc > rho * r0 (inside the power tail)")
    beta = law.beta
    return (
        c
        * rho**beta
        * law.tail_bound
        * mu.total_mass
        / ((beta - 2.0) * r_trunc ** (beta - 2.0))
    )


def edge_margin(marked: MarkedPattern, mu: Measure) -> float:
    """Distance between the window boundary and the dilated support reach.

    For a window covering B(0, support_radius + L) the mass missed from
    centers beyond the window is at most ``truncation_bias_bound`` at L.
    """
    reach = mu.support_radius
    # largest rr with window covering B(0, reach + rr)
    lo, hi = 0.0, marked.window.circumradius
    if not marked.window.covers_disk(reach):
        return 0.0
    for _ in range(60):
        mid = 0.5 * (lo + hi)
        if marked.window.covers_disk(reach + mid):
            lo = mid
        else:
            hi = mid
    return lo


def field_value(marked: MarkedPattern, mu: Measure, r_trunc: float = np.inf) -> FieldSample:
    """Sum of ball masses over the marked pattern, radii below r_trunc only.

    With finite r_trunc the window must contain the support of mu dilated
    by r_trunc: centers beyond the window then satisfy mu(B(x, r)) = 0 for
    every retained radius, so the windowed sum equals the whole-plane sum
    exactly.  With r_trunc = inf the residual edge bias is the caller's to
    budget (see ``edge_margin``).
    """
    if np.isfinite(r_trunc):
        if not marked.window.covers_disk(mu.support_radius + r_trunc):
            raise EdgeBiasError(
                f"window must cover the support dilated by r_trunc = {r_trunc}; "
                "enlarge the window or lower the truncation radius"
            )
    value = _ball_mass_sum(marked, mu, r_trunc)
    return FieldSample(value=float(value), c=marked.c, rho=marked.rho, truncation=r_trunc)


def _ball_mass_sum(marked: MarkedPattern, mu: Measure, r_trunc: float) -> float:
    # combinations distribute so that linearity is exact in floating point
    if isinstance(mu, LinearCombinationMeasure):
        return float(
            sum(c * _ball_mass_sum(marked, m, r_trunc) for c, m in mu.terms)
        )
    if len(marked) == 0:
        return 0.0
    keep = marked.radii < r_trunc
    if not np.any(keep):
        return 0.0
    return float(np.sum(mu.ball_mass(marked.centers[keep], marked.radii[keep])))


def field_variance_exact(
    mu: Measure, law: RadiusLaw, c: float, rho: float, r_trunc: float
) -> float:
    """Exact variance of the truncated field at finite scale.

    Var = (c/pi) * integral g(r) f(r/rho)/rho 1{r<R} dr
          - integral G(x) G(y) |K_c(x,y)|^2 dx dy,

    with g the square-mass profile and G(x) the radius-averaged ball mass.
    The second (repulsion) term uses the rotational symmetry of mu, so this
    evaluator requires a radially symmetric measure about the origin.
    As rho -> 0 the first term approaches c rho^beta times the limit-field
    control integral and the second vanishes.
    """
    from scipy.special import i0e

    from .fredholm import is_radial
    from .measures import _gauss_legendre, _split_gauss_legendre

    if not is_radial(mu):
        raise ValueError("exact variance evaluator needs a radially symmetric measure")
    kink = rho * law.r0
    breaks = [0.0, kink, r_trunc] if kink < r_trunc else [0.0, r_trunc]
    t, wt = _split_gauss_legendre(64, breaks)
    dens = law.density(t / rho) / rho
    term1 = c / np.pi * float(
        np.sum(wt * dens * np.array([mu.ball_mass_sq_integral(float(r)) for r in t]))
    )

    reach = mu.support_radius + r_trunc
    # the repulsion kernel has width 1/sqrt(c); the radial rule must resolve it
    n_s = int(min(6000, max(220, np.ceil(3.5 * reach * np.sqrt(c)))))
    s, ws = _gauss_legendre(n_s, 0.0, reach)
    ball = mu.ball_mass(s[:, None] + 0j, t[None, :])
    G = np.sum(wt * dens * ball, axis=1)
    # int G(x) G(y) (c/pi)^2 exp(-c|x-y|^2) dx dy in polar coordinates
    st = s[:, None] * s[None, :]
    gauss = i0e(2.0 * c * st) * np.exp(-c * (s[:, None] - s[None, :]) ** 2)
    weights = (ws * s * G)[:, None] * (ws * s * G)[None, :]
    term2 = (c / np.pi) ** 2 * 4.0 * np.pi**2 * float(np.sum(weights * gauss))
    return term1 - term2


def fluctuation(
    marked: MarkedPattern,
    mu: Measure,
    law: RadiusLaw,
    r_trunc: float,
    n_rho: float,
) -> FluctuationSample:
    """Centered, normalized field value: (M^R - E[M^R]) / n_rho.

    The centering matches the truncation exactly (truncated partial moment,
    not the untruncated mean), so the samples have mean zero for every R.
    Linear combinations center term-by-term, which keeps the fluctuation of
    a*mu1 + b*mu2 bit-identical to a*fluct(mu1) + b*fluct(mu2).
    """
    if not n_rho > 0:
        raise ValueError("n_rho must be positive")
    if isinstance(mu, LinearCombinationMeasure):
        total = sum(
            c * fluctuation(marked, m, law, r_trunc, n_rho).value for c, m in mu.terms
        )
        return FluctuationSample(value=float(total), normalization=n_rho)
    sample = field_value(marked, mu, r_trunc)
    center = expected_mass_truncated(mu, law, marked.c, marked.rho, r_trunc)
    return FluctuationSample(value=(sample.value - center) / n_rho, normalization=n_rho)
