"""Independent samplers for the three limit fields of the zoomed-out model.

These oracles never touch the point-process pipeline: they are built from
the test measure, the tail index and elementary random draws only, so a
two-sample comparison against pipeline output is a genuine test.

* ``GaussianOracle``  — centered normal with variance
  (1/pi) * integral of mu(B(x,r))^2 r^(-beta-1) dx dr (optionally with the
  radial integral truncated, matching a truncated simulation).
* ``PoissonIntegralOracle`` — compensated Poisson integral with intensity
  (a/pi) r^(-beta-1) dx dr, simulated atom by atom on a radius band
  [eps, r_big); the discarded small-radius band is variance-bounded via
  the measure certificate and the discarded large-radius band is
  mean-bounded in closed form.
* ``StableOracle``    — totally skewed gamma-stable integral with
  gamma = beta/2, scale (sigma_gamma * integral of phi^gamma)^(1/gamma),
  sampled by the exact trigonometric method.
"""

from __future__ import annotations

from dataclasses import dataclass

import numpy as np
from scipy.integrate import quad

from .measures import Measure, radial_intensity_integral

__all__ = [
    "GaussianOracle",
    "PoissonIntegralOracle",
    "StableOracle",
    "gaussian_variance",
    "sigma_gamma",
    "sigma_gamma_closed_form",
    "sample_W",
    "sample_P",
    "sample_Z",
]


# ---------------------------------------------------------------------------
# Gaussian limit
# ---------------------------------------------------------------------------


def gaussian_variance(
    mu: Measure, beta: float, r_max: float = np.inf, rtol: float = 1e-3
) -> float:
    """Variance of the Gaussian limit field on mu.

    (1/pi) * integral_0^{r_max} [integral mu(B(x,r))^2 dx] r^(-beta-1) dr.
    ``r_max`` < inf gives the variance of the radius-truncated field, the
    matched target for simulations truncated at the same radius.
    """
    return radial_intensity_integral(mu, beta, r_max=r_max, rtol=rtol) / np.pi


@dataclass(frozen=True)
class GaussianOracle:
    variance: float

    def __post_init__(self):
        if self.variance < 0 or not np.isfinite(self.variance):
            raise ValueError("variance must be finite and nonnegative")

    @classmethod
    def build(cls, mu: Measure, beta: float, r_max: float = np.inf) -> "GaussianOracle":
        return cls(variance=gaussian_variance(mu, beta, r_max=r_max))

    def sample(self, rng: np.random.Generator, size=None):
        if self.variance == 0.0:
            return np.zeros(size) if size is not None else 0.0
        return rng.normal(0.0, np.sqrt(self.variance), size)


def sample_W(oracle: GaussianOracle, rng: np.random.Generator, size=None):
    return oracle.sample(rng, size)


# ---------------------------------------------------------------------------
# compensated Poisson limit (intermediate regime)
# ---------------------------------------------------------------------------


def _power_band_integral(eta: float, lo: float, hi: float) -> float:
    """Integral of r^(-eta) over [lo, hi) for eta > 1."""
    return (lo ** (1.0 - eta) - hi ** (1.0 - eta)) / (eta - 1.0)


def _power_band_sample(rng, eta: float, lo: float, hi: float, size: int):
    """Inverse-CDF draws from density proportional to r^(-eta) on [lo, hi)."""
    u = rng.random(size)
    a = lo ** (1.0 - eta)
    b = hi ** (1.0 - eta)
    return (a - u * (a - b)) ** (1.0 / (1.0 - eta))


@dataclass(frozen=True)
class PoissonIntegralOracle:
    """Atomwise simulation of the compensated Poisson limit field.

    Atoms live on {(x, r): |x| <= R_mu + r} x [eps, r_big); positions with
    zero ball mass are kept (they cost nothing and keep the radius law
    exact).  The compensator is closed-form, so the samples are exactly
    centered over the simulated band.
    """

    mu: Measure
    beta: float
    a: float
    eps: float
    r_big: float
    compensator: float
    small_r_variance: float
    variance: float
    total_atom_intensity: float

    @classmethod
    def build(
        cls,
        mu: Measure,
        beta: float,
        a: float,
        eps: float | None = None,
        r_big: float | None = None,
        max_mean_atoms: float = 2e5,
        small_r_variance_fraction: float = 1e-4,
    ) -> "PoissonIntegralOracle":
        if not a > 0:
            raise ValueError("intensity multiplier a must be positive")
        if not (2.0 < beta < 4.0):
            raise ValueError(f"beta must lie in (2, 4), got {beta}")
        var_full = a * gaussian_variance(mu, beta)
        c_mu, p, q = mu.certificate
        if eps is None:
            # discard variance (a/pi) C eps^(q-beta)/(q-beta) <= fraction * var
            eps = (
                small_r_variance_fraction * var_full * np.pi * (q - beta) / (a * c_mu)
            ) ** (1.0 / (q - beta))
        if r_big is None:
            # discarded large-radius mean 2 a mu(C)/((beta-2) R^(beta-2)) <= 1e-3 sd
            target = 1e-3 * np.sqrt(var_full)
            r_big = (2.0 * a * mu.total_mass / ((beta - 2.0) * target)) ** (
                1.0 / (beta - 2.0)
            )
        if not eps < r_big:
            raise ValueError("need eps < r_big")
        small_r_variance = a / np.pi * c_mu * eps ** (q - beta) / (q - beta)
        R_mu = mu.support_radius
        bands = (
            R_mu**2 * _power_band_integral(beta + 1.0, eps, r_big)
            + 2.0 * R_mu * _power_band_integral(beta, eps, r_big)
            + _power_band_integral(beta - 1.0, eps, r_big)
        )
        total_atoms = a * bands
        if total_atoms > max_mean_atoms:
            raise ValueError(
                f"mean atom count {total_atoms:.3g} exceeds the budget "
                f"{max_mean_atoms:.3g}; raise eps (currently {eps:.3g}) or the budget"
            )
        compensator = (
            a
            * mu.total_mass
            * (eps ** (2.0 - beta) - r_big ** (2.0 - beta))
            / (beta - 2.0)
        )
        variance = a * (
            gaussian_variance(mu, beta, r_max=r_big)
            - gaussian_variance(mu, beta, r_max=eps)
        )
        return cls(
            mu=mu,
            beta=beta,
            a=a,
            eps=float(eps),
            r_big=float(r_big),
            compensator=float(compensator),
            small_r_variance=float(small_r_variance),
            variance=float(variance),
            total_atom_intensity=float(total_atoms),
        )

    def _band_weights(self):
        R_mu = self.mu.support_radius
        w = np.array(
            [
                R_mu**2 * _power_band_integral(self.beta + 1.0, self.eps, self.r_big),
                2.0 * R_mu * _power_band_integral(self.beta, self.eps, self.r_big),
                _power_band_integral(self.beta - 1.0, self.eps, self.r_big),
            ]
        )
        return w / w.sum()

    def sample(self, rng: np.random.Generator, size=None):
        scalar = size is None
        n = 1 if scalar else int(size)
        R_mu = self.mu.support_radius
        weights = self._band_weights()
        etas = np.array([self.beta + 1.0, self.beta, self.beta - 1.0])
        counts = rng.poisson(self.total_atom_intensity, n)
        out = np.empty(n)
        for i in range(n):
            k = counts[i]
            if k == 0:
                out[i] = -self.compensator
                continue
            comp = rng.choice(3, size=k, p=weights)
            radii = np.empty(k)
            for j in range(3):
                sel = comp == j
                if np.any(sel):
                    radii[sel] = _power_band_sample(
                        rng, etas[j], self.eps, self.r_big, int(sel.sum())
                    )
            # positions uniform on the disk that can reach the support
            rad_pos = (R_mu + radii) * np.sqrt(rng.random(k))
            ang = rng.random(k) * 2.0 * np.pi
            x = rad_pos * np.exp(1j * ang)
            out[i] = float(np.sum(self.mu.ball_mass(x, radii))) - self.compensator
        if scalar:
            return float(out[0])
        return out


def sample_P(oracle: PoissonIntegralOracle, rng: np.random.Generator, size=None):
    return oracle.sample(rng, size)


def poisson_equivalent_fluctuations(
    mu: Measure,
    law,
    c: float,
    rho: float,
    r_trunc: float,
    n_rho: float,
    rng: np.random.Generator,
    size: int,
) -> np.ndarray:
    """Centered field fluctuations for the Poisson configuration of equal intensity.

    Exact simulation of the compensated field when centers form a Poisson
    process with the same mean density c/pi and radii follow the same
    scaled law, truncated at r_trunc — the determinantal model with the
    repulsion switched off.  The difference between pipeline fluctuations
    and these is exactly the repulsion (trace-correction) content; they
    also provide a cheap exact route to small scales, since no
    eigendecomposition is involved.
    """
    from .mass_field import expected_mass_truncated

    reach = mu.support_radius + r_trunc
    area = np.pi * reach * reach
    keep_prob = float(law.cdf(r_trunc / rho))
    lam = c / np.pi * area * keep_prob
    center = expected_mass_truncated(mu, law, c, rho, r_trunc)
    out = np.empty(size)
    counts = rng.poisson(lam, size)
    for i in range(size):
        k = counts[i]
        if k == 0:
            out[i] = -center / n_rho
            continue
        x = reach * np.sqrt(rng.random(k)) * np.exp(2j * np.pi * rng.random(k))
        radii = rho * law.quantile(rng.random(k) * keep_prob)
        out[i] = (float(np.sum(mu.ball_mass(x, radii))) - center) / n_rho
    return out


# ---------------------------------------------------------------------------
# stable limit (small-ball regime)
# ---------------------------------------------------------------------------


def sigma_gamma(gamma: float, rtol: float = 1e-9) -> float:
    """(pi^(gamma-1)/2) * integral_0^inf (1 - cos r) / r^(1+gamma) dr.

    Integration by parts turns the integrand into sin(r)/r^gamma (up to the
    1/gamma factor), whose head is handled by an ordinary quadrature and
    whose oscillatory tail uses the dedicated sine-weighted rule.
    """
    if not (1.0 < gamma < 2.0):
        raise ValueError(f"gamma must lie in (1, 2), got {gamma}")
    head, _ = quad(lambda r: np.sin(r) * r**-gamma, 0.0, 2.0 * np.pi, epsrel=rtol, limit=200)
    tail, _ = quad(
        lambda r: r**-gamma,
        2.0 * np.pi,
        np.inf,
        weight="sin",
        wvar=1.0,
        epsrel=rtol,
        limit=200,
    )
    return float(np.pi ** (gamma - 1.0) / 2.0 * (head + tail) / gamma)


def sigma_gamma_closed_form(gamma: float) -> float:
    """Same constant through Gamma-function identities (for cross-checks)."""
    from scipy.special import gamma as gamma_fn

    if not (1.0 < gamma < 2.0):
        raise ValueError(f"gamma must lie in (1, 2), got {gamma}")
    integral = gamma_fn(2.0 - gamma) * np.cos(np.pi * gamma / 2.0) / (gamma * (1.0 - gamma))
    return float(np.pi ** (gamma - 1.0) / 2.0 * integral)


@dataclass(frozen=True)
class StableOracle:
    """Totally skewed stable law: log E[exp(i t Z)] = -scale^gamma |t|^gamma
    (1 - i tan(pi gamma / 2) sign t), zero shift, skewness +1."""

    gamma: float
    scale: float
    skewness: float = 1.0

    def __post_init__(self):
        if not (1.0 < self.gamma < 2.0):
            raise ValueError(f"gamma must lie in (1, 2), got {self.gamma}")
        if not self.scale > 0:
            raise ValueError("scale must be positive")

    @classmethod
    def from_density(cls, mu: Measure, beta: float) -> "StableOracle":
        """Oracle for the limit field on a measure with an L1 ∩ L2 density."""
        gamma = beta / 2.0
        sg = sigma_gamma(gamma)
        phi_energy = mu.density_power_integral(gamma)
        return cls(gamma=gamma, scale=float((sg * phi_energy) ** (1.0 / gamma)))

    def sample(self, rng: np.random.Generator, size=None):
        """Exact draw by the trigonometric (uniform + exponential) method."""
        g, b = self.gamma, self.skewness
        u = rng.uniform(-np.pi / 2.0, np.pi / 2.0, size)
        w = rng.exponential(1.0, size)
        t = b * np.tan(np.pi * g / 2.0)
        b0 = np.arctan(t) / g
        s0 = (1.0 + t * t) ** (1.0 / (2.0 * g))
        x = (
            s0
            * np.sin(g * (u + b0))
            / np.cos(u) ** (1.0 / g)
            * (np.cos(u - g * (u + b0)) / w) ** ((1.0 - g) / g)
        )
        out = self.scale * x
        if size is None:
            return float(out)
        return out


def sample_Z(oracle: StableOracle, rng: np.random.Generator, size=None):
    return oracle.sample(rng, size)
