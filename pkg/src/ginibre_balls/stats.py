"""Statistical verification layer: KS tests, K-function, tail diagnostics.

Everything here is a pure function of sample arrays or point patterns.
The two-sample Kolmogorov-Smirnov test is the workhorse for comparing
pipeline fluctuations against limit-field oracles (no closed-form CDFs
needed on either side); batteries of tests are combined with Holm's
step-down correction to control the family-wise error of a run.
"""

from __future__ import annotations

from dataclasses import dataclass

import numpy as np
from scipy.special import kolmogorov

from .ginibre import PointPattern, pair_correlation_theoretical

__all__ = [
    "KSReport",
    "ks_two_sample",
    "holm_reject",
    "k_theoretical",
    "KFunctionEstimate",
    "ripley_k_estimate",
    "tail_index_estimate",
    "sample_skewness",
]


@dataclass(frozen=True)
class KSReport:
    statistic: float
    n1: int
    n2: int
    p_value: float
    level: float

    @property
    def passed(self) -> bool:
        """True when the null (same law) is NOT rejected at the given level."""
        return self.p_value >= self.level


def ks_two_sample(a, b, level: float = 0.01) -> KSReport:
    """Exact two-sample KS statistic with the asymptotic p-value.

    D = sup_x |F_a(x) - F_b(x)| from the sorted pooled samples; the p-value
    is the Kolmogorov tail at sqrt(n1 n2 / (n1 + n2)) * D.
    """
    a = np.sort(np.asarray(a, dtype=float))
    b = np.sort(np.asarray(b, dtype=float))
    n1, n2 = a.size, b.size
    if min(n1, n2) < 50:
        raise ValueError("both samples need at least 50 observations")
    if a[0] == a[-1] and b[0] == b[-1]:
        raise ValueError("both samples are degenerate (constant)")
    pooled = np.concatenate([a, b])
    cdf_a = np.searchsorted(a, pooled, side="right") / n1
    cdf_b = np.searchsorted(b, pooled, side="right") / n2
    d = float(np.max(np.abs(cdf_a - cdf_b)))
    n_eff = n1 * n2 / (n1 + n2)
    p = float(kolmogorov(np.sqrt(n_eff) * d))
    return KSReport(statistic=d, n1=n1, n2=n2, p_value=p, level=level)


def holm_reject(p_values, level: float = 0.01) -> np.ndarray:
    """Holm step-down rejections at family-wise error ``level``.

    Returns a boolean array aligned with the input; True marks rejection.
    """
    p = np.asarray(p_values, dtype=float)
    m = p.size
    order = np.argsort(p)
    reject = np.zeros(m, dtype=bool)
    for rank, idx in enumerate(order):
        if p[idx] <= level / (m - rank):
            reject[idx] = True
        else:
            break
    return reject


def k_theoretical(c: float, r):
    """K-function of the scaled repulsive process: pi r^2 - (pi/c)(1 - e^{-c r^2})."""
    if not c > 0:
        raise ValueError(f"c must be positive, got {c}")
    r = np.asarray(r, dtype=float)
    out = np.pi * r * r - (np.pi / c) * (1.0 - np.exp(-c * r * r))
    if out.ndim == 0:
        return float(out)
    return out


@dataclass(frozen=True)
class KFunctionEstimate:
    r_grid: np.ndarray
    k_hat: np.ndarray
    band: np.ndarray  # standard error of k_hat per grid point (NaN where no pairs)
    n_replicates: int


def ripley_k_estimate(patterns: list[PointPattern], r_grid) -> KFunctionEstimate:
    """Translation-corrected K-function averaged over replicate patterns.

    Per replicate, K(r) = (1/lambda^2) * sum over ordered pairs within
    distance r of 1 / overlap(window, window + pair vector); the intensity
    lambda = c/pi is the known one stored in the patterns.  The band is the
    replicate standard error of the mean.
    """
    if len(patterns) < 200:
        raise ValueError("ripley_k_estimate needs at least 200 replicates")
    r_grid = np.asarray(r_grid, dtype=float)
    window = patterns[0].window
    diam = 2.0 * window.circumradius
    if r_grid.max() > 0.25 * diam:
        raise ValueError("max r must not exceed a quarter of the window diameter")
    lam = patterns[0].intensity
    per_rep = np.zeros((len(patterns), r_grid.size))
    for i, pat in enumerate(patterns):
        if len(pat) < 2:
            continue
        diff = pat.points[:, None] - pat.points[None, :]
        mask = ~np.eye(len(pat), dtype=bool)
        v = diff[mask]
        d = np.abs(v)
        w = 1.0 / np.asarray(window.translation_overlap(v))
        order = np.argsort(d)
        d_sorted = d[order]
        w_cum = np.concatenate([[0.0], np.cumsum(w[order])])
        idx = np.searchsorted(d_sorted, r_grid, side="right")
        per_rep[i] = w_cum[idx] / lam**2
    k_hat = per_rep.mean(axis=0)
    band = per_rep.std(axis=0, ddof=1) / np.sqrt(len(patterns))
    band = np.where(per_rep.sum(axis=0) > 0, band, np.nan)
    return KFunctionEstimate(
        r_grid=r_grid, k_hat=k_hat, band=band, n_replicates=len(patterns)
    )


def tail_index_estimate(
    samples, q_low: float = 0.99, q_high: float = 0.9999, min_tail_points: int = 50
) -> float:
    """Tail exponent from the log-survival slope over an upper-quantile window.

    Fits log S(x) vs log x by least squares on the order statistics between
    the q_low and q_high empirical quantiles and returns the negated slope.
    Scale-invariant by construction.  Values far above the heavy-tail range
    (say > 3 for this package's uses) signal 'no heavy tail detected'.
    """
    x = np.sort(np.asarray(samples, dtype=float))
    n = x.size
    lo = int(np.floor(q_low * n))
    hi = min(int(np.ceil(q_high * n)), n - 1)
    xs = x[lo:hi]
    surv = 1.0 - (np.arange(lo, hi) + 1) / (n + 1)
    keep = xs > 0
    xs, surv = xs[keep], surv[keep]
    if xs.size < min_tail_points:
        raise ValueError(
            f"only {xs.size} positive tail points in the quantile window; "
            f"need at least {min_tail_points} (more samples required)"
        )
    slope = np.polyfit(np.log(xs), np.log(surv), 1)[0]
    return float(-slope)


def sample_skewness(x) -> float:
    """Standardized third moment, with the usual sqrt(6/n) noise scale."""
    x = np.asarray(x, dtype=float)
    m = x.mean()
    s2 = np.mean((x - m) ** 2)
    return float(np.mean((x - m) ** 3) / s2**1.5)


def pcf_gap(patterns, r_grid, bandwidth=None) -> float:
    """Sup over the grid of |pcf_estimate - theoretical pcf| (same c for all)."""
    from .ginibre import pcf_estimate

    g_hat = pcf_estimate(patterns, r_grid, bandwidth=bandwidth)
    g_true = pair_correlation_theoretical(patterns[0].c, np.asarray(r_grid))
    return float(np.max(np.abs(g_hat - g_true)))
