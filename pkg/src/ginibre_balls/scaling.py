"""Zoom-out schedules and replicated generation of normalized fluctuations.

A zoom-out couples the intensity parameter c to the radius scale rho and
sends rho to 0.  The product c * rho^beta sorts the limits:

* large-ball:    c = rho^(-beta-delta), c rho^beta -> infinity,
                 normalization n(rho) = sqrt(c rho^beta), Gaussian limit;
* intermediate:  c = a * rho^(-beta),   c rho^beta = a fixed,
                 no normalization, compensated-Poisson limit;
* small-ball:    c = rho^(-beta+delta), c rho^beta -> 0,
                 n(rho) = (c rho^beta)^(2/beta), stable limit with
                 index gamma = beta/2.

``run_regime`` drives the full pipeline (sample points, mark with scaled
radii, evaluate the truncated centered field) over a replicate ladder per
schedule point, with deterministic per-replicate RNG streams and optional
thread workers.  The eigenvalue sampler is O(order^3) per replicate, so a
hard budget on the matrix order refuses schedules that would silently run
for hours.
"""

from __future__ import annotations

from dataclasses import dataclass

import numpy as np

from .ginibre import GinibreConfig, sample_ginibre
from .mass_field import fluctuation
from .measures import Measure
from .radii import RadiusLaw, mark_pattern
from .seeds import replicate_rng
from .windows import DiskWindow

__all__ = [
    "Regime",
    "SchedulePoint",
    "RegimeRun",
    "BudgetExceededError",
    "schedule",
    "check_budget",
    "run_regime",
    "finite_dim_vector",
    "parallel_map",
]

DEFAULT_MAX_ORDER = 4000


class BudgetExceededError(RuntimeError):
    """Schedule would need a sampling matrix beyond the configured budget."""


@dataclass(frozen=True)
class Regime:
    kind: str  # large_ball | intermediate | small_ball
    beta: float
    delta: float | None = None  # large_ball / small_ball exponent offset
    a: float | None = None  # intermediate limit of c * rho^beta

    def __post_init__(self):
        if not (2.0 < self.beta < 4.0):
            raise ValueError(f"beta must lie in (2, 4), got {self.beta}")
        if self.kind in ("large_ball", "small_ball"):
            if self.delta is None or not self.delta > 0:
                raise ValueError(f"{self.kind} needs delta > 0")
            if self.kind == "small_ball" and self.delta >= self.beta:
                raise ValueError("small_ball needs delta < beta so that c still grows")
        elif self.kind == "intermediate":
            if self.a is None or not self.a > 0:
                raise ValueError("intermediate needs a > 0")
        else:
            raise ValueError(f"unknown regime kind {self.kind!r}")

    @classmethod
    def large_ball(cls, delta: float, beta: float) -> "Regime":
        return cls(kind="large_ball", beta=beta, delta=delta)

    @classmethod
    def intermediate(cls, a: float, beta: float) -> "Regime":
        return cls(kind="intermediate", beta=beta, a=a)

    @classmethod
    def small_ball(cls, delta: float, beta: float) -> "Regime":
        return cls(kind="small_ball", beta=beta, delta=delta)

    def c_of(self, rho: float) -> float:
        if self.kind == "large_ball":
            return rho ** (-self.beta - self.delta)
        if self.kind == "intermediate":
            return self.a * rho ** (-self.beta)
        return rho ** (-self.beta + self.delta)

    def n_of(self, rho: float) -> float:
        crb = self.c_of(rho) * rho**self.beta
        if self.kind == "large_ball":
            return float(np.sqrt(crb))
        if self.kind == "intermediate":
            return 1.0
        return float(crb ** (2.0 / self.beta))

    @property
    def gamma(self) -> float | None:
        """Stable index beta/2, defined for the small-ball regime."""
        return self.beta / 2.0 if self.kind == "small_ball" else None

    def describe(self) -> dict:
        out = {"kind": self.kind, "beta": self.beta}
        if self.delta is not None:
            out["delta"] = self.delta
        if self.a is not None:
            out["a"] = self.a
        return out


@dataclass(frozen=True)
class SchedulePoint:
    rho: float
    c: float
    n_rho: float
    gamma: float | None = None


def schedule(regime: Regime, rho_list) -> list[SchedulePoint]:
    """Schedule points for a decreasing list of radius scales."""
    rhos = [float(r) for r in rho_list]
    if any(r <= 0 for r in rhos):
        raise ValueError("rho values must be positive")
    if any(b >= a for a, b in zip(rhos[:-1], rhos[1:])):
        raise ValueError("rho_list must be strictly decreasing")
    points = []
    for rho in rhos:
        c = regime.c_of(rho)
        crb = c * rho**regime.beta
        if regime.kind == "large_ball":
            assert abs(crb - rho ** (-regime.delta)) < 1e-9 * crb
        elif regime.kind == "intermediate":
            assert abs(crb - regime.a) < 1e-9 * max(crb, regime.a)
        else:
            assert abs(crb - rho**regime.delta) < 1e-9 * max(crb, 1e-300)
        points.append(
            SchedulePoint(rho=rho, c=c, n_rho=regime.n_of(rho), gamma=regime.gamma)
        )
    return points


def check_budget(
    points: list[SchedulePoint],
    window: DiskWindow,
    max_order: int = DEFAULT_MAX_ORDER,
    alpha: float = 1.0,
) -> list[int]:
    """Matrix orders per point; raise with a diagnostic when one is over budget."""
    orders = []
    for pt in points:
        config = GinibreConfig(c=pt.c, alpha=alpha)
        order, buffer, radius = config.resolve_order(window)
        if order > max_order:
            raise BudgetExceededError(
                f"schedule point rho={pt.rho:g} needs matrix order "
                f"{order} = ceil(c*(radius+buffer)^2) = ceil({pt.c:.4g}*({radius:.3g}"
                f"+{buffer:.3g})^2) > budget {max_order}; shrink the window, raise rho, "
                "or raise max_order"
            )
        orders.append(order)
    return orders


@dataclass(frozen=True)
class RegimeRun:
    regime: Regime
    points: tuple
    samples: tuple  # one float array per schedule point
    replicates: int
    root_seed: int
    r_trunc: float
    mu_description: dict

    def point_samples(self, i: int) -> np.ndarray:
        return self.samples[i]


def parallel_map(fn, n: int, workers: int = 1) -> list:
    """Map fn over range(n), optionally on a thread pool.

    Results are ordered by index, and every fn(i) derives its randomness
    from the index, so the output is identical for any worker count.  BLAS
    threading is pinned to one thread while the pool runs to avoid
    oversubscription (the inner eigensolves release the GIL).
    """
    if workers <= 1:
        return [fn(i) for i in range(n)]
    from concurrent.futures import ThreadPoolExecutor

    from threadpoolctl import threadpool_limits

    with threadpool_limits(limits=1):
        with ThreadPoolExecutor(max_workers=workers) as ex:
            return list(ex.map(fn, range(n)))


def _fluctuation_replicate(
    point: SchedulePoint,
    mu: Measure,
    law: RadiusLaw,
    window: DiskWindow,
    r_trunc: float,
    root_seed: int,
    stream: int,
    replicate: int,
    alpha: float,
) -> float:
    rng = replicate_rng(root_seed, stream=stream, replicate=replicate)
    config = GinibreConfig(c=point.c, alpha=alpha)
    pattern = sample_ginibre(config, window, rng)
    marked = mark_pattern(pattern, law, point.rho, rng)
    return fluctuation(marked, mu, law, r_trunc, point.n_rho).value


def run_regime(
    regime: Regime,
    mu: Measure,
    law: RadiusLaw,
    rho_list,
    replicates: int,
    root_seed: int,
    r_trunc: float,
    max_order: int = DEFAULT_MAX_ORDER,
    workers: int = 1,
    alpha: float = 1.0,
) -> RegimeRun:
    """Replicated normalized fluctuations at every schedule point.

    The window is the support of mu dilated by r_trunc, which makes the
    truncated field exact (no edge bias).  Streams: schedule point i uses
    RNG stream i; replicates are independent and order-insensitive.
    """
    if replicates < 100:
        raise ValueError("need at least 100 replicates per schedule point")
    if law.beta != regime.beta:
        raise ValueError("radius law and regime must share one beta")
    points = schedule(regime, rho_list)
    window = DiskWindow(center=0j, radius=mu.support_radius + r_trunc)
    check_budget(points, window, max_order=max_order, alpha=alpha)
    all_samples = []
    for i, pt in enumerate(points):
        vals = parallel_map(
            lambda rep: _fluctuation_replicate(
                pt, mu, law, window, r_trunc, root_seed, i, rep, alpha
            ),
            replicates,
            workers=workers,
        )
        all_samples.append(np.array(vals))
    return RegimeRun(
        regime=regime,
        points=tuple(points),
        samples=tuple(all_samples),
        replicates=replicates,
        root_seed=root_seed,
        r_trunc=r_trunc,
        mu_description=mu.describe(),
    )


def finite_dim_vector(
    point: SchedulePoint,
    mu_list: list[Measure],
    law: RadiusLaw,
    replicates: int,
    root_seed: int,
    r_trunc: float,
    stream: int = 0,
    max_order: int = DEFAULT_MAX_ORDER,
    workers: int = 1,
    alpha: float = 1.0,
) -> np.ndarray:
    """Joint fluctuation samples: one shared pattern per replicate, all measures.

    Row j holds the fluctuation of every measure evaluated on the same
    marked realization, enabling joint-law (Cramer-Wold style) tests.
    """
    reach = max(m.support_radius for m in mu_list)
    window = DiskWindow(center=0j, radius=reach + r_trunc)
    check_budget([point], window, max_order=max_order, alpha=alpha)

    def one(rep: int):
        rng = replicate_rng(root_seed, stream=stream, replicate=rep)
        config = GinibreConfig(c=point.c, alpha=alpha)
        pattern = sample_ginibre(config, window, rng)
        marked = mark_pattern(pattern, law, point.rho, rng)
        return [fluctuation(marked, m, law, r_trunc, point.n_rho).value for m in mu_list]

    rows = parallel_map(one, replicates, workers=workers)
    return np.array(rows)
