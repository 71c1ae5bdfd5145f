"""Command-line entry points.

Every command reads a JSON config (``--config``), applies defaults,
echoes the fully resolved configuration into ``<out>/run.json`` and writes
CSV/JSON artifacts next to it.  Exit codes: 0 all checks passed, 1 a
statistical verdict failed, 2 configuration or budget error.

Commands: sample, regime, laplace, kfunction, spectrum, oracle.
"""

from __future__ import annotations

import argparse
import json
import os
import sys

import numpy as np

from . import io as gio
from .fredholm import (
    GridResolutionError,
    discretize_kernel,
    laplace_fredholm,
    log_laplace_decomposition,
    spectrum_check,
    stability_check,
)
from .ginibre import GinibreConfig, sample_ginibre, sample_poisson
from .mass_field import field_value, fluctuation
from .measures import measure_from_dict
from .oracles import GaussianOracle, PoissonIntegralOracle, StableOracle
from .radii import RadiusLaw, mark_pattern
from .scaling import (
    BudgetExceededError,
    Regime,
    check_budget,
    parallel_map,
    run_regime,
    schedule,
)
from .seeds import replicate_rng
from .stats import holm_reject, k_theoretical, ks_two_sample, ripley_k_estimate
from .windows import DiskWindow, window_from_dict

SCHEMA_VERSION = 1

EXIT_OK = 0
EXIT_STAT_FAIL = 1
EXIT_CONFIG = 2


class ConfigError(ValueError):
    pass


def _require(cond: bool, message: str):
    if not cond:
        raise ConfigError(message)


def _law_from(cfg: dict) -> RadiusLaw:
    beta = float(cfg.get("beta", 3.0))
    _require(2.0 < beta < 4.0, f"law.beta = {beta} inadmissible: beta must lie in (2, 4)")
    return RadiusLaw(beta=beta, r0=float(cfg.get("r0", 1.0)))


def _regime_from(cfg: dict) -> Regime:
    kind = cfg.get("kind")
    beta = float(cfg.get("beta", 3.0))
    _require(2.0 < beta < 4.0, f"regime.beta = {beta} inadmissible: beta must lie in (2, 4)")
    if kind == "intermediate":
        a = float(cfg.get("a", 1.0))
        _require(a > 0, f"regime.a = {a} inadmissible: a must be positive")
        return Regime.intermediate(a=a, beta=beta)
    if kind in ("large_ball", "small_ball"):
        delta = float(cfg.get("delta", 1.0))
        _require(delta > 0, f"regime.delta = {delta} inadmissible: delta must be positive")
        return Regime(kind=kind, beta=beta, delta=delta)
    raise ConfigError(f"regime.kind = {kind!r} must be large_ball, intermediate or small_ball")


def _echo(out_dir: str, resolved: dict):
    gio.ensure_dir(out_dir)
    resolved = dict(resolved)
    resolved["schema_version"] = SCHEMA_VERSION
    gio.write_json(resolved, os.path.join(out_dir, "run.json"))


# ---------------------------------------------------------------------------
# commands
# ---------------------------------------------------------------------------


def cmd_sample(cfg: dict, out_dir: str, workers: int, dry_run: bool) -> int:
    kind = cfg.get("kind", "ginibre")
    _require(kind in ("ginibre", "poisson", "marked"), f"sample.kind = {kind!r} unknown")
    window = window_from_dict(cfg.get("window", {"shape": "disk", "radius": 1.0}))
    replicates = int(cfg.get("replicates", 1))
    seed = int(cfg.get("seed", 0))
    resolved = {
        "command": "sample",
        "kind": kind,
        "window": window.describe(),
        "replicates": replicates,
        "seed": seed,
    }

    if kind == "poisson":
        intensity = float(cfg.get("intensity", 1.0 / np.pi))
        _require(intensity > 0, f"intensity = {intensity} must be positive")
        resolved["intensity"] = intensity
    else:
        c = float(cfg.get("c", np.pi))
        alpha = float(cfg.get("alpha", 1.0))
        _require(c > 0, f"c = {c} inadmissible: c must be positive")
        _require(0 < alpha <= 1, f"alpha = {alpha} inadmissible: alpha must lie in (0, 1]")
        resolved.update({"c": c, "alpha": alpha})
    if kind == "marked":
        law = _law_from(cfg.get("law", {}))
        rho = float(cfg.get("rho", 1.0))
        _require(rho > 0, f"rho = {rho} inadmissible: rho must be positive")
        resolved.update({"law": law.describe(), "rho": rho})

    if dry_run:
        print(json.dumps(resolved, indent=2, sort_keys=True))
        return EXIT_OK
    _echo(out_dir, resolved)
    summaries = []
    for rep in range(replicates):
        rng = replicate_rng(seed, stream=0, replicate=rep)
        if kind == "poisson":
            pat = sample_poisson(resolved["intensity"], window, rng)
        else:
            pat = sample_ginibre(
                GinibreConfig(c=resolved["c"], alpha=resolved["alpha"]), window, rng
            )
        if kind == "marked":
            marked = mark_pattern(pat, law, resolved["rho"], rng)
            gio.write_marked_csv(marked, os.path.join(out_dir, f"marked_{rep:04d}.csv"))
        else:
            gio.write_pattern_csv(pat, os.path.join(out_dir, f"pattern_{rep:04d}.csv"))
        summaries.append(gio.pattern_summary(pat, seed))
    gio.write_json({"replicates": summaries}, os.path.join(out_dir, "summary.json"))
    print(f"wrote {replicates} replicate(s) to {out_dir}")
    return EXIT_OK


def _regime_oracle(regime: Regime, mu, law, r_trunc: float, cfg: dict):
    if regime.kind == "large_ball":
        return GaussianOracle.build(mu, regime.beta, r_max=r_trunc)
    if regime.kind == "intermediate":
        return PoissonIntegralOracle.build(
            mu,
            regime.beta,
            a=regime.a,
            eps=cfg.get("oracle_eps"),
            r_big=r_trunc,
            max_mean_atoms=float(cfg.get("oracle_max_atoms", 2e5)),
        )
    return StableOracle.from_density(mu, regime.beta)


def cmd_regime(cfg: dict, out_dir: str, workers: int, dry_run: bool) -> int:
    regime = _regime_from(cfg.get("regime", {}))
    mu = measure_from_dict(cfg["mu"])
    law = _law_from(cfg.get("law", {"beta": regime.beta}))
    rho_list = [float(r) for r in cfg["rho_list"]]
    replicates = int(cfg.get("replicates", 200))
    r_trunc = float(cfg.get("r_trunc", 1.0))
    oracle_draws = int(cfg.get("oracle_draws", max(2000, 2 * replicates)))
    level = float(cfg.get("level", 0.01))
    seed = int(cfg.get("seed", 0))
    max_order = int(cfg.get("max_order", 4000))

    points = schedule(regime, rho_list)
    window = DiskWindow(center=0j, radius=mu.support_radius + r_trunc)
    orders = check_budget(points, window, max_order=max_order)
    resolved = {
        "command": "regime",
        "regime": regime.describe(),
        "mu": mu.describe(),
        "law": law.describe(),
        "rho_list": rho_list,
        "replicates": replicates,
        "r_trunc": r_trunc,
        "oracle_draws": oracle_draws,
        "level": level,
        "seed": seed,
        "max_order": max_order,
        "matrix_orders": orders,
        "workers": workers,
    }
    if dry_run:
        print(json.dumps(resolved, indent=2, sort_keys=True))
        for pt, n in zip(points, orders):
            print(
                f"rho={pt.rho:<8g} c={pt.c:<12.6g} n_rho={pt.n_rho:<10.6g} matrix_order={n}"
            )
        return EXIT_OK
    _echo(out_dir, resolved)

    # resume support: schedule points with a complete CSV are not rerun
    samples = []
    missing = []
    for i, pt in enumerate(points):
        path = os.path.join(out_dir, f"samples_point{i}.csv")
        if os.path.exists(path):
            vals = gio.read_values_csv(path)
            if vals.size == replicates:
                samples.append(vals)
                continue
        samples.append(None)
        missing.append(i)
    if missing:
        # stream index = global point index, so resuming reproduces the
        # exact values a fresh full run would have produced
        from .scaling import _fluctuation_replicate

        for i in missing:
            pt = points[i]
            vals = parallel_map(
                lambda rep: _fluctuation_replicate(
                    pt, mu, law, window, r_trunc, seed, i, rep, 1.0
                ),
                replicates,
                workers=workers,
            )
            samples[i] = np.array(vals)
            gio.write_values_csv(samples[i], os.path.join(out_dir, f"samples_point{i}.csv"))

    oracle = _regime_oracle(regime, mu, law, r_trunc, cfg)
    orng = replicate_rng(seed, stream=10_000, replicate=0)
    oracle_vals = oracle.sample(orng, oracle_draws)
    gio.write_values_csv(oracle_vals, os.path.join(out_dir, "samples_oracle.csv"))
    gio.write_json(
        {"source": "oracle", "kind": regime.kind, "draws": oracle_draws},
        os.path.join(out_dir, "oracle.json"),
    )

    reports = [ks_two_sample(s, oracle_vals, level=level) for s in samples]
    rejected = holm_reject([r.p_value for r in reports], level=level)
    print(f"{'rho':>8} {'c':>12} {'n_rho':>10} {'D':>8} {'p':>10} verdict")
    for pt, rep, rej in zip(points, reports, rejected):
        verdict = "FAIL" if rej else "pass"
        print(
            f"{pt.rho:>8g} {pt.c:>12.5g} {pt.n_rho:>10.5g} "
            f"{rep.statistic:>8.4f} {rep.p_value:>10.3e} {verdict}"
        )
    ds = [r.statistic for r in reports]
    trend = all(b <= a + 1e-12 for a, b in zip(ds[:-1], ds[1:]))
    print(f"D trend nonincreasing along schedule: {trend}")
    gio.write_json(
        {
            "points": [
                {
                    "rho": pt.rho,
                    "c": pt.c,
                    "n_rho": pt.n_rho,
                    "D": rep.statistic,
                    "p_value": rep.p_value,
                    "holm_rejected": bool(rej),
                }
                for pt, rep, rej in zip(points, reports, rejected)
            ],
            "d_trend_nonincreasing": trend,
        },
        os.path.join(out_dir, "verdict.json"),
    )
    return EXIT_STAT_FAIL if rejected[-1] else EXIT_OK


def cmd_laplace(cfg: dict, out_dir: str, workers: int, dry_run: bool) -> int:
    mu = measure_from_dict(cfg["mu"])
    law = _law_from(cfg.get("law", {}))
    c = float(cfg.get("c", 20.0))
    rho = float(cfg.get("rho", 0.3))
    r_trunc = float(cfg.get("r_trunc", 2.0))
    thetas = [float(t) for t in cfg.get("thetas", [0.1, 0.5, 1.0])]
    replicates = int(cfg.get("replicates", 0))
    seed = int(cfg.get("seed", 0))
    method = cfg.get("method", "auto")
    _require(c > 0 and rho > 0 and r_trunc > 0, "c, rho, r_trunc must be positive")
    resolved = {
        "command": "laplace",
        "mu": mu.describe(),
        "law": law.describe(),
        "c": c,
        "rho": rho,
        "r_trunc": r_trunc,
        "thetas": thetas,
        "replicates": replicates,
        "seed": seed,
        "method": method,
    }
    if dry_run:
        print(json.dumps(resolved, indent=2, sort_keys=True))
        return EXIT_OK
    _echo(out_dir, resolved)
    kernel = discretize_kernel(mu, law, c, rho, r_trunc, method=method)

    mc_means = {}
    if replicates > 0:
        window = DiskWindow(center=0j, radius=mu.support_radius + r_trunc)
        config = GinibreConfig(c=c)

        def one(rep: int) -> float:
            rng = replicate_rng(seed, stream=0, replicate=rep)
            pat = sample_ginibre(config, window, rng)
            marked = mark_pattern(pat, law, rho, rng)
            return field_value(marked, mu, r_trunc).value

        masses = np.array(parallel_map(one, replicates, workers=workers))
        for th in thetas:
            mc_means[th] = float(np.mean(np.exp(-th * masses)))

    rows = []
    print(f"{'theta':>8} {'fredholm':>14} {'monte_carlo':>14} {'rel_gap':>10} {'stable':>7}")
    worst = 0.0
    for th in thetas:
        val = laplace_fredholm(th, kernel)
        stable, _, _ = stability_check(th, kernel)
        mc = mc_means.get(th)
        gap = abs(val - mc) / mc if mc else None
        worst = max(worst, gap or 0.0)
        rows.append(
            {"theta": th, "fredholm": val, "monte_carlo": mc, "rel_gap": gap, "stable": stable}
        )
        print(
            f"{th:>8g} {val:>14.8f} "
            f"{(f'{mc:.8f}' if mc else '-'):>14} "
            f"{(f'{gap:.4%}' if gap is not None else '-'):>10} {str(stable):>7}"
        )
    gio.write_json({"rows": rows}, os.path.join(out_dir, "laplace.json"))
    if replicates > 0 and worst > float(cfg.get("tolerance", 0.02)):
        return EXIT_STAT_FAIL
    return EXIT_OK


def cmd_kfunction(cfg: dict, out_dir: str, workers: int, dry_run: bool) -> int:
    process = cfg.get("process", "ginibre")
    _require(process in ("ginibre", "poisson"), f"process = {process!r} unknown")
    c = float(cfg.get("c", 50.0))
    _require(c > 0, f"c = {c} must be positive")
    window = window_from_dict(cfg.get("window", {"shape": "disk", "radius": 1.0}))
    replicates = int(cfg.get("replicates", 300))
    r_max = float(cfg.get("r_max", 0.25 * 2 * window.circumradius))
    n_pts = int(cfg.get("r_points", 12))
    seed = int(cfg.get("seed", 0))
    resolved = {
        "command": "kfunction",
        "process": process,
        "c": c,
        "window": window.describe(),
        "replicates": replicates,
        "r_max": r_max,
        "r_points": n_pts,
        "seed": seed,
    }
    if dry_run:
        print(json.dumps(resolved, indent=2, sort_keys=True))
        return EXIT_OK
    _echo(out_dir, resolved)

    def one(rep: int):
        rng = replicate_rng(seed, stream=0, replicate=rep)
        if process == "poisson":
            return sample_poisson(c / np.pi, window, rng)
        return sample_ginibre(GinibreConfig(c=c), window, rng)

    pats = parallel_map(one, replicates, workers=workers)
    r_grid = np.linspace(r_max / n_pts, r_max, n_pts)
    est = ripley_k_estimate(pats, r_grid)
    k_theo = (
        k_theoretical(c, r_grid) if process == "ginibre" else np.pi * r_grid**2
    )
    print(f"{'r':>8} {'k_hat':>12} {'k_theory':>12} {'gap':>12} {'band':>12}")
    rows = []
    ok = True
    for r, kh, kt, b in zip(r_grid, est.k_hat, k_theo, est.band):
        gap = kh - kt
        ok = ok and (np.isnan(b) or abs(gap) <= 3.0 * b)
        rows.append({"r": float(r), "k_hat": float(kh), "k_theory": float(kt), "band": float(b)})
        print(f"{r:>8.4f} {kh:>12.6f} {kt:>12.6f} {gap:>12.2e} {b:>12.2e}")
    gio.write_json({"rows": rows, "within_3_bands": bool(ok)}, os.path.join(out_dir, "kfunction.json"))
    return EXIT_OK if ok else EXIT_STAT_FAIL


def cmd_spectrum(cfg: dict, out_dir: str, workers: int, dry_run: bool) -> int:
    mu = measure_from_dict(cfg["mu"])
    law = _law_from(cfg.get("law", {}))
    c = float(cfg.get("c", 20.0))
    rho = float(cfg.get("rho", 0.3))
    r_trunc = float(cfg.get("r_trunc", 2.0))
    method = cfg.get("method", "auto")
    resolved = {
        "command": "spectrum",
        "mu": mu.describe(),
        "law": law.describe(),
        "c": c,
        "rho": rho,
        "r_trunc": r_trunc,
        "method": method,
    }
    if dry_run:
        print(json.dumps(resolved, indent=2, sort_keys=True))
        return EXIT_OK
    _echo(out_dir, resolved)
    kernel = discretize_kernel(mu, law, c, rho, r_trunc, method=method)
    report = spectrum_check(kernel)
    rel = abs(report.trace - report.trace_expected) / report.trace_expected
    out = {
        "lambda_max": report.lambda_max,
        "lambda_min": report.lambda_min,
        "trace": report.trace,
        "trace_expected": report.trace_expected,
        "trace_rel_error": rel,
        "ok": report.ok,
    }
    gio.write_json(out, os.path.join(out_dir, "spectrum.json"))
    print(json.dumps(out, indent=2, sort_keys=True))
    return EXIT_OK if report.ok else EXIT_STAT_FAIL


def cmd_oracle(cfg: dict, out_dir: str, workers: int, dry_run: bool) -> int:
    kind = cfg.get("kind")
    _require(kind in ("gaussian", "poisson", "stable"), f"oracle.kind = {kind!r} unknown")
    mu = measure_from_dict(cfg["mu"])
    beta = float(cfg.get("beta", 3.0))
    _require(2.0 < beta < 4.0, f"beta = {beta} inadmissible: beta must lie in (2, 4)")
    draws = int(cfg.get("draws", 10_000))
    seed = int(cfg.get("seed", 0))
    resolved = {
        "command": "oracle",
        "kind": kind,
        "mu": mu.describe(),
        "beta": beta,
        "draws": draws,
        "seed": seed,
        "source": "oracle",
    }
    if kind == "poisson":
        a = float(cfg.get("a", 1.0))
        _require(a > 0, f"a = {a} inadmissible: a must be positive")
        resolved["a"] = a
    if dry_run:
        print(json.dumps(resolved, indent=2, sort_keys=True))
        return EXIT_OK
    _echo(out_dir, resolved)
    rng = replicate_rng(seed, stream=0, replicate=0)
    if kind == "gaussian":
        oracle = GaussianOracle.build(mu, beta, r_max=float(cfg.get("r_max", np.inf)))
    elif kind == "poisson":
        oracle = PoissonIntegralOracle.build(
            mu, beta, a=resolved["a"], eps=cfg.get("eps"), r_big=cfg.get("r_big")
        )
    else:
        oracle = StableOracle.from_density(mu, beta)
    vals = oracle.sample(rng, draws)
    gio.write_values_csv(vals, os.path.join(out_dir, "samples_oracle.csv"))
    gio.write_json(resolved, os.path.join(out_dir, "oracle.json"))
    print(f"wrote {draws} oracle draws to {out_dir}")
    return EXIT_OK


# ---------------------------------------------------------------------------


def main(argv=None) -> int:
    parser = argparse.ArgumentParser(
        prog="ginibre-balls",
        description="Repulsive random balls models: samplers, scaling limits, diagnostics",
    )
    parser.add_argument("command", choices=["sample", "regime", "laplace", "kfunction", "spectrum", "oracle"])
    parser.add_argument("--config", required=True, help="path to the JSON run configuration")
    parser.add_argument("--seed", type=int, default=None, help="override the config seed")
    parser.add_argument("--workers", type=int, default=1, help="replicate-level thread workers")
    parser.add_argument("--out", default="runs/out", help="output directory")
    parser.add_argument("--dry-run", action="store_true", help="print the resolved config only")
    args = parser.parse_args(argv)

    try:
        with open(args.config) as fh:
            cfg = json.load(fh)
    except (OSError, json.JSONDecodeError) as exc:
        print(f"config error: {exc}", file=sys.stderr)
        return EXIT_CONFIG
    if args.seed is not None:
        cfg["seed"] = args.seed

    handlers = {
        "sample": cmd_sample,
        "regime": cmd_regime,
        "laplace": cmd_laplace,
        "kfunction": cmd_kfunction,
        "spectrum": cmd_spectrum,
        "oracle": cmd_oracle,
    }
    try:
        return handlers[args.command](cfg, args.out, args.workers, args.dry_run)
    except (BudgetExceededError, GridResolutionError) as exc:
        print(f"budget error: {exc}", file=sys.stderr)
        return EXIT_CONFIG
    except (ConfigError, ValueError, KeyError) as exc:
        print(f"config error: {exc}", file=sys.stderr)
        return EXIT_CONFIG


if __name__ == "__main__":
    sys.exit(main())
