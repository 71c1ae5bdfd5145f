"""Pilot runs to freeze acceptance-test configurations (not shipped)."""
import sys
import time

import numpy as np
from scipy.integrate import quad

import ginibre_balls as gb

LAW = gb.RadiusLaw(beta=3.0)
t_start = time.time()


def stamp(msg):
    print(f"[{time.time()-t_start:7.1f}s] {msg}", flush=True)


# ---------------- criterion 4: Fredholm vs MC -------------------------------
mu4 = gb.UniformDiskMeasure(0j, 1.0, np.pi)
c4, rho4, R4 = 20.0, 0.3, 2.0
kern = gb.discretize_kernel(mu4, LAW, c4, rho4, R4, method="angular")
thetas = [0.1, 0.5, 1.0]
fred = {th: gb.laplace_fredholm(th, kern) for th in thetas}
stamp(f"fredholm {fred}")

# mark-conditional factor q_theta(s) = 1 - int f(u)(1-exp(-th mu(B(s, rho u)))) du
def q_factor(theta, s_grid):
    out = np.ones_like(s_grid)
    for i, s in enumerate(s_grid):
        val, _ = quad(
            lambda u: LAW.density(u) * (1.0 - np.exp(-theta * mu4.ball_mass(s + 0j, rho4 * u))),
            0.0,
            R4 / rho4,
            limit=200,
        )
        out[i] = 1.0 - val
    return out

s_tab = np.linspace(0.0, 3.0, 600)
q_tab = {th: q_factor(th, s_tab) for th in thetas}
window4 = gb.DiskWindow(0j, 3.0)
config4 = gb.GinibreConfig(c=c4)

def one_c4(rep):
    rng = gb.replicate_rng(777, 0, rep)
    pat = gb.sample_ginibre(config4, window4, rng)
    marked = gb.mark_pattern(pat, LAW, rho4, rng)
    m = gb.field_value(marked, mu4, R4).value
    s = np.abs(pat.points)
    rb = [float(np.prod(np.interp(s, s_tab, q_tab[th]))) for th in thetas]
    return [m] + rb

n4 = 4000
rows = np.array(gb.parallel_map(one_c4, n4, workers=2))
masses, rbs = rows[:, 0], rows[:, 1:]
for j, th in enumerate(thetas):
    plain = np.exp(-th * masses)
    pm, pse = plain.mean(), plain.std(ddof=1) / np.sqrt(n4)
    rm, rse = rbs[:, j].mean(), rbs[:, j].std(ddof=1) / np.sqrt(n4)
    stamp(
        f"C4 th={th}: plain {pm:.6f} (relSE {pse/pm:.2%}) rb {rm:.6f} (relSE {rse/rm:.2%}) "
        f"fred {fred[th]:.6f} gap_plain {(fred[th]-pm)/pm:+.2%} gap_rb {(fred[th]-rm)/rm:+.2%}"
    )

# ---------------- criterion 6: intermediate ---------------------------------
mu6 = gb.UniformDiskMeasure(0j, 0.4, 1.0)
R6 = 0.6
run6 = gb.run_regime(
    gb.Regime.intermediate(a=1.0, beta=3.0), mu6, LAW, [0.25, 0.18, 0.13],
    replicates=1000, root_seed=606, r_trunc=R6, workers=2,
)
oracle6 = gb.PoissonIntegralOracle.build(mu6, 3.0, a=1.0, eps=0.01, r_big=R6)
ovals6 = oracle6.sample(gb.replicate_rng(607, 9999, 0), 6000)
stamp(f"C6 oracle atoms/draw {oracle6.total_atom_intensity:.0f} var {oracle6.variance:.4f}")
for pt, s in zip(run6.points, run6.samples):
    rep = gb.ks_two_sample(s, ovals6)
    stamp(
        f"C6 rho={pt.rho}: D={rep.statistic:.4f} p={rep.p_value:.3g} "
        f"var_sim={s.var(ddof=1):.4f} skew={gb.sample_skewness(s):.3f}"
    )

# ---------------- criterion 7: large-ball -----------------------------------
mu7 = gb.UniformDiskMeasure(0j, 0.3, 1.0)
R7 = 0.5
reg7 = gb.Regime.large_ball(delta=1.0, beta=3.0)
var7 = gb.gaussian_variance(mu7, 3.0, r_max=R7)
for rho, reps in [(0.4, 2000), (0.26, 1200), (0.18, 800)]:
    run = gb.run_regime(reg7, mu7, LAW, [rho], replicates=reps, root_seed=707, r_trunc=R7, workers=2)
    s = run.samples[0]
    crb = run.points[0].c * rho**3
    gvals = gb.replicate_rng(708, 9999, 1).normal(0, np.sqrt(var7), 6000)
    rep = gb.ks_two_sample(s, gvals)
    stamp(
        f"C7 rho={rho}: c={run.points[0].c:.1f} crb={crb:.2f} D={rep.statistic:.4f} "
        f"p={rep.p_value:.3g} var_sim={s.var(ddof=1):.4f} var_lim={var7:.4f} "
        f"skew={gb.sample_skewness(s):.3f}"
    )

# ---------------- criterion 8: small-ball -----------------------------------
mu8 = gb.UniformDiskMeasure(0j, 0.35, 1.0)
R8 = 0.25
rho8, c8 = 0.042, 0.042 ** -1.64
delta8 = 3.0 - np.log(c8) / np.log(1.0 / rho8)
stamp(f"C8 KS point: rho={rho8} c={c8:.1f} delta={delta8:.3f} crb={c8*rho8**3:.3g}")
reg8 = gb.Regime.small_ball(delta=delta8, beta=3.0)
run8 = gb.run_regime(reg8, mu8, LAW, [rho8], replicates=1200, root_seed=808, r_trunc=R8, workers=2)
s8 = run8.samples[0]
so8 = gb.StableOracle.from_density(mu8, 3.0)
z8 = so8.sample(gb.replicate_rng(809, 9999, 0), 8000)
rep8 = gb.ks_two_sample(s8, z8)
stamp(f"C8 KS: D={rep8.statistic:.4f} p={rep8.p_value:.3g} scale={so8.scale:.4f}")

# tail point, Poisson proxy first (fast), DPP spot-check after
mu8t = gb.UniformDiskMeasure(0j, 0.3, 1.0)
R8t = 0.2
rho_t, c_t = 0.0079, 180.0
n_t = (c_t * rho_t**3) ** (2.0 / 3.0)
reach = mu8t.support_radius + R8t
lam = c_t / np.pi * np.pi * reach**2
center_mass = gb.expected_mass_truncated(mu8t, LAW, c_t, rho_t, R8t)
stamp(f"C8 tail point: crb={c_t*rho_t**3:.3g} n={n_t:.4g} mean count {lam:.1f}")

rng_t = np.random.default_rng(4242)
def poisson_proxy(batch):
    counts = rng_t.poisson(lam, batch)
    out = np.empty(batch)
    for i, k in enumerate(counts):
        x = reach * np.sqrt(rng_t.random(k)) * np.exp(2j * np.pi * rng_t.random(k))
        radii = rho_t * LAW.quantile(rng_t.random(k))
        keep = radii < R8t
        out[i] = (mu8t.ball_mass(x[keep], radii[keep]).sum() - center_mass) / n_t
    return out

vals_t = np.concatenate([poisson_proxy(20000) for _ in range(10)])
so_t = gb.StableOracle.from_density(mu8t, 3.0)
est = gb.tail_index_estimate(vals_t)
zt = so_t.sample(np.random.default_rng(505), 20000)
rep_t = gb.ks_two_sample(vals_t[:20000], zt)
stamp(f"C8 tail proxy (poisson, 2e5): gamma_hat={est:.4f} KS D={rep_t.statistic:.4f} scale={so_t.scale:.4f}")

# DPP spot check at the tail point (2e4 reps)
reg_t = gb.Regime.small_ball(delta=3.0 - np.log(c_t) / np.log(1.0 / rho_t), beta=3.0)
run_t = gb.run_regime(reg_t, mu8t, LAW, [rho_t], replicates=20000, root_seed=818, r_trunc=R8t, workers=2)
st = run_t.samples[0]
stamp(f"C8 tail DPP 2e4: gamma_hat={gb.tail_index_estimate(st):.4f} (noisy) D vs stable={gb.ks_two_sample(st, zt).statistic:.4f}")
stamp("pilot done")
