"""Second pilot: redesigned regime checks (not shipped)."""
import time

import numpy as np

import ginibre_balls as gb

LAW = gb.RadiusLaw(beta=3.0)
t0 = time.time()
def stamp(m): print(f"[{time.time()-t0:7.1f}s] {m}", flush=True)

# ---- C6 redesign ------------------------------------------------------------
mu6 = gb.UniformDiskMeasure(0j, 0.4, 1.0)
R6 = 0.6

# (a) DPP vs finite-scale Poisson equivalent at feasible rho
rho_a, c_a = 0.13, 0.13**-3.0
run = gb.run_regime(gb.Regime.intermediate(a=1.0, beta=3.0), mu6, LAW, [rho_a],
                    replicates=1000, root_seed=606, r_trunc=R6, workers=2)
dpp = run.samples[0]
peq = gb.poisson_equivalent_fluctuations(mu6, LAW, c_a, rho_a, R6, 1.0,
                                         gb.replicate_rng(611, 0, 0), 6000)
rep = gb.ks_two_sample(dpp, peq)
stamp(f"C6a DPP vs PoissonEq at rho={rho_a}: D={rep.statistic:.4f} p={rep.p_value:.3g} "
      f"var dpp={dpp.var(ddof=1):.4f} peq={peq.var(ddof=1):.4f}")

# (b) Poisson-equivalent ladder to the limit oracle
oracle6 = gb.PoissonIntegralOracle.build(mu6, 3.0, a=1.0, eps=0.01, r_big=R6)
ovals = oracle6.sample(gb.replicate_rng(607, 9999, 0), 8000)
for rho in (0.13, 0.05, 0.02):
    c = rho**-3.0
    pv = gb.poisson_equivalent_fluctuations(mu6, LAW, c, rho, R6, 1.0,
                                            gb.replicate_rng(612, 0, int(rho*1000)), 2000)
    r2 = gb.ks_two_sample(pv, ovals)
    stamp(f"C6b PoissonEq rho={rho}: D={r2.statistic:.4f} p={r2.p_value:.3g} var={pv.var(ddof=1):.4f} (oracle {oracle6.variance:.4f})")

# ---- C7 redesign: law-units band R = 2.5 rho -------------------------------
mu7 = gb.UniformDiskMeasure(0j, 0.3, 1.0)
R0 = 2.5
reg7 = gb.Regime.large_ball(delta=1.0, beta=3.0)
for rho, reps in [(0.3, 1500), (0.22, 1000), (0.16, 700)]:
    R = R0 * rho
    runp = gb.run_regime(reg7, mu7, LAW, [rho], replicates=reps, root_seed=707,
                         r_trunc=R, workers=2)
    s = runp.samples[0]
    pt = runp.points[0]
    var_exact = gb.field_variance_exact(mu7, LAW, pt.c, rho, R) / pt.n_rho**2
    gvals = gb.replicate_rng(708, 99, int(rho*100)).normal(0, np.sqrt(var_exact), 6000)
    r3 = gb.ks_two_sample(s, gvals)
    stamp(f"C7 rho={rho}: crb={pt.c*rho**3:.2f} D={r3.statistic:.4f} p={r3.p_value:.3g} "
          f"var sim={s.var(ddof=1):.4f} exact={var_exact:.4f} skew={gb.sample_skewness(s):.3f}")

# variance ladder to the W^R target at fixed R (quadrature only)
R_fix = 0.5
target = gb.gaussian_variance(mu7, 3.0, r_max=R_fix)
for rho in (0.2, 0.1, 0.05, 0.021):
    c = rho**-4.0
    v = gb.field_variance_exact(mu7, LAW, c, rho, R_fix) / (c * rho**3.0)
    stamp(f"C7 var ladder rho={rho}: ratio={v/target:.4f}")

# ---- C8 redesign ------------------------------------------------------------
# KS point
mu8 = gb.UniformDiskMeasure(0j, 0.35, 1.0)
rho8, c8, R8 = 0.0133, 180.0, 0.3
n8 = (c8 * rho8**3.0) ** (2.0 / 3.0)
so8 = gb.StableOracle.from_density(mu8, 3.0)
z8 = so8.sample(gb.replicate_rng(809, 9999, 0), 8000)
pv8 = gb.poisson_equivalent_fluctuations(mu8, LAW, c8, rho8, R8, n8,
                                         gb.replicate_rng(813, 0, 0), 2000)
stamp(f"C8 KS point proxy: D={gb.ks_two_sample(pv8, z8).statistic:.4f} crb={c8*rho8**3:.2e} sat={1/(n8*so8.scale):.0f}")
reg8 = gb.Regime.small_ball(delta=3.0 - np.log(c8)/np.log(1.0/rho8), beta=3.0)
run8 = gb.run_regime(reg8, mu8, LAW, [rho8], replicates=1200, root_seed=808, r_trunc=R8, workers=2)
s8 = run8.samples[0]
r8 = gb.ks_two_sample(s8, z8)
stamp(f"C8 KS point DPP: D={r8.statistic:.4f} p={r8.p_value:.3g}")

# tail point
mu8t = gb.UniformDiskMeasure(0j, 0.25, 1.0)
rho_t, c_t, R_t = 0.00747, 180.0, 0.27
n_t = (c_t * rho_t**3.0) ** (2.0 / 3.0)
so_t = gb.StableOracle.from_density(mu8t, 3.0)
pvt = gb.poisson_equivalent_fluctuations(mu8t, LAW, c_t, rho_t, R_t, n_t,
                                         gb.replicate_rng(815, 0, 0), 200_000)
stamp(f"C8 tail proxy: gamma_hat={gb.tail_index_estimate(pvt):.4f} "
      f"D={gb.ks_two_sample(pvt[:20000], so_t.sample(np.random.default_rng(505), 20000)).statistic:.4f} "
      f"sat={1/(n_t*so_t.scale):.0f}")
# DPP spot check, 2e4 reps
reg_t = gb.Regime.small_ball(delta=3.0 - np.log(c_t)/np.log(1.0/rho_t), beta=3.0)
run_t = gb.run_regime(reg_t, mu8t, LAW, [rho_t], replicates=20_000, root_seed=818, r_trunc=R_t, workers=2)
st = run_t.samples[0]
stamp(f"C8 tail DPP(2e4): gamma_hat={gb.tail_index_estimate(st):.4f} "
      f"D vs proxy={gb.ks_two_sample(st, pvt[:50000]).statistic:.4f}")
stamp("pilot2 done")
