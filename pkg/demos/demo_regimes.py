"""One zoom-out run: fluctuations against the matching limit-field oracle.

Runs a short intermediate-regime schedule (c rho^beta held at a), compares
the normalized fluctuations to draws from the compensated-Poisson limit
oracle with a two-sample KS test, and prints the verdict per scale.
"""

import numpy as np

import ginibre_balls as gb

LAW = gb.RadiusLaw(beta=3.0)
MU = gb.UniformDiskMeasure(0j, 0.4, 1.0)
R_TRUNC = 0.6
RHOS = [0.3, 0.2]

regime = gb.Regime.intermediate(a=1.0, beta=3.0)
run = gb.run_regime(regime, MU, LAW, RHOS, replicates=400, root_seed=11, r_trunc=R_TRUNC, workers=2)

oracle = gb.PoissonIntegralOracle.build(MU, 3.0, a=1.0, eps=0.02, r_big=R_TRUNC)
oracle_draws = oracle.sample(gb.replicate_rng(12, 99, 0), 3000)
print(f"oracle: compensated Poisson integral, ~{oracle.total_atom_intensity:.0f} atoms/draw, "
      f"variance {oracle.variance:.4f}\n")

print(f"{'rho':>6} {'c':>9} {'D':>8} {'p-value':>10} verdict")
for pt, samples in zip(run.points, run.samples):
    rep = gb.ks_two_sample(samples, oracle_draws, level=0.01)
    print(f"{pt.rho:>6.2f} {pt.c:>9.1f} {rep.statistic:>8.4f} {rep.p_value:>10.3e} "
          f"{'pass' if rep.passed else 'FAIL'}")

print("\nas rho decreases the law of the fluctuation approaches the oracle's;")
print("the full ladder (with the Gaussian and stable regimes) lives in tests/test_acceptance.py")
