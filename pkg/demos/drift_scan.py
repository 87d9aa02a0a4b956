"""Geometric drift of the normalized chain, checked numerically.

Estimates the one-step ratio E[V(Z_1)]/V(z) of the drift function
V = exp(|ln f|) on a grid of magnitudes.  For convergent parameters the
ratio stays below 1 away from the level set f = 1 and approaches the two
closed-form limits; for divergent parameters the large-magnitude limit
blows past 1.
"""
import numpy as np

import onefifth as of

N = 20
GAMMA, Q = float(np.exp(1 / 3)), 4.0
RADII = [1e-4, 1e-2, 1.0, 1e2, 1e4]

for label, params in [
    ("convergent  (gamma=e^{1/3}, q=4)", of.AlgoParams(N, GAMMA, Q)),
    ("divergent   (gamma=4, q=1/2)",
     of.AlgoParams(N, 4.0, 0.5, allow_divergent=True)),
]:
    core = of.sphere(N)
    lim_inf = of.linear_increase_condition(params.gamma, params.q, core.degree)
    lim_zero = params.gamma ** (-core.degree / params.q)
    print(f"{label}")
    print(f"  limit as ||z|| -> inf: {lim_inf:.5f}   as ||z|| -> 0: {lim_zero:.5f}")
    scan = of.drift_scan(params, core, RADII, samples=20_000, seed=1)
    for i, r in enumerate(scan.radii):
        row = "  ".join(f"{v:9.5f}" for v in scan.ratios[i])
        print(f"  ||z|| = {r:8.0e}:  {row}")
    print(f"  drift holds empirically: {scan.drift_holds_empirically}\n")
