"""Sanity checks for the objective-function catalog.

Each core must be positively homogeneous (f(rho x) = rho^alpha f(x)),
satisfy the Euler relation x . grad f = alpha f, and have finite positive
extremes on the unit sphere.
"""
import numpy as np

import onefifth as of

for fn in of.builtin_catalog(10, alpha=2.0):
    core = fn.core
    hom = of.check_homogeneity(core, trials=10_000, rtol=1e-8, seed=0)
    rng = np.random.default_rng(12345)
    euler = max(of.euler_residual(core, p)
                for p in rng.standard_normal((200, core.dim)))
    bounds = of.estimate_sphere_bounds(core, samples=100_000, seed=0)
    print(f"{core.label}")
    print(f"  homogeneity residual: {hom.worst_relative_residual:.2e} "
          f"({'ok' if hom.passed else 'FAIL'})")
    print(f"  Euler residual:       {euler:.2e}")
    print(f"  unit-sphere range:    [{bounds.m:.4f}, {bounds.M:.4f}]\n")
