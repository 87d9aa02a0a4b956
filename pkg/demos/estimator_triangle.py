"""Three routes to the convergence rate, cross-checked.

On each test function the success probability PS, the time average of
-ln(eta) and the scaled mean log f-ratio must all point to the same CR:
the first two are related by an exact algebraic identity, the third is an
independent estimate that agrees within Monte Carlo error.
"""
import numpy as np

import onefifth as of

GAMMA, Q = float(np.exp(1 / 3)), 4.0
STEPS = 200_000

cases = [
    (of.ObjectiveFunction(of.sphere(20)), 20),
    (of.ObjectiveFunction(of.convex_quadratic(np.diag([1.0, 10.0]))), 2),
    (of.ObjectiveFunction(of.modulated(10, alpha=2.0, beta=0.5)), 10),
]

for fn, n in cases:
    params = of.AlgoParams(n, GAMMA, Q)
    chain = of.run_chain(params, fn, np.ones(n), STEPS, seed=7)
    ps = of.estimate_ps(chain)
    cr_t = of.estimate_cr_timeavg(chain)
    cr_f = of.estimate_cr_f_ratio(chain, alpha=fn.core.degree)
    print(f"{fn.label}  (n={n})")
    print(f"  PS           = {ps.value:.5f} +- {ps.std_error:.2g} "
          f"(bound: < {1 / (Q + 1)})")
    print(f"  CR(identity) = {of.cr_from_ps(ps.value, GAMMA, Q):.6f}")
    print(f"  CR(timeavg)  = {cr_t.value:.6f} +- {cr_t.std_error:.2g}")
    print(f"  CR(f-ratio)  = {cr_f.value:.6f} +- {cr_f.std_error:.2g}")
    print()

print("linear function f(x) = x_1 (outside the convergence class):")
params = of.AlgoParams(10, GAMMA, Q)
chain = of.run_chain(params, of.ObjectiveFunction(of.linear(10)),
                     np.ones(10), 100_000, seed=5)
ps = of.estimate_ps(chain)
print(f"  PS = {ps.value:.4f} +- {ps.std_error:.2g} "
      "(symmetry forces exactly 1/2; CR < 0, the step-size diverges)")
