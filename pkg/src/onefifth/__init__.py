"""(1+1)-ES with generalized one-fifth success rule, plus the Monte Carlo
machinery that verifies its linear-convergence behaviour: normalized-chain
simulation, success-probability / convergence-rate estimators, geometric
drift diagnostics, and a reproducible experiment CLI."""

__version__ = "0.1.0"

from .algorithm import (AlgoParams, AlgoState, StepOutcome, Trajectory,
                        ord_permutation, run_trajectory, sol, step)
from .chain import (ChainRecord, consistency_check, run_chain,
                    run_chains_batch, z_step)
from .drift import (DriftScan, drift_ratio_mc, drift_scan,
                    linear_increase_condition, v_function)
from .estimators import (CrBundle, EstimateCI, clt_check, compute_cr_bundle,
                         cr_from_ps, estimate_cr_f_ratio, estimate_cr_timeavg,
                         estimate_ps, fit_log_slope, geometric_approach_curve)
from .objectives import (IDENTITY, LOG1P, SQRT, TRANSFORMS, HomogeneousCore,
                         MonotoneTransform, ObjectiveFunction, SphereBounds,
                         builtin_catalog, check_homogeneity, convex_quadratic,
                         estimate_sphere_bounds, euler_residual, jump_transform,
                         linear, modulated, norm_power, parse_function_key,
                         sphere)

__all__ = [
    "AlgoParams", "AlgoState", "StepOutcome", "Trajectory", "ord_permutation",
    "run_trajectory", "sol", "step",
    "ChainRecord", "consistency_check", "run_chain", "run_chains_batch", "z_step",
    "DriftScan", "drift_ratio_mc", "drift_scan", "linear_increase_condition",
    "v_function",
    "CrBundle", "EstimateCI", "clt_check", "compute_cr_bundle", "cr_from_ps",
    "estimate_cr_f_ratio", "estimate_cr_timeavg", "estimate_ps", "fit_log_slope",
    "geometric_approach_curve",
    "IDENTITY", "LOG1P", "SQRT", "TRANSFORMS", "jump_transform",
    "HomogeneousCore", "MonotoneTransform", "ObjectiveFunction", "SphereBounds",
    "builtin_catalog", "check_homogeneity", "convex_quadratic",
    "estimate_sphere_bounds", "euler_residual", "linear", "modulated",
    "norm_power", "parse_function_key", "sphere",
]
