"""Numerical checks of the geometric-drift structure of the normalized chain.

The drift function is V(z) = f(z) if f(z) >= 1 else 1/f(z), i.e.
V = exp(|ln f|).  The one-step ratio E[V(Z_1)] / V(z) tends to
(1/2)(gamma**-alpha + gamma**(alpha/q)) as ||z|| -> infinity and to
gamma**(-alpha/q) as ||z|| -> 0; both must be < 1 for geometric
ergodicity.
"""
from __future__ import annotations

from dataclasses import dataclass
from typing import Optional, Sequence

import numpy as np

from . import seeding
from .algorithm import AlgoParams
from .errors import DimensionMismatchError
from .estimators import EstimateCI
from .objectives import HomogeneousCore, ObjectiveFunction


def _core(fn) -> HomogeneousCore:
    core = fn.core if isinstance(fn, ObjectiveFunction) else fn
    if not core.positive:
        raise ValueError(f"drift function needs a positive core, got {core.label}")
    return core


def _log_f(core: HomogeneousCore, x: np.ndarray) -> np.ndarray:
    if core.log_evaluate is not None:
        return core.log_evaluate(x)
    return np.log(core.evaluate(x))


def v_function(fn, z) -> float:
    """Drift function V(z) = max(f(z), 1/f(z)); always >= 1."""
    core = _core(fn)
    z = np.asarray(z, dtype=float)
    if not np.any(z):
        raise ValueError("V is undefined at z = 0")
    return float(np.exp(np.abs(_log_f(core, z))))


def linear_increase_condition(gamma: float, q: float, alpha: float) -> float:
    """LHS of the step-size increase condition on linear functions.

    Returns (1/2)(gamma**-alpha + gamma**(alpha/q)); values < 1 (together
    with gamma > 1) imply the geometric drift.
    """
    if gamma <= 0 or q <= 0 or alpha <= 0:
        raise ValueError("gamma, q, alpha must be positive")
    return 0.5 * (gamma**-alpha + gamma ** (alpha / q))


def drift_ratio_mc(params: AlgoParams, fn, z, samples: int,
                   seed: int = 0, rng: Optional[np.random.Generator] = None
                   ) -> EstimateCI:
    """Monte Carlo estimate of E[V(Z_1)] / V(z) at a fixed state z.

    One-step expectation over i.i.d. draws, so the plain i.i.d. stderr
    applies.  V-ratios are formed in the log domain to survive extreme
    magnitudes.
    """
    core = _core(fn)
    z = np.asarray(z, dtype=float)
    if z.shape != (params.n,):
        raise DimensionMismatchError(f"z has shape {z.shape}, expected ({params.n},)")
    if samples < 1000:
        raise ValueError("need at least 1000 samples")
    if rng is None:
        rng = seeding.stream(seed)
    log_fz = float(_log_f(core, z))
    log_v_z = abs(log_fz)

    total, total_sq, left = 0.0, 0.0, samples
    block = 1 << 16
    while left > 0:
        k = min(block, left)
        noise = rng.standard_normal((k, params.n))
        cand = z + noise
        succ = core.evaluate(cand) <= np.exp(log_fz) if core.log_evaluate is None \
            else _log_f(core, cand) <= log_fz
        z1 = np.where(succ[:, None], cand / params.gamma,
                      z * params.gamma ** (1.0 / params.q))
        ratios = np.exp(np.abs(_log_f(core, z1)) - log_v_z)
        total += float(ratios.sum())
        total_sq += float((ratios * ratios).sum())
        left -= k
    mean = total / samples
    var = max(total_sq / samples - mean**2, 0.0)
    return EstimateCI(mean, float(np.sqrt(var / samples)), samples, "drift:mc")


@dataclass
class DriftScan:
    """PV/V estimates over a radius x direction grid."""

    params: AlgoParams
    fn_key: str
    alpha: float
    radii: np.ndarray
    directions: np.ndarray            # (n_dir, n) unit vectors
    ratios: np.ndarray                # (n_radii, n_dir)
    stderrs: np.ndarray
    samples: int

    @property
    def drift_holds_empirically(self) -> bool:
        """True when every ratio outside the middle band is < 1 by 3 stderr."""
        outer = self._outer_mask()
        if not outer.any():
            return False
        return bool(np.all(self.ratios[outer] + 3 * self.stderrs[outer] < 1.0))

    def _outer_mask(self) -> np.ndarray:
        # middle band: radii with f-scale within two decades of the level set f=1
        log10_f = self.alpha * np.log10(self.radii)
        return np.abs(log10_f)[:, None] > 2.0 * np.ones(len(self.directions))


def drift_scan(params: AlgoParams, fn, radii: Sequence[float],
               directions: Optional[np.ndarray] = None, samples: int = 10_000,
               seed: int = 0) -> DriftScan:
    """Estimate PV/V on a grid of magnitudes and directions.

    Directions default to e_1 plus 3 random unit vectors; the proven
    limits are direction-independent, so a few suffice.
    """
    core = _core(fn)
    radii = np.asarray(sorted(radii), dtype=float)
    if len(radii) == 0:
        raise ValueError("radii must be non-empty")
    if radii.max() / radii.min() < 1e4:
        raise ValueError("radii should span at least 4 decades")
    rng = seeding.stream(seed)
    if directions is None:
        extra = rng.standard_normal((3, params.n))
        extra /= np.linalg.norm(extra, axis=1, keepdims=True)
        directions = np.vstack([np.eye(params.n)[:1], extra])
    directions = np.asarray(directions, dtype=float)

    ratios = np.empty((len(radii), len(directions)))
    stderrs = np.empty_like(ratios)
    for i, r in enumerate(radii):
        for j, d in enumerate(directions):
            est = drift_ratio_mc(params, core, r * d, samples, rng=rng)
            ratios[i, j] = est.value
            stderrs[i, j] = est.std_error
    return DriftScan(params=params, fn_key=core.label, alpha=core.degree,
                     radii=radii, directions=directions, ratios=ratios,
                     stderrs=stderrs, samples=samples)
