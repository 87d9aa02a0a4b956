"""Normalized chain Z_t = X_t / sigma_t.

The chain is simulated directly: on success (f(z + u) <= f(z)) the state
becomes (z + u) / gamma, on failure z * gamma**(1/q).  It depends on the
objective only through level sets, so the core is always evaluated with
the identity transform regardless of any user-supplied g.
"""
from __future__ import annotations

from dataclasses import dataclass
from typing import Optional

import numpy as np

from . import seeding
from .algorithm import AlgoParams, run_trajectory
from .errors import ChainDegenerateError, DimensionMismatchError, EvaluationError
from .objectives import ObjectiveFunction


def _core_of(fn) -> ObjectiveFunction:
    if isinstance(fn, ObjectiveFunction):
        if np.any(fn.optimum):
            raise ValueError("the normalized chain requires an optimum at 0")
        return fn
    return ObjectiveFunction(fn)


@dataclass
class ChainRecord:
    """Post-burn-in samples of the normalized chain."""

    params: AlgoParams
    fn_key: str
    seed: int
    burn_in: int
    successes: np.ndarray          # bool, one entry per recorded transition
    log_norm_z: np.ndarray         # ln ||Z_t|| before each transition
    log_f_ratio: np.ndarray        # ln f(Z_t + U 1{succ}) / f(Z_t); 0 on rejection
    z_final: np.ndarray = None
    zs: Optional[np.ndarray] = None

    def __len__(self):
        return len(self.successes)

    @property
    def ln_eta(self) -> np.ndarray:
        """Two-valued log step-size multiplier per recorded transition."""
        p = self.params
        return np.where(self.successes, p.log_eta_up, p.log_eta_down)


def z_step(params: AlgoParams, z: np.ndarray, fn, noise: np.ndarray
           ) -> tuple[np.ndarray, bool]:
    """One transition of the normalized chain."""
    fn = _core_of(fn)
    z = np.asarray(z, dtype=float)
    if not np.any(z):
        raise ValueError("chain state must be nonzero")
    if z.shape != (params.n,):
        raise DimensionMismatchError(f"z has shape {z.shape}, expected ({params.n},)")
    core = fn.core.evaluate
    cand = z + np.asarray(noise, dtype=float)
    success = bool(core(cand) <= core(z))
    if success:
        new = cand / params.gamma
    else:
        new = z * params.gamma ** (1.0 / params.q)
    if not np.any(new):
        raise ChainDegenerateError("chain reached the excluded state z = 0")
    return new, success


def default_burn_in(steps: int) -> int:
    """10% of the run, at least 1000, but always below the step count."""
    return min(max(steps // 10, 1000), max(steps - 1, 0))


def run_chain(params: AlgoParams, fn, z0, steps: int, seed: int,
              burn_in: Optional[int] = None, keep_z: bool = False,
              rng: Optional[np.random.Generator] = None) -> ChainRecord:
    """Simulate the chain; only post-burn-in transitions are recorded."""
    fn = _core_of(fn)
    z = np.asarray(z0, dtype=float).copy()
    if z.shape != (params.n,):
        raise DimensionMismatchError(f"z0 has shape {z.shape}, expected ({params.n},)")
    if not np.any(z):
        raise ValueError("z0 must be nonzero")
    if burn_in is None:
        burn_in = default_burn_in(steps)
    if not 0 <= burn_in < steps:
        raise ValueError("need 0 <= burn_in < steps")
    if rng is None:
        rng = seeding.stream(seed)

    core = fn.core.evaluate
    kept = steps - burn_in
    successes = np.empty(kept, dtype=bool)
    log_norm_z = np.empty(kept)
    log_f_ratio = np.empty(kept)
    zs = np.empty((kept, params.n)) if keep_z else None

    up = params.gamma ** (1.0 / params.q)
    fz = float(core(z))
    block = 1 << 14
    done = 0
    while done < steps:
        noise = rng.standard_normal((min(block, steps - done), params.n))
        for u in noise:
            cand = z + u
            f_cand = float(core(cand))
            if not np.isfinite(f_cand):
                raise EvaluationError(f"non-finite f at chain step {done}")
            success = f_cand <= fz
            i = done - burn_in
            if i >= 0:
                successes[i] = success
                log_norm_z[i] = np.log(np.linalg.norm(z))
                # the f-ratio is only meaningful for positive cores
                if success and fn.core.positive:
                    log_f_ratio[i] = np.log(f_cand / fz)
                else:
                    log_f_ratio[i] = 0.0
                if keep_z:
                    zs[i] = z
            z = cand / params.gamma if success else z * up
            fz = float(core(z))
            if not np.any(z):
                raise ChainDegenerateError("chain reached the excluded state z = 0")
            done += 1
    return ChainRecord(params=params, fn_key=fn.label, seed=seed, burn_in=burn_in,
                       successes=successes, log_norm_z=log_norm_z,
                       log_f_ratio=log_f_ratio, z_final=z, zs=zs)


def run_chains_batch(params: AlgoParams, fn, z0: np.ndarray, steps: int,
                     seed: int, rng: Optional[np.random.Generator] = None
                     ) -> tuple[np.ndarray, np.ndarray]:
    """Vectorized independent chains from the rows of z0.

    Returns (successes, z_final) with successes of shape (steps, R).  All
    replicates share one generator (one (R, n) draw per step), which is a
    different stream layout than `run_chain`; determinism per seed still
    holds.
    """
    fn = _core_of(fn)
    Z = np.array(z0, dtype=float)
    if Z.ndim != 2 or Z.shape[1] != params.n:
        raise DimensionMismatchError("z0 must have shape (R, n)")
    if rng is None:
        rng = seeding.stream(seed)
    core = fn.core.evaluate
    up = params.gamma ** (1.0 / params.q)
    successes = np.empty((steps, Z.shape[0]), dtype=bool)
    fz = core(Z)
    for t in range(steps):
        noise = rng.standard_normal(Z.shape)
        cand = Z + noise
        f_cand = core(cand)
        succ = f_cand <= fz
        successes[t] = succ
        Z = np.where(succ[:, None], cand / params.gamma, Z * up)
        fz = core(Z)
    return successes, Z


def consistency_check(params: AlgoParams, fn, x0, sigma0: float, steps: int,
                      seed: int) -> float:
    """Max relative deviation between X_t/sigma_t and Z_t under a shared stream."""
    fn = _core_of(fn)
    traj = run_trajectory(params, fn, x0, sigma0, steps, seed, keep_vectors=True)
    z0 = np.asarray(x0, dtype=float) / sigma0
    rec = run_chain(params, fn, z0, steps, seed, burn_in=0, keep_z=True)
    ratio = traj.xs / np.exp(traj.log_sigma)[:, None]
    zs = np.vstack([rec.zs, rec.z_final[None, :]])
    k = min(len(ratio), len(zs))
    dev = np.linalg.norm(ratio[:k] - zs[:k], axis=1) / np.linalg.norm(zs[:k], axis=1)
    # the trajectory accept/reject sequence must match the chain's exactly
    if not np.array_equal(traj.accepted[1:k], rec.successes[:k - 1]):
        return float("inf")
    return float(dev.max())
