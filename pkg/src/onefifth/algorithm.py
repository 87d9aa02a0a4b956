"""(1+1)-ES with generalized one-fifth success rule.

One candidate is sampled per iteration from N(x, sigma^2 I).  It replaces
the incumbent iff its objective value is not worse (ties accepted); the
step-size is multiplied by gamma on success and by gamma**(-1/q) on
failure.  The step-size lives in the log domain so the two-valued ratio
invariant holds bit-exactly and sigma can span many decades.
"""
from __future__ import annotations

from dataclasses import dataclass, field
from typing import Optional

import numpy as np

from . import seeding
from .errors import DimensionMismatchError, EvaluationError
from .objectives import ObjectiveFunction


@dataclass(frozen=True)
class AlgoParams:
    """Dimension n, step-size increase factor gamma > 1, decrease exponent q > 0."""

    n: int
    gamma: float
    q: float
    allow_divergent: bool = False

    def __post_init__(self):
        if self.n < 1:
            raise ValueError("dimension must be positive")
        if self.q <= 0:
            raise ValueError("q must be positive")
        if self.gamma <= 1 and not self.allow_divergent:
            raise ValueError(
                "gamma must be > 1 (pass allow_divergent=True to study the "
                "divergent regime)")
        if self.gamma <= 0:
            raise ValueError("gamma must be positive")

    @property
    def log_gamma(self) -> float:
        return np.log(self.gamma)

    @property
    def log_eta_up(self) -> float:
        return self.log_gamma

    @property
    def log_eta_down(self) -> float:
        return -self.log_gamma / self.q


@dataclass
class AlgoState:
    """Mean vector and log step-size; sigma = exp(log_sigma) is always > 0."""

    x: np.ndarray
    log_sigma: float

    def __post_init__(self):
        self.x = np.asarray(self.x, dtype=float)

    @property
    def sigma(self) -> float:
        return float(np.exp(self.log_sigma))


@dataclass(frozen=True)
class StepOutcome:
    accepted: bool
    candidate: np.ndarray
    eta: float


def sol(state: AlgoState, u: np.ndarray) -> np.ndarray:
    """Solution operator: ((x, sigma), u) -> x + sigma * u."""
    u = np.asarray(u, dtype=float)
    if u.shape != state.x.shape:
        raise DimensionMismatchError(
            f"u has shape {u.shape}, expected {state.x.shape}")
    return state.x + state.sigma * u


def ord_permutation(values) -> np.ndarray:
    """Stable ascending ordering of values; ties keep original index order."""
    values = np.asarray(values, dtype=float)
    if values.size == 0:
        raise ValueError("cannot order an empty sequence")
    if np.isnan(values).any():
        raise ValueError("NaN among values to order")
    return np.argsort(values, kind="stable")


def step(params: AlgoParams, state: AlgoState, fn: ObjectiveFunction,
         noise: np.ndarray) -> tuple[AlgoState, StepOutcome]:
    """One iteration given an externally drawn standard normal vector."""
    candidate = sol(state, noise)
    f_cand = float(fn(candidate))
    f_cur = float(fn(state.x))
    if not np.isfinite(f_cand) or not np.isfinite(f_cur):
        raise EvaluationError(f"non-finite objective value at x={state.x}")
    if f_cand <= f_cur:
        new = AlgoState(candidate, state.log_sigma + params.log_eta_up)
        return new, StepOutcome(True, candidate, params.gamma)
    new = AlgoState(state.x.copy(), state.log_sigma + params.log_eta_down)
    return new, StepOutcome(False, candidate, params.gamma ** (-1.0 / params.q))


@dataclass
class Trajectory:
    """Recorded (1+1)-ES run; per-record arrays are aligned with `t`."""

    params: AlgoParams
    fn_key: str
    seed: int
    t: np.ndarray
    f: np.ndarray
    log_sigma: np.ndarray
    log_norm_x: np.ndarray
    accepted: np.ndarray          # accepted[i] is the move taken at t[i]-1; False at t=0
    status: str = "completed"
    xs: Optional[np.ndarray] = None   # full mean vectors when requested

    def __len__(self):
        return len(self.t)


def run_trajectory(params: AlgoParams, fn: ObjectiveFunction, x0, sigma0: float,
                   steps: int, seed: int, stride: int = 1,
                   keep_vectors: bool = False,
                   rng: Optional[np.random.Generator] = None) -> Trajectory:
    """Run the ES for a fixed number of steps; deterministic given the seed.

    The state is kept internally as the offset y = x - x* from the
    objective's optimum, so runs on translated objectives are bit-identical
    up to the shift.  If f underflows to exactly 0 the run stops with
    status "optimum_reached".
    """
    x0 = np.asarray(x0, dtype=float)
    if x0.shape != (params.n,) or fn.dim != params.n:
        raise DimensionMismatchError("x0/function dimension mismatch")
    if sigma0 <= 0:
        raise ValueError("sigma0 must be positive")
    if steps < 0:
        raise ValueError("steps must be >= 0")
    if rng is None:
        rng = seeding.stream(seed)

    y = x0 - fn.optimum
    log_sigma = float(np.log(sigma0))
    g = fn.transform.apply
    core_ev = fn.core.evaluate
    f_cur = float(g(core_ev(y)))

    ts, fs, lss, lnx, acc = [0], [f_cur], [log_sigma], \
        [float(np.log(np.linalg.norm(y)))], [False]
    vecs = [y.copy()] if keep_vectors else None
    status = "completed"

    for t in range(1, steps + 1):
        noise = rng.standard_normal(params.n)
        cand = y + np.exp(log_sigma) * noise
        f_cand = float(g(core_ev(cand)))
        if not np.isfinite(f_cand):
            raise EvaluationError(f"non-finite objective value at t={t}, x={cand}")
        if f_cand <= f_cur:
            y, f_cur = cand, f_cand
            log_sigma += params.log_eta_up
            accepted = True
        else:
            log_sigma += params.log_eta_down
            accepted = False
        if t % stride == 0 or t == steps:
            ts.append(t)
            fs.append(f_cur)
            lss.append(log_sigma)
            lnx.append(float(np.log(np.linalg.norm(y))))
            acc.append(accepted)
            if keep_vectors:
                vecs.append(y.copy())
        if fn.core.positive and float(core_ev(y)) == 0.0:
            status = "optimum_reached"
            break

    xs = None
    if keep_vectors:
        xs = np.asarray(vecs) + fn.optimum
    return Trajectory(
        params=params, fn_key=fn.label, seed=seed,
        t=np.asarray(ts), f=np.asarray(fs), log_sigma=np.asarray(lss),
        log_norm_x=np.asarray(lnx), accepted=np.asarray(acc, dtype=bool),
        status=status, xs=xs,
    )
