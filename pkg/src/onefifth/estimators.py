"""Monte Carlo estimators for success probability and convergence rate.

All autocorrelated time averages report a batch-means standard error with
floor(sqrt(N)) batches.  Operations return estimates with their stderr;
tolerances live in the test suite, not here.
"""
from __future__ import annotations

from dataclasses import dataclass, asdict
from typing import Optional

import numpy as np
from scipy import stats

from . import seeding
from .algorithm import AlgoParams, run_trajectory
from .chain import ChainRecord, run_chain, run_chains_batch
from .errors import CalibrationError, InsufficientDataError
from .objectives import ObjectiveFunction


@dataclass(frozen=True)
class EstimateCI:
    value: float
    std_error: float
    count: int
    method: str

    def __post_init__(self):
        if self.std_error < 0 or self.count < 1:
            raise ValueError("invalid estimate")


def batch_means_stderr(x: np.ndarray) -> tuple[float, int]:
    """Standard error of the mean of an autocorrelated series.

    Splits into floor(sqrt(N)) batches; the spread of batch means absorbs
    the autocorrelation.  Returns (stderr, number of batches).
    """
    x = np.asarray(x, dtype=float)
    n_batches = int(np.sqrt(len(x)))
    if n_batches < 10:
        raise InsufficientDataError(
            f"only {n_batches} batches from {len(x)} samples; need >= 10")
    size = len(x) // n_batches
    means = x[: n_batches * size].reshape(n_batches, size).mean(axis=1)
    return float(means.std(ddof=1) / np.sqrt(n_batches)), n_batches


def asymptotic_variance(x: np.ndarray) -> tuple[float, int]:
    """Batch-means estimate of lim Var(S_t)/t for the centered series.

    Uses N**(1/3) batches of size N**(2/3): the success indicators are
    anti-correlated over a timescale of order 1/CR (hundreds of steps), so
    sqrt(N) batches are too short to capture the negative covariance tail.
    """
    x = np.asarray(x, dtype=float)
    n_batches = int(round(len(x) ** (1 / 3)))
    if n_batches < 10:
        raise InsufficientDataError(
            f"only {n_batches} batches from {len(x)} samples; need >= 10")
    size = len(x) // n_batches
    means = x[: n_batches * size].reshape(n_batches, size).mean(axis=1)
    return float(size * means.var(ddof=1)), n_batches


def estimate_ps(chain: ChainRecord) -> EstimateCI:
    """Empirical asymptotic success probability with batch-means stderr."""
    s = chain.successes.astype(float)
    if len(s) == 0:
        raise InsufficientDataError("chain record is empty")
    stderr, _ = batch_means_stderr(s)
    return EstimateCI(float(s.mean()), stderr, len(s), "ps:batch-means")


def cr_from_ps(ps: float, gamma: float, q: float) -> float:
    """Convergence rate from the success probability: -ln(g)*((q+1)/q*ps - 1/q)."""
    if not 0 <= ps <= 1:
        raise ValueError("ps must lie in [0, 1]")
    if gamma <= 1 or q <= 0:
        raise ValueError("need gamma > 1 and q > 0")
    return -np.log(gamma) * ((q + 1) / q * ps - 1 / q)


def estimate_cr_timeavg(chain: ChainRecord) -> EstimateCI:
    """Minus the time average of ln eta*; algebraically equal to cr_from_ps."""
    ln_eta = chain.ln_eta
    if len(ln_eta) == 0:
        raise InsufficientDataError("chain record is empty")
    stderr, _ = batch_means_stderr(ln_eta)
    return EstimateCI(float(-ln_eta.mean()), stderr, len(ln_eta),
                      "cr:timeavg:batch-means")


def estimate_cr_f_ratio(chain: ChainRecord, alpha: float) -> EstimateCI:
    """-(1/alpha) times the mean log f-ratio (the ratio is 1 on rejection)."""
    r = chain.log_f_ratio
    if len(r) == 0:
        raise InsufficientDataError("chain record is empty")
    scaled = -r / alpha
    stderr, _ = batch_means_stderr(scaled)
    return EstimateCI(float(scaled.mean()), stderr, len(r),
                      "cr:f-ratio:batch-means")


def fit_log_slope(t, values, burn_in: int = 0) -> EstimateCI:
    """OLS slope of a log-domain series against time.

    The residual-based stderr ignores autocorrelation and is optimistic;
    callers compare with wide tolerances.
    """
    t = np.asarray(t, dtype=float)
    values = np.asarray(values, dtype=float)
    keep = t >= burn_in
    t, values = t[keep], values[keep]
    if len(t) < 100:
        raise InsufficientDataError(f"need >= 100 post-burn-in points, got {len(t)}")
    if not np.all(np.isfinite(values)):
        raise ValueError("non-finite values in series")
    tc = t - t.mean()
    denom = float(tc @ tc)
    if denom == 0.0:
        raise ValueError("degenerate time axis")
    slope = float(tc @ (values - values.mean())) / denom
    resid = values - values.mean() - slope * tc
    var = float(resid @ resid) / (len(t) - 2)
    return EstimateCI(slope, float(np.sqrt(var / denom)), len(t), "slope:ols")


@dataclass
class CrBundle:
    """All convergence-rate views of one (params, function, run) configuration."""

    ps: EstimateCI
    cr_from_ps: float
    cr_timeavg: EstimateCI
    cr_f_ratio: EstimateCI
    slope_x: EstimateCI
    slope_sigma: EstimateCI

    def to_dict(self) -> dict:
        out = {}
        for name in ("ps", "cr_timeavg", "cr_f_ratio", "slope_x", "slope_sigma"):
            est = getattr(self, name)
            out[name] = {"value": est.value, "stderr": est.std_error,
                         "count": est.count, "method": est.method}
        out["cr_from_ps"] = self.cr_from_ps
        return out


def compute_cr_bundle(params: AlgoParams, fn: ObjectiveFunction, x0,
                      sigma0: float, traj_steps: int, chain_steps: int,
                      seed: int, burn_in: Optional[int] = None) -> CrBundle:
    """Chain-based PS/CR estimates plus trajectory log-slopes, one seed."""
    z0 = np.asarray(x0, dtype=float) / sigma0
    chain = run_chain(params, fn, z0, chain_steps, seed, burn_in=burn_in)
    ps = estimate_ps(chain)
    traj = run_trajectory(params, fn, x0, sigma0, traj_steps, seed=seed + 1)
    cut = traj_steps // 10
    return CrBundle(
        ps=ps,
        cr_from_ps=cr_from_ps(ps.value, params.gamma, params.q),
        cr_timeavg=estimate_cr_timeavg(chain),
        cr_f_ratio=estimate_cr_f_ratio(chain, fn.core.degree),
        slope_x=fit_log_slope(traj.t, traj.log_norm_x, burn_in=cut),
        slope_sigma=fit_log_slope(traj.t, traj.log_sigma, burn_in=cut),
    )


def clt_check(params: AlgoParams, fn, z0, steps: int, replicates: int,
              seed: int, calib_steps: int = 1_000_000,
              warmup: int = 5000, synthetic: bool = False
              ) -> tuple[EstimateCI, float]:
    """Kolmogorov-Smirnov check of the CLT for the log step-size.

    A long calibration chain supplies CR and the asymptotic variance
    gamma_g^2 (batch means).  Each replicate of `steps` transitions yields
    the normalized statistic sqrt(t)/gamma_g * ((1/t) ln sigma_t/sigma_0 + CR),
    which should be standard normal.  Returns (gamma_g^2 estimate, KS p-value).

    With synthetic=True the replicate increments are i.i.d. two-valued
    draws at the calibrated success probability, a positive control for
    the harness itself.
    """
    if replicates < 100:
        raise InsufficientDataError("need >= 100 replicates")
    z0 = np.asarray(z0, dtype=float)
    calib = run_chain(params, fn, z0, calib_steps, seed)
    ln_eta = calib.ln_eta
    cr = -float(ln_eta.mean())
    var, n_batches = asymptotic_variance(ln_eta)
    if var <= 0:
        raise CalibrationError("gamma_g^2 estimate is not positive")
    gamma_g_sq = EstimateCI(var, var * np.sqrt(2.0 / (n_batches - 1)),
                            n_batches, "gamma_g^2:batch-means")

    p = params
    if synthetic:
        rng = seeding.substream(seed, 1)
        ps = float(calib.successes.mean())
        succ_counts = rng.binomial(steps, ps, size=replicates)
        # i.i.d. two-point increments: calibrate with the exact moments
        mean = ps * p.log_eta_up + (1 - ps) * p.log_eta_down
        var_iid = ps * (1 - ps) * (p.log_eta_up - p.log_eta_down) ** 2
        sums = succ_counts * p.log_eta_up + (steps - succ_counts) * p.log_eta_down
        stat = (sums - steps * mean) / np.sqrt(steps * var_iid)
    else:
        # replicates branch off the calibration endpoint and decorrelate
        # during a warm-up phase, approximating independent draws from pi
        rng = seeding.substream(seed, 1)
        Z0 = np.tile(calib.z_final, (replicates, 1))
        if warmup > 0:
            _, Z0 = run_chains_batch(p, fn, Z0, warmup, seed=None, rng=rng)
        successes, _ = run_chains_batch(p, fn, Z0, steps, seed=None, rng=rng)
        counts = successes.sum(axis=0)
        sums = counts * p.log_eta_up + (steps - counts) * p.log_eta_down
        stat = (sums + steps * cr) / np.sqrt(steps * var)
    pvalue = float(stats.kstest(stat, "norm").pvalue)
    return gamma_g_sq, pvalue


def geometric_approach_curve(params: AlgoParams, fn: ObjectiveFunction, x0,
                             sigma0: float, horizon: int, replicates: int,
                             seed: int) -> tuple[np.ndarray, np.ndarray]:
    """Cross-replicate mean of ln sigma_{t+1}/sigma_t for t < horizon.

    The curve approaches -CR geometrically fast as the normalized chain
    forgets its initial condition.
    """
    x0 = np.asarray(x0, dtype=float)
    Z0 = np.tile(x0 / sigma0, (replicates, 1))
    successes, _ = run_chains_batch(params, fn, Z0, horizon,
                                    seed=None, rng=seeding.stream(seed))
    frac = successes.mean(axis=1)
    curve = frac * params.log_eta_up + (1 - frac) * params.log_eta_down
    return np.arange(horizon), curve
