"""Objective functions: monotone transforms of positively homogeneous cores.

A core f satisfies f(rho * x) = rho**alpha * f(x) for all rho > 0 and is
positive away from the origin.  Objectives are h = g o f shifted to an
arbitrary optimum, where g is strictly increasing.  Evaluators accept
arrays of shape (..., n) and operate on the last axis, so batched
evaluation works everywhere.
"""
from __future__ import annotations

from dataclasses import dataclass, field
from typing import Callable, Optional

import numpy as np

from .errors import ConstructionError, DimensionMismatchError


@dataclass(frozen=True)
class HomogeneousCore:
    """Positively homogeneous function of degree `degree` on R^n."""

    label: str
    degree: float
    dim: int
    evaluate: Callable[[np.ndarray], np.ndarray]
    gradient: Optional[Callable[[np.ndarray], np.ndarray]] = None
    # log of f, usable at extreme magnitudes without overflow
    log_evaluate: Optional[Callable[[np.ndarray], np.ndarray]] = None
    # False for the linear function, which can change sign and is only
    # used for the success-probability symmetry check
    positive: bool = True

    def __call__(self, x):
        return self.evaluate(np.asarray(x, dtype=float))


@dataclass(frozen=True)
class MonotoneTransform:
    """Strictly increasing map applied on top of a core."""

    label: str
    apply: Callable[[np.ndarray], np.ndarray]

    def __call__(self, u):
        return self.apply(np.asarray(u, dtype=float))


IDENTITY = MonotoneTransform("id", lambda u: u)
SQRT = MonotoneTransform("sqrt", np.sqrt)
LOG1P = MonotoneTransform("log1p", np.log1p)


def jump_transform(c: float = 1.0) -> MonotoneTransform:
    """u -> u + 1_{u > c}: strictly increasing but discontinuous."""
    return MonotoneTransform("jump", lambda u, c=c: u + (u > c))


TRANSFORMS = {
    "id": IDENTITY,
    "sqrt": SQRT,
    "log1p": LOG1P,
    "jump": jump_transform(),
}


@dataclass(frozen=True)
class ObjectiveFunction:
    """h(x) = transform(core(x - optimum))."""

    core: HomogeneousCore
    transform: MonotoneTransform = IDENTITY
    optimum: Optional[np.ndarray] = None

    def __post_init__(self):
        opt = self.optimum
        if opt is None:
            opt = np.zeros(self.core.dim)
        else:
            opt = np.asarray(opt, dtype=float)
            if opt.shape != (self.core.dim,):
                raise DimensionMismatchError(
                    f"optimum has shape {opt.shape}, expected ({self.core.dim},)"
                )
        object.__setattr__(self, "optimum", opt)

    @property
    def label(self) -> str:
        if self.transform.label == "id":
            return self.core.label
        return f"{self.core.label}:g={self.transform.label}"

    @property
    def dim(self) -> int:
        return self.core.dim

    def core_value(self, x: np.ndarray) -> np.ndarray:
        x = np.asarray(x, dtype=float)
        if x.shape[-1] != self.core.dim:
            raise DimensionMismatchError(
                f"x has dimension {x.shape[-1]}, expected {self.core.dim}"
            )
        return self.core.evaluate(x - self.optimum)

    def __call__(self, x):
        return self.transform.apply(self.core_value(x))


def evaluate(fn: ObjectiveFunction, x) -> float:
    """Evaluate h = transform(core(x - optimum)) at a single point."""
    return float(fn(x))


# ---------------------------------------------------------------------------
# catalog cores


def sphere(n: int) -> HomogeneousCore:
    return HomogeneousCore(
        label="sphere",
        degree=2.0,
        dim=n,
        evaluate=lambda x: (x * x).sum(axis=-1),
        gradient=lambda x: 2.0 * x,
        log_evaluate=lambda x: 2.0 * np.log(np.linalg.norm(x, axis=-1)),
    )


def norm_power(n: int, p, alpha: float) -> HomogeneousCore:
    """||x||_p ** alpha.  Gradient is supplied only for p = 2."""
    if alpha <= 0:
        raise ConstructionError("alpha must be positive")
    if p in (1, 2):
        ord_ = p
    elif p in (np.inf, "inf"):
        ord_, p = np.inf, "inf"
    else:
        raise ConstructionError(f"unsupported p-norm: {p!r}")

    def norm(x):
        return np.linalg.norm(x, ord=ord_, axis=-1)

    grad = None
    if ord_ == 2:

        def grad(x, a=alpha):
            nrm = np.linalg.norm(x, axis=-1, keepdims=True)
            return a * nrm ** (a - 2) * x

    return HomogeneousCore(
        label=f"normpow:p={p}:alpha={alpha:g}",
        degree=float(alpha),
        dim=n,
        evaluate=lambda x: norm(x) ** alpha,
        gradient=grad,
        log_evaluate=lambda x: alpha * np.log(norm(x)),
    )


def convex_quadratic(h_matrix: np.ndarray) -> HomogeneousCore:
    """f(x) = 0.5 x^T H x with H symmetric positive definite."""
    H = np.asarray(h_matrix, dtype=float)
    if H.ndim != 2 or H.shape[0] != H.shape[1]:
        raise ConstructionError("H must be a square matrix")
    if not np.allclose(H, H.T):
        raise ConstructionError("H must be symmetric")
    try:
        np.linalg.cholesky(H)
    except np.linalg.LinAlgError as exc:
        raise ConstructionError("H must be positive definite") from exc
    n = H.shape[0]

    def ev(x):
        return 0.5 * np.einsum("...i,ij,...j->...", x, H, x)

    def log_ev(x):
        # factor out the norm so huge magnitudes stay in range
        nrm = np.linalg.norm(x, axis=-1, keepdims=True)
        u = x / nrm
        return 2.0 * np.log(nrm[..., 0]) + np.log(ev(u))

    if n <= 4:
        diag = ",".join(f"{v:g}" for v in np.diag(H))
        label = f"quad:diag:{diag}" if np.allclose(H, np.diag(np.diag(H))) else "quad"
    else:
        label = "quad"
    return HomogeneousCore(
        label=label,
        degree=2.0,
        dim=n,
        evaluate=ev,
        gradient=lambda x: np.einsum("ij,...j->...i", H, x),
        log_evaluate=log_ev,
    )


def modulated(n: int, alpha: float = 2.0, beta: float = 0.5,
              direction: Optional[np.ndarray] = None) -> HomogeneousCore:
    """Angular-modulated core ||x||^alpha * (1 + beta * (u . d)^3), u = x/||x||.

    Positive and C^1 away from zero for |beta| < 1; non-quasi-convex for
    beta around 0.5 and above.  No analytic gradient; callers fall back to
    finite differences.
    """
    if not abs(beta) < 1:
        raise ConstructionError("|beta| must be < 1 to keep the core positive")
    if alpha <= 0:
        raise ConstructionError("alpha must be positive")
    if direction is None:
        d = np.zeros(n)
        d[0] = 1.0
    else:
        d = np.asarray(direction, dtype=float)
        d = d / np.linalg.norm(d)

    def shape(x):
        nrm = np.linalg.norm(x, axis=-1)
        t = (x @ d) / nrm
        return nrm, 1.0 + beta * t**3

    def ev(x):
        nrm, s = shape(x)
        return nrm**alpha * s

    def log_ev(x):
        nrm, s = shape(x)
        return alpha * np.log(nrm) + np.log(s)

    return HomogeneousCore(
        label=f"modulated:beta={beta:g}:alpha={alpha:g}",
        degree=float(alpha),
        dim=n,
        evaluate=ev,
        log_evaluate=log_ev,
    )


def linear(n: int) -> HomogeneousCore:
    """f(x) = x_1.  Outside the convergence class; success-symmetry tests only."""
    return HomogeneousCore(
        label="linear",
        degree=1.0,
        dim=n,
        evaluate=lambda x: x[..., 0],
        gradient=lambda x: np.broadcast_to(
            np.eye(n)[0], np.shape(x)).astype(float).copy(),
        positive=False,
    )


def builtin_catalog(n: int, alpha: float = 2.0) -> list[ObjectiveFunction]:
    """The cores exercised by the validator suite, with identity transform."""
    H = np.diag(np.linspace(1.0, 10.0, n))
    return [
        ObjectiveFunction(sphere(n)),
        ObjectiveFunction(norm_power(n, 1, alpha)),
        ObjectiveFunction(norm_power(n, 2, alpha)),
        ObjectiveFunction(norm_power(n, "inf", alpha)),
        ObjectiveFunction(convex_quadratic(H)),
        ObjectiveFunction(modulated(n, alpha=alpha, beta=0.5)),
    ]


def parse_function_key(key: str, n: int) -> ObjectiveFunction:
    """Build an objective from its string key.

    Grammar (colon-separated):
        sphere | linear
        normpow:p=<1|2|inf>:alpha=<a>
        quad:diag:<c1,c2,...>          (entries cycled to length n)
        modulated:beta=<b>:alpha=<a>
    optionally followed by ":g=<id|sqrt|log1p|jump>".
    """
    parts = key.split(":")
    transform = IDENTITY
    if parts and parts[-1].startswith("g="):
        name = parts.pop()[2:]
        if name not in TRANSFORMS:
            raise ConstructionError(f"unknown transform {name!r}")
        transform = TRANSFORMS[name]
    if not parts:
        raise ConstructionError(f"empty function key {key!r}")

    head, rest = parts[0], parts[1:]
    opts = {}
    for item in rest:
        if "=" in item:
            k, _, v = item.partition("=")
            opts[k] = v
    if head == "sphere":
        core = sphere(n)
    elif head == "linear":
        core = linear(n)
    elif head == "normpow":
        p = opts.get("p", "2")
        p = np.inf if p == "inf" else int(p)
        core = norm_power(n, p, float(opts.get("alpha", 2.0)))
    elif head == "quad":
        if len(rest) < 2 or rest[0] != "diag":
            raise ConstructionError(
                f"quadratic key must look like quad:diag:<c1,c2,...>, got {key!r}")
        entries = [float(v) for v in rest[1].split(",")]
        diag = [entries[i % len(entries)] for i in range(n)]
        core = convex_quadratic(np.diag(diag))
    elif head == "modulated":
        core = modulated(n, alpha=float(opts.get("alpha", 2.0)),
                         beta=float(opts.get("beta", 0.5)))
    else:
        raise ConstructionError(f"unknown function key {key!r}")
    return ObjectiveFunction(core, transform)


# ---------------------------------------------------------------------------
# validators


def finite_diff_gradient(core: HomogeneousCore, x: np.ndarray) -> np.ndarray:
    """Central finite differences with step 1e-5 * max(||x||, 1)."""
    x = np.asarray(x, dtype=float)
    h = 1e-5 * max(np.linalg.norm(x), 1.0)
    grad = np.empty_like(x)
    for i in range(x.size):
        e = np.zeros_like(x)
        e[i] = h
        grad[i] = (core.evaluate(x + e) - core.evaluate(x - e)) / (2 * h)
    return grad


@dataclass
class HomogeneityReport:
    passed: bool
    worst_relative_residual: float
    trials: int
    rtol: float


def check_homogeneity(core: HomogeneousCore, trials: int = 10_000,
                      rtol: float = 1e-8, seed: int = 0) -> HomogeneityReport:
    """Sample (x, rho) and compare f(rho x) against rho**alpha f(x)."""
    if trials < 1:
        raise ValueError("trials must be >= 1")
    rng = np.random.default_rng(seed)
    x = rng.standard_normal((trials, core.dim))
    rho = 10.0 ** rng.uniform(-3, 3, size=trials)
    ref = rho**core.degree * core.evaluate(x)
    val = core.evaluate(rho[:, None] * x)
    rel = np.abs(val - ref) / np.abs(ref)
    worst = float(rel.max())
    return HomogeneityReport(worst <= rtol, worst, trials, rtol)


def euler_residual(core: HomogeneousCore, x) -> float:
    """|x . grad f(x) - alpha f(x)| / max(f(x), 1); gradient falls back to FD."""
    x = np.asarray(x, dtype=float)
    if not np.any(x):
        raise ValueError("Euler residual is undefined at x = 0")
    g = core.gradient(x) if core.gradient is not None else finite_diff_gradient(core, x)
    fx = float(core.evaluate(x))
    return abs(float(x @ g) - core.degree * fx) / max(fx, 1.0)


@dataclass
class SphereBounds:
    """Sampled min/max of a core on the unit sphere."""

    m: float
    M: float
    samples: int

    def __post_init__(self):
        if not (0 < self.m <= self.M < np.inf):
            raise ConstructionError(f"invalid sphere bounds ({self.m}, {self.M})")


def estimate_sphere_bounds(core: HomogeneousCore, samples: int = 100_000,
                           seed: int = 0) -> SphereBounds:
    """Estimate the extremes of f on the unit sphere from normalized Gaussians.

    These are sampling estimates: the reported m can exceed the true
    minimum (and M undershoot the maximum).
    """
    if samples < 1:
        raise ValueError("samples must be >= 1")
    rng = np.random.default_rng(seed)
    lo, hi = np.inf, -np.inf
    block = 1 << 18
    left = samples
    while left > 0:
        k = min(block, left)
        u = rng.standard_normal((k, core.dim))
        u /= np.linalg.norm(u, axis=1, keepdims=True)
        vals = core.evaluate(u)
        lo = min(lo, float(vals.min()))
        hi = max(hi, float(vals.max()))
        left -= k
    return SphereBounds(lo, hi, samples)
