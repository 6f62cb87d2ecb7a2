"""Box-constrained maximization with exact objective-evaluation accounting."""

from __future__ import annotations

import math
from dataclasses import dataclass
from typing import Callable, Sequence

import numpy as np
from scipy.optimize import minimize as _scipy_minimize

from .graphs import GraphClass
from .simulator import DEFAULT_GRADIENT_STEP, Parameters

__all__ = [
    "Bounds",
    "OptimizerConfig",
    "OptResult",
    "OptimizationError",
    "bounds_for_graph",
    "clamp",
    "maximize_flat",
    "maximize_bounded",
    "REGULAR_BOUNDS",
    "GENERAL_BOUNDS",
]

# Projected-gradient stopping threshold (infinity norm), alongside the
# relative-objective tolerance carried in OptimizerConfig.
_PGTOL = 1e-6


@dataclass(frozen=True)
class Bounds:
    """Per-angle box constraints, applied uniformly to every gamma_j / beta_j."""

    gamma_min: float
    gamma_max: float
    beta_min: float
    beta_max: float

    def __post_init__(self) -> None:
        if not (self.gamma_min < self.gamma_max and self.beta_min < self.beta_max):
            raise ValueError(f"degenerate bounds: {self}")

    def box(self, p: int) -> tuple[np.ndarray, np.ndarray]:
        """(lower, upper) arrays for the flat layout [gammas..., betas...]."""
        lower = np.array([self.gamma_min] * p + [self.beta_min] * p)
        upper = np.array([self.gamma_max] * p + [self.beta_max] * p)
        return lower, upper

    def contains(self, phi: Parameters, tol: float = 0.0) -> bool:
        lower, upper = self.box(phi.p)
        x = phi.to_array()
        return bool(np.all(x >= lower - tol) and np.all(x <= upper + tol))


# Half-open search regions, realized as closed boxes for the optimizer: the
# upper endpoint is equivalent to the lower one by periodicity, so closing the
# box loses no optimum.
REGULAR_BOUNDS = Bounds(0.0, math.pi / 2, 0.0, math.pi / 2)
GENERAL_BOUNDS = Bounds(0.0, math.pi, 0.0, math.pi / 2)


def bounds_for_graph(c: GraphClass) -> Bounds:
    """Redundancy-free search box for the graph class: regular graphs get
    gamma, beta in [0, pi/2); all other graphs gamma in [0, pi), beta in [0, pi/2)."""
    if c in (GraphClass.ODD_REGULAR, GraphClass.EVEN_REGULAR):
        return REGULAR_BOUNDS
    return GENERAL_BOUNDS


def clamp(phi: Parameters, b: Bounds) -> Parameters:
    """Replace every out-of-box angle by the nearer boundary value."""
    gammas = tuple(min(max(g, b.gamma_min), b.gamma_max) for g in phi.gammas)
    betas = tuple(min(max(x, b.beta_min), b.beta_max) for x in phi.betas)
    return Parameters(gammas=gammas, betas=betas)


@dataclass(frozen=True)
class OptimizerConfig:
    gradient_step: float = DEFAULT_GRADIENT_STEP
    convergence_tolerance: float = 1e-9  # relative objective change
    max_iterations: int = 500

    def __post_init__(self) -> None:
        if self.gradient_step <= 0 or self.convergence_tolerance <= 0 or self.max_iterations <= 0:
            raise ValueError(f"optimizer settings must be positive: {self}")


@dataclass(frozen=True)
class OptResult:
    phi_star: Parameters
    f_star: float
    nfev: int
    converged: bool


class OptimizationError(RuntimeError):
    """The objective returned a non-finite value.

    `partial` holds the best feasible point seen before the failure as an
    OptResult (None when no finite value was observed); `nfev` counts the
    objective calls made up to and including the failing one.
    """

    def __init__(
        self,
        message: str,
        partial: OptResult | None = None,
        nfev: int = 0,
        best_x: np.ndarray | None = None,
        best_f: float = -math.inf,
    ):
        super().__init__(message)
        self.partial = partial
        self.nfev = nfev
        self.best_x = best_x
        self.best_f = best_f


class _CountedObjective:
    """Tracks call count and best finite point; raises on non-finite values."""

    def __init__(self, fun: Callable[[np.ndarray], float]):
        self._fun = fun
        self.nfev = 0
        self.best_x: np.ndarray | None = None
        self.best_f = -math.inf

    def __call__(self, x: np.ndarray) -> float:
        self.nfev += 1
        value = float(self._fun(x))
        if not math.isfinite(value):
            raise _NonFiniteObjective(x, value)
        if value > self.best_f:
            self.best_f = value
            self.best_x = np.array(x, dtype=float)
        return value


class _NonFiniteObjective(Exception):
    def __init__(self, x: np.ndarray, value: float):
        self.x = x
        self.value = value


def _fd_gradient(
    fun: Callable[[np.ndarray], float],
    x: np.ndarray,
    lower: np.ndarray,
    upper: np.ndarray,
    step: float,
) -> np.ndarray:
    # Central differences with probes clamped into the box, so every counted
    # evaluation is at a feasible point; at an active bound this degrades to a
    # one-sided difference over the actual spread.
    grad = np.empty_like(x)
    for k in range(x.size):
        hi = min(x[k] + step, upper[k])
        lo = max(x[k] - step, lower[k])
        xp, xm = x.copy(), x.copy()
        xp[k] = hi
        xm[k] = lo
        grad[k] = (fun(xp) - fun(xm)) / (hi - lo)
    return grad


def maximize_flat(
    fun: Callable[[np.ndarray], float],
    x0: np.ndarray,
    lower: Sequence[float],
    upper: Sequence[float],
    config: OptimizerConfig = OptimizerConfig(),
) -> tuple[np.ndarray, float, int, bool]:
    """Maximize `fun` over the box [lower, upper] with a bounded quasi-Newton
    (L-BFGS-B) routine.

    Returns (x_star, f_star, nfev, converged). nfev counts every call to
    `fun`, including the finite-difference gradient probes (2 per dimension
    per gradient). The best evaluated point is returned, so f_star never
    falls below fun(x0). Deterministic for fixed inputs.
    """
    x0 = np.asarray(x0, dtype=float)
    lower = np.asarray(lower, dtype=float)
    upper = np.asarray(upper, dtype=float)
    if np.any(x0 < lower) or np.any(x0 > upper):
        raise ValueError(f"start {x0} outside box [{lower}, {upper}]")

    counted = _CountedObjective(fun)

    def neg(x: np.ndarray) -> float:
        return -counted(x)

    def neg_grad(x: np.ndarray) -> np.ndarray:
        return -_fd_gradient(counted, x, lower, upper, config.gradient_step)

    try:
        res = _scipy_minimize(
            neg,
            x0,
            jac=neg_grad,
            method="L-BFGS-B",
            bounds=list(zip(lower, upper)),
            options={
                "ftol": config.convergence_tolerance,
                "gtol": _PGTOL,
                "maxiter": config.max_iterations,
            },
        )
    except _NonFiniteObjective as exc:
        raise OptimizationError(
            f"objective returned non-finite value {exc.value} at {exc.x}",
            nfev=counted.nfev,
            best_x=counted.best_x,
            best_f=counted.best_f,
        ) from None
    assert counted.best_x is not None
    return counted.best_x, counted.best_f, counted.nfev, bool(res.success)


def maximize_bounded(
    objective: Callable[[Parameters], float],
    phi0: Parameters,
    b: Bounds,
    config: OptimizerConfig = OptimizerConfig(),
) -> OptResult:
    """Local maximization of a parameter objective within the box `b`.

    `phi0` must already lie inside the box (callers clamp first). The
    reported nfev is exactly the number of `objective` calls made.
    """
    if not b.contains(phi0):
        raise ValueError(f"start {phi0} violates bounds {b}; clamp first")
    lower, upper = b.box(phi0.p)

    def fun(x: np.ndarray) -> float:
        return objective(Parameters.from_array(x))

    try:
        x, f, nfev, converged = maximize_flat(fun, phi0.to_array(), lower, upper, config)
    except OptimizationError as exc:
        partial = None
        if exc.best_x is not None:
            partial = OptResult(
                phi_star=Parameters.from_array(exc.best_x),
                f_star=exc.best_f,
                nfev=exc.nfev,
                converged=False,
            )
        raise OptimizationError(str(exc), partial=partial, nfev=exc.nfev) from None
    return OptResult(
        phi_star=Parameters.from_array(x), f_star=f, nfev=nfev, converged=converged
    )
