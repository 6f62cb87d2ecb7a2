"""Depth-progressive parameter initialization strategies and their runners.

Every runner produces one DepthRecord per depth 1..max_depth. The bilinear
strategy extrapolates the next depth's start from the previous two optima and
performs a single optimization per depth; parameters fixing and layerwise are
multistart baselines whose nfev totals sum over all trials.
"""

from __future__ import annotations

from dataclasses import dataclass
from typing import Callable

import numpy as np
from scipy.stats import qmc

from .graphs import Graph, max_cut_brute_force
from .optimize import Bounds, OptResult, OptimizerConfig, clamp, maximize_bounded, maximize_flat
from .simulator import ExpectationEvaluator, Parameters

__all__ = [
    "DepthRecord",
    "StrategyConfig",
    "bilinear_predict",
    "base_exhaustion",
    "run_bilinear",
    "run_parameters_fixing",
    "run_layerwise",
    "run_linear_ramp",
    "linear_ramp_init",
    "STRATEGIES",
]

DEFAULT_LINEAR_RAMP_DT = 0.75


@dataclass(frozen=True)
class DepthRecord:
    """Optimization outcome at one circuit depth."""

    depth: int
    phi_star: Parameters
    f_star: float
    alpha: float
    nfev_total: int
    strategy: str
    converged: bool = True

    def __post_init__(self) -> None:
        if self.phi_star.p != self.depth:
            raise ValueError(
                f"record depth {self.depth} != parameter depth {self.phi_star.p}"
            )


@dataclass(frozen=True)
class StrategyConfig:
    max_depth: int
    bounds: Bounds
    trials: int = 20
    rng_seed: int = 0
    optimizer: OptimizerConfig = OptimizerConfig()

    def __post_init__(self) -> None:
        if self.max_depth < 1:
            raise ValueError(f"max_depth must be >= 1, got {self.max_depth}")
        if self.trials < 1:
            raise ValueError(f"trials must be >= 1, got {self.trials}")


def bilinear_predict(
    phi_prev: Parameters, phi_prev2: Parameters, b: Bounds
) -> Parameters:
    """Extrapolate depth-p starting angles from the optima at depths p-1 and p-2.

    For gammas and betas independently, with 1-based index j:

      j <= p-2:  phi_j      = 2*phi_j[p-1] - phi_j[p-2]      (depth-wise trend)
      j  = p-1:  phi_{p-1}  = phi_{p-1}[p-1] + (phi_{p-2}[p-1] - phi_{p-2}[p-2])
      j  = p:    phi_p      = 2*phi_{p-1} - phi_{p-2}        (index-wise trend,
                                                              on the new values)

    Out-of-box results are replaced by the nearer boundary, after all three
    rules have been applied.
    """
    if phi_prev.p != phi_prev2.p + 1:
        raise ValueError(
            f"need consecutive depths: got p-1 with {phi_prev.p} angles "
            f"and p-2 with {phi_prev2.p}"
        )

    def extend(prev: tuple[float, ...], prev2: tuple[float, ...]) -> tuple[float, ...]:
        out = [2.0 * prev[j] - prev2[j] for j in range(len(prev2))]
        out.append(prev[-1] + (prev[-2] - prev2[-1]))
        out.append(2.0 * out[-1] - out[-2])
        return tuple(out)

    raw = Parameters(
        gammas=extend(phi_prev.gammas, phi_prev2.gammas),
        betas=extend(phi_prev.betas, phi_prev2.betas),
    )
    return clamp(raw, b)


def linear_ramp_init(p: int, delta_t: float) -> Parameters:
    """Discretized-annealing start: gamma_j = (j/p)*dt ramps up,
    beta_j = (1 - j/p)*dt ramps down, j = 1..p."""
    if p < 1:
        raise ValueError(f"depth must be >= 1, got {p}")
    if delta_t <= 0:
        raise ValueError(f"delta_t must be positive, got {delta_t}")
    gammas = tuple(j / p * delta_t for j in range(1, p + 1))
    betas = tuple((1.0 - j / p) * delta_t for j in range(1, p + 1))
    return Parameters(gammas=gammas, betas=betas)


def _multistart(
    objective: Callable[[Parameters], float],
    starts: list[Parameters],
    b: Bounds,
    optimizer: OptimizerConfig,
) -> tuple[OptResult, int]:
    """Optimize from every start; best objective wins, ties go to the earliest
    start. Returns (best result, nfev summed over all trials)."""
    best: OptResult | None = None
    nfev_total = 0
    for phi0 in starts:
        res = maximize_bounded(objective, phi0, b, optimizer)
        nfev_total += res.nfev
        if best is None or res.f_star > best.f_star:
            best = res
    assert best is not None
    return best, nfev_total


def _exhaustion_starts(p: int, cfg: StrategyConfig) -> list[Parameters]:
    """One start at the zero corner, the rest a seeded low-discrepancy set."""
    b = cfg.bounds
    corner = clamp(Parameters(gammas=(0.0,) * p, betas=(0.0,) * p), b)
    starts = [corner]
    if cfg.trials > 1:
        sampler = qmc.Halton(
            d=2 * p, scramble=True, seed=np.random.default_rng([cfg.rng_seed, p])
        )
        lower, upper = b.box(p)
        points = qmc.scale(sampler.random(cfg.trials - 1), lower, upper)
        starts.extend(Parameters.from_array(x) for x in points)
    return starts


def base_exhaustion(
    g: Graph,
    p: int,
    cfg: StrategyConfig,
    *,
    label: str = "exhaustion",
    evaluator: ExpectationEvaluator | None = None,
    c_max: int | None = None,
) -> DepthRecord:
    """Best of a seeded multistart at depth 1 or 2, establishing the base
    optima that the depth-progressive strategies build on."""
    if p not in (1, 2):
        raise ValueError(f"base exhaustion is for depths 1 and 2, got {p}")
    evaluator = evaluator or ExpectationEvaluator(g)
    if c_max is None:
        c_max = max_cut_brute_force(g)[0]
    best, nfev_total = _multistart(
        evaluator.expectation, _exhaustion_starts(p, cfg), cfg.bounds, cfg.optimizer
    )
    return DepthRecord(
        depth=p,
        phi_star=best.phi_star,
        f_star=best.f_star,
        alpha=best.f_star / c_max,
        nfev_total=nfev_total,
        strategy=label,
        converged=best.converged,
    )


def run_bilinear(g: Graph, cfg: StrategyConfig) -> list[DepthRecord]:
    """Depth progression with a single extrapolated start per depth from p=3 on.

    Depths 1 and 2 come from base exhaustion; afterwards each depth costs
    exactly one prediction plus one bounded optimization.
    """
    evaluator = ExpectationEvaluator(g)
    c_max = max_cut_brute_force(g)[0]
    records = [
        base_exhaustion(g, p, cfg, label="bilinear", evaluator=evaluator, c_max=c_max)
        for p in (1, 2)[: cfg.max_depth]
    ]
    for p in range(3, cfg.max_depth + 1):
        phi0 = bilinear_predict(records[-1].phi_star, records[-2].phi_star, cfg.bounds)
        res = maximize_bounded(evaluator.expectation, phi0, cfg.bounds, cfg.optimizer)
        records.append(
            DepthRecord(
                depth=p,
                phi_star=res.phi_star,
                f_star=res.f_star,
                alpha=res.f_star / c_max,
                nfev_total=res.nfev,
                strategy="bilinear",
                converged=res.converged,
            )
        )
    return records


def _new_pair_starts(
    prev: Parameters, p: int, cfg: StrategyConfig, random_count: int
) -> list[tuple[float, float]]:
    """New-layer (gamma_p, beta_p) starting pairs: (0, 0) first, then
    `random_count` uniform draws over the box, seeded per depth."""
    b = cfg.bounds
    zero = (
        min(max(0.0, b.gamma_min), b.gamma_max),
        min(max(0.0, b.beta_min), b.beta_max),
    )
    pairs = [zero]
    rng = np.random.default_rng([cfg.rng_seed, p])
    for _ in range(random_count):
        pairs.append(
            (
                rng.uniform(b.gamma_min, b.gamma_max),
                rng.uniform(b.beta_min, b.beta_max),
            )
        )
    return pairs


def run_parameters_fixing(g: Graph, cfg: StrategyConfig) -> list[DepthRecord]:
    """Multistart baseline: each depth reuses the previous optimum for the
    first p-1 layers and tries `trials` starts for the new layer, optimizing
    all 2p angles. The (0, 0) new-layer start reproduces the previous optimum
    exactly, which makes the approximation ratio non-decreasing in depth.
    """
    evaluator = ExpectationEvaluator(g)
    c_max = max_cut_brute_force(g)[0]
    records = [
        base_exhaustion(
            g, 1, cfg, label="parameters_fixing", evaluator=evaluator, c_max=c_max
        )
    ]
    for p in range(2, cfg.max_depth + 1):
        prev = records[-1].phi_star
        starts = [
            Parameters(gammas=prev.gammas + (gp,), betas=prev.betas + (bp,))
            for gp, bp in _new_pair_starts(prev, p, cfg, cfg.trials - 1)
        ]
        best, nfev_total = _multistart(
            evaluator.expectation, starts, cfg.bounds, cfg.optimizer
        )
        records.append(
            DepthRecord(
                depth=p,
                phi_star=best.phi_star,
                f_star=best.f_star,
                alpha=best.f_star / c_max,
                nfev_total=nfev_total,
                strategy="parameters_fixing",
                converged=best.converged,
            )
        )
    return records


def run_layerwise(g: Graph, cfg: StrategyConfig) -> list[DepthRecord]:
    """Baseline that freezes all previous angles and optimizes only the newest
    layer's (gamma_p, beta_p): a 2-variable search at every depth, over
    `trials` random starts plus the (0, 0) start."""
    evaluator = ExpectationEvaluator(g)
    c_max = max_cut_brute_force(g)[0]
    records = [
        base_exhaustion(g, 1, cfg, label="layerwise", evaluator=evaluator, c_max=c_max)
    ]
    b = cfg.bounds
    for p in range(2, cfg.max_depth + 1):
        prev = records[-1].phi_star

        def objective(pair: np.ndarray) -> float:
            phi = Parameters(
                gammas=prev.gammas + (pair[0],), betas=prev.betas + (pair[1],)
            )
            return evaluator.expectation(phi)

        best_pair: np.ndarray | None = None
        best_f = -np.inf
        best_conv = False
        nfev_total = 0
        for pair0 in _new_pair_starts(prev, p, cfg, cfg.trials):
            x, f, nfev, conv = maximize_flat(
                objective,
                np.array(pair0),
                [b.gamma_min, b.beta_min],
                [b.gamma_max, b.beta_max],
                cfg.optimizer,
            )
            nfev_total += nfev
            if f > best_f:
                best_pair, best_f, best_conv = x, f, conv
        assert best_pair is not None
        phi_star = Parameters(
            gammas=prev.gammas + (float(best_pair[0]),),
            betas=prev.betas + (float(best_pair[1]),),
        )
        records.append(
            DepthRecord(
                depth=p,
                phi_star=phi_star,
                f_star=best_f,
                alpha=best_f / c_max,
                nfev_total=nfev_total,
                strategy="layerwise",
                converged=best_conv,
            )
        )
    return records


def run_linear_ramp(
    g: Graph, cfg: StrategyConfig, delta_t: float = DEFAULT_LINEAR_RAMP_DT
) -> list[DepthRecord]:
    """Baseline seeded from the discretized-annealing ramp: one optimization
    per depth, started at linear_ramp_init clamped into the box."""
    evaluator = ExpectationEvaluator(g)
    c_max = max_cut_brute_force(g)[0]
    records = []
    for p in range(1, cfg.max_depth + 1):
        phi0 = clamp(linear_ramp_init(p, delta_t), cfg.bounds)
        res = maximize_bounded(evaluator.expectation, phi0, cfg.bounds, cfg.optimizer)
        records.append(
            DepthRecord(
                depth=p,
                phi_star=res.phi_star,
                f_star=res.f_star,
                alpha=res.f_star / c_max,
                nfev_total=res.nfev,
                strategy="linear_ramp",
                converged=res.converged,
            )
        )
    return records


STRATEGIES: dict[str, Callable[[Graph, StrategyConfig], list[DepthRecord]]] = {
    "bilinear": run_bilinear,
    "parameters_fixing": run_parameters_fixing,
    "layerwise": run_layerwise,
    "linear_ramp": run_linear_ramp,
}
