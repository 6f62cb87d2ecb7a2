"""Experiment configuration, execution, persistence, and CSV emitters.

An experiment is a set of seeded graph instances crossed with initialization
strategies. Results are a single JSON document (full fidelity) plus CSV
emitters for plotting with external tools; runs are deterministic for fixed
seeds, so re-running a config reproduces the results byte for byte apart
from the timestamp.
"""

from __future__ import annotations

import csv
import hashlib
import io
import json
import math
from dataclasses import dataclass, field
from datetime import datetime, timezone
from pathlib import Path

import numpy as np

from .graphs import Graph, classify, gen_erdos_renyi, gen_random_regular, max_cut_brute_force
from .optimize import Bounds, OptimizerConfig, bounds_for_graph
from .simulator import ExpectationEvaluator, Parameters
from .strategies import STRATEGIES, DepthRecord, StrategyConfig
from .symmetry import SymmetryReport, run_symmetry_suite

__all__ = [
    "ConfigError",
    "InstanceSpec",
    "ExperimentConfig",
    "ResultSet",
    "run_experiment",
    "emit_alpha_table",
    "emit_params_trace",
    "emit_landscape",
]


class ConfigError(ValueError):
    """An experiment configuration is invalid or unsatisfiable."""


@dataclass(frozen=True)
class InstanceSpec:
    """Seeded recipe for one graph instance."""

    kind: str  # "regular" | "erdos_renyi"
    n: int
    seed: int
    degree: int | None = None
    prob: float | None = None

    def __post_init__(self) -> None:
        if self.kind == "regular":
            if self.degree is None:
                raise ConfigError(f"{self}: regular instance needs a degree")
        elif self.kind == "erdos_renyi":
            if self.prob is None:
                raise ConfigError(f"{self}: erdos_renyi instance needs an edge probability")
        else:
            raise ConfigError(f"{self}: unknown instance kind {self.kind!r}")

    @property
    def instance_id(self) -> str:
        if self.kind == "regular":
            return f"reg{self.degree}-n{self.n}-s{self.seed}"
        return f"er{self.prob:g}-n{self.n}-s{self.seed}"

    def build(self) -> Graph:
        try:
            if self.kind == "regular":
                return gen_random_regular(self.n, self.degree, self.seed)
            return gen_erdos_renyi(self.n, self.prob, self.seed)
        except ValueError as exc:
            raise ConfigError(f"instance {self.instance_id} is unsatisfiable: {exc}") from None

    def to_dict(self) -> dict:
        d = {"kind": self.kind, "n": self.n, "seed": self.seed}
        if self.degree is not None:
            d["degree"] = self.degree
        if self.prob is not None:
            d["prob"] = self.prob
        return d

    @classmethod
    def from_dict(cls, d: dict) -> InstanceSpec:
        return cls(
            kind=d["kind"],
            n=int(d["n"]),
            seed=int(d["seed"]),
            degree=d.get("degree"),
            prob=d.get("prob"),
        )


@dataclass(frozen=True)
class ExperimentConfig:
    instances: tuple[InstanceSpec, ...]
    strategies: tuple[str, ...]
    max_depth: int = 10
    trials: int = 20
    rng_seed: int = 0
    optimizer: OptimizerConfig = OptimizerConfig()
    bounds: Bounds | None = None  # None = per-class defaults
    symmetry_samples: int = 0

    def __post_init__(self) -> None:
        if not self.instances:
            raise ConfigError("config has no instances")
        if not self.strategies:
            raise ConfigError("config has no strategies")
        unknown = [s for s in self.strategies if s not in STRATEGIES]
        if unknown:
            raise ConfigError(
                f"unknown strategies {unknown}; available: {sorted(STRATEGIES)}"
            )
        if len(set(self.strategies)) != len(self.strategies):
            raise ConfigError(f"duplicate strategies in config: {self.strategies}")
        if self.max_depth < 1:
            raise ConfigError(f"max_depth must be >= 1, got {self.max_depth}")
        if self.trials < 1:
            raise ConfigError(f"trials must be >= 1, got {self.trials}")
        ids = [spec.instance_id for spec in self.instances]
        if len(set(ids)) != len(ids):
            raise ConfigError(f"duplicate instance ids in config: {ids}")

    def to_dict(self) -> dict:
        return {
            "instances": [spec.to_dict() for spec in self.instances],
            "strategies": list(self.strategies),
            "max_depth": self.max_depth,
            "trials": self.trials,
            "rng_seed": self.rng_seed,
            "optimizer": {
                "gradient_step": self.optimizer.gradient_step,
                "convergence_tolerance": self.optimizer.convergence_tolerance,
                "max_iterations": self.optimizer.max_iterations,
            },
            "bounds": None
            if self.bounds is None
            else {
                "gamma_min": self.bounds.gamma_min,
                "gamma_max": self.bounds.gamma_max,
                "beta_min": self.bounds.beta_min,
                "beta_max": self.bounds.beta_max,
            },
            "symmetry_samples": self.symmetry_samples,
        }

    @classmethod
    def from_dict(cls, d: dict) -> ExperimentConfig:
        opt = d.get("optimizer") or {}
        bounds = d.get("bounds")
        return cls(
            instances=tuple(InstanceSpec.from_dict(s) for s in d.get("instances", [])),
            strategies=tuple(d.get("strategies", [])),
            max_depth=int(d.get("max_depth", 10)),
            trials=int(d.get("trials", 20)),
            rng_seed=int(d.get("rng_seed", 0)),
            optimizer=OptimizerConfig(
                gradient_step=float(opt.get("gradient_step", OptimizerConfig().gradient_step)),
                convergence_tolerance=float(
                    opt.get("convergence_tolerance", OptimizerConfig().convergence_tolerance)
                ),
                max_iterations=int(opt.get("max_iterations", OptimizerConfig().max_iterations)),
            ),
            bounds=None
            if bounds is None
            else Bounds(
                gamma_min=float(bounds["gamma_min"]),
                gamma_max=float(bounds["gamma_max"]),
                beta_min=float(bounds["beta_min"]),
                beta_max=float(bounds["beta_max"]),
            ),
            symmetry_samples=int(d.get("symmetry_samples", 0)),
        )

    @classmethod
    def from_file(cls, path: str | Path) -> ExperimentConfig:
        try:
            data = json.loads(Path(path).read_text())
        except json.JSONDecodeError as exc:
            raise ConfigError(f"{path}: not valid JSON ({exc})") from None
        return cls.from_dict(data)

    def config_hash(self) -> str:
        canonical = json.dumps(self.to_dict(), sort_keys=True, separators=(",", ":"))
        return hashlib.sha256(canonical.encode()).hexdigest()


@dataclass
class ResultSet:
    """All records of one experiment, keyed by (instance id, strategy, depth)."""

    meta: dict
    records: dict[tuple[str, str, int], DepthRecord] = field(default_factory=dict)
    symmetry_reports: list[SymmetryReport] = field(default_factory=list)

    def add(self, instance_id: str, record: DepthRecord) -> None:
        key = (instance_id, record.strategy, record.depth)
        if key in self.records:
            raise ValueError(f"duplicate record key {key}")
        self.records[key] = record

    def to_json(self) -> str:
        rows = []
        for (instance_id, strategy, depth) in sorted(self.records):
            rec = self.records[(instance_id, strategy, depth)]
            rows.append(
                {
                    "instance": instance_id,
                    "strategy": strategy,
                    "depth": depth,
                    "gammas": list(rec.phi_star.gammas),
                    "betas": list(rec.phi_star.betas),
                    "f_star": rec.f_star,
                    "alpha": rec.alpha,
                    "nfev": rec.nfev_total,
                    "converged": rec.converged,
                }
            )
        doc = {
            "meta": self.meta,
            "records": rows,
            "symmetry_reports": [
                {
                    "transform": r.transform,
                    "max_abs_deviation": r.max_abs_deviation,
                    "samples": r.samples,
                }
                for r in self.symmetry_reports
            ],
        }
        return json.dumps(doc, indent=2, sort_keys=True)

    @classmethod
    def from_json(cls, text: str) -> ResultSet:
        doc = json.loads(text)
        rs = cls(meta=doc["meta"])
        for row in doc["records"]:
            rec = DepthRecord(
                depth=int(row["depth"]),
                phi_star=Parameters(
                    gammas=tuple(row["gammas"]), betas=tuple(row["betas"])
                ),
                f_star=float(row["f_star"]),
                alpha=float(row["alpha"]),
                nfev_total=int(row["nfev"]),
                strategy=row["strategy"],
                converged=bool(row["converged"]),
            )
            rs.add(row["instance"], rec)
        rs.symmetry_reports = [
            SymmetryReport(
                transform=r["transform"],
                max_abs_deviation=float(r["max_abs_deviation"]),
                samples=int(r["samples"]),
            )
            for r in doc.get("symmetry_reports", [])
        ]
        return rs

    def save(self, path: str | Path) -> None:
        Path(path).write_text(self.to_json() + "\n")

    @classmethod
    def load(cls, path: str | Path) -> ResultSet:
        return cls.from_json(Path(path).read_text())


def _strategy_seed(base: int, instance_idx: int, strategy_idx: int) -> int:
    seq = np.random.SeedSequence(entropy=base, spawn_key=(instance_idx, strategy_idx))
    return int(seq.generate_state(1)[0])


def run_experiment(cfg: ExperimentConfig) -> ResultSet:
    """Execute every (instance x strategy) run in the config.

    Deterministic for fixed seeds; per-run strategy seeds are derived from the
    config seed and the instance/strategy positions.
    """
    graphs = [(spec.instance_id, spec.build()) for spec in cfg.instances]
    rs = ResultSet(
        meta={
            "config": cfg.to_dict(),
            "config_hash": cfg.config_hash(),
            "created_at": datetime.now(timezone.utc).isoformat(),
        }
    )
    for i, (instance_id, g) in enumerate(graphs):
        bounds = cfg.bounds if cfg.bounds is not None else bounds_for_graph(classify(g))
        for s, name in enumerate(cfg.strategies):
            scfg = StrategyConfig(
                max_depth=cfg.max_depth,
                bounds=bounds,
                trials=cfg.trials,
                rng_seed=_strategy_seed(cfg.rng_seed, i, s),
                optimizer=cfg.optimizer,
            )
            for record in STRATEGIES[name](g, scfg):
                rs.add(instance_id, record)
    if cfg.symmetry_samples > 0:
        rs.symmetry_reports = run_symmetry_suite(
            samples=cfg.symmetry_samples, seed=cfg.rng_seed
        )
    return rs


def emit_alpha_table(rs: ResultSet) -> str:
    """CSV of approximation ratios and cumulative evaluation counts:
    instance, strategy, p, F_star, alpha, nfev_cumulative, sorted by key."""
    if not rs.records:
        raise ValueError("empty result set")
    out = io.StringIO()
    writer = csv.writer(out, lineterminator="\n")
    writer.writerow(["instance", "strategy", "p", "F_star", "alpha", "nfev_cumulative"])
    cumulative: dict[tuple[str, str], int] = {}
    for key in sorted(rs.records):
        instance_id, strategy, depth = key
        rec = rs.records[key]
        group = (instance_id, strategy)
        cumulative[group] = cumulative.get(group, 0) + rec.nfev_total
        writer.writerow(
            [instance_id, strategy, depth, repr(rec.f_star), repr(rec.alpha), cumulative[group]]
        )
    return out.getvalue()


def emit_params_trace(rs: ResultSet, instance: str, strategy: str) -> str:
    """Long-format CSV of optimal angles for one (instance, strategy):
    one row (p, j, gamma_j, beta_j) per angle index j = 1..p per depth."""
    selected = {
        key: rec
        for key, rec in rs.records.items()
        if key[0] == instance and key[1] == strategy
    }
    if not selected:
        raise ValueError(f"no records for instance={instance!r} strategy={strategy!r}")
    out = io.StringIO()
    writer = csv.writer(out, lineterminator="\n")
    writer.writerow(["p", "j", "gamma_j", "beta_j"])
    for key in sorted(selected):
        rec = selected[key]
        for j in range(rec.depth):
            writer.writerow(
                [rec.depth, j + 1, repr(rec.phi_star.gammas[j]), repr(rec.phi_star.betas[j])]
            )
    return out.getvalue()


def emit_landscape(g: Graph, resolution: int) -> str:
    """CSV grid of the depth-1 normalized expectation over one full period:
    gamma in [0, 2*pi), beta in [0, pi), `resolution` points per axis."""
    if resolution < 2:
        raise ValueError(f"resolution must be >= 2, got {resolution}")
    c_max = max_cut_brute_force(g)[0]
    if c_max < 1:
        raise ValueError("graph has no edges; landscape is undefined")
    ev = ExpectationEvaluator(g)
    out = io.StringIO()
    writer = csv.writer(out, lineterminator="\n")
    writer.writerow(["gamma", "beta", "alpha"])
    for i in range(resolution):
        gamma = 2.0 * math.pi * i / resolution
        for j in range(resolution):
            beta = math.pi * j / resolution
            alpha = ev.expectation(Parameters(gammas=(gamma,), betas=(beta,))) / c_max
            writer.writerow([repr(gamma), repr(beta), repr(alpha)])
    return out.getvalue()
