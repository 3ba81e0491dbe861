"""Configuration-driven sweeps over cost grids, bias levels, and compositions.

A sweep point is one cost-grid value on one axis. For every point and repeat
a single derived seed drives the pair-selection stream in all regimes, so the
complete-information, rational-expectations, and biased runs of a triple see
identical meeting opportunities; only beliefs (and hence decisions) differ.
Belief draws come from a separate stream keyed off the same seed, and the
bias level enters through the inverse CDF of a shared uniform draw, so
changing beta moves every agent's bias monotonically instead of resampling.

Configs are plain YAML (schema documented in ``load_config``); all published
scenario setups ship as named presets.
"""

from __future__ import annotations

import csv
import hashlib
import json
from concurrent.futures import ProcessPoolExecutor
from dataclasses import dataclass, field, replace
from typing import IO, Optional, Union

import numpy as np
import yaml

from .beliefs import (BeliefTable, BiasParams, biased_base_beliefs,
                      complete_info_memory, rational_base_beliefs)
from .dynamics import Limits, RunStatus, SimState, run
from .metrics import MetricsRecord, compute_metrics, incremental_segregation
from .model import CostStructure, NetworkState, Population

REGIMES = ("complete", "rational", "biased")

CSV_COLUMNS = ("seed", "regime", "c_L", "c_H", "beta", "p_inter", "freeman",
               "s_is_rational", "s_is_complete", "mean_degree", "discovery",
               "status")

CONFIG_SCHEMA_VERSION = 1


class ConfigError(ValueError):
    """Raised when a config file or constructed config is rejected."""


@dataclass(frozen=True)
class PopulationSpec:
    """Group sizes and per-group hidden-type counts."""

    group_sizes: tuple[int, ...]
    type_counts: tuple[tuple[int, ...], ...]

    def __post_init__(self):
        object.__setattr__(self, "group_sizes", tuple(int(s) for s in self.group_sizes))
        object.__setattr__(self, "type_counts",
                           tuple(tuple(int(c) for c in row) for row in self.type_counts))
        if len(self.group_sizes) != len(self.type_counts):
            raise ConfigError("need one type-count row per group")
        for k, (size, row) in enumerate(zip(self.group_sizes, self.type_counts)):
            if sum(row) != size:
                raise ConfigError(
                    f"type counts for group {k} sum to {sum(row)}, expected {size}")

    def build(self) -> Population:
        """Deterministic layout: agents blocked by group, then by type."""
        return Population.from_counts(self.group_sizes, self.type_counts)

    @property
    def n(self) -> int:
        return sum(self.group_sizes)


@dataclass(frozen=True)
class SweepAxis:
    """One cost parameter varied over a grid while the other stays fixed."""

    parameter: str
    values: tuple[float, ...]

    def __post_init__(self):
        if self.parameter not in ("c_low", "c_high"):
            raise ConfigError(f"unknown sweep parameter {self.parameter!r}")
        object.__setattr__(self, "values", tuple(float(v) for v in self.values))
        if not self.values:
            raise ConfigError("sweep axis needs at least one grid value")


@dataclass(frozen=True)
class ExperimentConfig:
    population: PopulationSpec
    delta: float
    c_low: float
    c_high: float
    axes: tuple[SweepAxis, ...]
    betas: tuple[float, ...] = (7.0,)
    alpha: float = 1.0
    regimes: tuple[str, ...] = REGIMES
    repeats: int = 30
    seed_base: int = 2026
    limits: Optional[Limits] = None

    def __post_init__(self):
        object.__setattr__(self, "axes", tuple(self.axes))
        object.__setattr__(self, "betas", tuple(float(b) for b in self.betas))
        object.__setattr__(self, "regimes", tuple(self.regimes))
        if not self.axes:
            raise ConfigError("config needs at least one sweep axis")
        if not self.betas:
            raise ConfigError("config needs at least one beta value")
        if self.repeats < 1:
            raise ConfigError("repeats must be at least 1")
        if not self.regimes:
            raise ConfigError("config needs at least one regime")
        for r in self.regimes:
            if r not in REGIMES:
                raise ConfigError(f"unknown regime {r!r}; expected subset of {REGIMES}")
        # Validates delta and the cost ordering at every grid point up front.
        for axis in self.axes:
            for value in axis.values:
                self.costs_at(axis.parameter, value)

    def costs_at(self, parameter: str, value: float) -> CostStructure:
        c_low = value if parameter == "c_low" else self.c_low
        c_high = value if parameter == "c_high" else self.c_high
        try:
            return CostStructure(self.delta, c_low, c_high)
        except ValueError as exc:
            raise ConfigError(f"grid point {parameter}={value} rejected: {exc}") from exc

    def effective_limits(self) -> Limits:
        return self.limits if self.limits is not None else Limits.default_for(self.population.n)


@dataclass(frozen=True)
class RunRecord:
    """One terminated run at one sweep point, with its metrics."""

    axis: str
    value_index: int
    repeat: int
    seed: int
    regime: str
    c_low: float
    c_high: float
    beta: Optional[float]
    status: str
    periods: int
    metrics: MetricsRecord
    final: Optional[NetworkState] = None


def derive_seed(seed_base: int, axis: str, value_index: int, repeat: int) -> int:
    """Stable 64-bit run seed; the regime and bias level do not enter, so
    paired runs share one pair-selection stream."""
    key = f"{seed_base}|{axis}|{value_index}|{repeat}".encode()
    return int.from_bytes(hashlib.sha256(key).digest()[:8], "big")


def _belief_rng(seed: int) -> np.random.Generator:
    # Separate stream from pair selection; identical reseeding per beta means
    # every bias level transforms the same underlying uniform draws.
    return np.random.default_rng(np.random.SeedSequence([seed, 1]))


def _initial_state(regime: str, pop: Population, beta: Optional[float],
                   alpha: float, seed: int) -> tuple[NetworkState, BeliefTable]:
    n = pop.n
    if regime == "complete":
        net = NetworkState(np.zeros((n, n), dtype=bool), complete_info_memory(pop))
        table = BeliefTable(rational_base_beliefs(pop).base, np.ones(n))
    elif regime == "rational":
        net = NetworkState.empty(n)
        table = rational_base_beliefs(pop)
    elif regime == "biased":
        net = NetworkState.empty(n)
        table = biased_base_beliefs(pop, BiasParams(beta, alpha), _belief_rng(seed))
    else:
        raise ConfigError(f"unknown regime {regime!r}")
    return net, table


def run_paired(config: ExperimentConfig, axis: str, value_index: int,
               repeat: int, keep_states: bool = False) -> list[RunRecord]:
    """All regime runs for one grid point and repeat, on one pair stream.

    Biased runs are produced once per configured beta. Incremental
    segregation on each biased record compares its inter-group proportion
    against the rational and complete baselines from the same seed.
    """
    (axis_obj,) = [a for a in config.axes if a.parameter == axis]
    value = axis_obj.values[value_index]
    costs = config.costs_at(axis, value)
    pop = config.population.build()
    seed = derive_seed(config.seed_base, axis, value_index, repeat)
    limits = config.effective_limits()

    records: list[RunRecord] = []
    baseline_p: dict[str, Optional[float]] = {}
    for regime in config.regimes:
        betas = config.betas if regime == "biased" else (None,)
        for beta in betas:
            net, table = _initial_state(regime, pop, beta, config.alpha, seed)
            state = SimState.create(net, pop, costs, table, seed)
            outcome = run(state, limits=limits)
            metrics = compute_metrics(outcome.final.net, pop)
            if regime == "biased":
                metrics = replace(
                    metrics,
                    s_is_vs_rational=incremental_segregation(
                        baseline_p.get("rational"), metrics.p_inter),
                    s_is_vs_complete=incremental_segregation(
                        baseline_p.get("complete"), metrics.p_inter),
                )
            else:
                baseline_p[regime] = metrics.p_inter
            records.append(RunRecord(
                axis=axis, value_index=value_index, repeat=repeat, seed=seed,
                regime=regime, c_low=costs.c_low, c_high=costs.c_high,
                beta=beta, status=outcome.status.value, periods=outcome.periods,
                metrics=metrics,
                final=outcome.final.net if keep_states else None))
    return records


def _sweep_item(args) -> tuple[tuple, list[RunRecord]]:
    config, axis, value_index, repeat, keep_states = args
    key = (axis, value_index, repeat)
    return key, run_paired(config, axis, value_index, repeat, keep_states)


def sweep(config: ExperimentConfig, keep_states: bool = False,
          workers: int = 1) -> list[RunRecord]:
    """Run the full grid: every axis value times every repeat.

    Output ordering is by (axis position, grid value, repeat, regime, beta)
    regardless of execution order or worker count.
    """
    items = [(config, axis.parameter, vi, rep, keep_states)
             for axis in config.axes
             for vi in range(len(axis.values))
             for rep in range(config.repeats)]
    if workers > 1:
        results: dict[tuple, list[RunRecord]] = {}
        with ProcessPoolExecutor(max_workers=workers) as pool:
            for key, recs in pool.map(_sweep_item, items, chunksize=1):
                results[key] = recs
        ordered = [results[(axis, vi, rep)] for (_, axis, vi, rep, _) in items]
    else:
        ordered = [_sweep_item(item)[1] for item in items]
    return [rec for recs in ordered for rec in recs]


@dataclass(frozen=True)
class PointSummary:
    """Across-repeat aggregate for one (axis, value, regime, beta) cell."""

    axis: str
    value: float
    regime: str
    beta: Optional[float]
    count: int
    freeman_mean: float
    freeman_std: float
    mean_degree_mean: float
    discovery_mean: float
    p_inter_mean: Optional[float]
    p_inter_undefined: int
    s_is_rational_mean: Optional[float]
    s_is_rational_undefined: int
    s_is_complete_mean: Optional[float]
    s_is_complete_undefined: int


def _mean_or_none(values: list[float]) -> Optional[float]:
    return float(np.mean(values)) if values else None


def aggregate(config: ExperimentConfig, records: list[RunRecord]) -> list[PointSummary]:
    """Per-point means over repeats; undefined ratio values are dropped from
    their means and counted instead of being coerced to numbers."""
    axis_values = {a.parameter: a.values for a in config.axes}
    cells: dict[tuple, list[RunRecord]] = {}
    for rec in records:
        cells.setdefault((rec.axis, rec.value_index, rec.regime, rec.beta), []).append(rec)
    summaries = []
    for (axis, vi, regime, beta), recs in sorted(
            cells.items(), key=lambda kv: (kv[0][0], kv[0][1], REGIMES.index(kv[0][2]),
                                           -1.0 if kv[0][3] is None else kv[0][3])):
        p_vals = [r.metrics.p_inter for r in recs if r.metrics.p_inter is not None]
        sr = [r.metrics.s_is_vs_rational for r in recs if r.metrics.s_is_vs_rational is not None]
        sc = [r.metrics.s_is_vs_complete for r in recs if r.metrics.s_is_vs_complete is not None]
        freeman = [r.metrics.freeman for r in recs]
        summaries.append(PointSummary(
            axis=axis, value=axis_values[axis][vi], regime=regime, beta=beta,
            count=len(recs),
            freeman_mean=float(np.mean(freeman)),
            freeman_std=float(np.std(freeman)),
            mean_degree_mean=float(np.mean([r.metrics.mean_degree for r in recs])),
            discovery_mean=float(np.mean([r.metrics.discovery for r in recs])),
            p_inter_mean=_mean_or_none(p_vals),
            p_inter_undefined=len(recs) - len(p_vals),
            s_is_rational_mean=_mean_or_none(sr),
            s_is_rational_undefined=len(recs) - len(sr),
            s_is_complete_mean=_mean_or_none(sc),
            s_is_complete_undefined=len(recs) - len(sc),
        ))
    return summaries


# ---------------------------------------------------------------------------
# File emission
# ---------------------------------------------------------------------------

def _fmt(value) -> str:
    if value is None:
        return ""
    if isinstance(value, float):
        return repr(value)
    return str(value)


def write_metrics_csv(records: list[RunRecord], out: Union[str, IO[str]]) -> None:
    """Fixed-column metrics table; floats use shortest round-trip form so
    identical runs serialise byte-identically."""
    if isinstance(out, str):
        with open(out, "w", newline="") as fh:
            return write_metrics_csv(records, fh)
    writer = csv.writer(out, lineterminator="\n")
    writer.writerow(CSV_COLUMNS)
    for rec in records:
        m = rec.metrics
        writer.writerow([
            _fmt(rec.seed), rec.regime, _fmt(rec.c_low), _fmt(rec.c_high),
            _fmt(rec.beta), _fmt(m.p_inter), _fmt(m.freeman),
            _fmt(m.s_is_vs_rational), _fmt(m.s_is_vs_complete),
            _fmt(m.mean_degree), _fmt(m.discovery), rec.status,
        ])


def snapshot_dict(rec: RunRecord, pop: Population,
                  include_memory: bool = False) -> dict:
    """Final-network snapshot: agents with attributes plus the edge list."""
    if rec.final is None:
        raise ValueError("record was produced without keep_states")
    net = rec.final
    snap = {
        "seed": rec.seed,
        "regime": rec.regime,
        "beta": rec.beta,
        "c_low": rec.c_low,
        "c_high": rec.c_high,
        "status": rec.status,
        "agents": [{"id": i, "group": int(pop.groups[i]), "type": int(pop.types[i])}
                   for i in range(pop.n)],
        "edges": [[int(i), int(j)] for i, j in net.edges()],
        "singleton": net.link_count() == 0,
    }
    if include_memory:
        snap["memory"] = net.memory.tolist()
    return snap


def write_snapshots(records: list[RunRecord], pop: Population, path: str,
                    include_memory: bool = False) -> None:
    try:
        with open(path, "w") as fh:
            json.dump([snapshot_dict(r, pop, include_memory) for r in records],
                      fh, indent=1)
            fh.write("\n")
    except OSError as exc:
        raise OSError(f"failed writing snapshots to {path}: {exc}") from exc


def write_edge_table(records: list[RunRecord], pop: Population, path: str) -> None:
    """Edge list with endpoint attributes, one block per record, for
    external graph rendering."""
    try:
        with open(path, "w", newline="") as fh:
            writer = csv.writer(fh, lineterminator="\n")
            writer.writerow(["seed", "regime", "beta", "source", "target",
                             "source_group", "target_group", "same_type"])
            for rec in records:
                if rec.final is None:
                    raise ValueError("record was produced without keep_states")
                for i, j in rec.final.edges():
                    writer.writerow([
                        rec.seed, rec.regime, _fmt(rec.beta), i, j,
                        int(pop.groups[i]), int(pop.groups[j]),
                        int(pop.types[i] == pop.types[j])])
    except OSError as exc:
        raise OSError(f"failed writing edge table to {path}: {exc}") from exc


def write_belief_density(config: ExperimentConfig, path: str,
                         draws: int = 100_000, seed: int = 0) -> None:
    """Empirical bias draws per configured beta, for density plotting."""
    from .beliefs import sample_gamma
    try:
        with open(path, "w", newline="") as fh:
            writer = csv.writer(fh, lineterminator="\n")
            writer.writerow(["beta", "gamma"])
            for beta in config.betas:
                rng = np.random.default_rng(np.random.SeedSequence([seed, 2]))
                gammas = sample_gamma(BiasParams(beta, config.alpha), draws, rng)
                for g in gammas:
                    writer.writerow([_fmt(float(beta)), _fmt(float(g))])
    except OSError as exc:
        raise OSError(f"failed writing belief density to {path}: {exc}") from exc


def export(config: ExperimentConfig, records: list[RunRecord], out_dir: str,
           include_memory: bool = False) -> dict[str, str]:
    """Emit all sweep artifacts into a directory; returns the path map."""
    import os

    os.makedirs(out_dir, exist_ok=True)
    pop = config.population.build()
    paths = {"metrics": os.path.join(out_dir, "metrics.csv"),
             "beliefs": os.path.join(out_dir, "belief_density.csv")}
    write_metrics_csv(records, paths["metrics"])
    write_belief_density(config, paths["beliefs"], seed=config.seed_base)
    with_states = [r for r in records if r.final is not None]
    if with_states:
        paths["snapshots"] = os.path.join(out_dir, "snapshots.json")
        paths["edges"] = os.path.join(out_dir, "edges.csv")
        write_snapshots(with_states, pop, paths["snapshots"], include_memory)
        write_edge_table(with_states, pop, paths["edges"])
    return paths


# ---------------------------------------------------------------------------
# Config files and presets
# ---------------------------------------------------------------------------

def config_to_dict(config: ExperimentConfig) -> dict:
    out = {
        "schema": CONFIG_SCHEMA_VERSION,
        "population": {
            "group_sizes": list(config.population.group_sizes),
            "type_counts": [list(row) for row in config.population.type_counts],
        },
        "delta": config.delta,
        "c_low": config.c_low,
        "c_high": config.c_high,
        "axes": [{"parameter": a.parameter, "values": list(a.values)} for a in config.axes],
        "betas": list(config.betas),
        "alpha": config.alpha,
        "regimes": list(config.regimes),
        "repeats": config.repeats,
        "seed_base": config.seed_base,
    }
    if config.limits is not None:
        out["limits"] = {"max_periods": config.limits.max_periods,
                         "cycle_window": config.limits.cycle_window}
    return out


def config_from_dict(data: dict) -> ExperimentConfig:
    if not isinstance(data, dict):
        raise ConfigError("config root must be a mapping")
    version = data.get("schema", CONFIG_SCHEMA_VERSION)
    if version != CONFIG_SCHEMA_VERSION:
        raise ConfigError(f"unsupported config schema {version}; "
                          f"this build reads schema {CONFIG_SCHEMA_VERSION}")
    try:
        pop = data["population"]
        spec = PopulationSpec(tuple(pop["group_sizes"]),
                              tuple(tuple(r) for r in pop["type_counts"]))
        axes = tuple(SweepAxis(a["parameter"], tuple(a["values"]))
                     for a in data["axes"])
        limits = None
        if "limits" in data:
            limits = Limits(int(data["limits"]["max_periods"]),
                            int(data["limits"]["cycle_window"]))
        return ExperimentConfig(
            population=spec,
            delta=float(data["delta"]),
            c_low=float(data["c_low"]),
            c_high=float(data["c_high"]),
            axes=axes,
            betas=tuple(data.get("betas", (7.0,))),
            alpha=float(data.get("alpha", 1.0)),
            regimes=tuple(data.get("regimes", REGIMES)),
            repeats=int(data.get("repeats", 30)),
            seed_base=int(data.get("seed_base", 2026)),
            limits=limits,
        )
    except KeyError as exc:
        raise ConfigError(f"config missing required field {exc.args[0]!r}") from exc
    except (TypeError, ValueError) as exc:
        if isinstance(exc, ConfigError):
            raise
        raise ConfigError(f"malformed config: {exc}") from exc


def load_config(path: str) -> ExperimentConfig:
    """Read a YAML config file.

    Schema (version 1)::

        schema: 1
        population:
          group_sizes: [24, 24]
          type_counts: [[12, 12], [12, 12]]
        delta: 0.7
        c_low: 0.2          # fixed value while c_high sweeps
        c_high: 1.0         # fixed value while c_low sweeps
        axes:
          - {parameter: c_low,  values: [0.05, 0.15, 0.25]}
          - {parameter: c_high, values: [0.8, 1.2, 1.6]}
        betas: [7]          # bias levels for the biased regime
        alpha: 1
        regimes: [complete, rational, biased]
        repeats: 30
        seed_base: 2026
        limits: {max_periods: 23040, cycle_window: 2304}   # optional
    """
    try:
        with open(path) as fh:
            data = yaml.safe_load(fh)
    except OSError as exc:
        raise ConfigError(f"cannot read config {path}: {exc}") from exc
    except yaml.YAMLError as exc:
        raise ConfigError(f"config {path} is not valid YAML: {exc}") from exc
    return config_from_dict(data)


# Cost grids bracket the analytic collapse thresholds: the c_low grid runs
# past delta (all links unprofitable even at low cost) and the c_high grid
# past the point where even optimistic beliefs refuse cross-type risk.
C_LOW_GRID = (0.05, 0.15, 0.25, 0.35, 0.45, 0.55, 0.65, 0.75)
C_HIGH_GRID = (0.8, 1.0, 1.2, 1.4, 1.8, 2.2, 2.6, 3.0)

_BASE_AXES = (SweepAxis("c_low", C_LOW_GRID), SweepAxis("c_high", C_HIGH_GRID))


def _preset(spec: PopulationSpec) -> ExperimentConfig:
    return ExperimentConfig(population=spec, delta=0.7, c_low=0.2, c_high=1.0,
                            axes=_BASE_AXES)


PRESETS: dict[str, ExperimentConfig] = {
    "base": _preset(PopulationSpec((24, 24), ((12, 12), (12, 12)))),
    "groups4": _preset(PopulationSpec((12, 12, 12, 12),
                                      ((6, 6), (6, 6), (6, 6), (6, 6)))),
    "imbalanced-groups": _preset(PopulationSpec((12, 36), ((6, 6), (18, 18)))),
    "types4": _preset(PopulationSpec((24, 24), ((6, 6, 6, 6), (6, 6, 6, 6)))),
    "imbalanced-types": _preset(PopulationSpec((24, 24), ((18, 6), (18, 6)))),
    "correlated": _preset(PopulationSpec((24, 24), ((18, 6), (6, 18)))),
}
