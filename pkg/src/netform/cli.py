"""Command-line entry points: simulate, sweep, verify, metrics."""

from __future__ import annotations

import csv
import json
import os
import sys

import click
import numpy as np

from . import experiments, oracle
from .dynamics import SimState, run
from .metrics import compute_metrics
from .model import NetworkState, Population


def _load_setup(config_path, preset):
    if config_path and preset:
        raise experiments.ConfigError("pass either --config or --preset, not both")
    if config_path:
        return experiments.load_config(config_path)
    return experiments.PRESETS[preset or "base"]


def _fail(exc) -> None:
    click.echo(f"error: {exc}", err=True)
    sys.exit(2)


@click.group()
def main() -> None:
    """Network formation simulator with incomplete type information."""


@main.command()
@click.option("--config", "config_path", type=click.Path(), default=None,
              help="YAML experiment config (see load_config for the schema).")
@click.option("--preset", type=click.Choice(sorted(experiments.PRESETS)), default=None)
@click.option("--regime", type=click.Choice(experiments.REGIMES), default="biased")
@click.option("--seed", type=click.IntRange(0, 2 ** 64 - 1), default=0, show_default=True)
@click.option("--c-low", type=float, default=None, help="Override same-type link cost.")
@click.option("--c-high", type=float, default=None, help="Override cross-type link cost.")
@click.option("--beta", type=float, default=None, help="Override bias level.")
@click.option("--out", "out_dir", type=click.Path(), default=None,
              help="Directory for the trace CSV and final snapshot.")
def simulate(config_path, preset, regime, seed, c_low, c_high, beta, out_dir) -> None:
    """Run one simulation to termination and report its metrics."""
    try:
        config = _load_setup(config_path, preset)
        costs = experiments.CostStructure(
            config.delta,
            c_low if c_low is not None else config.c_low,
            c_high if c_high is not None else config.c_high)
        pop = config.population.build()
        net, table = experiments._initial_state(
            regime, pop, beta if beta is not None else config.betas[0],
            config.alpha, seed)
    except (experiments.ConfigError, ValueError, KeyError) as exc:
        _fail(exc)
    state = SimState.create(net, pop, costs, table, seed)
    outcome = run(state, limits=config.effective_limits(), record_trace=True)
    metrics = compute_metrics(outcome.final.net, pop)
    click.echo(f"status={outcome.status.value} periods={outcome.periods} "
               f"links={outcome.final.net.link_count()} "
               f"freeman={metrics.freeman:.4f} mean_degree={metrics.mean_degree:.4f} "
               f"discovery={metrics.discovery:.4f}")
    if out_dir:
        os.makedirs(out_dir, exist_ok=True)
        trace_path = os.path.join(out_dir, "trace.csv")
        with open(trace_path, "w", newline="") as fh:
            writer = csv.writer(fh, lineterminator="\n")
            writer.writerow(["period", "i", "j", "action", "memory_ones"])
            for ev in outcome.trace:
                writer.writerow([ev.period, ev.i, ev.j, ev.action, ev.memory_ones])
        rec = experiments.RunRecord(
            axis="-", value_index=0, repeat=0, seed=seed, regime=regime,
            c_low=costs.c_low, c_high=costs.c_high, beta=beta,
            status=outcome.status.value, periods=outcome.periods,
            metrics=metrics, final=outcome.final.net)
        experiments.write_snapshots([rec], pop, os.path.join(out_dir, "snapshot.json"),
                                    include_memory=True)
        click.echo(f"wrote {trace_path}")


@main.command()
@click.option("--config", "config_path", type=click.Path(), default=None)
@click.option("--preset", type=click.Choice(sorted(experiments.PRESETS)), default=None)
@click.option("--seed", type=click.IntRange(0, 2 ** 64 - 1), default=None,
              help="Override the config's seed base.")
@click.option("--repeats", type=click.IntRange(1), default=None,
              help="Override the config's repeat count.")
@click.option("--out", "out_dir", type=click.Path(), default="out", show_default=True)
@click.option("--workers", type=click.IntRange(1), default=1, show_default=True)
@click.option("--keep-states/--no-keep-states", default=False,
              help="Also emit snapshots and edge tables for every run.")
def sweep(config_path, preset, seed, repeats, out_dir, workers, keep_states) -> None:
    """Run a full grid sweep and write its artifact files."""
    try:
        config = _load_setup(config_path, preset)
        if seed is not None:
            config = experiments.ExperimentConfig(
                **{**_config_kwargs(config), "seed_base": seed})
        if repeats is not None:
            config = experiments.ExperimentConfig(
                **{**_config_kwargs(config), "repeats": repeats})
    except experiments.ConfigError as exc:
        _fail(exc)
    records = experiments.sweep(config, keep_states=keep_states, workers=workers)
    paths = experiments.export(config, records, out_dir)
    for name, path in sorted(paths.items()):
        click.echo(f"wrote {path}")
    n_pairs = sum(1 for r in records if r.regime == "biased")
    click.echo(f"{len(records)} records ({n_pairs} biased) across "
               f"{sum(len(a.values) for a in config.axes)} grid points")


def _config_kwargs(config: experiments.ExperimentConfig) -> dict:
    return {f: getattr(config, f) for f in (
        "population", "delta", "c_low", "c_high", "axes", "betas", "alpha",
        "regimes", "repeats", "seed_base", "limits")}


@main.command()
@click.argument("claims", nargs=-1, type=click.Choice(oracle.CLAIMS))
@click.option("--trials", type=click.IntRange(1), default=100, show_default=True)
@click.option("--seed", type=click.IntRange(0, 2 ** 64 - 1), default=0, show_default=True)
@click.option("--out", "out_path", type=click.Path(), default=None,
              help="Write the reports as a JSON array.")
def verify(claims, trials, seed, out_path) -> None:
    """Check theory claims; exits nonzero if any is violated."""
    claims = claims or oracle.CLAIMS
    rng = np.random.default_rng(seed)
    reports = []
    failed = False
    for claim in claims:
        report = oracle.check_proposition(claim, trials=trials, rng=rng)
        reports.append(report)
        click.echo(f"{claim}: {report.verdict}")
        if not report.confirmed:
            failed = True
            click.echo(f"  counterexample: {report.counterexample}", err=True)
    if out_path:
        with open(out_path, "w") as fh:
            fh.write("[\n" + ",\n".join(r.to_json() for r in reports) + "\n]\n")
        click.echo(f"wrote {out_path}")
    sys.exit(1 if failed else 0)


@main.command("metrics")
@click.argument("snapshot", type=click.Path(exists=True))
@click.option("--out", "out_path", type=click.Path(), default=None,
              help="Write rows as CSV instead of printing them.")
def metrics_cmd(snapshot, out_path) -> None:
    """Recompute the metrics row for each network in a snapshot file."""
    try:
        with open(snapshot) as fh:
            snaps = json.load(fh)
    except (OSError, json.JSONDecodeError) as exc:
        _fail(f"cannot read snapshot {snapshot}: {exc}")
    if isinstance(snaps, dict):
        snaps = [snaps]
    records = []
    for snap in snaps:
        try:
            agents = snap["agents"]
            pop = Population(np.array([a["group"] for a in agents]),
                             np.array([a["type"] for a in agents]))
            memory = np.array(snap["memory"], dtype=np.uint8) if "memory" in snap \
                else None
            net = NetworkState.from_edges(pop.n, [tuple(e) for e in snap["edges"]],
                                          memory=memory)
        except (KeyError, ValueError) as exc:
            _fail(f"malformed snapshot entry: {exc}")
        m = compute_metrics(net, pop)
        records.append(experiments.RunRecord(
            axis="-", value_index=0, repeat=0,
            seed=snap.get("seed", 0), regime=snap.get("regime", ""),
            c_low=snap.get("c_low", float("nan")), c_high=snap.get("c_high", float("nan")),
            beta=snap.get("beta"), status=snap.get("status", ""), periods=0,
            metrics=m))
    if out_path:
        experiments.write_metrics_csv(records, out_path)
        click.echo(f"wrote {out_path}")
    else:
        experiments.write_metrics_csv(records, sys.stdout)


if __name__ == "__main__":
    main()
