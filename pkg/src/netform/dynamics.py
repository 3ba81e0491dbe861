"""Stochastic period-by-period link formation and termination logic.

Each period draws a fresh random order over all unordered pairs and walks it
until an unstable pair is found: a link one endpoint strictly profits from
deleting, or a missing link both endpoints weakly expect to profit from.
The first such modification is committed and the period ends; a full scan
with no modification means the network is pairwise stable.

A run terminates on convergence, on a heuristic cycle signal (the same graph
reappears while the acquaintance matrix is unchanged within a window), or on
the period budget.
"""

from __future__ import annotations

import enum
from dataclasses import dataclass, field
from typing import Optional

import numpy as np

from . import _kernels
from .beliefs import BeliefTable
from .model import CostStructure, NetworkState, Population, distance_matrix

#: Identifier of the pair-selection RNG recorded alongside every run.
RNG_ALGORITHM = "numpy-pcg64"


class RunStatus(enum.Enum):
    CONVERGED = "Converged"
    PRESUMED_CYCLE = "PresumedCycle"
    BUDGET_EXHAUSTED = "BudgetExhausted"


@dataclass(frozen=True)
class Limits:
    """Termination budget; defaults scale with the pair count."""

    max_periods: int
    cycle_window: int

    def __post_init__(self):
        if self.max_periods <= 0 or self.cycle_window <= 0:
            raise ValueError("limits must be positive")

    @classmethod
    def default_for(cls, n: int) -> "Limits":
        return cls(max_periods=10 * n * n, cycle_window=n * n)


@dataclass(frozen=True)
class TraceEvent:
    period: int
    i: int
    j: int
    action: str
    memory_ones: int


@dataclass
class SimState:
    """Mutable simulation state: one writer, one pair-selection stream."""

    net: NetworkState
    pop: Population
    costs: CostStructure
    beliefs: BeliefTable
    rng: np.random.Generator
    period: int = 0

    @classmethod
    def create(cls, net: NetworkState, pop: Population, costs: CostStructure,
               beliefs: BeliefTable, seed) -> "SimState":
        return cls(net=net, pop=pop, costs=costs, beliefs=beliefs,
                   rng=np.random.default_rng(seed))


@dataclass(frozen=True)
class StepResult:
    """Outcome of one period: a committed modification, or a stable scan."""

    stable: bool
    i: int = -1
    j: int = -1
    action: str = ""


@dataclass
class RunOutcome:
    status: RunStatus
    final: SimState
    periods: int
    trace: Optional[list[TraceEvent]] = None
    rng_algorithm: str = RNG_ALGORITHM


def apply_meeting(state: SimState, i: int, j: int) -> SimState:
    """Link i and j and reveal their types to each other, permanently."""
    if i == j:
        raise ValueError("agents cannot meet themselves")
    state.net.add_link(i, j)
    return state


def _pair_arrays(n: int) -> tuple[np.ndarray, np.ndarray]:
    idx = np.triu_indices(n, k=1)
    return idx[0].astype(np.int64), idx[1].astype(np.int64)


def _powers(costs: CostStructure, n: int) -> np.ndarray:
    powers = np.zeros(n + 2, dtype=np.float64)
    powers[:n] = costs.delta ** np.arange(n)
    return powers


class _Scanner:
    """Per-run cache of kernel inputs and the maintained distance matrix."""

    def __init__(self, state: SimState):
        n = state.pop.n
        self.pair_i, self.pair_j = _pair_arrays(n)
        self.n_pairs = self.pair_i.size
        self.powers = _powers(state.costs, n)
        self.dist = distance_matrix(state.net.adjacency)

    def scan(self, state: SimState) -> tuple[StepResult, int]:
        perm = state.rng.permutation(self.n_pairs)
        code, i, j, mem_delta = _kernels.scan_commit(
            state.net.adjacency, state.net.memory, self.dist, perm,
            self.pair_i, self.pair_j, state.pop.groups, state.pop.types,
            state.beliefs.base, state.costs.delta, state.costs.c_low,
            state.costs.c_high, self.powers)
        if code == _kernels.STABLE:
            return StepResult(stable=True), 0
        action = "add" if code == _kernels.ADDED else "delete"
        return StepResult(stable=False, i=i, j=j, action=action), mem_delta


def step(state: SimState) -> StepResult:
    """Run one period: scan pairs in random order, commit first instability.

    Increments the period counter whether or not a modification happened.
    """
    result, _ = _Scanner(state).scan(state)
    state.period += 1
    return result


def run(state: SimState, limits: Optional[Limits] = None,
        record_trace: bool = False) -> RunOutcome:
    """Iterate periods until convergence, presumed cycle, or budget."""
    if limits is None:
        limits = Limits.default_for(state.pop.n)
    scanner = _Scanner(state)
    trace: Optional[list[TraceEvent]] = [] if record_trace else None
    # Graph states seen since the acquaintance matrix last grew; a repeat at
    # fixed memory within the window is treated as a cycle. Memory growth
    # invalidates old states because acquaintance never decays.
    seen: dict[bytes, int] = {state.net.adjacency.tobytes(): state.period}
    status = RunStatus.BUDGET_EXHAUSTED
    while state.period < limits.max_periods:
        result, mem_delta = scanner.scan(state)
        state.period += 1
        if result.stable:
            status = RunStatus.CONVERGED
            break
        if trace is not None:
            trace.append(TraceEvent(state.period, result.i, result.j,
                                    result.action, state.net.memory_ones()))
        key = state.net.adjacency.tobytes()
        if mem_delta > 0:
            seen = {key: state.period}
            continue
        prev = seen.get(key)
        if prev is not None and state.period - prev <= limits.cycle_window:
            status = RunStatus.PRESUMED_CYCLE
            break
        seen[key] = state.period
        if len(seen) > limits.cycle_window + 1:
            cutoff = state.period - limits.cycle_window
            seen = {k: p for k, p in seen.items() if p >= cutoff}
    return RunOutcome(status=status, final=state, periods=state.period, trace=trace)
