"""Executable checks for the model's stability theory.

Closed-form belief thresholds, brute-force enumeration of pairwise-stable
states at small n, and scenario verifiers for the claims about when agents
must meet, when the empty network is unstable, when agents refuse to bridge
components, how complete- and incomplete-information stable sets nest, and
when dynamics settle into perfectly segregated cliques.

Enumeration exploits a factorisation: whether a state (g, M) is stable
decomposes into a deletion check that ignores M entirely and, per unlinked
pair, a check that depends only on that pair's own acquaintance bit. The
stable states over a fixed graph therefore form a product set, which keeps
exhaustive verification tractable well past explicit state enumeration.
"""

from __future__ import annotations

import itertools
import json
from dataclasses import dataclass, field
from typing import Iterator, Optional

import numpy as np

from .beliefs import BeliefTable, effective_belief
from .dynamics import Limits, RunStatus, SimState, run
from .model import (CostStructure, NetworkState, Population, _distances_from,
                    actual_utility, distance_matrix, is_pairwise_stable)

CLAIMS = ("P1", "C1", "P2", "C2", "L1", "P3i", "P3ii", "P4")

CONFIRMED = "Confirmed"
VIOLATED = "Violated"


@dataclass(frozen=True)
class Thresholds:
    """Belief cutoffs that govern meeting and refusal decisions.

    ``meet_always``: both beliefs at or above this force acquaintance in any
    pairwise stable state (requires low same-type cost). ``empty_unstable``:
    some pair at or above this makes the all-ignorant empty network unstable.
    ``refuse_component``: below this, an outsider refuses to bridge into a
    component of the given size. Each value carries a flag for its cost
    precondition; an invalid flag means the regime where the threshold is
    vacuous (links are attractive regardless of beliefs).
    """

    meet_always: float
    meet_always_valid: bool
    empty_unstable: float
    empty_unstable_valid: bool
    refuse_component: Optional[float] = None
    refuse_component_valid: Optional[bool] = None
    component_size: Optional[int] = None


def belief_thresholds(costs: CostStructure,
                      component_size: Optional[int] = None) -> Thresholds:
    """Evaluate the closed-form threshold formulas for a cost structure."""
    d, cl, ch = costs.delta, costs.c_low, costs.c_high
    span = ch - cl
    meet = (ch - (d - d * d)) / span
    empty = (ch - d) / span
    refuse = None
    refuse_valid = None
    if component_size is not None:
        if component_size < 1:
            raise ValueError("component size must be at least 1")
        reach = d + (component_size - 1) * d * d
        refuse = (ch - reach) / span
        refuse_valid = ch > reach
    return Thresholds(
        meet_always=meet,
        meet_always_valid=ch > d - d * d,
        empty_unstable=empty,
        empty_unstable_valid=ch > d,
        refuse_component=refuse,
        refuse_component_valid=refuse_valid,
        component_size=component_size,
    )


@dataclass(frozen=True)
class VerificationReport:
    claim: str
    params: dict
    verdict: str
    counterexample: Optional[dict] = None
    notes: tuple = ()
    seed: Optional[int] = None

    @property
    def confirmed(self) -> bool:
        return self.verdict == CONFIRMED

    def to_json(self) -> str:
        payload = {
            "claim": self.claim,
            "params": self.params,
            "verdict": self.verdict,
            "counterexample": self.counterexample,
            "notes": list(self.notes),
            "seed": self.seed,
        }
        return json.dumps(payload, indent=2, default=_jsonify)


def _jsonify(obj):
    if isinstance(obj, np.ndarray):
        return obj.tolist()
    if isinstance(obj, (np.integer, np.floating)):
        return obj.item()
    raise TypeError(f"cannot serialise {type(obj)!r}")


# ---------------------------------------------------------------------------
# Brute-force enumeration
# ---------------------------------------------------------------------------

def _pairs(n: int) -> list[tuple[int, int]]:
    return [(i, j) for i in range(n) for j in range(i + 1, n)]


def iter_graphs(n: int) -> Iterator[np.ndarray]:
    """All undirected simple graphs on n labelled vertices."""
    pairs = _pairs(n)
    for mask in range(1 << len(pairs)):
        adj = np.zeros((n, n), dtype=bool)
        for b, (i, j) in enumerate(pairs):
            if mask >> b & 1:
                adj[i, j] = adj[j, i] = True
        yield adj


def _powers_table(costs: CostStructure, n: int) -> np.ndarray:
    powers = np.zeros(n + 2)
    powers[:n] = costs.delta ** np.arange(n)
    return powers


def _deletion_stable(adj: np.ndarray, pop: Population, costs: CostStructure,
                     dist: np.ndarray, powers: np.ndarray) -> bool:
    """No linked endpoint strictly gains by severing its link (M-free)."""
    n = adj.shape[0]
    rows, cols = np.nonzero(np.triu(adj, 1))
    for i, j in zip(rows.tolist(), cols.tolist()):
        c = costs.cost(int(pop.types[i]), int(pop.types[j]))
        adj[i, j] = adj[j, i] = False
        for a in (i, j):
            new_d = _distances_from(adj, a)
            new = old = 0.0
            for k in range(n):
                if k != a:
                    new += powers[new_d[k]]
                    old += powers[dist[a, k]]
            if (new - old) + c > 0.0:
                adj[i, j] = adj[j, i] = True
                return False
        adj[i, j] = adj[j, i] = True
    return True


def _addition_gain(dist: np.ndarray, i: int, j: int, powers: np.ndarray) -> float:
    """Benefit change for i when edge ij is inserted."""
    n = dist.shape[0]
    new = old = 0.0
    for k in range(n):
        if k == i:
            continue
        nd = min(dist[i, k], 1 + dist[j, k], n)
        new += powers[nd]
        old += powers[dist[i, k]]
    return new - old


def stability_profile(adj: np.ndarray, pop: Population, costs: CostStructure,
                      beliefs: BeliefTable) -> Optional[dict]:
    """Admissible acquaintance bits per pair, or None if no stable M exists.

    For a graph that survives the deletion check, each unlinked pair
    constrains only its own memory bit, so the stable (g, M) states are
    exactly the products of the returned per-pair bit choices (linked pairs
    are pinned to 1).
    """
    n = adj.shape[0]
    dist = distance_matrix(adj)
    powers = _powers_table(costs, n)
    if not _deletion_stable(adj, pop, costs, dist, powers):
        return None
    bits: dict[tuple[int, int], tuple[int, ...]] = {}
    for i, j in _pairs(n):
        if adj[i, j]:
            bits[(i, j)] = (1,)
            continue
        gain_i = _addition_gain(dist, i, j, powers)
        gain_j = _addition_gain(dist, j, i, powers)
        ti, tj = int(pop.types[i]), int(pop.types[j])
        allowed = []
        for bit in (0, 1):
            if bit:
                ec_i = ec_j = costs.cost(ti, tj)
            else:
                p_i = float(beliefs.base[i, pop.groups[j]])
                p_j = float(beliefs.base[j, pop.groups[i]])
                ec_i = p_i * costs.c_low + (1.0 - p_i) * costs.c_high
                ec_j = p_j * costs.c_low + (1.0 - p_j) * costs.c_high
            unstable = gain_i - ec_i >= 0.0 and gain_j - ec_j >= 0.0
            if not unstable:
                allowed.append(bit)
        if not allowed:
            return None
        bits[(i, j)] = tuple(allowed)
    return bits


def iter_stability_profiles(pop: Population, costs: CostStructure,
                            beliefs: BeliefTable) -> Iterator[tuple[np.ndarray, dict]]:
    """Graphs admitting at least one stable acquaintance matrix."""
    for adj in iter_graphs(pop.n):
        profile = stability_profile(adj, pop, costs, beliefs)
        if profile is not None:
            yield adj, profile


def enumerate_stable_states(pop: Population, costs: CostStructure,
                            beliefs: BeliefTable, max_n: int = 8
                            ) -> Iterator[tuple[np.ndarray, np.ndarray]]:
    """Yield every pairwise-stable (graph, memory) state explicitly.

    Memory matrices range over all symmetric unit-diagonal 0/1 matrices
    containing the link set, whether or not some formation history could
    have produced them.
    """
    if max_n > 8:
        raise ValueError("explicit enumeration is capped at n <= 8")
    if pop.n > max_n:
        raise ValueError(f"population of {pop.n} exceeds max_n={max_n}")
    for adj, profile in iter_stability_profiles(pop, costs, beliefs):
        pairs = list(profile)
        for combo in itertools.product(*(profile[p] for p in pairs)):
            mem = np.eye(pop.n, dtype=np.uint8)
            for (i, j), bit in zip(pairs, combo):
                mem[i, j] = mem[j, i] = bit
            yield adj.copy(), mem


def is_complete_info_stable(adj: np.ndarray, pop: Population,
                            costs: CostStructure) -> bool:
    """Stability when every pair already knows each other's type."""
    n = adj.shape[0]
    dist = distance_matrix(adj)
    powers = _powers_table(costs, n)
    if not _deletion_stable(adj, pop, costs, dist, powers):
        return False
    for i, j in _pairs(n):
        if adj[i, j]:
            continue
        c = costs.cost(int(pop.types[i]), int(pop.types[j]))
        if (_addition_gain(dist, i, j, powers) - c >= 0.0
                and _addition_gain(dist, j, i, powers) - c >= 0.0):
            return False
    return True


# ---------------------------------------------------------------------------
# Claim scenarios
# ---------------------------------------------------------------------------

def _uniform_beliefs(pop: Population, value: float) -> BeliefTable:
    return BeliefTable.uniform(pop.n, pop.n_groups, value)


def _mixed_population(n: int) -> Population:
    """Two equal groups, each split across two hidden types."""
    half = n // 2
    a, b = (half + 1) // 2, half // 2
    return Population.from_counts([half, n - half], [[a, b], [n - half - b, b]])


def _run_from_empty(pop: Population, costs: CostStructure, beliefs: BeliefTable,
                    seed, limits: Optional[Limits] = None):
    state = SimState.create(NetworkState.empty(pop.n), pop, costs, beliefs, seed)
    return run(state, limits=limits)


def _require(condition: bool, inequality: str) -> None:
    if not condition:
        raise ValueError(f"claim precondition violated: requires {inequality}")


def _seed_int(rng: np.random.Generator) -> int:
    return int(rng.integers(0, 2 ** 63 - 1))


def check_proposition(claim: str, params: Optional[dict] = None,
                      trials: int = 100, rng=None) -> VerificationReport:
    """Verify one theory claim on its preset (or supplied) parameterisation."""
    if claim not in CLAIMS:
        raise ValueError(f"unknown claim {claim!r}; expected one of {CLAIMS}")
    if rng is None or not isinstance(rng, np.random.Generator):
        rng = np.random.default_rng(rng)
    checker = _CHECKERS[claim]
    return checker(dict(params or {}), trials, rng)


def _check_p1(params: dict, trials: int, rng) -> VerificationReport:
    """Above-threshold pairs must be acquainted in every stable state."""
    costs = params.get("costs", CostStructure(0.7, 0.2, 1.0))
    pi = params.get("pi", 0.99)
    enum_sizes = params.get("enum_sizes", (3, 4, 5))
    dyn_n = params.get("dyn_n", 6)
    d = costs.delta
    _require(costs.c_low <= d - d * d, "c_low <= delta - delta^2")
    thr = belief_thresholds(costs)
    if thr.meet_always_valid:
        _require(pi >= thr.meet_always, "pi >= (c_high - (delta - delta^2)) / (c_high - c_low)")
    seed = _seed_int(rng)
    notes = []
    payload = {"pi": pi, "costs": vars(costs), "enum_sizes": list(enum_sizes), "dyn_n": dyn_n}
    for n in enum_sizes:
        pop = _mixed_population(n)
        beliefs = _uniform_beliefs(pop, pi)
        for adj, profile in iter_stability_profiles(pop, costs, beliefs):
            for pair, allowed in profile.items():
                if 0 in allowed:
                    return VerificationReport("P1", payload, VIOLATED, {
                        "n": n, "edges": _edge_list(adj), "ignorant_pair": list(pair)})
        notes.append(f"exhaustive over n={n}")
    pop = _mixed_population(dyn_n)
    beliefs = _uniform_beliefs(pop, pi)
    converged = 0
    for _ in range(trials):
        outcome = _run_from_empty(pop, costs, beliefs, _seed_int(rng))
        if outcome.status is not RunStatus.CONVERGED:
            continue
        converged += 1
        mem = outcome.final.net.memory
        if not (mem == 1).all():
            return VerificationReport("P1", payload, VIOLATED, {
                "n": dyn_n, "edges": _edge_list(outcome.final.net.adjacency),
                "memory": mem}, seed=seed)
    notes.append(f"{converged}/{trials} dynamics runs converged at n={dyn_n}")
    return VerificationReport("P1", payload, CONFIRMED, notes=tuple(notes), seed=seed)


def _check_c1(params: dict, trials: int, rng) -> VerificationReport:
    """Arbitrarily high inter-type costs still admit persuasive beliefs."""
    delta = params.get("delta", 0.7)
    c_low = params.get("c_low", 0.2)
    c_high_values = params.get("c_high_values", (1.0, 10.0, 1e3, 1e6))
    _require(c_low <= delta - delta * delta, "c_low <= delta - delta^2")
    seed = _seed_int(rng)
    notes = []
    payload = {"delta": delta, "c_low": c_low, "c_high_values": list(c_high_values)}
    for c_high in c_high_values:
        costs = CostStructure(delta, c_low, c_high)
        thr = belief_thresholds(costs)
        if thr.meet_always > 1.0:
            return VerificationReport("C1", payload, VIOLATED, {
                "c_high": c_high, "threshold": thr.meet_always})
        pi = min(1.0, thr.meet_always + 1e-9)
        pop = _mixed_population(3)
        beliefs = _uniform_beliefs(pop, pi)
        for adj, profile in iter_stability_profiles(pop, costs, beliefs):
            for pair, allowed in profile.items():
                if 0 in allowed:
                    return VerificationReport("C1", payload, VIOLATED, {
                        "c_high": c_high, "edges": _edge_list(adj),
                        "ignorant_pair": list(pair)})
        notes.append(f"c_high={c_high}: threshold {thr.meet_always:.12g} <= 1, instance confirmed")
    return VerificationReport("C1", payload, CONFIRMED, notes=tuple(notes), seed=seed)


def _check_p2(params: dict, trials: int, rng) -> VerificationReport:
    """Empty-ignorant instability matches the threshold condition exactly."""
    n = params.get("n", 3)
    seed = _seed_int(rng)
    payload = {"n": n, "trials": trials}
    pop = Population(np.arange(n), np.zeros(n, dtype=int))  # one group per agent
    for _ in range(trials):
        delta = rng.uniform(0.2, 0.9)
        c_low = rng.uniform(0.02, 1.2)
        c_high = c_low + rng.uniform(0.05, 1.5)
        costs = CostStructure(delta, c_low, c_high)
        base = rng.random((n, n))
        beliefs = BeliefTable(base, np.zeros(n))
        net = NetworkState.empty(n)
        report = is_pairwise_stable(net, pop, costs, beliefs)
        if c_high <= delta:
            predicted_unstable = True
        else:
            thr = belief_thresholds(costs).empty_unstable
            predicted_unstable = any(
                min(base[i, j], base[j, i]) >= thr
                for i, j in _pairs(n))
        if report.stable != (not predicted_unstable):
            return VerificationReport("P2", payload, VIOLATED, {
                "costs": vars(costs), "beliefs": base,
                "predicted_unstable": predicted_unstable,
                "observed_stable": report.stable}, seed=seed)
    return VerificationReport("P2", payload, CONFIRMED,
                              notes=(f"{trials} random parameter points",), seed=seed)


def _check_c2(params: dict, trials: int, rng) -> VerificationReport:
    """Discovery outcomes from the empty network, per belief band."""
    costs = params.get("costs", CostStructure(0.7, 0.2, 1.0))
    n = params.get("n", 6)
    d = costs.delta
    _require(costs.c_low <= d - d * d, "c_low <= delta - delta^2")
    _require(d < costs.c_high, "delta < c_high")
    thr = belief_thresholds(costs)
    seed = _seed_int(rng)
    payload = {"n": n, "costs": vars(costs),
               "empty_unstable": thr.empty_unstable, "meet_always": thr.meet_always}
    pop = _mixed_population(n)
    per_clause = max(1, trials // 3)

    # (i) everyone below the meeting threshold: nobody ever meets.
    low = _uniform_beliefs(pop, min(0.99 * thr.empty_unstable, thr.empty_unstable - 1e-9))
    for _ in range(per_clause):
        outcome = _run_from_empty(pop, costs, low, _seed_int(rng))
        mem = outcome.final.net.memory
        if outcome.status is not RunStatus.CONVERGED or mem.sum() != n:
            return VerificationReport("C2", payload, VIOLATED, {
                "clause": "i", "status": outcome.status.value, "memory": mem}, seed=seed)

    # (ii) one mutually optimistic pair: some discovery must occur.
    base = np.full((n, pop.n_groups), min(0.99 * thr.empty_unstable, thr.empty_unstable - 1e-9))
    mid = BeliefTable(base, np.zeros(n))
    base[0, pop.groups[1]] = min(1.0, thr.empty_unstable + 1e-9)
    base[1, pop.groups[0]] = min(1.0, thr.empty_unstable + 1e-9)
    for _ in range(per_clause):
        outcome = _run_from_empty(pop, costs, mid, _seed_int(rng))
        if outcome.status is not RunStatus.CONVERGED:
            continue
        if outcome.final.net.memory.sum() <= n:
            return VerificationReport("C2", payload, VIOLATED, {
                "clause": "ii", "memory": outcome.final.net.memory}, seed=seed)

    # (iii) everyone above the always-meet threshold: full discovery.
    high = _uniform_beliefs(pop, min(1.0, thr.meet_always + 1e-9))
    for _ in range(per_clause):
        outcome = _run_from_empty(pop, costs, high, _seed_int(rng))
        if outcome.status is not RunStatus.CONVERGED:
            continue
        if not (outcome.final.net.memory == 1).all():
            return VerificationReport("C2", payload, VIOLATED, {
                "clause": "iii", "memory": outcome.final.net.memory}, seed=seed)
    return VerificationReport("C2", payload, CONFIRMED,
                              notes=(f"{per_clause} runs per clause",), seed=seed)


def _l1_population(component_size: int) -> Population:
    groups = np.array([0] + [1] * component_size)
    types = np.zeros(component_size + 1, dtype=int)
    return Population(groups, types)


def _check_l1(params: dict, trials: int, rng) -> VerificationReport:
    """A pessimistic outsider never bridges into the other component."""
    component_size = params.get("component_size", 5)
    costs = params.get("costs", CostStructure(0.7, 0.2, 3.0))
    pi_out = params.get("pi_out", 0.05)
    d = costs.delta
    reach = d + (component_size - 1) * d * d
    _require(costs.c_high > reach, "c_high > delta + (m - 1) delta^2")
    thr = belief_thresholds(costs, component_size)
    _require(pi_out < thr.refuse_component,
             "pi < (c_high - (delta + (m - 1) delta^2)) / (c_high - c_low)")
    seed = _seed_int(rng)
    payload = {"component_size": component_size, "costs": vars(costs),
               "pi_out": pi_out, "refuse_threshold": thr.refuse_component}
    pop = _l1_population(component_size)
    n = pop.n
    base = np.full((n, 2), 0.999)
    base[0, 1] = pi_out
    beliefs = BeliefTable(base, np.zeros(n))
    for _ in range(trials):
        outcome = _run_from_empty(pop, costs, beliefs, _seed_int(rng))
        net = outcome.final.net
        if net.degrees()[0] != 0 or net.memory[0].sum() != 1:
            return VerificationReport("L1", payload, VIOLATED, {
                "edges": _edge_list(net.adjacency), "memory_row": net.memory[0],
                "status": outcome.status.value}, seed=seed)
    # Static cross-check on the best-case geometry: the target is the hub of
    # a star over its whole component, yet the outsider still declines.
    star = NetworkState.from_edges(n, [(1, k) for k in range(2, n)])
    from .model import expected_incremental_utility
    gain = expected_incremental_utility(star, pop, costs, beliefs, 0, 1)
    if gain >= 0.0:
        return VerificationReport("L1", payload, VIOLATED, {
            "static_gain": gain}, seed=seed)
    return VerificationReport("L1", payload, CONFIRMED,
                              notes=(f"{trials} runs, static hub gain {gain:.6f} < 0",),
                              seed=seed)


def _check_p3i(params: dict, trials: int, rng) -> VerificationReport:
    """Complete-information stable graphs stay stable under uncertainty."""
    costs = params.get("costs", CostStructure(0.7, 0.2, 1.0))
    pi = params.get("pi", 0.99)
    sizes = params.get("enum_sizes", (3, 4, 5))
    d = costs.delta
    _require(costs.c_low <= d - d * d, "c_low <= delta - delta^2")
    thr = belief_thresholds(costs)
    _require(pi >= thr.meet_always, "pi >= meet-always threshold")
    seed = _seed_int(rng)
    notes = []
    payload = {"pi": pi, "costs": vars(costs), "enum_sizes": list(sizes)}
    for n in sizes:
        pop = _mixed_population(n)
        beliefs = _uniform_beliefs(pop, pi)
        count_c = 0
        count_ic = 0
        for adj in iter_graphs(n):
            ic_stable = stability_profile(adj, pop, costs, beliefs) is not None
            if ic_stable:
                count_ic += 1
            if is_complete_info_stable(adj, pop, costs):
                count_c += 1
                if not ic_stable:
                    return VerificationReport("P3i", payload, VIOLATED, {
                        "n": n, "edges": _edge_list(adj)}, seed=seed)
                # The historical state with full acquaintance must also pass
                # the incomplete-information predicate directly.
                net = NetworkState(adj.copy(), np.ones((n, n), dtype=np.uint8))
                if not is_pairwise_stable(net, pop, costs, beliefs).stable:
                    return VerificationReport("P3i", payload, VIOLATED, {
                        "n": n, "edges": _edge_list(adj), "full_memory": True}, seed=seed)
        notes.append(f"n={n}: {count_c} complete-info stable of {count_ic} incomplete-info stable")
    return VerificationReport("P3i", payload, CONFIRMED, notes=tuple(notes), seed=seed)


def _check_p3ii(params: dict, trials: int, rng) -> VerificationReport:
    """A singleton survives uncertainty but not complete information."""
    component_size = params.get("component_size", 3)
    costs = params.get("costs", CostStructure(0.7, 0.2, 2.0))
    pi_out = params.get("pi_out", 0.05)
    d = costs.delta
    reach = d + (component_size - 1) * d * d
    _require(costs.c_high > reach, "c_high > delta + (m - 1) delta^2")
    _require(costs.c_low <= d - d * d, "c_low <= delta - delta^2")
    thr = belief_thresholds(costs, component_size)
    _require(pi_out < thr.refuse_component, "pi < refuse-component threshold")
    seed = _seed_int(rng)
    payload = {"component_size": component_size, "costs": vars(costs), "pi_out": pi_out}
    pop = _l1_population(component_size)
    n = pop.n
    base = np.full((n, 2), 0.999)
    base[0, 1] = pi_out
    beliefs = BeliefTable(base, np.zeros(n))
    clique_edges = [(i, j) for i in range(1, n) for j in range(i + 1, n)]
    net = NetworkState.from_edges(n, clique_edges)
    if not is_pairwise_stable(net, pop, costs, beliefs).stable:
        return VerificationReport("P3ii", payload, VIOLATED, {
            "state": "singleton+clique unstable under incomplete information"}, seed=seed)
    if is_complete_info_stable(net.adjacency, pop, costs):
        return VerificationReport("P3ii", payload, VIOLATED, {
            "state": "singleton+clique stable under complete information"}, seed=seed)
    return VerificationReport(
        "P3ii", payload, CONFIRMED,
        notes=("singleton+clique state is stable only under incomplete information",),
        seed=seed)


def _check_p4(params: dict, trials: int, rng) -> VerificationReport:
    """Dynamics settle into segregated cliques that are not efficient."""
    group_size = params.get("group_size", 3)
    costs = params.get("costs", CostStructure(0.7, 0.2, 2.0))
    pi_own = params.get("pi_own", 0.999)
    pi_other = params.get("pi_other", 0.05)
    d = costs.delta
    _require(costs.c_low <= d - d * d, "c_low <= delta - delta^2")
    thr = belief_thresholds(costs, group_size)
    _require(pi_own >= thr.meet_always, "own-group pi >= meet-always threshold")
    _require(costs.c_high > d + (group_size - 1) * d * d,
             "c_high > delta + (n_s - 1) delta^2")
    _require(pi_other < thr.refuse_component, "cross-group pi < refuse threshold")
    seed = _seed_int(rng)
    payload = {"group_size": group_size, "costs": vars(costs),
               "pi_own": pi_own, "pi_other": pi_other}
    n = 2 * group_size
    pop = Population(np.repeat([0, 1], group_size), np.zeros(n, dtype=int))
    base = np.where(
        np.arange(2)[None, :] == pop.groups[:, None], pi_own, pi_other)
    beliefs = BeliefTable(base.astype(float), np.zeros(n))
    same_group = pop.groups[:, None] == pop.groups[None, :]
    target = same_group & ~np.eye(n, dtype=bool)
    complete = NetworkState(np.ones((n, n), dtype=bool) ^ np.eye(n, dtype=bool),
                            np.ones((n, n), dtype=np.uint8))
    efficient_total = sum(actual_utility(complete, pop, costs, i) for i in range(n))
    for _ in range(trials):
        outcome = _run_from_empty(pop, costs, beliefs, _seed_int(rng))
        net = outcome.final.net
        if outcome.status is not RunStatus.CONVERGED or not np.array_equal(net.adjacency, target):
            return VerificationReport("P4", payload, VIOLATED, {
                "status": outcome.status.value, "edges": _edge_list(net.adjacency)},
                seed=seed)
        total = sum(actual_utility(net, pop, costs, i) for i in range(n))
        if not total < efficient_total:
            return VerificationReport("P4", payload, VIOLATED, {
                "total_utility": total, "efficient_total": efficient_total}, seed=seed)
    return VerificationReport(
        "P4", payload, CONFIRMED,
        notes=(f"{trials} runs converged to two intra-group cliques; "
               f"welfare gap {efficient_total - total:.3f}",),
        seed=seed)


_CHECKERS = {
    "P1": _check_p1,
    "C1": _check_c1,
    "P2": _check_p2,
    "C2": _check_c2,
    "L1": _check_l1,
    "P3i": _check_p3i,
    "P3ii": _check_p3ii,
    "P4": _check_p4,
}


def _edge_list(adj: np.ndarray) -> list[list[int]]:
    rows, cols = np.nonzero(np.triu(adj, 1))
    return [[int(i), int(j)] for i, j in zip(rows, cols)]


def check_subset_relation(pop: Population, costs: CostStructure,
                          beliefs: BeliefTable, max_n: int = 5) -> VerificationReport:
    """Complete-information stable graphs nest inside the uncertain set.

    Enumerates both stable sets and verifies the inclusion, reporting the
    set sizes and, when the inclusion is strict, a witness graph (preferring
    one with an isolated agent).
    """
    if pop.n > max_n:
        raise ValueError(f"population of {pop.n} exceeds max_n={max_n}")
    d = costs.delta
    _require(costs.c_low <= d - d * d, "c_low <= delta - delta^2")
    thr = belief_thresholds(costs)
    above = bool((beliefs.base >= thr.meet_always).all())
    complete_set = []
    incomplete_set = []
    for adj in iter_graphs(pop.n):
        ic = stability_profile(adj, pop, costs, beliefs) is not None
        c = is_complete_info_stable(adj, pop, costs)
        key = adj.tobytes()
        if ic:
            incomplete_set.append((key, adj.copy()))
        if c:
            complete_set.append((key, adj.copy()))
    ic_keys = {k for k, _ in incomplete_set}
    payload = {"n": pop.n, "costs": vars(costs),
               "all_beliefs_above_meet_threshold": above}
    for key, adj in complete_set:
        if key not in ic_keys:
            return VerificationReport("T1-subset", payload, VIOLATED,
                                      {"edges": _edge_list(adj)})
    c_keys = {k for k, _ in complete_set}
    strict = [adj for k, adj in incomplete_set if k not in c_keys]
    witness = None
    for adj in strict:
        if (adj.sum(axis=1) == 0).any():
            witness = adj
            break
    if witness is None and strict:
        witness = strict[0]
    notes = (f"|stable, complete info| = {len(complete_set)}",
             f"|stable, incomplete info| = {len(incomplete_set)}",
             "inclusion strict" if strict else "sets equal")
    counterexample = None
    report = VerificationReport("T1-subset", payload, CONFIRMED,
                                counterexample=counterexample, notes=notes)
    if witness is not None:
        report = VerificationReport(
            "T1-subset", payload, CONFIRMED,
            counterexample=None,
            notes=notes + (f"strictness witness edges: {_edge_list(witness)}",))
    return report
