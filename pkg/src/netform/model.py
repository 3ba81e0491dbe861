"""Population, network state, costs, and the pairwise-stability mathematics.

Agents carry an observable group label and a hidden type label. Utility is
distance-decayed benefit minus per-link costs that depend on whether the two
endpoints share a hidden type. Link candidates whose types are still unknown
to each other are evaluated in expectation, mixing the low and high cost with
the believing agent's group-conditional prior.

Everything in this module is a pure function of its arguments; mutation of a
``NetworkState`` during simulation happens only in :mod:`netform.dynamics`.
"""

from __future__ import annotations

from dataclasses import dataclass, field
from typing import Iterator, Optional

import numpy as np


@dataclass(frozen=True)
class Population:
    """Fixed roster of agents with group and hidden-type labels.

    ``groups[i]`` is agent *i*'s observable group in ``range(n_groups)`` and
    ``types[i]`` the hidden type in ``range(n_types)``. Census counts are
    derived once and cached.
    """

    groups: np.ndarray
    types: np.ndarray

    def __post_init__(self):
        groups = np.asarray(self.groups, dtype=np.int64)
        types = np.asarray(self.types, dtype=np.int64)
        object.__setattr__(self, "groups", groups)
        object.__setattr__(self, "types", types)
        if groups.ndim != 1 or types.ndim != 1 or groups.shape != types.shape:
            raise ValueError("groups and types must be 1-d arrays of equal length")
        if groups.size == 0:
            raise ValueError("population must contain at least one agent")
        if groups.min() < 0 or types.min() < 0:
            raise ValueError("labels must be non-negative integers")

    @classmethod
    def from_counts(cls, group_sizes, type_counts) -> "Population":
        """Build a population from group sizes and per-group type counts.

        ``type_counts[k][t]`` is the number of agents in group ``k`` holding
        type ``t``. Agents are laid out group by group, types in blocks.
        """
        if len(group_sizes) != len(type_counts):
            raise ValueError("need one type-count row per group")
        groups = []
        types = []
        for k, (size, counts) in enumerate(zip(group_sizes, type_counts)):
            if sum(counts) != size:
                raise ValueError(f"type counts for group {k} sum to {sum(counts)}, expected {size}")
            for t, c in enumerate(counts):
                groups.extend([k] * c)
                types.extend([t] * c)
        return cls(np.array(groups), np.array(types))

    @property
    def n(self) -> int:
        return int(self.groups.size)

    @property
    def n_groups(self) -> int:
        return int(self.groups.max()) + 1

    @property
    def n_types(self) -> int:
        return int(self.types.max()) + 1

    @property
    def group_sizes(self) -> np.ndarray:
        return np.bincount(self.groups, minlength=self.n_groups)

    @property
    def group_type_counts(self) -> np.ndarray:
        """Census matrix: entry ``[k, t]`` counts agents of group k and type t."""
        counts = np.zeros((self.n_groups, self.n_types), dtype=np.int64)
        np.add.at(counts, (self.groups, self.types), 1)
        return counts


@dataclass(frozen=True)
class CostStructure:
    """Decay factor and the two-level link cost schedule.

    Direct links cost ``c_low`` when hidden types match and ``c_high``
    otherwise; indirect benefits decay as ``delta ** distance``.
    """

    delta: float
    c_low: float
    c_high: float

    def __post_init__(self):
        if not 0.0 < self.delta < 1.0:
            raise ValueError("delta must lie strictly inside (0, 1)")
        if not 0.0 < self.c_low < self.c_high:
            raise ValueError("costs must satisfy 0 < c_low < c_high")

    def cost(self, type_i: int, type_j: int) -> float:
        return self.c_low if type_i == type_j else self.c_high


class NetworkState:
    """Undirected simple graph plus the symmetric acquaintance matrix.

    ``memory[i, j] == 1`` records that i and j have revealed their types to
    each other; the diagonal is always 1 (agents know themselves). Linked
    agents are always acquainted, and memory never decays.
    """

    __slots__ = ("adjacency", "memory")

    def __init__(self, adjacency: np.ndarray, memory: np.ndarray):
        self.adjacency = np.asarray(adjacency, dtype=bool)
        self.memory = np.asarray(memory, dtype=np.uint8)

    @classmethod
    def empty(cls, n: int) -> "NetworkState":
        """Empty graph, all agents mutually ignorant."""
        return cls(np.zeros((n, n), dtype=bool), np.eye(n, dtype=np.uint8))

    @classmethod
    def from_edges(cls, n: int, edges, memory: Optional[np.ndarray] = None) -> "NetworkState":
        adj = np.zeros((n, n), dtype=bool)
        for i, j in edges:
            if i == j:
                raise ValueError("self-loops are not allowed")
            adj[i, j] = adj[j, i] = True
        if memory is None:
            mem = np.eye(n, dtype=np.uint8)
            mem[adj] = 1
        else:
            mem = np.array(memory, dtype=np.uint8)
        net = cls(adj, mem)
        if memory is not None:
            net.validate()
        return net

    @property
    def n(self) -> int:
        return self.adjacency.shape[0]

    def copy(self) -> "NetworkState":
        return NetworkState(self.adjacency.copy(), self.memory.copy())

    def has_link(self, i: int, j: int) -> bool:
        return bool(self.adjacency[i, j])

    def add_link(self, i: int, j: int) -> None:
        if i == j:
            raise ValueError("self-loops are not allowed")
        self.adjacency[i, j] = self.adjacency[j, i] = True
        self.memory[i, j] = self.memory[j, i] = 1

    def remove_link(self, i: int, j: int) -> None:
        self.adjacency[i, j] = self.adjacency[j, i] = False

    def edges(self) -> Iterator[tuple[int, int]]:
        rows, cols = np.nonzero(np.triu(self.adjacency, 1))
        return zip(rows.tolist(), cols.tolist())

    def link_count(self) -> int:
        return int(self.adjacency.sum()) // 2

    def degrees(self) -> np.ndarray:
        return self.adjacency.sum(axis=1)

    def memory_ones(self) -> int:
        return int(self.memory.sum())

    def validate(self) -> None:
        """Raise if any structural invariant is violated."""
        adj, mem = self.adjacency, self.memory
        if adj.shape[0] != adj.shape[1] or adj.shape != mem.shape:
            raise ValueError("adjacency and memory must be square and congruent")
        if adj.diagonal().any():
            raise ValueError("self-loops are not allowed")
        if not np.array_equal(adj, adj.T):
            raise ValueError("adjacency must be symmetric")
        if not np.array_equal(mem, mem.T):
            raise ValueError("memory must be symmetric")
        if not (mem.diagonal() == 1).all():
            raise ValueError("agents must know their own type")
        if (adj & (mem == 0)).any():
            raise ValueError("linked agents must be acquainted")


@dataclass(frozen=True)
class StabilityWitness:
    """Unstable pair found by the stability predicate.

    ``kind`` is ``"delete"`` when an endpoint strictly gains by severing the
    link and ``"add"`` when both sides weakly gain from forming it.
    """

    kind: str
    i: int
    j: int
    gain_i: float
    gain_j: float


@dataclass(frozen=True)
class StabilityReport:
    stable: bool
    witness: Optional[StabilityWitness] = None


def _distances_from(adjacency: np.ndarray, i: int) -> np.ndarray:
    """BFS distances from agent i; unreachable vertices get n (sentinel)."""
    n = adjacency.shape[0]
    dist = np.full(n, n, dtype=np.int64)
    dist[i] = 0
    frontier = np.zeros(n, dtype=bool)
    frontier[i] = True
    reached = frontier.copy()
    d = 0
    while frontier.any():
        d += 1
        frontier = (adjacency[frontier].any(axis=0)) & ~reached
        dist[frontier] = d
        reached |= frontier
    return dist


def distance_matrix(adjacency: np.ndarray) -> np.ndarray:
    """All-pairs BFS distances; unreachable pairs get n (sentinel)."""
    n = adjacency.shape[0]
    dist = np.full((n, n), n, dtype=np.int64)
    np.fill_diagonal(dist, 0)
    reached = np.eye(n, dtype=bool)
    frontier = reached.copy()
    d = 0
    while frontier.any():
        d += 1
        frontier = (frontier @ adjacency) & ~reached
        dist[frontier] = d
        reached |= frontier
    return dist


def geodesic_distances(net: NetworkState, i: int) -> np.ndarray:
    """Shortest-path lengths from agent i, ``inf`` where unreachable."""
    if not 0 <= i < net.n:
        raise IndexError(f"agent index {i} out of range for n={net.n}")
    dist = _distances_from(net.adjacency, i).astype(float)
    dist[dist >= net.n] = np.inf
    return dist


def _benefit(adjacency: np.ndarray, costs: CostStructure, i: int) -> float:
    """Distance-decayed benefit term of agent i's utility."""
    n = adjacency.shape[0]
    dist = _distances_from(adjacency, i)
    total = 0.0
    for k in range(n):
        if k != i and dist[k] < n:
            total += costs.delta ** int(dist[k])
    return total


def actual_utility(net: NetworkState, pop: Population, costs: CostStructure, i: int) -> float:
    """Realised utility: decayed benefits minus true costs of direct links."""
    benefit = _benefit(net.adjacency, costs, i)
    link_cost = 0.0
    ti = int(pop.types[i])
    for j in np.nonzero(net.adjacency[i])[0]:
        link_cost += costs.cost(ti, int(pop.types[j]))
    return benefit - link_cost


def expected_cost(i: int, j: int, base, net: NetworkState, pop: Population,
                  costs: CostStructure) -> float:
    """Cost agent i expects for a direct link to j.

    Acquainted pairs pay the true cost; otherwise the low and high costs are
    mixed with i's effective belief that j shares i's type.
    """
    from .beliefs import effective_belief

    if i == j:
        raise ValueError("expected cost is defined for distinct agents")
    if net.memory[i, j]:
        return costs.cost(int(pop.types[i]), int(pop.types[j]))
    p = effective_belief(i, j, base, net, pop)
    return p * costs.c_low + (1.0 - p) * costs.c_high


def expected_incremental_utility(net: NetworkState, pop: Population, costs: CostStructure,
                                 base, i: int, j: int) -> float:
    """Expected utility change for i from adding the missing link ij.

    The graph is fully observable, so the benefit side is exact (distances
    recomputed with the candidate link in place); only the link cost is
    uncertain when the pair is unacquainted.
    """
    if net.has_link(i, j):
        raise ValueError(f"link {(i, j)} already present; incremental addition undefined")
    before = _benefit(net.adjacency, costs, i)
    with_link = net.adjacency.copy()
    with_link[i, j] = with_link[j, i] = True
    after = _benefit(with_link, costs, i)
    return after - before - expected_cost(i, j, base, net, pop, costs)


def deletion_gain(net: NetworkState, pop: Population, costs: CostStructure,
                  i: int, j: int) -> float:
    """Utility change for i from severing the existing link ij."""
    if not net.has_link(i, j):
        raise ValueError(f"link {(i, j)} not present")
    without = net.adjacency.copy()
    without[i, j] = without[j, i] = False
    before = _benefit(net.adjacency, costs, i)
    after = _benefit(without, costs, i)
    return (after - before) + costs.cost(int(pop.types[i]), int(pop.types[j]))


def is_pairwise_stable(net: NetworkState, pop: Population, costs: CostStructure,
                       base) -> StabilityReport:
    """Direct evaluation of both stability clauses over all pairs.

    Unstable when a linked endpoint strictly gains from deletion, or when an
    unlinked pair has non-negative expected incremental utility on both sides
    (ties at zero count as willing; deletion requires strict improvement).
    """
    n = net.n
    for i in range(n):
        for j in range(i + 1, n):
            if net.has_link(i, j):
                gi = deletion_gain(net, pop, costs, i, j)
                gj = deletion_gain(net, pop, costs, j, i)
                if gi > 0.0 or gj > 0.0:
                    return StabilityReport(False, StabilityWitness("delete", i, j, gi, gj))
            else:
                ei = expected_incremental_utility(net, pop, costs, base, i, j)
                if ei >= 0.0:
                    ej = expected_incremental_utility(net, pop, costs, base, j, i)
                    if ej >= 0.0:
                        return StabilityReport(False, StabilityWitness("add", i, j, ei, ej))
    return StabilityReport(True)
