"""Segregation, connectedness, and discovery observables of a network state.

The segregation measures default to the observable-group partition; a
``by_type`` partition is available for diagnostics. Quantities that are
undefined for a given state (inter-group proportion of an empty graph,
incremental indices against a collapsed baseline) are reported as ``None``
rather than coerced to a number, except for the Freeman index of the empty
graph, which by convention reads 1 with an explicit collapsed flag.
"""

from __future__ import annotations

from dataclasses import dataclass
from typing import Optional

import numpy as np

from .model import NetworkState, Population

PARTITIONS = ("by_group", "by_type")


def _labels(pop: Population, partition: str) -> np.ndarray:
    if partition == "by_group":
        return pop.groups
    if partition == "by_type":
        return pop.types
    raise ValueError(f"unknown partition {partition!r}; expected one of {PARTITIONS}")


@dataclass(frozen=True)
class MetricsRecord:
    """One row of observables for a terminal (or intermediate) state."""

    p_inter: Optional[float]
    freeman: float
    freeman_collapsed: bool
    mean_degree: float
    discovery: float
    s_is_vs_rational: Optional[float] = None
    s_is_vs_complete: Optional[float] = None


def inter_group_proportion(net: NetworkState, pop: Population,
                           partition: str = "by_group") -> Optional[float]:
    """Share of links whose endpoints differ under the partition.

    Returns ``None`` for the empty graph (0/0 is undefined, not zero).
    """
    labels = _labels(pop, partition)
    upper = np.triu(net.adjacency, 1)
    total = int(upper.sum())
    if total == 0:
        return None
    rows, cols = np.nonzero(upper)
    crossing = int((labels[rows] != labels[cols]).sum())
    return crossing / total


def freeman_index(net: NetworkState, pop: Population,
                  partition: str = "by_group") -> tuple[float, bool]:
    """Generalised Freeman segregation index and a collapsed-graph flag.

    1 minus the observed inter-class link proportion scaled by its
    random-graph expectation. The empty graph returns (1.0, True): the
    limiting convention used when a network collapses to singletons.
    """
    labels = _labels(pop, partition)
    sizes = np.bincount(labels)
    sizes = sizes[sizes > 0]
    if sizes.size < 2:
        raise ValueError("segregation index requires at least two non-empty classes")
    p = inter_group_proportion(net, pop, partition)
    if p is None:
        return 1.0, True
    n = pop.n
    denom = float(sizes.sum()) ** 2 - float((sizes.astype(float) ** 2).sum())
    return 1.0 - p * n * (n - 1) / denom, False


def incremental_segregation(p_base: Optional[float],
                            p_biased: Optional[float]) -> Optional[float]:
    """Relative drop in inter-group linking versus a paired baseline run.

    Undefined when the baseline has no links (or no defined proportion).
    """
    if p_base is None or p_base == 0.0 or p_biased is None:
        return None
    return (p_base - p_biased) / p_base


def mean_degree(net: NetworkState) -> float:
    """Average over agents of degree / (n - 1)."""
    n = net.n
    if n < 2:
        raise ValueError("degree centrality requires at least two agents")
    return float(net.degrees().sum()) / (n * (n - 1))


def discovery(net: NetworkState) -> float:
    """Filled fraction of the acquaintance matrix (diagonal included)."""
    n = net.n
    return float(net.memory.sum()) / (n * n)


def compute_metrics(net: NetworkState, pop: Population,
                    partition: str = "by_group") -> MetricsRecord:
    """Assemble the full observables row for one state."""
    freeman, collapsed = freeman_index(net, pop, partition)
    return MetricsRecord(
        p_inter=inter_group_proportion(net, pop, partition),
        freeman=freeman,
        freeman_collapsed=collapsed,
        mean_degree=mean_degree(net),
        discovery=discovery(net),
    )
