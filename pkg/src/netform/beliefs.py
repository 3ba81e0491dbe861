"""Base belief tables for the three information regimes.

A belief table stores, per agent and per observable group, the prior
probability that a member of that group shares the agent's own hidden type.
Rational tables use the true census ratios; biased tables shift each agent's
priors optimistically toward the agent's own group and pessimistically away
from the others, by a per-agent factor drawn from a Beta distribution.
Acquaintance always overrides the prior: once two agents have met, the belief
collapses to 0 or 1.
"""

from __future__ import annotations

import csv
import math
from dataclasses import dataclass
from typing import IO, TYPE_CHECKING, Union

import numpy as np
from scipy.stats import beta as beta_dist

if TYPE_CHECKING:
    from .model import NetworkState, Population


@dataclass(frozen=True)
class BeliefTable:
    """Per-agent, per-group priors plus the bias factor that produced them.

    ``base[i, k]`` is agent i's prior that a group-k member shares i's type.
    ``gamma[i]`` is the agent's bias draw (0 under rational expectations,
    kept at 1 as a bookkeeping convention for the complete-information
    regime, where priors are never consulted).
    """

    base: np.ndarray
    gamma: np.ndarray

    def __post_init__(self):
        base = np.asarray(self.base, dtype=np.float64)
        gamma = np.asarray(self.gamma, dtype=np.float64)
        object.__setattr__(self, "base", base)
        object.__setattr__(self, "gamma", gamma)
        if base.ndim != 2 or gamma.shape != (base.shape[0],):
            raise ValueError("base must be (n, K) with one gamma per agent")
        if (base < 0).any() or (base > 1).any():
            raise ValueError("beliefs must lie in [0, 1]")
        if (gamma < 0).any() or (gamma > 1).any():
            raise ValueError("gamma must lie in [0, 1]")

    @classmethod
    def uniform(cls, n: int, n_groups: int, value: float) -> "BeliefTable":
        """Constant prior for every agent/group pair (test scaffolding)."""
        return cls(np.full((n, n_groups), float(value)), np.zeros(n))


@dataclass(frozen=True)
class BiasParams:
    """Beta shape parameters for the per-agent bias draw.

    The base case keeps ``alpha`` at 1 so the density is positively skewed
    and monotone decreasing; ``beta`` may be ``math.inf`` to force gamma to 0
    (the no-bias limit).
    """

    beta: float
    alpha: float = 1.0

    def __post_init__(self):
        if self.alpha <= 0:
            raise ValueError("alpha must be positive")
        if not (self.beta >= 1.0):
            raise ValueError("beta must be >= 1")


def rational_anchor(pop: "Population") -> np.ndarray:
    """Census ratio ``anchor[i, k]``: share of group k holding i's own type."""
    census = pop.group_type_counts
    sizes = pop.group_sizes
    if (sizes == 0).any():
        raise ValueError("every group must contain at least one agent")
    ratios = census / sizes[:, None]
    return ratios[:, pop.types].T.copy()


def rational_base_beliefs(pop: "Population") -> BeliefTable:
    """Priors equal to the true census ratios, no bias."""
    return BeliefTable(rational_anchor(pop), np.zeros(pop.n))


def sample_gamma(params: BiasParams, size: int, rng: np.random.Generator) -> np.ndarray:
    """Draw bias factors by inverse-CDF transform of a uniform stream.

    Using the quantile function keeps draws monotone in the shape parameter
    for fixed seeds: a smaller beta yields a pointwise larger gamma, which
    couples paired runs that differ only in the degree of bias.
    """
    u = rng.random(size)
    if math.isinf(params.beta):
        return np.zeros(size)
    return beta_dist.ppf(u, params.alpha, params.beta)


def biased_base_beliefs(pop: "Population", params: BiasParams,
                        rng: np.random.Generator) -> BeliefTable:
    """Census-anchored priors shifted by one Beta-drawn factor per agent.

    Own-group priors move up by ``gamma`` of the remaining headroom, other
    groups' priors shrink by the factor ``gamma``; both stay in [0, 1] by
    construction.
    """
    anchor = rational_anchor(pop)
    gamma = sample_gamma(params, pop.n, rng)
    base = anchor - anchor * gamma[:, None]
    own = pop.groups
    rows = np.arange(pop.n)
    base[rows, own] = anchor[rows, own] + (1.0 - anchor[rows, own]) * gamma
    return BeliefTable(base, gamma)


def complete_info_memory(pop: "Population") -> np.ndarray:
    """Acquaintance matrix with every pair already met."""
    return np.ones((pop.n, pop.n), dtype=np.uint8)


def effective_belief(i: int, j: int, base: BeliefTable, net: "NetworkState",
                     pop: "Population") -> float:
    """Prior resolved through memory: certainty once the pair has met."""
    if i == j:
        raise ValueError("effective belief is defined for distinct agents")
    if net.memory[i, j]:
        return 1.0 if pop.types[i] == pop.types[j] else 0.0
    return float(base.base[i, pop.groups[j]])


def beliefs_to_csv(table: BeliefTable, pop: "Population",
                   out: Union[str, IO[str]]) -> None:
    """Write agent id, group, gamma, and per-group base beliefs as CSV."""
    n_groups = table.base.shape[1]
    header = ["agent", "group", "gamma"] + [f"belief_group_{k}" for k in range(n_groups)]

    def _write(fh):
        writer = csv.writer(fh, lineterminator="\n")
        writer.writerow(header)
        for i in range(pop.n):
            row = [i, int(pop.groups[i]), repr(float(table.gamma[i]))]
            row += [repr(float(v)) for v in table.base[i]]
            writer.writerow(row)

    if isinstance(out, str):
        with open(out, "w", newline="") as fh:
            _write(fh)
    else:
        _write(out)
