"""Compiled inner loop of the formation dynamics.

The kernel scans all unordered pairs in a caller-supplied random order and
commits the first unstable modification it finds, maintaining the geodesic
distance matrix in place. Distances use ``n`` as the unreachable sentinel and
``powers`` maps a distance to its decayed benefit, with zeros at and beyond
the sentinel. All sums run sequentially so results are deterministic.
"""

from __future__ import annotations

import numpy as np
from numba import njit

# Step outcome codes returned by scan_commit.
STABLE = 0
ADDED = 1
DELETED = 2


@njit(cache=True)
def _bfs_row(adj, src, out):
    n = adj.shape[0]
    for k in range(n):
        out[k] = n
    out[src] = 0
    queue = np.empty(n, np.int64)
    head = 0
    tail = 1
    queue[0] = src
    while head < tail:
        u = queue[head]
        head += 1
        du = out[u]
        for v in range(n):
            if adj[u, v] and out[v] == n:
                out[v] = du + 1
                queue[tail] = v
                tail += 1


@njit(cache=True)
def apsp(adj, dist):
    n = adj.shape[0]
    for i in range(n):
        _bfs_row(adj, i, dist[i])


@njit(cache=True)
def _add_benefit_gain(dist, i, j, powers):
    """Benefit change for i from adding edge ij, via min(d_ik, 1 + d_jk)."""
    n = dist.shape[0]
    new = 0.0
    old = 0.0
    for k in range(n):
        if k == i:
            continue
        d = dist[i, k]
        alt = 1 + dist[j, k]
        nd = alt if alt < d else d
        if nd > n:
            nd = n
        new += powers[nd]
        old += powers[d]
    return new - old


@njit(cache=True)
def _delete_gains(adj, dist, i, j, powers, c):
    """Utility change for both endpoints from severing edge ij."""
    n = adj.shape[0]
    adj[i, j] = False
    adj[j, i] = False
    tmp = np.empty(n, np.int64)
    gains = np.empty(2, np.float64)
    for side in range(2):
        a = i if side == 0 else j
        _bfs_row(adj, a, tmp)
        new = 0.0
        old = 0.0
        for k in range(n):
            if k != a:
                new += powers[tmp[k]]
                old += powers[dist[a, k]]
        gains[side] = (new - old) + c
    adj[i, j] = True
    adj[j, i] = True
    return gains[0], gains[1]


@njit(cache=True)
def scan_commit(adj, mem, dist, perm, pair_i, pair_j, groups, types, base,
                delta, c_low, c_high, powers):
    """Scan pairs in ``perm`` order, commit the first unstable modification.

    Returns ``(code, i, j, memory_delta)``; on ADDED/DELETED the adjacency,
    memory, and distance matrices have been updated in place.
    """
    n = adj.shape[0]
    # Deleting a link can never pay less than delta - delta^2 in lost benefit,
    # so cheaper links are deletion-stable without a BFS.
    safe_cost = delta - delta * delta
    for t in range(perm.shape[0]):
        idx = perm[t]
        i = pair_i[idx]
        j = pair_j[idx]
        if adj[i, j]:
            c = c_low if types[i] == types[j] else c_high
            if c > safe_cost:
                gain_i, gain_j = _delete_gains(adj, dist, i, j, powers, c)
                if gain_i > 0.0 or gain_j > 0.0:
                    adj[i, j] = False
                    adj[j, i] = False
                    apsp(adj, dist)
                    return DELETED, i, j, 0
        else:
            if mem[i, j]:
                ec_i = c_low if types[i] == types[j] else c_high
                ec_j = ec_i
            else:
                p_i = base[i, groups[j]]
                ec_i = p_i * c_low + (1.0 - p_i) * c_high
                p_j = base[j, groups[i]]
                ec_j = p_j * c_low + (1.0 - p_j) * c_high
            e_i = _add_benefit_gain(dist, i, j, powers) - ec_i
            if e_i >= 0.0:
                e_j = _add_benefit_gain(dist, j, i, powers) - ec_j
                if e_j >= 0.0:
                    adj[i, j] = True
                    adj[j, i] = True
                    mem_delta = 0
                    if mem[i, j] == 0:
                        mem[i, j] = 1
                        mem[j, i] = 1
                        mem_delta = 2
                    # Single-edge insertion update of all-pairs distances.
                    for u in range(n):
                        dui = dist[u, i]
                        duj = dist[u, j]
                        for v in range(n):
                            d = dist[u, v]
                            c1 = dui + 1 + dist[j, v]
                            if c1 < d:
                                d = c1
                            c2 = duj + 1 + dist[i, v]
                            if c2 < d:
                                d = c2
                            if d > n:
                                d = n
                            dist[u, v] = d
                    return ADDED, i, j, mem_delta
    return STABLE, -1, -1, 0
