"""Wasserstein and bottleneck distances between graded persistence diagrams.

Per degree, the q-Wasserstein distance is the cost of an optimal partial
matching where unmatched points pay their q-norm distance to the
diagonal; matched costs aggregate by the q-norm.  Degrees combine by
taking the q-norm across the per-degree distances (the maximum for
q = inf).  Distances are exact: finite q uses an exact linear assignment
on the augmented cost matrix, q = inf runs a binary search over
threshold matchings.  Intended for test-scale diagrams (a few hundred
points per degree).

Points with infinite death match only among themselves (by sorted
births); mismatched counts make the distance infinite.
"""
from __future__ import annotations

import math

import numpy as np
from scipy.optimize import linear_sum_assignment
from scipy.sparse import csr_matrix
from scipy.sparse.csgraph import maximum_bipartite_matching

from .persistence import GradedDiagram


class InvalidOrderError(ValueError):
    """Wasserstein order q < 1."""


def _point_arrays(d: GradedDiagram, k: int) -> np.ndarray:
    pts = d.get(k)
    arr = np.stack([pts.births, pts.deaths], axis=1) if len(pts) else np.zeros((0, 2))
    # zero-persistence points sit on the diagonal and cost nothing
    return arr[arr[:, 1] > arr[:, 0]]

def _split_inf(arr: np.ndarray) -> tuple[np.ndarray, np.ndarray]:
    inf = np.isinf(arr[:, 1])
    return arr[~inf], arr[inf]


def _ground_cost(p1: np.ndarray, p2: np.ndarray, q: float) -> np.ndarray:
    diff = np.abs(p1[:, None, :] - p2[None, :, :])
    if math.isinf(q):
        return diff.max(axis=2)
    return (diff ** q).sum(axis=2) ** (1.0 / q)

def _diag_cost(pts: np.ndarray, q: float) -> np.ndarray:
    gap = (pts[:, 1] - pts[:, 0]) / 2.0
    if math.isinf(q):
        return gap
    return gap * 2.0 ** (1.0 / q)


def _wasserstein_finite(p1: np.ndarray, p2: np.ndarray, q: float) -> float:
    n1, n2 = len(p1), len(p2)
    if n1 == 0 and n2 == 0:
        return 0.0
    size = n1 + n2
    cost = np.zeros((size, size))
    if n1 and n2:
        cost[:n1, :n2] = _ground_cost(p1, p2, q) ** q
    if n1:
        cost[:n1, n2:] = np.inf
        cost[np.arange(n1), n2 + np.arange(n1)] = _diag_cost(p1, q) ** q
    if n2:
        cost[n1:, :n2] = np.inf
        cost[n1 + np.arange(n2), np.arange(n2)] = _diag_cost(p2, q) ** q
    rows, cols = linear_sum_assignment(cost)
    return float(cost[rows, cols].sum() ** (1.0 / q))


def _bottleneck(p1: np.ndarray, p2: np.ndarray) -> float:
    n1, n2 = len(p1), len(p2)
    if n1 == 0 and n2 == 0:
        return 0.0
    cross = _ground_cost(p1, p2, math.inf) if n1 and n2 else np.zeros((n1, n2))
    d1, d2 = _diag_cost(p1, math.inf), _diag_cost(p2, math.inf)
    candidates = np.unique(np.concatenate([cross.ravel(), d1, d2, [0.0]]))

    def feasible(theta: float) -> bool:
        size = n1 + n2
        adj = np.zeros((size, size), dtype=bool)
        if n1 and n2:
            adj[:n1, :n2] = cross <= theta
        adj[:n1, n2:] = False
        adj[np.arange(n1), n2 + np.arange(n1)] = d1 <= theta
        adj[n1:, :n2] = False
        adj[n1 + np.arange(n2), np.arange(n2)] = d2 <= theta
        adj[n1:, n2:] = True  # diagonal-to-diagonal is free
        match = maximum_bipartite_matching(csr_matrix(adj), perm_type="column")
        return bool((match >= 0).all())

    lo, hi = 0, len(candidates) - 1
    if feasible(candidates[lo]):
        return float(candidates[lo])
    while hi - lo > 1:
        mid = (lo + hi) // 2
        if feasible(candidates[mid]):
            hi = mid
        else:
            lo = mid
    return float(candidates[hi])


def _degree_distance(d1: GradedDiagram, d2: GradedDiagram, k: int, q: float) -> float:
    a1, a2 = _point_arrays(d1, k), _point_arrays(d2, k)
    f1, i1 = _split_inf(a1)
    f2, i2 = _split_inf(a2)
    if len(i1) != len(i2):
        return math.inf
    inf_part = 0.0
    if len(i1):
        gaps = np.abs(np.sort(i1[:, 0]) - np.sort(i2[:, 0]))
        inf_part = gaps.max() if math.isinf(q) else (gaps ** q).sum() ** (1.0 / q)
    fin_part = _bottleneck(f1, f2) if math.isinf(q) else _wasserstein_finite(f1, f2, q)
    if math.isinf(q):
        return max(fin_part, inf_part)
    return (fin_part ** q + inf_part ** q) ** (1.0 / q)


def wasserstein(d1: GradedDiagram, d2: GradedDiagram, q: float = 2.0,
                degrees=None) -> float:
    """Graded q-Wasserstein distance (q = inf gives the bottleneck distance)."""
    if not (q >= 1.0):
        raise InvalidOrderError(f"need q >= 1, got {q}")
    ks = set(d1.degrees()) | set(d2.degrees())
    if degrees is not None:
        ks &= set(degrees)
    per = [_degree_distance(d1, d2, k, q) for k in sorted(ks)]
    if not per:
        return 0.0
    if math.isinf(q):
        return float(max(per))
    return float(np.sum(np.asarray(per) ** q) ** (1.0 / q))


def bottleneck(d1: GradedDiagram, d2: GradedDiagram, degrees=None) -> float:
    """Bottleneck distance: the q = inf Wasserstein distance."""
    return wasserstein(d1, d2, math.inf, degrees)
