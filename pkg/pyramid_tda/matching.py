"""Bottleneck distance by threshold search over a bipartite matching feasibility test."""
from __future__ import annotations

import logging
import math
from typing import Callable, Sequence, TypeVar

import numpy as np
from scipy.sparse import csr_matrix
from scipy.sparse.csgraph import maximum_bipartite_matching

logger = logging.getLogger(__name__)

T = TypeVar("T")


def expand(entries: Sequence[tuple[T, int]]) -> list[T]:
    """One copy of each item per unit of multiplicity."""
    return [item for item, mult in entries for _ in range(mult)]


def _feasible(cost: np.ndarray, left_vanish: np.ndarray, right_vanish: np.ndarray, eps: float) -> bool:
    # rows: left items then one diagonal copy per right item
    # columns: right items then one diagonal copy per left item
    n_left, n_right = cost.shape
    size = n_left + n_right
    adj = np.zeros((size, size), dtype=bool)
    adj[:n_left, :n_right] = cost <= eps
    adj[np.arange(n_left), n_right + np.arange(n_left)] = left_vanish <= eps
    adj[n_left + np.arange(n_right), np.arange(n_right)] = right_vanish <= eps
    adj[n_left:, n_right:] = True
    matched = maximum_bipartite_matching(csr_matrix(adj), perm_type="column")
    return bool(np.all(matched >= 0))


def bottleneck(
    left: Sequence[T],
    right: Sequence[T],
    cost: Callable[[T, T], float],
    vanish: Callable[[T], float],
) -> float:
    """
    Least eps admitting a partial matching of cost <= eps whose unmatched items vanish at eps.

    The optimum is one of the pairwise costs or vanishing thresholds, so a
    binary search over that finite set suffices.

    :param left: first multiset, expanded by multiplicity
    :param right: second multiset, expanded by multiplicity
    :param cost: matching cost of a pair, possibly +inf
    :param vanish: cost of leaving an item unmatched, possibly +inf
    :return: the bottleneck distance, +inf when no finite matching exists
    """
    if not left and not right:
        return 0.0
    pair_cost = np.array([[cost(s, t) for t in right] for s in left], dtype=float).reshape(len(left), len(right))
    left_vanish = np.array([vanish(s) for s in left], dtype=float)
    right_vanish = np.array([vanish(t) for t in right], dtype=float)
    candidates = sorted({0.0, *pair_cost.ravel().tolist(), *left_vanish.tolist(), *right_vanish.tolist()})
    if candidates[-1] != math.inf:
        candidates.append(math.inf)
    logger.debug("bottleneck over %dx%d items, %d thresholds", len(left), len(right), len(candidates))
    lo, hi = 0, len(candidates) - 1
    while lo < hi:
        mid = (lo + hi) // 2
        if _feasible(pair_cost, left_vanish, right_vanish, candidates[mid]):
            hi = mid
        else:
            lo = mid + 1
    return candidates[lo]
