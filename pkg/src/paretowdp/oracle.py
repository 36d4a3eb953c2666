"""Exact Pareto front of small instances by exhaustive subset enumeration.

Subsets are bit masks over bid ids (bit ``i`` is bid ``i``).  The scan splits
each mask into low and high bits: objective tables for all low-bit subsets
are built once by doubling, then combined with each high-bit subset in one
vectorized step.  Quality per contract is the element-wise maximum, and a
contract is covered iff its best quality is positive (qualities are >= 1).
"""

from __future__ import annotations

from dataclasses import dataclass

import numpy as np

from .errors import OracleLimitError
from .model import Instance, Solution

DEFAULT_BID_LIMIT = 24
_LOW_BITS = 14


@dataclass(frozen=True)
class ExactFront:
    """Pareto-optimal objective vectors, sorted by ``f1``, each with one witness."""

    solutions: tuple[Solution, ...]

    @property
    def vectors(self) -> list[tuple[float, float]]:
        return [s.objectives for s in self.solutions]

    def __len__(self):
        return len(self.solutions)


def _subset_tables(prices: np.ndarray, qvec: np.ndarray):
    """Cost, best quality per contract and cardinality of every subset of the given bids."""
    n = len(prices)
    size = 1 << n
    cost = np.zeros(size)
    best = np.zeros((size, qvec.shape[1]), dtype=np.int64)
    card = np.zeros(size, dtype=np.int64)
    for i in range(n):
        lo, hi = 1 << i, 1 << (i + 1)
        cost[lo:hi] = cost[:lo] + prices[i]
        np.maximum(best[:lo], qvec[i], out=best[lo:hi])
        card[lo:hi] = card[:lo] + 1
    return cost, best, card


def _reverse_bits(masks: np.ndarray, n: int) -> np.ndarray:
    rev = np.zeros_like(masks)
    for i in range(n):
        rev |= ((masks >> i) & 1) << (n - 1 - i)
    return rev


def _front_rows(f1, f2, card, rev):
    """Indices of non-dominated rows, each the preferred witness of its vector.

    Preference among equal vectors: fewest bids, then lexicographically
    smallest sorted id tuple (largest bit-reversed mask at equal size).
    """
    order = np.lexsort((-rev, card, f2, f1))
    ys = f2[order]
    prev_min = np.empty_like(ys)
    prev_min[0] = np.inf
    np.minimum.accumulate(ys[:-1], out=prev_min[1:])
    return order[ys < prev_min]


def enumerate_front(instance: Instance, bid_limit: int = DEFAULT_BID_LIMIT) -> ExactFront:
    """Exact Pareto front by scanning all ``2**|B|`` bid subsets.

    Raises:
        OracleLimitError: the instance has more than ``bid_limit`` bids.
    """
    n = instance.n_bids
    if n > bid_limit:
        raise OracleLimitError(f"exact enumeration is limited to {bid_limit} bids, instance has {n}")
    prices = instance.tables.prices
    qvec = np.zeros((n, instance.n_contracts), dtype=np.int64)
    for b in instance.bids:
        for t in b.bundle:
            qvec[b.id, t] = instance.quality[t, b.carrier]

    low = min(n, _LOW_BITS)
    high = n - low
    lo_cost, lo_best, lo_card = _subset_tables(prices[:low], qvec[:low])
    hi_cost, hi_best, hi_card = _subset_tables(prices[low:], qvec[low:])
    lo_masks = np.arange(1 << low, dtype=np.int64)

    parts = []
    for h in range(1 << high):
        best = np.maximum(lo_best, hi_best[h])
        feasible = (best > 0).all(axis=1)
        if not feasible.any():
            continue
        masks = lo_masks[feasible] | (h << low)
        f1 = lo_cost[feasible] + hi_cost[h]
        f2 = -best[feasible].sum(axis=1).astype(float)
        card = lo_card[feasible] + hi_card[h]
        rev = _reverse_bits(masks, n)
        rows = _front_rows(f1, f2, card, rev)
        parts.append((masks[rows], f1[rows], f2[rows], card[rows], rev[rows]))

    masks, f1, f2, card, rev = (np.concatenate(cols) for cols in zip(*parts))
    rows = _front_rows(f1, f2, card, rev)

    # re-evaluate exactly; summation order above may differ in the last ulp
    sols = [
        Solution.from_bids(instance, [i for i in range(n) if (int(m) >> i) & 1]) for m in masks[rows]
    ]
    sols.sort(key=lambda s: (s.f1, s.f2))
    front = []
    level = float("inf")
    for s in sols:
        if s.f2 < level:
            front.append(s)
            level = s.f2
    return ExactFront(tuple(front))
