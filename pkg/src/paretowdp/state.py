"""Incremental bookkeeping for partial solutions.

Construction and repair add bids one at a time and rate every remaining bid
after each addition.  :class:`CoverState` keeps, per contract, the number of
covering winning bids and the best quality reached, and per bid, how many of
its contracts are still uncovered and how much quality it would add.  Both
greedy ratings then reduce to a few array operations over all bids.
"""

from __future__ import annotations

import math
from typing import Iterable

import numpy as np

from .model import Instance, Solution


class CoverState:
    """Mutable partial solution over a fixed instance."""

    __slots__ = (
        "instance", "tables", "in_x", "winning", "count", "best",
        "uncovered", "gain", "total_size", "n_uncovered",
    )

    def __init__(self, instance: Instance, winning: Iterable[int] = ()):
        self.instance = instance
        self.tables = instance.tables
        self.rebuild(winning)

    def rebuild(self, winning: Iterable[int]) -> None:
        """Reset the state to exactly the bids in ``winning``."""
        tb = self.tables
        n_bids = self.instance.n_bids
        n_contracts = self.instance.n_contracts
        self.winning = set(int(b) for b in winning)
        self.in_x = np.zeros(n_bids, dtype=bool)
        if self.winning:
            self.in_x[list(self.winning)] = True
        ent = self.in_x[tb.ent_bid]
        self.count = np.bincount(tb.ent_contract[ent], minlength=n_contracts).astype(np.int64)
        self.best = np.zeros(n_contracts, dtype=np.int64)
        np.maximum.at(self.best, tb.ent_contract[ent], tb.ent_quality[ent])
        starts = tb.indptr[:-1]
        open_ent = (self.count[tb.ent_contract] == 0).astype(np.int64)
        self.uncovered = np.add.reduceat(open_ent, starts)
        self.gain = np.add.reduceat(np.maximum(tb.ent_quality - self.best[tb.ent_contract], 0), starts)
        self.total_size = int(tb.sizes[self.in_x].sum())
        self.n_uncovered = int((self.count == 0).sum())

    def copy(self) -> "CoverState":
        other = CoverState.__new__(CoverState)
        other.instance = self.instance
        other.tables = self.tables
        other.in_x = self.in_x.copy()
        other.winning = set(self.winning)
        other.count = self.count.copy()
        other.best = self.best.copy()
        other.uncovered = self.uncovered.copy()
        other.gain = self.gain.copy()
        other.total_size = self.total_size
        other.n_uncovered = self.n_uncovered
        return other

    @property
    def feasible(self) -> bool:
        return self.n_uncovered == 0

    def add(self, bid: int) -> None:
        """Add ``bid`` to the winning set, updating all per-bid ratings inputs."""
        if self.in_x[bid]:
            return
        tb = self.tables
        self.in_x[bid] = True
        self.winning.add(bid)
        self.total_size += len(tb.bid_contracts[bid])
        count, best = self.count, self.best
        for t, qb in zip(tb.bid_contracts[bid], tb.bid_qualities[bid]):
            others = tb.contract_bids[t]
            if count[t] == 0:
                self.n_uncovered -= 1
                self.uncovered[others] -= 1
            count[t] += 1
            old = int(best[t])
            if qb > old:
                best[t] = qb
                qs = tb.contract_qualities[t]
                self.gain[others] += np.maximum(qs - qb, 0) - np.maximum(qs - old, 0)

    def p_ratings(self) -> np.ndarray:
        """Price per newly covered contract for every bid, ``inf`` if none."""
        with np.errstate(divide="ignore"):
            return self.tables.prices / self.uncovered  # price > 0, so x / 0 -> inf

    def q_ratings(self) -> np.ndarray:
        """Negated quality increment per covered slot for every bid, ``inf`` if none."""
        gain = self.gain
        return np.where(gain > 0, -gain / (self.total_size + self.tables.sizes), np.inf)

    def f1(self) -> float:
        prices = self.tables.prices
        return math.fsum(prices[b] for b in sorted(self.winning))

    def f2(self) -> float:
        return -float(self.best.sum())

    def to_solution(self) -> Solution:
        return Solution(frozenset(self.winning), self.f1(), self.f2(), self.feasible)

    def verify(self) -> None:
        """Raise ``AssertionError`` if any cached array is stale."""
        fresh = CoverState(self.instance, self.winning)
        for name in ("in_x", "count", "best", "uncovered", "gain"):
            if not np.array_equal(getattr(self, name), getattr(fresh, name)):
                raise AssertionError(f"stale cover state: {name}")
        if (self.total_size, self.n_uncovered) != (fresh.total_size, fresh.n_uncovered):
            raise AssertionError("stale cover state: totals")
        self.to_solution().verify(self.instance)
