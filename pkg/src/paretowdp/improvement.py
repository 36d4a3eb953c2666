"""Pareto large neighborhood search (PLNS).

Each iteration picks an archive member, removes some of its bids at random
(destroy) and greedily completes the result with a single rating criterion
(repair).  The repaired solution enters the archive only if no member weakly
dominates it.  Every member carries two failure counters, one per repair
criterion; they select both the destroy rate (cycling through a destroy
strategy) and the repair criterion (whichever has failed less often).
"""

from __future__ import annotations

import logging
import time
from dataclasses import dataclass
from typing import Iterable

import numpy as np

from .construction import ProgressEvent, ProgressSink
from .errors import RepairStallError, WdpError
from .model import Archive, Instance, Solution
from .state import CoverState

log = logging.getLogger(__name__)

BEST_STRATEGY = (3, 6, 9, 2, 4)


def _check_strategy(strategy) -> tuple[int, ...]:
    rates = tuple(int(r) for r in strategy)
    if not rates:
        raise ValueError("a destroy strategy needs at least one rate")
    if any(r < 0 or r > 100 for r in rates):
        raise ValueError(f"destroy rates are percents in [0, 100], got {rates}")
    if any(r != orig for r, orig in zip(rates, strategy)):
        raise ValueError(f"destroy rates must be integers, got {tuple(strategy)}")
    return rates


@dataclass(frozen=True)
class PlnsParams:
    """Improvement parameters.

    Attributes:
        strategy: destroy rates in percent, cycled by the failure counters.
        time_limit: wall-clock budget in seconds; 0 skips the phase.
        seed: seed for a fresh random stream when none is supplied.
        max_iterations: optional cap on destroy/repair iterations.  Runs capped
            this way (and finishing within ``time_limit``) are reproducible
            bit for bit.
    """

    strategy: tuple[int, ...] = BEST_STRATEGY
    time_limit: float = 300.0
    seed: int = 0
    max_iterations: int | None = None

    def __post_init__(self):
        object.__setattr__(self, "strategy", _check_strategy(self.strategy))
        if not self.time_limit >= 0:
            raise ValueError("time_limit must be >= 0")
        if self.max_iterations is not None and self.max_iterations < 0:
            raise ValueError("max_iterations must be >= 0")


def select_destroy_rate(sigma1: int, sigma2: int, strategy) -> int:
    """Rate at 0-based position ``min(sigma1, sigma2) mod n`` of the strategy."""
    rates = _check_strategy(strategy)
    return rates[min(sigma1, sigma2) % len(rates)]


def destroy(bids: Iterable[int], rate: int, rng: np.random.Generator) -> list[int]:
    """Drop each bid independently when a uniform draw from 1..100 is <= ``rate``.

    Bids are visited in ascending id order; the surviving ids are returned
    in that order.
    """
    if not 0 <= rate <= 100:
        raise ValueError(f"destroy rate must be in [0, 100], got {rate}")
    if isinstance(bids, Solution):
        bids = bids.winning
    ids = sorted(bids)
    if not ids:
        return []
    draws = rng.integers(1, 101, size=len(ids))
    return [b for b, d in zip(ids, draws) if d > rate]


def _greedy_fill(state: CoverState, criterion: int) -> bool:
    """Add argmin bids of one rating until feasible; False if the pool ran dry."""
    pool = np.ones(state.instance.n_bids, dtype=bool)
    while not state.feasible:
        r = state.p_ratings() if criterion == 1 else state.q_ratings()
        open_ = pool & ~state.in_x
        r[~open_] = np.inf
        pool &= ~np.isposinf(r) | state.in_x
        best = int(np.argmin(r))  # first minimum, i.e. lowest id on ties
        if np.isposinf(r[best]):
            return False
        state.add(best)
    return True


def repair_state(state: CoverState, sigma1: int, sigma2: int) -> CoverState:
    """Greedy single-criterion repair of ``state`` in place."""
    criterion = 1 if sigma1 < sigma2 else 2
    if not _greedy_fill(state, criterion):
        # Q can only stall if some contract has no quality-improving bid left;
        # finish with P, which always reaches feasibility on a valid instance
        if criterion == 1 or not _greedy_fill(state, 1):
            raise RepairStallError("no bid can extend the infeasible partial solution")
    return state


def repair(instance: Instance, partial, sigma1: int, sigma2: int) -> Solution:
    """Complete ``partial`` greedily with ``P`` if ``sigma1 < sigma2``, else ``Q``.

    A feasible ``partial`` is returned unchanged.
    """
    if isinstance(partial, CoverState):
        state = partial.copy()
    else:
        ids = partial.winning if isinstance(partial, Solution) else partial
        state = CoverState(instance, ids)
    return repair_state(state, sigma1, sigma2).to_solution()


@dataclass
class PlnsStats:
    iterations: int = 0
    insertions: int = 0
    sigma1_increments: int = 0
    sigma2_increments: int = 0
    elapsed: float = 0.0
    stopped_by_sink: bool = False


def plns_run(
    instance: Instance,
    archive: Archive,
    params: PlnsParams = PlnsParams(),
    rng: np.random.Generator | None = None,
    progress: ProgressSink | None = None,
    check: bool = False,
    stats: PlnsStats | None = None,
) -> Archive:
    """Improve ``archive`` in place until the time or iteration budget is spent.

    The budget is checked before every iteration, so ``time_limit=0`` leaves
    the archive untouched.

    Args:
        progress: optional sink notified after every iteration; returning
            True stops the run.
        check: revalidate the archive invariants after every iteration.
        stats: optional counters filled in as the run proceeds.

    Returns:
        The same ``archive`` object.
    """
    if len(archive) == 0:
        raise WdpError("plns_run needs a non-empty archive")
    if rng is None:
        rng = np.random.default_rng(params.seed)
    if stats is None:
        stats = PlnsStats()
    strategy = params.strategy
    n_rates = len(strategy)
    state = CoverState(instance)
    start = time.perf_counter()
    limit = params.time_limit
    cap = params.max_iterations
    it = 0
    while time.perf_counter() - start < limit and (cap is None or it < cap):
        it += 1
        entry = archive.entries[int(rng.integers(len(archive)))]
        s1, s2 = entry.sigma1, entry.sigma2
        rate = strategy[min(s1, s2) % n_rates]
        state.rebuild(destroy(entry.solution.winning, rate, rng))
        repair_state(state, s1, s2)
        candidate = state.to_solution()
        if archive.insert(candidate, mode="weak"):
            kind = "insert"
            stats.insertions += 1
        elif s1 < s2:
            entry.sigma1 += 1
            kind = "sigma1"
            stats.sigma1_increments += 1
        else:
            entry.sigma2 += 1
            kind = "sigma2"
            stats.sigma2_increments += 1
        if check:
            state.verify()
            archive.check_invariants()
        if progress is not None:
            event = ProgressEvent("plns", kind, it, time.perf_counter() - start, archive, candidate)
            if progress(event):
                stats.stopped_by_sink = True
                break
    stats.iterations = it
    stats.elapsed = time.perf_counter() - start
    log.debug("PLNS: %d iterations, %d insertions, archive %d", it, stats.insertions, len(archive))
    return archive
