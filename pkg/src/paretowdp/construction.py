"""Dominance-based randomized construction (DRC).

Multi-start greedy construction in two stages.  Every bid not yet in the
partial solution is rated by a pair of greedy functions (``P``: price per
newly covered contract, ``Q``: negated quality gain per covered slot).  The
first stage keeps the bids whose rating pairs are mutually non-dominated; the
second stage sorts them by ``P``, splits them into contiguous sectors and
draws uniformly from the sector assigned to the current construction.
Rotating the sector across constructions steers successive solutions toward
different regions of the objective space.
"""

from __future__ import annotations

import logging
import time
from dataclasses import dataclass
from typing import Callable, Iterable, NamedTuple, Sequence

import numpy as np

from .errors import ConstructionStallError, InstanceError
from .model import Archive, Bid, Instance, Solution
from .state import CoverState

log = logging.getLogger(__name__)

INF = float("inf")


class RatingVector(NamedTuple):
    """Greedy rating ``(P, Q)`` of a bid; lower is better, ``inf`` means no contribution."""

    p: float
    q: float


@dataclass(frozen=True)
class DrcParams:
    """Construction parameters.

    ``max_constructions`` optionally caps the number of constructed solutions
    in addition to the ``l_max`` no-improvement rule.
    """

    sectors: int = 3
    l_max: int = 92
    seed: int = 0
    max_constructions: int | None = None

    def __post_init__(self):
        if self.sectors < 1:
            raise ValueError("sectors must be >= 1")
        if self.l_max < 1:
            raise ValueError("l_max must be >= 1")
        if self.max_constructions is not None and self.max_constructions < 1:
            raise ValueError("max_constructions must be >= 1")


@dataclass
class ProgressEvent:
    """Notification sent to a progress sink.

    ``kind`` is ``"insert"`` or ``"reject"`` during construction and
    ``"insert"``, ``"sigma1"`` or ``"sigma2"`` during improvement.
    """

    phase: str
    kind: str
    iteration: int
    elapsed: float
    archive: Archive
    solution: Solution | None = None


# A sink may return True to ask the running phase to stop early.
ProgressSink = Callable[[ProgressEvent], "bool | None"]


def _winning_ids(partial) -> set[int]:
    if isinstance(partial, (Solution, CoverState)):
        return set(partial.winning)
    return set(int(b) for b in partial)


def rate_p(instance: Instance, bid: Bid, partial) -> float:
    """Average price of the contracts ``bid`` would newly cover, ``inf`` if none."""
    covered = set()
    for b in _winning_ids(partial):
        covered |= instance.bids[b].bundle
    new = bid.bundle - covered
    return bid.price / len(new) if new else INF


def rate_q(instance: Instance, bid: Bid, partial) -> float:
    """Negated quality increment of adding ``bid``, divided by the bundle sizes.

    The divisor is the summed bundle size of all winning bids plus ``bid``, so
    covering contracts several times is penalized.  Returns ``inf`` if the bid
    adds no quality.
    """
    ids = _winning_ids(partial)
    best: dict[int, int] = {}
    for b in ids:
        c = instance.bids[b].carrier
        for t in instance.bids[b].bundle:
            best[t] = max(best.get(t, 0), int(instance.quality[t, c]))
    gain = 0
    for t in bid.bundle:
        gain += max(0, int(instance.quality[t, bid.carrier]) - best.get(t, 0))
    if gain <= 0:
        return INF
    ids.add(bid.id)
    slots = sum(len(instance.bids[b].bundle) for b in ids)
    return -gain / slots


def nondominated_ratings(bids: np.ndarray, p: np.ndarray, q: np.ndarray) -> np.ndarray:
    """Mutually non-dominated subset of rated bids, sorted by ``(P, Q, id)``.

    Equal rating vectors keep only the lowest bid id.  ``bids`` must be in
    ascending id order (``lexsort`` is stable, which settles exact ties).
    """
    if bids.size == 0:
        return bids
    order = np.lexsort((q, p))
    qs = q[order]
    prev_min = np.empty_like(qs)
    prev_min[0] = INF
    np.minimum.accumulate(qs[:-1], out=prev_min[1:])
    keep = qs < prev_min
    keep[0] = True
    return bids[order[keep]]


def _rated(state: CoverState):
    """Bids with a finite rating component, plus both rating arrays.

    Winning bids cover nothing new and add no quality, so they are never rated finite.
    """
    p = state.p_ratings()
    q = state.q_ratings()
    alive = (p < INF) | (q < INF)
    return alive, p, q


def _candidates(state: CoverState, pool: np.ndarray):
    """First stage on a cover state; prunes ``pool`` in place."""
    alive, p, q = _rated(state)
    pool &= alive | state.in_x
    bids = np.flatnonzero(pool & alive)
    chosen = nondominated_ratings(bids, p[bids], q[bids])
    return chosen, p, q


def gen_cand_list(instance: Instance, pool: Iterable[int], partial):
    """Rate the bids of ``pool`` not in ``partial`` and keep the non-dominated ones.

    Returns:
        ``(candidates, pruned_pool)``: ``candidates`` is a list of
        ``(bid id, RatingVector)`` sorted by ascending ``P``; bids rated
        ``(inf, inf)`` are dropped from ``pruned_pool``.

    Raises:
        ConstructionStallError: no candidate remains while ``partial`` is infeasible.
    """
    state = partial if isinstance(partial, CoverState) else CoverState(instance, _winning_ids(partial))
    mask = np.zeros(instance.n_bids, dtype=bool)
    mask[[int(b) for b in pool]] = True
    chosen, p, q = _candidates(state, mask)
    if chosen.size == 0 and not state.feasible:
        raise ConstructionStallError("no bid can extend the infeasible partial solution")
    cands = [(int(b), RatingVector(float(p[b]), float(q[b]))) for b in chosen]
    return cands, set(np.flatnonzero(mask).tolist())


def sector_bounds(n: int, sectors: int, k: int) -> tuple[int, int]:
    """0-based ``[start, stop)`` slice of the sector used by construction ``k``.

    Sectors are contiguous; all but the first hold ``n // s`` candidates and
    the first one also takes the remainder.  Construction ``k`` uses sector
    ``k mod s``, where residue 0 stands for the last sector, so ``k = 1, 2, ...``
    visits sectors 1, 2, ..., s, 1, ...
    """
    if n < 1:
        raise ValueError("empty candidate list")
    if k < 1:
        raise ValueError("construction counter k starts at 1")
    s = min(sectors, n)
    m_j = n // s
    m_1 = n - m_j * (s - 1)
    i = k % s or s
    if i == 1:
        return 0, m_1
    return m_1 + m_j * (i - 2), m_1 + m_j * (i - 1)


def sector_sizes(n: int, sectors: int) -> list[int]:
    s = min(sectors, n)
    return [stop - start for start, stop in (sector_bounds(n, s, i) for i in range(1, s + 1))]


def sel_cand_sector(
    candidates: Sequence[tuple[int, RatingVector]], k: int, sectors: int, rng: np.random.Generator
) -> int:
    """Second stage: pick a bid uniformly from the sector of construction ``k``."""
    if not candidates:
        raise ValueError("empty candidate list")
    ranked = sorted(candidates, key=lambda c: (c[1].p, c[1].q, c[0]))
    start, stop = sector_bounds(len(ranked), sectors, k)
    return ranked[start + int(rng.integers(stop - start))][0]


def construct(instance: Instance, k: int, sectors: int, rng: np.random.Generator,
              check: bool = False) -> Solution:
    """Build one feasible solution for construction counter ``k``."""
    state = CoverState(instance)
    while not state.feasible:
        # a bid rated (inf, inf) stays so while the solution grows, so filtering
        # on the current ratings equals carrying a pruned pool along
        alive, p, q = _rated(state)
        bids = np.flatnonzero(alive)
        chosen = nondominated_ratings(bids, p[bids], q[bids])
        if chosen.size == 0:
            raise ConstructionStallError("candidate list empty on an infeasible partial solution")
        # chosen is sorted by (P, Q, id) already
        start, stop = sector_bounds(chosen.size, sectors, k)
        state.add(int(chosen[start + int(rng.integers(stop - start))]))
    if check:
        state.verify()
    return state.to_solution()


def drc_run(
    instance: Instance,
    params: DrcParams = DrcParams(),
    rng: np.random.Generator | None = None,
    progress: ProgressSink | None = None,
    check: bool = False,
) -> Archive:
    """Multi-start construction until ``l_max`` constructions in a row add nothing.

    The counter of unsuccessful constructions restarts at 1 whenever a new
    solution enters the archive; the run ends once it reaches ``l_max``.

    Args:
        rng: random stream; defaults to a fresh stream seeded with ``params.seed``.
        progress: optional sink notified after every construction.
        check: revalidate incremental caches after every construction.
    """
    if not isinstance(instance, Instance):
        raise InstanceError("drc_run needs a validated Instance")
    if rng is None:
        rng = np.random.default_rng(params.seed)
    archive = Archive()
    start = time.perf_counter()
    k = 0
    l = 1
    while True:
        k += 1
        sol = construct(instance, k, params.sectors, rng, check=check)
        accepted = archive.insert(sol, mode="strict")
        l = 1 if accepted else l + 1
        if progress is not None:
            event = ProgressEvent("drc", "insert" if accepted else "reject", k,
                                  time.perf_counter() - start, archive, sol)
            if progress(event):
                break
        if l >= params.l_max:
            break
        if params.max_constructions is not None and k >= params.max_constructions:
            break
    log.debug("DRC: %d constructions, %d solutions, %.3fs", k, len(archive), time.perf_counter() - start)
    return archive
