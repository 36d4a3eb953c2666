"""Problem representation for the bi-objective winner determination problem.

An instance consists of tendered contracts, carriers and bundle bids.  A
solution is a set of winning bids; it is feasible when every contract is
covered by at least one winning bid.  Both objectives are minimized:

* ``f1`` -- total price of the winning bids,
* ``f2`` -- negated total quality, where each contract counts the best
  quality among the winning bids covering it.

Contracts, carriers and bids are identified by dense 0-based ordinals, and
every iteration order and tie-break in the package refers to that order.
"""

from __future__ import annotations

import math
from dataclasses import dataclass, field
from functools import cached_property
from typing import Iterable, Literal, NamedTuple, Sequence

import numpy as np

from .errors import InfeasibleSolutionError, InstanceError

DominanceMode = Literal["weak", "strict"]


@dataclass(frozen=True)
class Bid:
    """All-or-nothing offer of one carrier on a bundle of contracts."""

    id: int
    carrier: int
    price: float
    bundle: frozenset[int]

    def __post_init__(self):
        if not self.bundle:
            raise InstanceError(f"bid {self.id}: empty bundle")
        if not (math.isfinite(self.price) and self.price > 0):
            raise InstanceError(f"bid {self.id}: price must be finite and > 0, got {self.price!r}")


class Tables(NamedTuple):
    """Flat array views of an instance used by the vectorized search code.

    Entries are (bid, contract) incidences sorted by bid, then contract.
    """

    prices: np.ndarray  # float64[B]
    sizes: np.ndarray  # int64[B]
    indptr: np.ndarray  # int64[B + 1], entry range of each bid
    ent_bid: np.ndarray  # int64[nnz]
    ent_contract: np.ndarray  # int64[nnz]
    ent_quality: np.ndarray  # int64[nnz], q[t][c_b] of the entry
    bid_contracts: list  # per bid: list[int]
    bid_qualities: list  # per bid: list[int]
    contract_bids: list  # per contract: int64 array of covering bids
    contract_qualities: list  # per contract: int64 array, same order


class Instance:
    """Immutable 2WDP-SC instance.

    Args:
        n_contracts: number of tendered contracts, ids ``0..n_contracts-1``.
        n_carriers: number of carriers, ids ``0..n_carriers-1``.
        bids: bids in canonical order; ``bids[i].id`` must equal ``i``.
        quality: ``(n_contracts, n_carriers)`` matrix of integers >= 1.
        name: optional instance identifier used in output files.
    """

    def __init__(
        self,
        n_contracts: int,
        n_carriers: int,
        bids: Sequence[Bid],
        quality,
        name: str = "instance",
    ):
        if n_contracts < 1:
            raise InstanceError("an instance needs at least one contract")
        if n_carriers < 1:
            raise InstanceError("an instance needs at least one carrier")
        q = np.array(quality, dtype=np.int64)
        if q.shape != (n_contracts, n_carriers):
            raise InstanceError(
                f"quality matrix has shape {q.shape}, expected {(n_contracts, n_carriers)}"
            )
        if (q < 1).any():
            t, c = map(int, np.argwhere(q < 1)[0])
            raise InstanceError(f"quality of contract t{t} by carrier {c} must be >= 1")
        q.setflags(write=False)

        bids = tuple(bids)
        if not bids:
            raise InstanceError("an instance needs at least one bid")
        covered = set()
        for i, bid in enumerate(bids):
            if bid.id != i:
                raise InstanceError(f"bid at position {i} has id {bid.id}; ids must be dense and ordered")
            if not 0 <= bid.carrier < n_carriers:
                raise InstanceError(f"bid {i}: unknown carrier {bid.carrier}")
            for t in bid.bundle:
                if not 0 <= t < n_contracts:
                    raise InstanceError(f"bid {i}: unknown contract t{t}")
            covered |= bid.bundle
        missing = sorted(set(range(n_contracts)) - covered)
        if missing:
            names = ", ".join(f"t{t}" for t in missing)
            raise InstanceError(f"contracts not covered by any bid: {names}")

        self.n_contracts = n_contracts
        self.n_carriers = n_carriers
        self.bids = bids
        self.quality = q
        self.name = name

    @property
    def n_bids(self) -> int:
        return len(self.bids)

    @property
    def contracts(self) -> range:
        return range(self.n_contracts)

    @property
    def carriers(self) -> range:
        return range(self.n_carriers)

    def bid_quality(self, bid: int, contract: int) -> int:
        """Quality realized on ``contract`` when ``bid`` wins it."""
        return int(self.quality[contract, self.bids[bid].carrier])

    @cached_property
    def tables(self) -> Tables:
        prices = np.array([b.price for b in self.bids], dtype=np.float64)
        sizes = np.array([len(b.bundle) for b in self.bids], dtype=np.int64)
        indptr = np.zeros(self.n_bids + 1, dtype=np.int64)
        indptr[1:] = np.cumsum(sizes)
        bid_contracts = [sorted(b.bundle) for b in self.bids]
        bid_qualities = [
            [int(self.quality[t, b.carrier]) for t in ts] for b, ts in zip(self.bids, bid_contracts)
        ]
        ent_bid = np.repeat(np.arange(self.n_bids, dtype=np.int64), sizes)
        ent_contract = np.fromiter(
            (t for ts in bid_contracts for t in ts), dtype=np.int64, count=int(indptr[-1])
        )
        ent_quality = np.fromiter(
            (v for vs in bid_qualities for v in vs), dtype=np.int64, count=int(indptr[-1])
        )
        order = np.argsort(ent_contract, kind="stable")
        splits = np.searchsorted(ent_contract[order], np.arange(1, self.n_contracts))
        contract_bids = np.split(ent_bid[order], splits)
        contract_qualities = np.split(ent_quality[order], splits)
        for arr in (prices, sizes, indptr, ent_bid, ent_contract, ent_quality):
            arr.setflags(write=False)
        return Tables(
            prices, sizes, indptr, ent_bid, ent_contract, ent_quality,
            bid_contracts, bid_qualities, contract_bids, contract_qualities,
        )

    @cached_property
    def all_bids_objectives(self) -> tuple[float, float]:
        """``(f1(B), f2(B))``: objectives when every bid wins."""
        everything = range(self.n_bids)
        return evaluate_f1(self, everything), evaluate_f2(self, everything)

    def __eq__(self, other):
        if not isinstance(other, Instance):
            return NotImplemented
        return (
            self.n_contracts == other.n_contracts
            and self.n_carriers == other.n_carriers
            and self.bids == other.bids
            and np.array_equal(self.quality, other.quality)
        )

    __hash__ = None  # mutable-looking container semantics; compare by value only

    def __repr__(self):
        return (
            f"Instance(name={self.name!r}, contracts={self.n_contracts}, "
            f"bids={self.n_bids}, carriers={self.n_carriers})"
        )


def _check_ids(instance: Instance, winning: Iterable[int]) -> list[int]:
    ids = sorted(set(int(b) for b in winning))
    if ids and (ids[0] < 0 or ids[-1] >= instance.n_bids):
        bad = ids[0] if ids[0] < 0 else ids[-1]
        raise InstanceError(f"invalid bid id {bad} (instance has {instance.n_bids} bids)")
    return ids


def evaluate_f1(instance: Instance, winning: Iterable[int]) -> float:
    """Total price of the winning bids.

    The sum is correctly rounded (``math.fsum``), so it does not depend on
    the order in which bids were added.
    """
    ids = _check_ids(instance, winning)
    return math.fsum(instance.bids[b].price for b in ids)


def _quality_total(instance: Instance, ids: Iterable[int]) -> int:
    best: dict[int, int] = {}
    for b in ids:
        carrier = instance.bids[b].carrier
        for t in instance.bids[b].bundle:
            q = int(instance.quality[t, carrier])
            if q > best.get(t, 0):
                best[t] = q
    return sum(best.values())


def evaluate_f2(instance: Instance, winning: Iterable[int]) -> float:
    """Negated total quality; contracts covered by no winning bid add 0."""
    ids = _check_ids(instance, winning)
    return -float(_quality_total(instance, ids))


def is_feasible(instance: Instance, winning: Iterable[int]) -> bool:
    """True iff the winning bids cover every contract."""
    ids = _check_ids(instance, winning)
    covered = set()
    for b in ids:
        covered |= instance.bids[b].bundle
    return len(covered) == instance.n_contracts


@dataclass(frozen=True)
class Solution:
    """A set of winning bids with cached objective values."""

    winning: frozenset[int]
    f1: float
    f2: float
    feasible: bool

    @classmethod
    def from_bids(cls, instance: Instance, winning: Iterable[int]) -> "Solution":
        ids = _check_ids(instance, winning)
        return cls(
            frozenset(ids),
            evaluate_f1(instance, ids),
            evaluate_f2(instance, ids),
            is_feasible(instance, ids),
        )

    @property
    def objectives(self) -> tuple[float, float]:
        return (self.f1, self.f2)

    def bids_sorted(self) -> list[int]:
        return sorted(self.winning)

    def verify(self, instance: Instance) -> None:
        """Raise ``AssertionError`` if the cached values disagree with a fresh evaluation."""
        fresh = Solution.from_bids(instance, self.winning)
        if fresh != self:
            raise AssertionError(f"stale solution cache: cached {self}, fresh {fresh}")


def dominates(a: Sequence[float], b: Sequence[float], mode: DominanceMode = "strict") -> bool:
    """Pareto dominance between two objective vectors (minimization).

    ``weak``: ``a`` is no worse than ``b`` in every objective.
    ``strict``: additionally strictly better in at least one objective.
    """
    weak = all(x <= y for x, y in zip(a, b))
    if mode == "weak":
        return weak
    if mode == "strict":
        return weak and any(x < y for x, y in zip(a, b))
    raise ValueError(f"unknown dominance mode {mode!r}")


@dataclass
class ArchiveEntry:
    """Archive member with its failure counters for the two repair criteria."""

    solution: Solution
    sigma1: int = 0
    sigma2: int = 0

    @property
    def objectives(self) -> tuple[float, float]:
        return self.solution.objectives


@dataclass
class Archive:
    """Set of feasible, mutually non-dominated solutions.

    Objective vectors are unique: when a candidate ties an existing member
    exactly, the member inserted first is kept and the candidate is rejected.
    Under that rule the ``strict`` and ``weak`` insertion guards accept the
    same candidates, but both are kept so that callers can state which guard
    their algorithm uses.
    """

    entries: list[ArchiveEntry] = field(default_factory=list)

    def __len__(self):
        return len(self.entries)

    def __iter__(self):
        return iter(self.entries)

    @property
    def solutions(self) -> list[Solution]:
        return [e.solution for e in self.entries]

    def objective_vectors(self) -> list[tuple[float, float]]:
        return sorted(e.objectives for e in self.entries)

    def is_dominated(self, point: Sequence[float], mode: DominanceMode = "weak") -> bool:
        c1, c2 = point
        if mode == "weak":
            return any(e.solution.f1 <= c1 and e.solution.f2 <= c2 for e in self.entries)
        return any(
            e.solution.f1 <= c1 and e.solution.f2 <= c2 and (e.solution.f1 < c1 or e.solution.f2 < c2)
            for e in self.entries
        )

    def insert(self, candidate: Solution, mode: DominanceMode = "weak") -> bool:
        """Insert ``candidate`` if no member dominates it under ``mode``.

        Accepted candidates start with zero failure counters and evict every
        member they strictly dominate.

        Returns:
            True if the candidate was inserted.

        Raises:
            InfeasibleSolutionError: ``candidate`` does not cover all contracts.
        """
        if mode not in ("weak", "strict"):
            raise ValueError(f"unknown dominance mode {mode!r}")
        if not candidate.feasible:
            raise InfeasibleSolutionError("only feasible solutions can enter the archive")
        c1, c2 = candidate.f1, candidate.f2
        # an exact tie is weak dominance; the first-inserted member is kept
        if self.is_dominated((c1, c2), "weak"):
            return False
        self.entries = [
            e for e in self.entries if not (c1 <= e.solution.f1 and c2 <= e.solution.f2)
        ]
        self.entries.append(ArchiveEntry(candidate))
        return True

    def copy(self) -> "Archive":
        return Archive([ArchiveEntry(e.solution, e.sigma1, e.sigma2) for e in self.entries])

    def check_invariants(self) -> None:
        """Raise ``AssertionError`` on any dominance, duplicate or feasibility violation."""
        vecs = [e.objectives for e in self.entries]
        if len(set(vecs)) != len(vecs):
            raise AssertionError("duplicate objective vectors in archive")
        for e in self.entries:
            if not e.solution.feasible:
                raise AssertionError("infeasible archive member")
        for i, a in enumerate(vecs):
            for j, b in enumerate(vecs):
                if i != j and dominates(a, b, "strict"):
                    raise AssertionError(f"archive member {a} dominates member {b}")
