"""Quality indicators for approximation sets of the bi-objective problem.

All functions work on objective vectors ``(f1, f2)`` (both minimized).
Hypervolume is computed in a normalized space where the reference point is
``(1, 1)``: ``f1`` is scaled by the price of all bids, and ``f2`` is mapped
so that the quality of all bids (minus one) sits at 0.  The multiplicative
epsilon indicator needs strictly positive coordinates, so the unary epsilon
used in reports is evaluated on normalized coordinates plus a tiny shift.
"""

from __future__ import annotations

import csv
import io
from dataclasses import astuple, dataclass, fields
from typing import Iterable, Sequence

import numpy as np

from .errors import IndicatorError
from .model import Instance

Point = tuple[float, float]

EPSILON_SHIFT = 1e-9


@dataclass(frozen=True)
class NormalizationBounds:
    r1: float
    f2_min: float
    r2: float = 0.0
    f1_min: float = 0.0

    @classmethod
    def from_instance(cls, instance: Instance) -> "NormalizationBounds":
        f1_all, f2_all = instance.all_bids_objectives
        return cls(r1=f1_all, f2_min=f2_all - 1.0)

    def __post_init__(self):
        if self.r1 == self.f1_min or self.r2 == self.f2_min:
            raise IndicatorError(f"degenerate normalization bounds {self}")


def normalize(bounds: NormalizationBounds, point: Sequence[float]) -> Point:
    f1, f2 = point
    return (
        (f1 - bounds.f1_min) / (bounds.r1 - bounds.f1_min),
        (f2 - bounds.f2_min) / (bounds.r2 - bounds.f2_min),
    )


def normalize_all(bounds: NormalizationBounds, points: Iterable[Sequence[float]]) -> list[Point]:
    return [normalize(bounds, p) for p in points]


def hypervolume_normalized(points: Iterable[Sequence[float]], strict: bool = False) -> float:
    """Area weakly dominated by ``points`` inside the unit box below ``(1, 1)``.

    Points outside the box contribute nothing; with ``strict=True`` they raise
    :class:`IndicatorError` instead.
    """
    pts = []
    for x, y in points:
        if strict and not (0.0 <= x <= 1.0 and 0.0 <= y <= 1.0):
            raise IndicatorError(f"point {(x, y)} lies outside the normalized unit box")
        if x < 1.0 and y < 1.0:
            pts.append((float(x), float(y)))
    if not pts:
        return 0.0
    pts.sort()
    area = 0.0
    level = 1.0  # lowest f2 seen so far, i.e. top of the staircase
    for i, (x, y) in enumerate(pts):
        if y < level:
            level = y
        nxt = pts[i + 1][0] if i + 1 < len(pts) else 1.0
        area += (nxt - x) * (1.0 - level)
    return area


def hypervolume(bounds: NormalizationBounds, points: Iterable[Sequence[float]], strict: bool = False) -> float:
    """Normalized hypervolume of raw objective vectors."""
    return hypervolume_normalized(normalize_all(bounds, points), strict=strict)


def epsilon_binary(a: Iterable[Sequence[float]], b: Iterable[Sequence[float]]) -> float:
    """Multiplicative epsilon: smallest factor letting ``a`` epsilon-dominate every point of ``b``.

    Requires non-empty sets with strictly positive coordinates.
    """
    A = np.asarray(list(a), dtype=float).reshape(-1, 2)
    B = np.asarray(list(b), dtype=float).reshape(-1, 2)
    if len(A) == 0 or len(B) == 0:
        raise IndicatorError("epsilon indicator needs two non-empty sets")
    if (A <= 0).any() or (B <= 0).any():
        raise IndicatorError("multiplicative epsilon needs strictly positive coordinates")
    ratios = A[:, None, :] / B[None, :, :]  # [a, b, objective]
    return float(ratios.max(axis=2).min(axis=0).max())


def epsilon_unary(a, reference) -> float:
    return epsilon_binary(a, reference)


def epsilon_normalized(bounds: NormalizationBounds, a, b, shift: float = EPSILON_SHIFT) -> float:
    """Epsilon indicator on normalized coordinates shifted by ``shift``."""
    A = [(x + shift, y + shift) for x, y in normalize_all(bounds, a)]
    B = [(x + shift, y + shift) for x, y in normalize_all(bounds, b)]
    return epsilon_binary(A, B)


def coverage(a: Iterable[Sequence[float]], b: Iterable[Sequence[float]]) -> float:
    """Fraction of ``b`` weakly dominated by at least one point of ``a``."""
    A = list(a)
    B = list(b)
    if not B:
        raise IndicatorError("coverage needs a non-empty second set")
    hit = sum(1 for y in B if any(x[0] <= y[0] and x[1] <= y[1] for x in A))
    return hit / len(B)


def nondominated(points: Iterable[Sequence[float]]) -> list[Point]:
    """Distinct points not strictly dominated by any other, sorted by ``f1``."""
    pts = sorted(set((float(x), float(y)) for x, y in points))
    out: list[Point] = []
    level = float("inf")
    for x, y in pts:
        if y < level:
            out.append((x, y))
            level = y
    return out


def reference_union(sets: Iterable[Iterable[Sequence[float]]]) -> list[Point]:
    """Non-dominated union of several approximation sets."""
    merged: list = []
    count = 0
    for s in sets:
        merged.extend(s)
        count += 1
    if count == 0:
        raise IndicatorError("reference_union needs at least one set")
    return nondominated(merged)


@dataclass(frozen=True)
class IndicatorReport:
    instance: str
    algorithm: str
    seed: int | str
    hv: float
    eps: float
    cov: float
    size: int
    wall_time: float | str

    @classmethod
    def columns(cls) -> list[str]:
        return [f.name for f in fields(cls)]


def assess(
    bounds: NormalizationBounds,
    approx: Sequence[Sequence[float]],
    reference: Sequence[Sequence[float]],
    instance: str = "",
    algorithm: str = "",
    seed: int | str = "",
    wall_time: float | str = "",
) -> IndicatorReport:
    """Unary hypervolume, epsilon and coverage of ``approx`` against ``reference``."""
    return IndicatorReport(
        instance=instance,
        algorithm=algorithm,
        seed=seed,
        hv=hypervolume(bounds, approx),
        eps=epsilon_normalized(bounds, approx, reference),
        cov=coverage(approx, reference),
        size=len(approx),
        wall_time=wall_time,
    )


def reports_to_csv(reports: Iterable[IndicatorReport]) -> str:
    buf = io.StringIO()
    writer = csv.writer(buf, lineterminator="\n")
    writer.writerow(IndicatorReport.columns())
    for r in reports:
        writer.writerow([repr(v) if isinstance(v, float) else v for v in astuple(r)])
    return buf.getvalue()
