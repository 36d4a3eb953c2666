"""Time-to-target runs: empirical run-time distributions of PNS.

Each run is an independent seeded PNS execution that stops as soon as the
normalized hypervolume of its archive reaches the target.  The hypervolume
is only re-evaluated when a solution enters the archive, since nothing else
can change it.  Runs that miss the target are censored at the time limit.
"""

from __future__ import annotations

import csv
import io
import time
from dataclasses import dataclass, replace

from .construction import DrcParams, ProgressEvent
from .improvement import PlnsParams
from .indicators import NormalizationBounds, hypervolume
from .model import Instance
from .pns import run_pns


@dataclass(frozen=True)
class TttRow:
    rank: int
    run: int
    seed: int
    time: float
    censored: bool
    hv: float
    probability: float


def time_to_target(
    instance: Instance,
    target_hv: float,
    runs: int,
    time_limit: float = 180.0,
    base_seed: int = 0,
    drc: DrcParams = DrcParams(),
    plns: PlnsParams = PlnsParams(),
) -> list[TttRow]:
    """Run PNS ``runs`` times (seeds ``base_seed + i``) and sort the times to target.

    Rows are sorted ascending by time (ties by run index); ``probability`` is
    the plotting position ``rank / (runs + 1)``.
    """
    if runs < 1:
        raise ValueError("runs must be >= 1")
    if time_limit <= 0:
        raise ValueError("time_limit must be > 0")
    bounds = NormalizationBounds.from_instance(instance)
    plns = replace(plns, time_limit=time_limit)
    raw = []
    for i in range(runs):
        seed = base_seed + i
        hit: list = []
        best = [0.0]
        t0 = time.perf_counter()

        def sink(event: ProgressEvent, hit=hit, best=best, t0=t0):
            if event.kind != "insert":
                # construction is not bounded by the PLNS budget; censor it here
                return time.perf_counter() - t0 >= time_limit
            hv = hypervolume(bounds, (e.objectives for e in event.archive))
            best[0] = hv
            if hv >= target_hv:
                hit.append(time.perf_counter() - t0)
                return True
            return None

        run_pns(instance, drc, plns, seed=seed, progress=sink)
        if hit and hit[0] <= time_limit:
            raw.append((hit[0], i, seed, False, best[0]))
        else:
            raw.append((time_limit, i, seed, True, best[0]))
    raw.sort(key=lambda r: (r[0], r[1]))
    return [
        TttRow(rank, i, seed, t, censored, hv, rank / (runs + 1))
        for rank, (t, i, seed, censored, hv) in enumerate(raw, start=1)
    ]


def ttt_csv(rows: list[TttRow]) -> str:
    buf = io.StringIO()
    w = csv.writer(buf, lineterminator="\n")
    w.writerow(["rank", "run", "seed", "time", "censored", "hv", "probability"])
    for r in rows:
        w.writerow([r.rank, r.run, r.seed, repr(r.time), int(r.censored), repr(r.hv), repr(r.probability)])
    return buf.getvalue()
