"""Pareto neighborhood search: construction followed by improvement."""

from __future__ import annotations

import time
from dataclasses import dataclass, field, replace

import numpy as np

from .construction import DrcParams, ProgressEvent, ProgressSink, drc_run
from .improvement import PlnsParams, PlnsStats, plns_run
from .model import Archive, Instance


@dataclass
class RunResult:
    archive: Archive
    seed: int
    constructions: int
    drc_time: float
    plns: PlnsStats = field(default_factory=PlnsStats)
    wall_time: float = 0.0
    stopped_early: bool = False

    def metadata(self, instance: Instance, drc: DrcParams, plns: PlnsParams) -> dict:
        return {
            "algorithm": "PNS",
            "instance": instance.name,
            "seed": self.seed,
            "sectors": drc.sectors,
            "l_max": drc.l_max,
            "max_constructions": drc.max_constructions,
            "destroy_strategy": list(plns.strategy),
            "time_limit": plns.time_limit,
            "max_iterations": plns.max_iterations,
            "constructions": self.constructions,
            "plns_iterations": self.plns.iterations,
            "plns_insertions": self.plns.insertions,
            "archive_size": len(self.archive),
            "drc_time": self.drc_time,
            "wall_time": self.wall_time,
        }


def run_pns(
    instance: Instance,
    drc: DrcParams = DrcParams(),
    plns: PlnsParams = PlnsParams(),
    seed: int = 0,
    progress: ProgressSink | None = None,
    check: bool = False,
) -> RunResult:
    """Run construction then improvement on one random stream seeded with ``seed``.

    ``plns.time_limit`` bounds the whole run: improvement gets whatever is
    left after construction.  ``drc.seed`` and ``plns.seed`` are ignored.
    """
    rng = np.random.default_rng(seed)
    start = time.perf_counter()
    stop = False
    constructions = 0

    def drc_sink(event: ProgressEvent):
        nonlocal stop, constructions
        constructions = event.iteration
        if progress is not None and progress(event):
            stop = True
            return True
        return None

    archive = drc_run(instance, drc, rng=rng, progress=drc_sink, check=check)
    drc_time = time.perf_counter() - start
    result = RunResult(archive, seed, constructions, drc_time)
    if not stop:
        remaining = max(0.0, plns.time_limit - drc_time)
        plns_run(instance, archive, replace(plns, time_limit=remaining), rng=rng,
                 progress=progress, check=check, stats=result.plns)
        stop = result.plns.stopped_by_sink
    result.wall_time = time.perf_counter() - start
    result.stopped_early = stop
    return result
