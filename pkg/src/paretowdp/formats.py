"""Plain-text instance and approximation-set files.

Instance grammar (ASCII, one record per line, ``#`` starts a comment)::

    2WDP-SC <n_contracts> <n_bids> <n_carriers>
    q <t> <q[t][0]> ... <q[t][n_carriers-1]>      # one line per contract, in order
    b <bid> <carrier> <price> <t> <t> ...         # one line per bid, in order

Approximation-set file::

    APPROXSET <instance-id> <n>
    s <f1> <f2> <bid> <bid> ...                   # n lines, sorted by f1

Numbers are written with ``repr`` (integral values without a fractional
part), so every value reads back exactly.
"""

from __future__ import annotations

import json
import math
import os
from dataclasses import dataclass
from pathlib import Path
from typing import IO, Iterable, Sequence

from .errors import InstanceError, InstanceFormatError, WdpError
from .model import Archive, Bid, Instance, Solution

MAGIC = "2WDP-SC"
APPROX_MAGIC = "APPROXSET"


def format_number(x: float) -> str:
    x = float(x)
    if math.isfinite(x) and x.is_integer() and abs(x) < 2**53:
        return str(int(x))
    return repr(x)


def _records(text: str):
    for lineno, raw in enumerate(text.splitlines(), start=1):
        line = raw.split("#", 1)[0].strip()
        if line:
            yield lineno, line.split()


def _int(tok: str, lineno: int, what: str) -> int:
    try:
        return int(tok)
    except ValueError:
        raise InstanceFormatError(f"expected integer {what}, got {tok!r}", lineno) from None


def _float(tok: str, lineno: int, what: str) -> float:
    try:
        return float(tok)
    except ValueError:
        raise InstanceFormatError(f"expected number {what}, got {tok!r}", lineno) from None


def parse_instance(source: str | IO[str], name: str = "instance") -> Instance:
    """Parse and validate an instance.

    Raises:
        InstanceFormatError: syntax problems, with the offending line number.
        InstanceError: semantic problems such as an uncovered contract.
    """
    text = source if isinstance(source, str) else source.read()
    recs = list(_records(text))
    if not recs:
        raise InstanceFormatError("empty instance file")
    lineno, head = recs[0]
    if head[0] != MAGIC or len(head) != 4:
        raise InstanceFormatError(f"header must be '{MAGIC} <|T|> <|B|> <|C|>'", lineno)
    n_t, n_b, n_c = (_int(tok, lineno, "size") for tok in head[1:])
    if min(n_t, n_b, n_c) < 1:
        raise InstanceFormatError("header sizes must be positive", lineno)
    if len(recs) != 1 + n_t + n_b:
        raise InstanceFormatError(
            f"expected {n_t} quality lines and {n_b} bid lines, found {len(recs) - 1} records"
        )

    quality = []
    for i, (lineno, rec) in enumerate(recs[1 : 1 + n_t]):
        if rec[0] != "q":
            raise InstanceFormatError(f"expected quality record 'q', got {rec[0]!r}", lineno)
        if len(rec) != 2 + n_c:
            raise InstanceFormatError(f"quality record needs {n_c} values", lineno)
        t = _int(rec[1], lineno, "contract id")
        if t != i:
            raise InstanceFormatError(f"quality records must be in contract order; expected t{i}, got t{t}", lineno)
        row = [_int(tok, lineno, "quality") for tok in rec[2:]]
        if min(row) < 1:
            raise InstanceFormatError(f"contract t{t}: quality values must be >= 1", lineno)
        quality.append(row)

    bids = []
    for i, (lineno, rec) in enumerate(recs[1 + n_t :]):
        if rec[0] != "b":
            raise InstanceFormatError(f"expected bid record 'b', got {rec[0]!r}", lineno)
        if len(rec) < 5:
            raise InstanceFormatError("bid record needs id, carrier, price and at least one contract", lineno)
        bid_id = _int(rec[1], lineno, "bid id")
        if bid_id != i:
            raise InstanceFormatError(f"bid records must be in id order; expected {i}, got {bid_id}", lineno)
        carrier = _int(rec[2], lineno, "carrier id")
        price = _float(rec[3], lineno, "price")
        contracts = [_int(tok, lineno, "contract id") for tok in rec[4:]]
        if len(set(contracts)) != len(contracts):
            raise InstanceFormatError(f"bid {bid_id}: repeated contract in bundle", lineno)
        try:
            bids.append(Bid(bid_id, carrier, price, frozenset(contracts)))
        except InstanceError as exc:
            raise InstanceFormatError(str(exc), lineno) from None

    return Instance(n_t, n_c, bids, quality, name=name)


def write_instance(instance: Instance) -> str:
    """Canonical text form of an instance (stable ordering by id)."""
    lines = [f"{MAGIC} {instance.n_contracts} {instance.n_bids} {instance.n_carriers}"]
    for t in instance.contracts:
        lines.append("q " + " ".join(str(v) for v in [t, *instance.quality[t].tolist()]))
    for b in instance.bids:
        contracts = " ".join(str(t) for t in sorted(b.bundle))
        lines.append(f"b {b.id} {b.carrier} {format_number(b.price)} {contracts}")
    return "\n".join(lines) + "\n"


def load_instance(path: str | os.PathLike) -> Instance:
    path = Path(path)
    with open(path, encoding="ascii") as fh:
        return parse_instance(fh, name=path.stem)


def save_instance(instance: Instance, path: str | os.PathLike) -> Path:
    path = Path(path)
    path.write_text(write_instance(instance), encoding="ascii")
    return path


@dataclass(frozen=True)
class ApproxRecord:
    f1: float
    f2: float
    bids: tuple[int, ...]

    @property
    def objectives(self) -> tuple[float, float]:
        return (self.f1, self.f2)


@dataclass(frozen=True)
class ApproximationSet:
    instance_id: str
    records: tuple[ApproxRecord, ...]

    @property
    def vectors(self) -> list[tuple[float, float]]:
        return [r.objectives for r in self.records]


def write_approximation_set(instance_id: str, solutions: Iterable[Solution]) -> str:
    """Serialize solutions sorted by ``(f1, f2)``."""
    if any(c.isspace() for c in instance_id) or not instance_id:
        raise WdpError(f"instance id must be a non-empty token, got {instance_id!r}")
    sols = sorted(solutions, key=lambda s: (s.f1, s.f2, sorted(s.winning)))
    lines = [f"{APPROX_MAGIC} {instance_id} {len(sols)}"]
    for s in sols:
        ids = " ".join(str(b) for b in sorted(s.winning))
        lines.append(f"s {format_number(s.f1)} {format_number(s.f2)} {ids}".rstrip())
    return "\n".join(lines) + "\n"


def parse_approximation_set(source: str | IO[str]) -> ApproximationSet:
    text = source if isinstance(source, str) else source.read()
    recs = list(_records(text))
    if not recs:
        raise InstanceFormatError("empty approximation-set file")
    lineno, head = recs[0]
    if head[0] != APPROX_MAGIC or len(head) != 3:
        raise InstanceFormatError(f"header must be '{APPROX_MAGIC} <instance-id> <n>'", lineno)
    n = _int(head[2], lineno, "set size")
    if len(recs) - 1 != n:
        raise InstanceFormatError(f"header announces {n} solutions, found {len(recs) - 1}")
    out = []
    for lineno, rec in recs[1:]:
        if rec[0] != "s" or len(rec) < 3:
            raise InstanceFormatError("solution record must be 's <f1> <f2> <bids...>'", lineno)
        f1 = _float(rec[1], lineno, "f1")
        f2 = _float(rec[2], lineno, "f2")
        out.append(ApproxRecord(f1, f2, tuple(_int(t, lineno, "bid id") for t in rec[3:])))
    return ApproximationSet(head[1], tuple(out))


def load_approximation_set(path: str | os.PathLike) -> ApproximationSet:
    with open(path, encoding="ascii") as fh:
        return parse_approximation_set(fh)


def reevaluate(instance: Instance, approx: ApproximationSet) -> list[Solution]:
    """Rebuild solutions from their bid lists; raises if stored objectives disagree."""
    sols = []
    for rec in approx.records:
        sol = Solution.from_bids(instance, rec.bids)
        if sol.objectives != rec.objectives:
            raise InstanceError(
                f"stored objectives {rec.objectives} disagree with evaluation {sol.objectives}"
            )
        sols.append(sol)
    return sols


def persist_run(
    archive: Archive | Sequence[Solution],
    metadata: dict,
    out_dir: str | os.PathLike,
    instance_id: str,
    stem: str | None = None,
) -> tuple[Path, Path]:
    """Write ``<stem>.approx`` and ``<stem>.meta.json`` into ``out_dir``.

    ``stem`` defaults to ``instance_id``.

    Raises:
        WdpError: the archive is empty, or a file cannot be written.
    """
    sols = archive.solutions if isinstance(archive, Archive) else list(archive)
    if not sols:
        raise WdpError("refusing to persist an empty approximation set")
    out = Path(out_dir)
    stem = stem or instance_id
    approx_path = out / f"{stem}.approx"
    meta_path = out / f"{stem}.meta.json"
    try:
        out.mkdir(parents=True, exist_ok=True)
        approx_path.write_text(write_approximation_set(instance_id, sols), encoding="ascii")
        meta_path.write_text(json.dumps(metadata, indent=2, sort_keys=True) + "\n", encoding="ascii")
    except OSError as exc:
        raise WdpError(f"cannot write run output to {out}: {exc}") from exc
    return approx_path, meta_path
