"""Command-line interface.

Subcommands::

    paretowdp solve    --instance x.wdp [--seed 7] [--time-limit 5s] ...
    paretowdp evaluate run1.approx run2.approx --instance x.wdp [--ref-front f.approx]
    paretowdp generate --contracts 125 --bids 500 --carriers 25 --seed 1 --out Aa1.wdp
    paretowdp ttt      --instance x.wdp --target-hv 0.9 --runs 75 [--time-limit 180]
    paretowdp exact    --instance x.wdp          # exhaustive front of a small instance

Option values come from flags, then from a JSON ``--config`` file, then from
the built-in defaults.  The default output directory is taken from the
``PARETOWDP_OUT`` environment variable when set.
"""

from __future__ import annotations

import argparse
import json
import logging
import os
import re
import sys
from pathlib import Path

from . import __version__
from .construction import DrcParams
from .errors import WdpError
from .formats import (
    load_approximation_set,
    load_instance,
    persist_run,
    reevaluate,
    save_instance,
    write_approximation_set,
)
from .generator import GeneratorConfig, class_sizes, generate_instance
from .improvement import BEST_STRATEGY, PlnsParams
from .indicators import NormalizationBounds, assess, reference_union, reports_to_csv
from .oracle import DEFAULT_BID_LIMIT, enumerate_front
from .pns import run_pns
from .ttt import time_to_target, ttt_csv

log = logging.getLogger("paretowdp")

OUT_ENV = "PARETOWDP_OUT"

DEFAULTS = {
    "seed": 0,
    "sectors": 3,
    "lmax": 92,
    "max_constructions": None,
    "destroy_strategy": ",".join(map(str, BEST_STRATEGY)),
    "time_limit": "300s",
    "max_iterations": None,
    "runs": 75,
    "target_hv": None,
}

_DURATION = re.compile(r"^\s*([0-9]*\.?[0-9]+)\s*(ms|s|m|min|h)?\s*$")
_UNIT = {None: 1.0, "s": 1.0, "ms": 1e-3, "m": 60.0, "min": 60.0, "h": 3600.0}


def parse_duration(text) -> float:
    """Seconds from ``"5"``, ``"5s"``, ``"250ms"``, ``"2m"`` or a number."""
    if isinstance(text, (int, float)):
        return float(text)
    m = _DURATION.match(str(text))
    if not m:
        raise argparse.ArgumentTypeError(f"invalid duration {text!r}")
    return float(m.group(1)) * _UNIT[m.group(2)]


def parse_strategy(text) -> tuple[int, ...]:
    if isinstance(text, (list, tuple)):
        return tuple(int(v) for v in text)
    try:
        return tuple(int(v) for v in str(text).replace("(", "").replace(")", "").split(",") if v.strip())
    except ValueError:
        raise argparse.ArgumentTypeError(f"invalid destroy strategy {text!r}") from None


def _settings(args: argparse.Namespace, **defaults) -> dict:
    """Merge flags over the config file over the defaults."""
    merged = {**DEFAULTS, **defaults}
    if getattr(args, "config", None):
        with open(args.config) as fh:
            cfg = json.load(fh)
        merged.update({k.replace("-", "_"): v for k, v in cfg.items()})
    for key in DEFAULTS:
        value = getattr(args, key, None)
        if value is not None:
            merged[key] = value
    return merged


def _params(cfg: dict) -> tuple[DrcParams, PlnsParams, int]:
    seed = int(cfg["seed"])
    drc = DrcParams(sectors=int(cfg["sectors"]), l_max=int(cfg["lmax"]), seed=seed,
                    max_constructions=cfg["max_constructions"])
    plns = PlnsParams(strategy=parse_strategy(cfg["destroy_strategy"]),
                      time_limit=parse_duration(cfg["time_limit"]), seed=seed,
                      max_iterations=cfg["max_iterations"])
    return drc, plns, seed


def _out_dir(args) -> Path:
    return Path(args.out or os.environ.get(OUT_ENV) or ".")


def cmd_solve(args) -> int:
    cfg = _settings(args)
    drc, plns, seed = _params(cfg)
    instance = load_instance(args.instance)
    result = run_pns(instance, drc, plns, seed=seed)
    meta = result.metadata(instance, drc, plns)
    approx, meta_path = persist_run(result.archive, meta, _out_dir(args), instance.name,
                                    stem=f"{instance.name}.s{seed}")
    sols = result.archive.solutions
    f1s = [s.f1 for s in sols]
    f2s = [s.f2 for s in sols]
    if not args.quiet:
        print(f"instance {instance.name}: {len(sols)} non-dominated solutions "
              f"in {result.wall_time:.2f}s ({result.constructions} constructions, "
              f"{result.plns.iterations} PLNS iterations)")
        print(f"  f1 range [{min(f1s):g}, {max(f1s):g}]  f2 range [{min(f2s):g}, {max(f2s):g}]")
        print(f"  wrote {approx} and {meta_path}")
    return 0


def _meta_for(path: Path) -> dict:
    meta_path = path.with_name(path.name[: -len(".approx")] + ".meta.json") if path.name.endswith(".approx") else None
    if meta_path and meta_path.exists():
        with open(meta_path) as fh:
            return json.load(fh)
    return {}


def cmd_evaluate(args) -> int:
    instance = load_instance(args.instance)
    bounds = NormalizationBounds.from_instance(instance)
    paths = [Path(p) for p in args.sets]
    sets = [load_approximation_set(p) for p in paths]
    ids = {s.instance_id for s in sets}
    ref = load_approximation_set(args.ref_front) if args.ref_front else None
    if ref is not None:
        ids.add(ref.instance_id)
    if len(ids) > 1:
        raise WdpError(f"approximation sets refer to different instances: {sorted(ids)}")
    for s in sets + ([ref] if ref else []):
        reevaluate(instance, s)
    reference = ref.vectors if ref is not None else reference_union(s.vectors for s in sets)
    reports = []
    for path, s in zip(paths, sets):
        meta = _meta_for(path)
        reports.append(assess(
            bounds, s.vectors, reference,
            instance=s.instance_id,
            algorithm=meta.get("algorithm", path.stem),
            seed=meta.get("seed", ""),
            wall_time=meta.get("wall_time", ""),
        ))
    text = reports_to_csv(reports)
    if args.out:
        Path(args.out).write_text(text)
    else:
        sys.stdout.write(text)
    return 0


def cmd_generate(args) -> int:
    n_bids, n_contracts = args.bids, args.contracts
    if args.instance_class:
        n_bids, n_contracts = class_sizes(args.instance_class)
    if n_bids is None or n_contracts is None:
        raise WdpError("give --bids and --contracts, or --class")
    config = GeneratorConfig(
        n_contracts=n_contracts, n_bids=n_bids, n_carriers=args.carriers, seed=args.seed,
        synergy=args.synergy, q_lo=args.q_lo, q_hi=args.q_hi,
        max_bundle_size=args.max_bundle_size, name=args.name,
    )
    instance = generate_instance(config)
    out = Path(args.out) if args.out else _out_dir(argparse.Namespace(out=None)) / f"{instance.name}.wdp"
    if out.is_dir():
        out = out / f"{instance.name}.wdp"
    save_instance(instance, out)
    print(out)
    return 0


def cmd_ttt(args) -> int:
    cfg = _settings(args, time_limit="180s")
    if cfg["target_hv"] is None:
        raise WdpError("ttt needs --target-hv")
    runs = int(cfg["runs"])
    if runs < 1:
        raise WdpError("--runs must be >= 1")
    drc, plns, seed = _params(cfg)
    instance = load_instance(args.instance)
    rows = time_to_target(instance, float(cfg["target_hv"]), runs,
                          time_limit=parse_duration(cfg["time_limit"]), base_seed=seed,
                          drc=drc, plns=plns)
    text = ttt_csv(rows)
    if args.out:
        Path(args.out).write_text(text)
    else:
        sys.stdout.write(text)
    return 0


def cmd_exact(args) -> int:
    instance = load_instance(args.instance)
    front = enumerate_front(instance, bid_limit=args.bid_limit)
    text = write_approximation_set(instance.name, front.solutions)
    if args.out:
        Path(args.out).write_text(text)
    else:
        sys.stdout.write(text)
    return 0


def _add_solver_flags(p: argparse.ArgumentParser) -> None:
    p.add_argument("--instance", required=True, help="instance file")
    p.add_argument("--config", help="JSON file with default option values")
    p.add_argument("--seed", type=int)
    p.add_argument("--sectors", type=int, help="number of candidate-list sectors (default 3)")
    p.add_argument("--lmax", type=int, help="constructions without improvement before DRC stops (default 92)")
    p.add_argument("--max-constructions", type=int, help="hard cap on DRC constructions")
    p.add_argument("--destroy-strategy", type=parse_strategy, help="comma-separated percents (default 3,6,9,2,4)")
    p.add_argument("--time-limit", type=parse_duration, help="wall-clock budget, e.g. 300s")
    p.add_argument("--max-iterations", type=int, help="cap on PLNS iterations")


def build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(prog="paretowdp", description=__doc__.split("\n\n")[0])
    parser.add_argument("--version", action="version", version=f"%(prog)s {__version__}")
    parser.add_argument("-v", "--verbose", action="store_true")
    sub = parser.add_subparsers(dest="command", required=True)

    p = sub.add_parser("solve", help="run PNS on one instance")
    _add_solver_flags(p)
    p.add_argument("--out", help=f"output directory (default ${OUT_ENV} or .)")
    p.add_argument("--quiet", action="store_true")
    p.set_defaults(func=cmd_solve)

    p = sub.add_parser("evaluate", help="indicator CSV for approximation sets")
    p.add_argument("sets", nargs="+", help="approximation-set files")
    p.add_argument("--instance", required=True, help="instance file (for normalization)")
    p.add_argument("--ref-front", help="reference front file; default is the union of all sets")
    p.add_argument("--out", help="CSV path (default stdout)")
    p.set_defaults(func=cmd_evaluate)

    p = sub.add_parser("generate", help="write a synthetic instance")
    p.add_argument("--contracts", type=int)
    p.add_argument("--bids", type=int)
    p.add_argument("--class", dest="instance_class", help="size class such as Aa or Cb")
    p.add_argument("--carriers", type=int, default=25)
    p.add_argument("--seed", type=int, default=0)
    p.add_argument("--synergy", type=float, default=0.8)
    p.add_argument("--q-lo", type=int, default=1)
    p.add_argument("--q-hi", type=int, default=10)
    p.add_argument("--max-bundle-size", type=int, default=8)
    p.add_argument("--name", help="instance id (default derived from sizes and seed)")
    p.add_argument("--out", help="output file or directory")
    p.set_defaults(func=cmd_generate)

    p = sub.add_parser("ttt", help="time-to-target distribution")
    _add_solver_flags(p)
    p.add_argument("--runs", type=int)
    p.add_argument("--target-hv", type=float)
    p.add_argument("--out", help="CSV path (default stdout)")
    p.set_defaults(func=cmd_ttt)

    p = sub.add_parser("exact", help="exhaustive Pareto front of a small instance")
    p.add_argument("--instance", required=True)
    p.add_argument("--bid-limit", type=int, default=DEFAULT_BID_LIMIT)
    p.add_argument("--out", help="approximation-set path (default stdout)")
    p.set_defaults(func=cmd_exact)
    return parser


def main(argv: list[str] | None = None) -> int:
    parser = build_parser()
    args = parser.parse_args(argv)
    logging.basicConfig(level=logging.DEBUG if args.verbose else logging.WARNING,
                        format="%(levelname)s %(name)s: %(message)s")
    try:
        return args.func(args)
    except (WdpError, ValueError, OSError) as exc:
        print(f"paretowdp {args.command}: error: {exc}", file=sys.stderr)
        return 2


if __name__ == "__main__":
    sys.exit(main())
