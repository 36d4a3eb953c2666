"""Synthetic instance generator.

Contracts are lanes placed at random points in the unit square; a bundle is
a contract plus some of its geographic neighbours, so bundles group lanes
that plausibly share synergies.  Each carrier has a per-contract cost that
rises with the quality it delivers there, which puts cost and quality in
conflict.  A bundle's price is its summed cost scaled by
``size ** (synergy - 1)``, so the average price per contract falls as bundles
grow.

Coverage is guaranteed by giving every contract one singleton bid before any
random bundles are drawn.  Prices are rounded to whole monetary units, which
keeps every objective sum exact in floating point.
"""

from __future__ import annotations

from dataclasses import dataclass

import numpy as np

from .errors import InstanceError
from .model import Bid, Instance

_GROUPS = {500: "A", 1000: "B", 2000: "C"}
_SUBGROUPS = {125: "a", 250: "b", 500: "c"}


def instance_class(n_bids: int, n_contracts: int) -> str | None:
    """Benchmark class label such as ``"Aa"`` or ``"Cb"``, or None if off-grid."""
    g, sg = _GROUPS.get(n_bids), _SUBGROUPS.get(n_contracts)
    return g + sg if g and sg else None


def class_sizes(label: str) -> tuple[int, int]:
    """``(n_bids, n_contracts)`` of a class label like ``"Cb"``."""
    inv_g = {v: k for k, v in _GROUPS.items()}
    inv_sg = {v: k for k, v in _SUBGROUPS.items()}
    if len(label) != 2 or label[0] not in inv_g or label[1] not in inv_sg:
        raise ValueError(f"unknown instance class {label!r}")
    return inv_g[label[0]], inv_sg[label[1]]


@dataclass(frozen=True)
class GeneratorConfig:
    n_contracts: int
    n_bids: int
    n_carriers: int
    seed: int = 0
    max_bundle_size: int = 8
    mean_extra_size: float = 2.0  # mean of the geometric number of extra contracts
    neighbourhood: int = 2  # extra contracts are drawn from the nearest neighbourhood*k lanes
    synergy: float = 0.8
    q_lo: int = 1
    q_hi: int = 10
    base_cost: tuple[float, float] = (10.0, 100.0)
    cost_noise: float = 0.1
    name: str | None = None

    def validate(self) -> None:
        if min(self.n_contracts, self.n_bids, self.n_carriers) < 1:
            raise InstanceError("generator sizes must be positive")
        if self.n_bids < self.n_contracts:
            raise InstanceError(
                f"need at least one bid per contract for guaranteed coverage "
                f"({self.n_bids} bids < {self.n_contracts} contracts)"
            )
        if not 0 < self.synergy <= 1:
            raise InstanceError("synergy exponent must lie in (0, 1]")
        if not 1 <= self.q_lo <= self.q_hi:
            raise InstanceError("quality range must satisfy 1 <= q_lo <= q_hi")
        if self.max_bundle_size < 1:
            raise InstanceError("max_bundle_size must be >= 1")
        lo, hi = self.base_cost
        if not 0 < lo <= hi:
            raise InstanceError("base cost range must be positive")

    @property
    def label(self) -> str:
        if self.name:
            return self.name
        cls = instance_class(self.n_bids, self.n_contracts)
        stem = cls or f"T{self.n_contracts}B{self.n_bids}C{self.n_carriers}"
        return f"{stem}-s{self.seed}"


def generate_instance(config: GeneratorConfig) -> Instance:
    config.validate()
    rng = np.random.default_rng(config.seed)
    n_t, n_b, n_c = config.n_contracts, config.n_bids, config.n_carriers

    locations = rng.random((n_t, 2))
    dist = np.linalg.norm(locations[:, None, :] - locations[None, :, :], axis=2)
    nearest = np.argsort(dist, axis=1, kind="stable")  # column 0 is the lane itself

    quality = rng.integers(config.q_lo, config.q_hi + 1, size=(n_t, n_c))
    base = rng.uniform(*config.base_cost, size=n_t)
    span = max(1, config.q_hi - config.q_lo)
    level = (quality - config.q_lo) / span
    cost = base[:, None] * (0.75 + 0.5 * level) * rng.uniform(
        1 - config.cost_noise, 1 + config.cost_noise, size=(n_t, n_c)
    )

    bundles: list[list[int]] = [[t] for t in range(n_t)]
    carriers = list(rng.integers(n_c, size=n_t))
    max_k = min(config.max_bundle_size, n_t)
    p_geo = 1.0 / (1.0 + config.mean_extra_size)
    for _ in range(n_b - n_t):
        k = 1 + min(int(rng.geometric(p_geo)) - 1, max_k - 1)
        seed_t = int(rng.integers(n_t))
        reach = min(n_t - 1, config.neighbourhood * k)
        extra = rng.choice(nearest[seed_t, 1 : reach + 1], size=k - 1, replace=False) if k > 1 else []
        bundles.append(sorted([seed_t, *map(int, extra)]))
        carriers.append(int(rng.integers(n_c)))

    order = rng.permutation(n_b)
    bids = []
    for new_id, old in enumerate(order):
        bundle, c = bundles[old], int(carriers[old])
        raw = cost[bundle, c].sum() * len(bundle) ** (config.synergy - 1.0)
        price = max(1.0, float(np.rint(raw)))
        bids.append(Bid(new_id, c, price, frozenset(bundle)))
    return Instance(n_t, n_c, bids, quality, name=config.label)
