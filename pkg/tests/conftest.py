import itertools

import numpy as np
import pytest

from paretowdp import Bid, Instance


def make_instance(quality, bids, name="fixture"):
    """Build an instance from a quality matrix and ``(carrier, price, contracts)`` tuples."""
    quality = np.asarray(quality, dtype=np.int64)
    objs = [Bid(i, c, float(p), frozenset(ts)) for i, (c, p, ts) in enumerate(bids)]
    return Instance(quality.shape[0], quality.shape[1], objs, quality, name=name)


def random_small_instance(rng, n_contracts=None, n_bids=None, n_carriers=3, name="rand"):
    """Random instance with one singleton bid per contract so it is always feasible."""
    n_t = int(n_contracts or rng.integers(2, 6))
    n_b = int(n_bids or rng.integers(n_t, n_t + 7))
    quality = rng.integers(1, 10, size=(n_t, n_carriers))
    bids = [(int(rng.integers(n_carriers)), int(rng.integers(5, 40)), [t]) for t in range(n_t)]
    while len(bids) < n_b:
        size = int(rng.integers(1, n_t + 1))
        ts = sorted(rng.choice(n_t, size=size, replace=False).tolist())
        bids.append((int(rng.integers(n_carriers)), int(rng.integers(5, 20 * size + 5)), ts))
    order = rng.permutation(len(bids))
    return make_instance(quality, [bids[i] for i in order], name=name)


def brute_force_front(instance):
    """Exact front by plain enumeration of every feasible subset (independent of the oracle module)."""
    n = instance.n_bids
    vecs = set()
    for r in range(1, n + 1):
        for combo in itertools.combinations(range(n), r):
            covered = {}
            price = 0.0
            for b in combo:
                bid = instance.bids[b]
                price += bid.price
                for t in bid.bundle:
                    covered[t] = max(covered.get(t, 0), int(instance.quality[t][bid.carrier]))
            if len(covered) == instance.n_contracts:
                vecs.add((price, -float(sum(covered.values()))))
    return sorted(
        v for v in vecs
        if not any(w != v and w[0] <= v[0] and w[1] <= v[1] for w in vecs)
    )


@pytest.fixture
def two_point():
    # b0 covers both contracts at quality 3; b1, b2 cover one each at quality 5
    return make_instance(
        [[3, 5, 1], [3, 1, 5]],
        [(0, 10, [0, 1]), (1, 6, [0]), (2, 6, [1])],
        name="two_point",
    )


@pytest.fixture
def one_point():
    # b0 is cheapest and best on every contract
    return make_instance(
        [[9, 2], [9, 3]],
        [(0, 5, [0, 1]), (1, 6, [0]), (1, 7, [1]), (1, 20, [0, 1])],
        name="one_point",
    )
