import numpy as np
import pytest

from paretowdp import OracleLimitError, enumerate_front
from conftest import brute_force_front, make_instance, random_small_instance


def test_two_point_front(two_point):
    front = enumerate_front(two_point)
    assert front.vectors == [(10.0, -6.0), (12.0, -10.0)]
    assert [sorted(s.winning) for s in sorted(front.solutions, key=lambda s: s.f1)] == [[0], [1, 2]]


def test_cheap_singletons_dominate():
    inst = make_instance([[3, 5, 1], [3, 1, 5]], [(0, 10, [0, 1]), (1, 4, [0]), (2, 4, [1])])
    assert enumerate_front(inst).vectors == [(8.0, -10.0)]


def test_single_bid_instance():
    inst = make_instance([[4], [6]], [(0, 3, [0, 1])])
    assert enumerate_front(inst).vectors == [(3.0, -10.0)]


def test_witness_prefers_fewest_bids():
    # {b0} and {b1, b2} reach the same vector
    inst = make_instance([[2, 2], [2, 2]], [(0, 10, [0, 1]), (1, 5, [0]), (1, 5, [1])])
    sols = enumerate_front(inst).solutions
    assert [sorted(s.winning) for s in sols] == [[0]]


def test_matches_independent_enumeration():
    rng = np.random.default_rng(1234)
    for _ in range(40):
        inst = random_small_instance(rng, n_contracts=int(rng.integers(2, 6)), n_bids=int(rng.integers(5, 13)))
        front = enumerate_front(inst)
        assert front.vectors == brute_force_front(inst)
        for s in front.solutions:
            s.verify(inst)


def test_limit():
    rng = np.random.default_rng(0)
    inst = random_small_instance(rng, n_contracts=3, n_bids=10)
    with pytest.raises(OracleLimitError):
        enumerate_front(inst, bid_limit=9)
