import numpy as np
import pytest
from hypothesis import given, settings, strategies as st

from paretowdp import (
    Archive,
    Bid,
    InfeasibleSolutionError,
    InstanceError,
    Solution,
    dominates,
    evaluate_f1,
    evaluate_f2,
    is_feasible,
)
from conftest import make_instance


@pytest.fixture
def pair():
    # t0, t1; b0 = carrier 0 on {t0, t1}; b1 = carrier 1 on {t0}
    return make_instance([[3, 5], [7, 1]], [(0, 10, [0, 1]), (1, 20, [0])])


def fake(f1, f2):
    return Solution(frozenset(), float(f1), float(f2), True)


def test_f1_sums_prices(pair):
    assert evaluate_f1(pair, {0, 1}) == 30
    assert evaluate_f1(pair, set()) == 0


def test_f1_fractional_price():
    inst = make_instance([[1]], [(0, 7.5, [0])])
    assert evaluate_f1(inst, {0}) == 7.5


def test_f2_takes_best_quality_per_contract(pair):
    assert evaluate_f2(pair, {0, 1}) == -12
    assert evaluate_f2(pair, set()) == 0


def test_f2_uncovered_contract_adds_nothing():
    inst = make_instance([[5], [2]], [(0, 1, [0]), (0, 1, [1])])
    assert evaluate_f2(inst, {0}) == -5


def test_feasibility(pair):
    assert is_feasible(pair, {0})
    assert not is_feasible(pair, {1})
    assert not is_feasible(pair, set())


def test_unknown_bid_rejected(pair):
    with pytest.raises(InstanceError):
        evaluate_f1(pair, {5})


def test_instance_validation():
    with pytest.raises(InstanceError, match="t1"):
        make_instance([[1], [1]], [(0, 1, [0])])
    with pytest.raises(InstanceError):
        make_instance([[0]], [(0, 1, [0])])
    with pytest.raises(InstanceError):
        Bid(0, 0, -1.0, frozenset({0}))
    with pytest.raises(InstanceError):
        Bid(0, 0, 1.0, frozenset())


def test_solution_from_bids(pair):
    s = Solution.from_bids(pair, [1, 0])
    assert s.objectives == (30, -12)
    assert s.feasible
    s.verify(pair)


def test_dominance_examples():
    assert dominates((1, 2), (1, 3), "strict")
    assert dominates((1, 2), (1, 2), "weak")
    assert not dominates((1, 2), (1, 2), "strict")
    assert not dominates((1, 3), (3, 1), "weak")


def test_archive_examples():
    a = Archive()
    assert a.insert(fake(2, 2))
    assert a.insert(fake(1, 3))
    assert a.objective_vectors() == [(1, 3), (2, 2)]

    a = Archive()
    a.insert(fake(2, 2))
    assert a.insert(fake(1, 1))
    assert a.objective_vectors() == [(1, 1)]

    a = Archive()
    a.insert(fake(2, 2))
    assert not a.insert(fake(2, 2), mode="weak")
    assert len(a) == 1


def test_archive_tie_keeps_first_member():
    a = Archive()
    first = Solution(frozenset({0}), 2.0, 2.0, True)
    a.insert(first)
    assert not a.insert(Solution(frozenset({1}), 2.0, 2.0, True), mode="strict")
    assert a.solutions == [first]


def test_archive_new_member_has_zero_counters():
    a = Archive()
    a.insert(fake(2, 2))
    a.entries[0].sigma1 = 4
    a.insert(fake(1, 3))
    assert (a.entries[1].sigma1, a.entries[1].sigma2) == (0, 0)


def test_archive_rejects_infeasible():
    with pytest.raises(InfeasibleSolutionError):
        Archive().insert(Solution(frozenset(), 1.0, 1.0, False))


vec = st.tuples(st.integers(0, 6), st.integers(-6, 0))


@given(vec, vec, vec)
def test_dominance_is_partial_order(a, b, c):
    assert dominates(a, a, "weak")
    if dominates(a, b, "weak") and dominates(b, a, "weak"):
        assert a == b
    if dominates(a, b, "weak") and dominates(b, c, "weak"):
        assert dominates(a, c, "weak")
    assert not (dominates(a, b, "strict") and dominates(b, a, "strict"))


@given(st.lists(vec, min_size=1, max_size=30), st.randoms())
def test_archive_is_order_insensitive(points, rnd):
    a, b = Archive(), Archive()
    for p in points:
        a.insert(fake(*p))
    shuffled = list(points)
    rnd.shuffle(shuffled)
    for p in shuffled:
        b.insert(fake(*p))
    assert a.objective_vectors() == b.objective_vectors()
    a.check_invariants()


@settings(max_examples=50)
@given(st.integers(0, 2**32 - 1))
def test_objectives_monotone_in_bid_set(seed):
    from conftest import random_small_instance

    rng = np.random.default_rng(seed)
    inst = random_small_instance(rng)
    x = set(rng.choice(inst.n_bids, size=int(rng.integers(0, inst.n_bids)), replace=False).tolist())
    extra = [b for b in range(inst.n_bids) if b not in x]
    if not extra:
        return
    y = x | {extra[0]}
    assert evaluate_f1(inst, y) > evaluate_f1(inst, x)
    assert evaluate_f2(inst, y) <= evaluate_f2(inst, x)
