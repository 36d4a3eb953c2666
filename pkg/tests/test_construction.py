import numpy as np
import pytest

from paretowdp import (
    DrcParams,
    RatingVector,
    Solution,
    drc_run,
    enumerate_front,
    gen_cand_list,
    rate_p,
    rate_q,
    sel_cand_sector,
)
from paretowdp.construction import construct, nondominated_ratings, sector_bounds, sector_sizes
from paretowdp.state import CoverState
from conftest import make_instance, random_small_instance

INF = float("inf")


def test_rate_p_examples():
    inst = make_instance([[1]] * 3, [(0, 12, [0, 1, 2]), (0, 1, [0]), (0, 9, [0, 1, 2])])
    assert rate_p(inst, inst.bids[0], {1}) == 6
    assert rate_p(inst, inst.bids[1], {1}) == INF
    assert rate_p(inst, inst.bids[2], set()) == 3


def test_rate_q_examples():
    # b0 carrier 0 on t0 (q=5); b1 carrier 1 on t0, t1 (q 3, 4)
    inst = make_instance([[5, 3], [1, 4]], [(0, 1, [0]), (1, 1, [0, 1])])
    assert rate_q(inst, inst.bids[1], {0}) == pytest.approx(-4 / 3)
    assert rate_q(inst, inst.bids[0], {0, 1}) == INF
    single = make_instance([[8]], [(0, 1, [0])])
    assert rate_q(single, single.bids[0], set()) == -8


def test_vectorized_ratings_match_reference():
    rng = np.random.default_rng(3)
    for _ in range(30):
        inst = random_small_instance(rng, n_bids=12)
        x = rng.choice(inst.n_bids, size=int(rng.integers(0, 5)), replace=False).tolist()
        state = CoverState(inst, x)
        p, q = state.p_ratings(), state.q_ratings()
        for b in inst.bids:
            if b.id in x:
                continue
            assert p[b.id] == rate_p(inst, b, x)
            assert q[b.id] == pytest.approx(rate_q(inst, b, x)) or q[b.id] == rate_q(inst, b, x) == INF


def test_candidate_filter_example():
    p = np.array([1.0, 2, 3, 2, 4])
    q = np.array([5.0, 4, 3, 6, 4])
    kept = nondominated_ratings(np.arange(5), p, q)
    assert kept.tolist() == [0, 1, 2]


def test_candidate_filter_dedups_to_lowest_id():
    p = np.array([2.0, 1, 1, 2])
    q = np.array([1.0, 3, 3, 1])
    assert nondominated_ratings(np.arange(4), p, q).tolist() == [1, 0]


def test_gen_cand_list_prunes_dead_bids():
    # b2 duplicates b0's single contract at lower quality; once b0 is in, b2 is rated (inf, inf)
    inst = make_instance([[5, 2], [3, 3]], [(0, 4, [0]), (0, 4, [1]), (1, 1, [0])])
    cands, pool = gen_cand_list(inst, {1, 2}, {0})
    assert [b for b, _ in cands] == [1]
    assert cands[0][1] == RatingVector(4.0, -1.5)
    assert pool == {1}


def test_gen_cand_list_seventeen_bids_ten_nondominated():
    # ten bids on a trade-off curve plus seven dominated ones
    n_t = 17
    quality = [[1] * 17 for _ in range(n_t)]
    bids = []
    for i in range(10):
        quality[i][i] = 1 + i
        bids.append((i, 1 + i, [i]))
    for j in range(7):
        t = 10 + j
        quality[t][10 + j] = 1
        bids.append((10 + j, 100, [t]))
    inst = make_instance(quality, bids)
    cands, _ = gen_cand_list(inst, set(range(17)), set())
    assert len(cands) == 10
    assert [r.p for _, r in cands] == sorted(r.p for _, r in cands)


def test_sector_examples():
    assert sector_sizes(10, 3) == [4, 3, 3]
    assert sector_bounds(10, 3, 2) == (4, 7)  # positions 5..7 counted from 1
    assert sector_sizes(2, 3) == [1, 1]
    assert sector_bounds(10, 3, 3) == (7, 10)
    assert sector_bounds(10, 3, 4) == (0, 4)


def test_sel_cand_sector_stays_in_sector():
    cands = [(b, RatingVector(float(b), -float(b))) for b in range(10)]
    rng = np.random.default_rng(0)
    picks = {sel_cand_sector(cands, 2, 3, rng) for _ in range(200)}
    assert picks == {4, 5, 6}


def test_drc_unique_front(one_point):
    archive = drc_run(one_point, DrcParams(l_max=20), rng=np.random.default_rng(0))
    assert archive.objective_vectors() == enumerate_front(one_point).vectors


def test_drc_two_point_front(two_point):
    archive = drc_run(two_point, DrcParams(l_max=50), rng=np.random.default_rng(0))
    assert archive.objective_vectors() == [(10.0, -6.0), (12.0, -10.0)]


def test_drc_lmax_one_gives_one_solution(two_point):
    events = []
    archive = drc_run(two_point, DrcParams(l_max=1), rng=np.random.default_rng(0), progress=events.append)
    assert len(archive) == 1
    assert len(events) == 1


def test_drc_counter_logic_stops_after_lmax_failures():
    rng = np.random.default_rng(5)
    inst = random_small_instance(rng, n_contracts=5, n_bids=12)
    kinds = []
    drc_run(inst, DrcParams(l_max=7), rng=np.random.default_rng(1), progress=lambda e: kinds.append(e.kind))
    assert kinds[0] == "insert"
    tail = kinds[-6:]
    assert tail == ["reject"] * 6
    assert "insert" not in kinds[-6:]


def test_drc_solutions_feasible_and_nondominated():
    rng = np.random.default_rng(11)
    for _ in range(5):
        inst = random_small_instance(rng, n_contracts=6, n_bids=14)
        archive = drc_run(inst, DrcParams(l_max=15), rng=rng, check=True)
        archive.check_invariants()
        for s in archive.solutions:
            s.verify(inst)


def test_drc_is_deterministic():
    inst = random_small_instance(np.random.default_rng(2), n_contracts=6, n_bids=15)
    a = drc_run(inst, DrcParams(l_max=10, seed=4))
    b = drc_run(inst, DrcParams(l_max=10, seed=4))
    assert [s.winning for s in a.solutions] == [s.winning for s in b.solutions]


def test_construct_matches_stepwise_reference():
    # replay one construction with the pure-Python ratings and sector rule
    inst = random_small_instance(np.random.default_rng(9), n_contracts=5, n_bids=12)
    for k in (1, 2, 3):
        sol = construct(inst, k, 3, np.random.default_rng(k))
        rng = np.random.default_rng(k)
        x, pool = set(), set(range(inst.n_bids))
        while not Solution.from_bids(inst, x).feasible:
            rated = {b: RatingVector(rate_p(inst, inst.bids[b], x), rate_q(inst, inst.bids[b], x))
                     for b in pool if b not in x}
            pool = {b for b in pool if b in x or rated[b] != (INF, INF)}
            live = {b: r for b, r in rated.items() if r != (INF, INF)}
            nd = [b for b, r in live.items()
                  if not any(o != r and o.p <= r.p and o.q <= r.q for o in live.values())]
            # equal vectors: keep the lowest id
            seen, cands = set(), []
            for b in sorted(nd):
                if live[b] not in seen:
                    seen.add(live[b])
                    cands.append((b, live[b]))
            x.add(sel_cand_sector(cands, k, 3, rng))
        assert sol.winning == frozenset(x)


def test_candidates_pairwise_nondominated_and_pruning_sound():
    rng = np.random.default_rng(21)
    for _ in range(20):
        inst = random_small_instance(rng, n_contracts=6, n_bids=16)
        x, pool, pruned = set(), set(range(inst.n_bids)), set()
        while not Solution.from_bids(inst, x).feasible:
            cands, new_pool = gen_cand_list(inst, pool, x)
            pruned |= pool - new_pool
            pool = new_pool
            assert not any(a != b and a.p <= b.p and a.q <= b.q for _, a in cands for _, b in cands)
            for b in pruned:
                assert rate_p(inst, inst.bids[b], x) == INF
            x.add(cands[int(rng.integers(len(cands)))][0])


@pytest.mark.parametrize("n", range(1, 30))
@pytest.mark.parametrize("s", [1, 2, 3, 5])
def test_sector_partition(n, s):
    sizes = sector_sizes(n, s)
    assert sum(sizes) == n
    assert sizes[0] >= max(sizes)
    assert len(set(sizes[1:])) <= 1
    bounds = [sector_bounds(n, s, k) for k in range(1, min(n, s) + 1)]
    assert bounds[0][0] == 0 and bounds[-1][1] == n
    assert all(a[1] == b[0] for a, b in zip(bounds, bounds[1:]))
