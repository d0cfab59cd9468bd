import itertools
from pathlib import Path

import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

from localvoting.schedule import (
    Schedule,
    ScheduleError,
    find_conflict,
    first_free_slot,
    is_conflict_free,
    transferable_slots,
)
from localvoting.topology import Topology, generate_geometric, path

from conftest import bfs_two_hop, connected_graphs

DATA = Path(__file__).parent / "data"


def brute_conflict_free(sched, topo):
    for s in range(sched.S):
        for i, j in itertools.combinations(sorted(sched.owners(s)), 2):
            if j in bfs_two_hop(topo, i):
                return False
    return True


def test_empty_schedule_conflict_free():
    assert is_conflict_free(Schedule(5, 4), path(5))


def test_two_hop_sharing_is_conflict():
    s = Schedule(3, 2)
    s.force_assign(0, 0)
    s.force_assign(2, 0)
    assert find_conflict(s, path(3)) == (0, 0, 2)
    assert not is_conflict_free(s, path(3))


def test_spatial_reuse_beyond_two_hops():
    s = Schedule(4, 2)
    s.force_assign(0, 0)
    s.force_assign(3, 0)
    assert is_conflict_free(s, path(4))


def test_first_free_slot_examples():
    topo = path(4)
    assert first_free_slot(Schedule(4, 4), topo, 0) == 0
    s = Schedule(4, 2)
    s.assign(topo, 1, 0)
    s.assign(topo, 1, 1)
    assert first_free_slot(s, topo, 0) is None
    s = Schedule(4, 3)
    s.assign(topo, 2, 0)  # two-hop neighbor of 0
    s.assign(topo, 0, 1)
    assert first_free_slot(s, topo, 0) == 2


def test_assign_release_roundtrip():
    topo = path(3)
    s = Schedule(3, 4)
    before = s.copy()
    s.assign(topo, 1, 2)
    assert s.p == [0, 1, 0]
    s.release(1, 2)
    assert s == before


def test_assign_conflict_and_release_errors():
    topo = path(3)
    s = Schedule(3, 2)
    s.assign(topo, 0, 0)
    with pytest.raises(ScheduleError):
        s.assign(topo, 2, 0)
    with pytest.raises(ScheduleError):
        s.assign(topo, 0, 0)
    with pytest.raises(ScheduleError):
        s.release(1, 0)


def test_transferable_examples():
    pair = Topology(2, frozenset({(0, 1)}))
    s = Schedule(2, 2)
    s.assign(pair, 1, 0)
    assert transferable_slots(s, pair, 1, 0) == [0]

    # receiver 1, giver 0; node 3 is two hops from 1 and also owns slot 0
    topo = Topology(4, frozenset({(0, 1), (1, 2), (2, 3)}))
    s = Schedule(4, 2)
    s.force_assign(0, 0)
    s.force_assign(3, 0)
    assert is_conflict_free(s, topo)
    assert transferable_slots(s, topo, 0, 1) == []


def test_transferable_requires_one_hop():
    with pytest.raises(ScheduleError):
        transferable_slots(Schedule(3, 2), path(3), 0, 2)


def random_schedule(topo, S, data):
    s = Schedule(topo.n, S)
    for _ in range(data.draw(st.integers(0, 3 * S))):
        i = data.draw(st.integers(0, topo.n - 1))
        slot = data.draw(st.integers(0, S - 1))
        if s.is_free_for(topo, i, slot):
            s.assign(topo, i, slot)
    return s


@settings(max_examples=150)
@given(st.data())
def test_transferable_matches_brute_force(data):
    topo = path(5) if data.draw(st.booleans()) else data.draw(connected_graphs(max_n=7))
    S = data.draw(st.integers(1, 6))
    s = random_schedule(topo, S, data)
    for i in range(topo.n):
        for j in topo.one_hop(i):
            expect = []
            for slot in s.slots_of(j):
                trial = s.copy()
                trial.release(j, slot)
                trial.force_assign(i, slot)
                if brute_conflict_free(trial, topo):
                    expect.append(slot)
            assert transferable_slots(s, topo, j, i) == expect


@settings(max_examples=150)
@given(st.data())
def test_mutations_preserve_invariants(data):
    topo = data.draw(connected_graphs(max_n=8))
    S = data.draw(st.integers(1, 5))
    s = Schedule(topo.n, S)
    for _ in range(data.draw(st.integers(1, 40))):
        op = data.draw(st.sampled_from(["assign", "release", "transfer"]))
        i = data.draw(st.integers(0, topo.n - 1))
        slot = data.draw(st.integers(0, S - 1))
        try:
            if op == "assign":
                s.assign(topo, i, slot)
            elif op == "release":
                s.release(i, slot)
            elif topo.one_hop(i):
                j = data.draw(st.sampled_from(sorted(topo.one_hop(i))))
                s.transfer(topo, j, i, slot)
        except ScheduleError:
            pass
        assert brute_conflict_free(s, topo)
        assert s.p == [sum(s.x(k, t) for t in range(S)) for k in range(topo.n)]
        assert all(k in s.owners(t) for k in range(topo.n) for t in s.slots_of(k))


@settings(max_examples=100)
@given(st.data())
def test_first_free_slot_is_minimum(data):
    topo = data.draw(connected_graphs(max_n=8))
    S = data.draw(st.integers(1, 6))
    s = random_schedule(topo, S, data)
    for i in range(topo.n):
        blockers = {i} | bfs_two_hop(topo, i)
        scan = [t for t in range(S) if not any(s.x(j, t) for j in blockers)]
        assert first_free_slot(s, topo, i) == (scan[0] if scan else None)


@settings(max_examples=100)
@given(st.data())
def test_find_conflict_matches_brute_force(data):
    topo = data.draw(connected_graphs(max_n=7))
    S = data.draw(st.integers(1, 4))
    s = Schedule(topo.n, S)
    for _ in range(data.draw(st.integers(0, 12))):
        s.force_assign(data.draw(st.integers(0, topo.n - 1)), data.draw(st.integers(0, S - 1)))
    assert is_conflict_free(s, topo) == brute_conflict_free(s, topo)


def test_dump_golden():
    topo = generate_geometric(12, 600, 250, seed=4)
    s = Schedule(topo.n, 6)
    for i in range(topo.n):
        slot = first_free_slot(s, topo, i)
        if slot is not None:
            s.assign(topo, i, slot)
    assert s.dump() == (DATA / "schedule_dump.txt").read_text()


def test_dump_format():
    s = Schedule(4, 3)
    s.force_assign(3, 0)
    s.force_assign(0, 0)
    s.force_assign(2, 2)
    assert s.dump() == "0: 0 3\n1:\n2: 2\n"
