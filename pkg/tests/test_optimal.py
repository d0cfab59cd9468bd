import math

import pytest
from hypothesis import given
from hypothesis import strategies as st

from localvoting.optimal import (
    Instance,
    InstanceTooLarge,
    allocations,
    brute_force_minmax,
    equal_ratio_allocation,
    equal_ratio_completion,
    largest_remainder,
    lemma1_oracle,
)


def test_examples():
    r = lemma1_oracle(Instance((2, 4), 6))
    assert r.allocations == ((2, 4),) and r.equal_ratio == r.optimal == 1

    r = lemma1_oracle(Instance((0, 4), 4))
    assert r.allocations == ((0, 4),) and r.optimal == r.equal_ratio == 1

    r = lemma1_oracle(Instance((1, 2, 3), 6))
    assert r.allocations == ((1, 2, 3),) and r.optimal == r.equal_ratio == 1


def test_empty_instance():
    assert lemma1_oracle(Instance((0, 0, 0), 3)).optimal == 0


@pytest.mark.parametrize("q, S", [((1, 2, 3, 4), 4), ((7, 1), 4), ((1, 1), 9), ((1,) * 0, 2)])
def test_guard(q, S):
    with pytest.raises(InstanceTooLarge):
        lemma1_oracle(Instance(q, S))


def test_allocation_enumeration_count():
    # compositions of at most S into n parts: C(S + n, n)
    for n in (1, 2, 3):
        for S in range(0, 6):
            assert len(list(allocations(n, S))) == math.comb(S + n, n)


@given(st.lists(st.integers(0, 6), min_size=1, max_size=3), st.integers(1, 8))
def test_brute_force_agrees_with_work_bound(q, S):
    # one node per slot and no arrivals: the last completion is the total work over S
    assert brute_force_minmax(tuple(q), S) == -(-sum(q) // S)


@pytest.mark.parametrize(
    "weights, S, expect",
    [((1, 1, 1), 2, (1, 1, 0)), ((2, 4), 6, (2, 4)), ((1, 2), 2, (1, 1)), ((5, 1, 1), 3, (2, 1, 0)), ((3,), 4, (4,))],
)
def test_largest_remainder(weights, S, expect):
    assert largest_remainder(weights, S) == expect


@given(st.lists(st.integers(0, 20), min_size=1, max_size=5), st.integers(0, 30))
def test_equal_ratio_allocation_properties(q, S):
    p = equal_ratio_allocation(q, S)
    if any(q):
        assert sum(p) == S
    assert all(pi == 0 for pi, qi in zip(p, q) if qi == 0)
    active = [k for k, v in enumerate(q) if v > 0]
    tot = sum(q[k] for k in active)
    for k in active:
        # each share is within one slot of the exact proportional quota
        assert abs(p[k] - q[k] * S / tot) < 1


def test_equal_ratio_completion_terminates_at_one_slot():
    frames, used = equal_ratio_completion((0, 1), 1)
    assert frames == 1 and used == ((0, 1),)
