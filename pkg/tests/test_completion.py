from __future__ import annotations

import itertools

import pytest
from hypothesis import given
from hypothesis import strategies as st

from qtnested.completion import (
    AxiomError,
    axiom_set,
    completion_contains,
    completion_upto,
    decompose,
    fixpoint_upto,
    stage,
)

SUBSETS = [set(c) for k in range(1, 7) for c in itertools.combinations(range(2, 8), k)]


def test_membership_examples():
    assert completion_contains({2}, 7)
    assert not completion_contains({3}, 4)
    assert completion_contains({3}, 5)
    assert not any(completion_contains(set(), n) for n in range(10))
    assert not completion_contains({2}, 1)


def test_upto_examples():
    assert completion_upto({2}, 6) == {2, 3, 4, 5, 6}
    assert completion_upto({3}, 9) == {3, 5, 7, 9}
    assert completion_upto({4, 5}, 12) == {4, 5, 7, 8, 9, 10, 11, 12}


def test_rejects_small_indices():
    with pytest.raises(AxiomError):
        axiom_set({1, 2})
    with pytest.raises(AxiomError):
        completion_contains({0}, 3)


def test_agrees_with_fixpoint_oracle():
    assert len(SUBSETS) == 63
    for x in SUBSETS:
        assert completion_upto(x, 100) == fixpoint_upto(x, 100), x


def test_closure_law():
    for x in SUBSETS:
        members = completion_upto(x, 40)
        for m in members:
            for n in members:
                assert completion_contains(x, m + n - 1)


@given(st.sets(st.integers(2, 9), min_size=1, max_size=3), st.sets(st.integers(2, 9), max_size=2))
def test_contains_generators_and_monotone(x, extra):
    hat = completion_upto(x, 60)
    assert x <= hat
    assert hat <= completion_upto(x | extra, 60)


def test_completion_is_not_modular():
    # search small pairs for a witness that completing a union adds new indices
    witness = None
    for x1, x2 in itertools.combinations([{n} for n in range(2, 8)], 2):
        both = completion_upto(x1 | x2, 30)
        separate = completion_upto(x1, 30) | completion_upto(x2, 30)
        if both > separate:
            witness = (x1, x2, sorted(both - separate))
            break
    assert witness is not None
    x1, x2, extra = witness
    assert all(not completion_contains(x1, n) and not completion_contains(x2, n) for n in extra)


def test_decompose_is_lexicographically_least_valid_split():
    for x in ({2}, {3}, {2, 3}, {4, 5}, {3, 7}):
        for n in completion_upto(x, 40):
            split = decompose(x, n)
            if n in x:
                assert split is None
                continue
            m, l = split
            assert m + l - 1 == n
            assert completion_contains(x, m) and completion_contains(x, l)
            earlier = [k for k in range(2, m) if completion_contains(x, k) and completion_contains(x, n + 1 - k)]
            assert not earlier
    assert decompose({3}, 4) is None
    assert decompose({2}, 3) == (2, 2)
    assert decompose({3}, 5) == (3, 3)


def test_stage_matches_fixpoint_iterations():
    assert stage({3}, 3) == 0
    assert stage({3}, 5) == 1
    assert stage({3}, 4) is None
    assert stage({2}, 5) == 2
    # split parts are strictly smaller, so recursive collapsing terminates
    for n in completion_upto({2, 5}, 30):
        split = decompose({2, 5}, n)
        if split:
            assert max(split) < n
            assert all(stage({2, 5}, k) is not None for k in split)
