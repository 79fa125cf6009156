from __future__ import annotations

import itertools

import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

from qtnested.formula import BOTTOM, Box, Or, atom
from qtnested.semantics import find_countermodel
from qtnested.formula import implies, And
from qtnested.sequent import (
    EMPTY,
    PathError,
    Sequent,
    SequentSyntaxError,
    chain_positions,
    depth_of,
    form_of,
    format_sequent,
    iso_map,
    parse_sequent,
    seq,
)
from strategies import sequents

p, q, r = atom("p"), atom("q"), atom("r")
S = parse_sequent


def test_parse_and_print():
    s = S("p, [q, [r]], []")
    assert s == seq(p, seq(q, seq(r)), EMPTY)
    assert format_sequent(s) == "p, [q, [r]], []"
    assert S("{}") == EMPTY
    assert format_sequent(EMPTY) == "{}"
    assert format_sequent(EMPTY, unicode=True) == "∅"
    assert S("[[]]") == seq(seq(EMPTY))


def test_box_formula_versus_empty_child():
    assert S("[]p") == seq(Box(p))
    assert S("[], p") == seq(EMPTY, p)
    assert S("[] []p") == seq(Box(Box(p)))


@pytest.mark.parametrize("text", ["[p", "p,", "p]", "[p,,q]", "p q"])
def test_parse_errors(text):
    with pytest.raises(SequentSyntaxError):
        S(text)


def test_plug_examples():
    assert S("p, []").plug((0,), EMPTY) == S("p, []")
    assert S("p, [q]").plug((0,), seq(r)) == S("p, [q, r]")
    a, b = atom("a"), atom("b")
    assert S("[[]]").plug((0, 0), seq(a, seq(b))) == S("[[a, [b]]]")


def test_plug_rejects_bad_path():
    with pytest.raises(PathError):
        S("p, [q]").plug((1,), seq(r))


def test_form_of_examples():
    assert form_of(EMPTY) == BOTTOM
    assert form_of(seq(p)) == Or(p, BOTTOM)
    assert form_of(S("p, [q]")) == Or(Or(p, BOTTOM), Box(Or(q, BOTTOM)))


def test_depth_of():
    assert depth_of(()) == 0
    assert depth_of((0,)) == 1
    assert depth_of((0, 2, 1)) == 3


def test_chain_positions_examples():
    assert chain_positions(S("[[]]"), (), 2) == [(0, 0)]
    assert chain_positions(S("[a], [b]"), (), 1) == [(0,), (1,)]
    assert len(chain_positions(S("[[x],[y]]"), (), 2)) == 2


def _all_paths_of_length(s: Sequent, start, n):
    # oracle: filter every tree path by prefix and length
    return sorted(t for t in s.paths() if t[: len(start)] == tuple(start) and len(t) == len(start) + n)


@given(sequents, st.integers(0, 3))
def test_chain_positions_matches_path_filter(s, n):
    for start in s.paths():
        assert sorted(chain_positions(s, start, n)) == _all_paths_of_length(s, start, n)


def test_multiset_equality_ignores_order():
    assert S("p, q, [r], [p]") == S("[p], q, [r], p")
    assert S("p, p") != S("p")
    assert S("[p, [q]], [q]") == S("[q], [[q], p]")
    assert hash(S("p, q")) == hash(S("q, p"))


def _shuffles(s: Sequent):
    for fs in itertools.permutations(s.formulas):
        for cs in itertools.permutations(s.children):
            yield Sequent(fs, cs)


@given(sequents)
def test_equality_invariant_under_reordering(s):
    for t in itertools.islice(_shuffles(s), 12):
        assert t == s
        assert S(format_sequent(t)) == s
        m = iso_map(t, s)
        assert m is not None and set(m.values()) == set(s.paths())


@given(sequents)
def test_print_parse_round_trip_keeps_layout(s):
    t = S(format_sequent(s))
    assert format_sequent(t) == format_sequent(s)


def test_plug_empty_is_identity():
    s = S("p, [q, [r]]")
    for path in s.paths():
        assert s.plug(path, EMPTY) == s


@settings(max_examples=30, deadline=None)
@given(sequents)
def test_equal_sequents_have_equivalent_forms(s):
    shuffled = Sequent(tuple(reversed(s.formulas)), tuple(reversed(s.children)))
    a, b = form_of(s), form_of(shuffled)
    iff = And(implies(a, b), implies(b, a))
    assert find_countermodel(iff, (), max_worlds=2) is None


def test_measures():
    s = S("p, [q, [r]], []")
    assert s.node_count() == 4
    assert s.depth() == 2
    assert list(s.paths()) == [(), (0,), (0, 0), (1,)]
