from __future__ import annotations

import pytest
from hypothesis import given

from qtnested.formula import (
    BOTTOM,
    P0,
    TOP,
    And,
    Atom,
    Box,
    Dia,
    FormulaSyntaxError,
    NegAtom,
    Or,
    atom,
    box_n,
    degree,
    dia_n,
    format_formula,
    implies,
    modal_depth,
    negate,
    parse_formula,
)
from strategies import formulas

p, q = atom("p"), atom("q")


def test_parse_conjunction_with_negated_atom():
    assert parse_formula("p & ~p") == And(p, NegAtom(p.id))


def test_parse_pushes_negation_through_implication():
    a = atom("a")
    assert parse_formula("<>(<> a) -> <> a") == Or(Box(Box(NegAtom(a.id))), Dia(a))


def test_parse_negated_box():
    assert parse_formula("~[]p") == Dia(NegAtom(p.id))


def test_precedence_and_associativity():
    r = atom("r")
    assert parse_formula("p | q & r") == Or(p, And(q, r))
    assert parse_formula("p & q & r") == And(And(p, q), r)
    assert parse_formula("p -> q -> r") == implies(p, implies(q, r))
    assert parse_formula("[]p & q") == And(Box(p), q)


def test_unicode_spellings():
    assert parse_formula("◇◇p ⊃ ◇p") == parse_formula("<><>p -> <>p")
    assert parse_formula("□p ∧ ¬q") == parse_formula("[]p & ~q")
    assert parse_formula("p̄ ∨ q") == Or(NegAtom(p.id), q)


@pytest.mark.parametrize("text", ["p &", "(p", "p q", "->p", "P", "p ) q", ""])
def test_syntax_errors_carry_positions(text):
    with pytest.raises(FormulaSyntaxError) as e:
        parse_formula(text)
    assert 0 <= e.value.position <= len(text)


def test_negate_examples():
    assert negate(p) == NegAtom(p.id)
    assert negate(Box(p)) == Dia(NegAtom(p.id))
    assert negate(And(p, Dia(q))) == Or(NegAtom(p.id), Box(NegAtom(q.id)))


def test_degree_examples():
    assert degree(p) == 0
    assert degree(Or(Box(p), Dia(q))) == 2
    assert degree(Dia(Dia(p))) == 2
    # additive, unlike modal depth
    assert modal_depth(Or(Box(p), Dia(q))) == 1


def test_bottom_and_top_use_reserved_atom():
    assert P0 == Atom(0)
    assert BOTTOM == And(P0, NegAtom(0))
    assert TOP == Or(P0, NegAtom(0))
    assert negate(BOTTOM) == Or(NegAtom(0), P0)


def test_iterated_modalities():
    assert box_n(3, p) == Box(Box(Box(p)))
    assert dia_n(0, p) == p
    assert degree(dia_n(4, p)) == 4


@given(formulas)
def test_negate_is_involution(f):
    assert negate(negate(f)) == f


@given(formulas)
def test_degree_invariant_under_negation(f):
    assert degree(negate(f)) == degree(f)


@given(formulas)
def test_print_parse_round_trip(f):
    assert parse_formula(format_formula(f)) == f
    assert parse_formula(format_formula(f, unicode=True)) == f


@given(formulas, formulas)
def test_structural_equality_and_hash(f, g):
    assert (f == g) == (format_formula(f) == format_formula(g))
    if f == g:
        assert hash(f) == hash(g)
