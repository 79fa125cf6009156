from __future__ import annotations

import pytest
from hypothesis import HealthCheck, given, settings
from hypothesis import strategies as st

from qtnested.formula import And, Box, atom, negate, parse_formula
from qtnested.generators import random_proofs, transform_samples
from qtnested.kernel import (
    BoxR,
    Cut,
    DiaK,
    Id,
    OrR,
    Proof,
    build,
    check,
    cuts_of_rank,
    k_system,
)
from qtnested.rewriter import (
    CutStats,
    TransformError,
    boxtimes,
    contract,
    dia_inv,
    eliminate_cuts,
    gid_proof,
    invert,
    reduce_cut_rank,
    weaken,
)
from qtnested.sequent import EMPTY, parse_sequent, seq
from qtnested.translate import AxiomK, MP, Nec, Taut, derive_axiom_4n, hilbert_to_nested

S = parse_sequent
F = parse_formula
p, q, a = atom("p"), atom("q"), atom("a")
K = k_system()


def _or_id():
    return build(S("p | ~p"), OrR((), F("p | ~p")), [Proof(S("p, ~p"), Id((), p))])


# -- gid ---------------------------------------------------------------------


def test_gid_atom_is_identity():
    pr = gid_proof(EMPTY, (), p)
    assert pr.rule.name == "Id" and pr.conclusion == S("p, ~p")


def test_gid_box():
    pr = gid_proof(EMPTY, (), Box(p))
    assert pr.conclusion == S("[]p, <>~p")
    assert [n.rule.name for _, n in pr.walk()] == ["BoxR", "DiaK", "Id"]
    assert pr.height == 2
    assert check(pr, K)


def test_gid_conjunction():
    pr = gid_proof(EMPTY, (), And(p, q))
    assert pr.rule.name == "OrR" and pr.premises[0].rule.name == "AndR"
    assert all(x.rule.name == "Id" for x in pr.premises[0].premises)
    assert check(pr, K)


def test_gid_in_context():
    ctx = S("r, [s, []]")
    pr = gid_proof(ctx, (0, 0), F("<>(p & []q)"))
    assert pr.conclusion == S("r, [s, [<>(p & []q), [](~p | <>~q)]]")
    assert check(pr, K)


# -- inversion ---------------------------------------------------------------


def test_or_inversion_of_principal_step():
    out = invert(_or_id(), "or", (), F("p | ~p"))
    assert out.rule.name == "Id" and out.conclusion == S("p, ~p")
    assert out.height == 0


def test_inversion_passes_through_other_rules():
    base = _or_id()
    wide = weaken(base, (), S("q | r"))
    out = invert(wide, "or", (), F("q | r"))
    assert out.rule.name == "OrR" and out.rule.principal == F("p | ~p")
    assert out.conclusion == S("p | ~p, q, r")
    assert check(out, K)


def test_box_inversion_twice_on_axiom_derivation():
    pr = derive_axiom_4n(2, p)
    top = F("<>~p | [][]p")
    step = invert(pr, "or", (), top)
    step = invert(step, "box", (), F("[][]p"))
    step = invert(step, "box", (0,), F("[]p"))
    assert step.conclusion == S("<>~p, [[p]]")
    assert check(step, k_system({2}, completed=False))
    assert step.height == pr.height - 3


def test_and_inversion_sides():
    pr = gid_proof(EMPTY, (), And(p, q))
    left = invert(pr, "and", (), And(p, q), 0)
    right = invert(pr, "and", (), And(p, q), 1)
    assert left.conclusion == S("p, ~p | ~q")
    assert right.conclusion == S("q, ~p | ~q")
    assert check(left, K) and check(right, K)


def test_inversion_errors():
    with pytest.raises(TransformError):
        invert(_or_id(), "or", (), F("q | r"))
    with pytest.raises(TransformError):
        invert(_or_id(), "box", (), F("p | ~p"))


# -- weakening, contraction ----------------------------------------------------


def test_weaken_identity():
    out = weaken(Proof(S("p, ~p"), Id((), p)), (), seq(q))
    assert out.rule.name == "Id" and out.conclusion == S("p, ~p, q")


def test_weaken_adds_child_through_box_step():
    pr = gid_proof(EMPTY, (), Box(p))
    out = weaken(pr, (), S("[r]"))
    assert out.rule.name == "BoxR"
    assert out.conclusion == S("[]p, <>~p, [r]")
    assert check(out, K)


def test_contract_undoes_weakening():
    pr = derive_axiom_4n(2, Box(q))
    dup = S("<>~[]q | [][][]q, [[]q]")
    doubled = weaken(pr, (), dup)
    assert doubled.conclusion == S("<>~[]q | [][][]q, <>~[]q | [][][]q, [[]q]")
    # contract the formula copy only; the child occurs once
    out = contract(doubled, (), seq(F("<>~[]q | [][][]q")))
    assert out.conclusion == S("<>~[]q | [][][]q, [[]q]")
    assert out.height <= pr.height
    assert check(out, k_system({2}, completed=False))


def test_contract_children():
    pr = gid_proof(S("[], []"), (0,), p)
    pr = weaken(pr, (1,), S("p, ~p"))
    assert pr.conclusion == S("[p, ~p], [p, ~p]")
    out = contract(pr, (), S("[p, ~p]"))
    assert out.conclusion == S("[p, ~p]")
    assert check(out, K)
    with pytest.raises(TransformError):
        contract(out, (), S("[p, ~p]"))


# -- diamond and cut inverses ------------------------------------------------


def test_dia_inverse_depth_one():
    pr = gid_proof(S("<>~p, []"), (0,), q)
    out = dia_inv(pr, "diak", (), F("<>~p"), (0,))
    assert out.conclusion == S("<>~p, [q, ~q, ~p]")
    assert check(out, K)


def test_cut_inverse_is_weakening():
    pr = _or_id()
    out = dia_inv(pr, "cut", (), F("[]q"), side=0)
    assert out.conclusion == S("p | ~p, []q")
    out = dia_inv(pr, "cut", (), F("[]q"), side=1)
    assert out.conclusion == S("p | ~p, <>~q")


def test_dia_inverse_depth_two_matches_weaken():
    pr = gid_proof(S("<>~p, [[]]"), (0, 0), q)
    out = dia_inv(pr, "diak", (), F("<>~p"), (0, 0))
    direct = weaken(pr, (0, 0), seq(negate(p)))
    assert str(out.conclusion) == str(direct.conclusion)
    assert out.height == direct.height


# -- boxtimes ----------------------------------------------------------------


def test_boxtimes_on_identity():
    pr = Proof(S("[p, ~p], [[]]"), Id((0,), p))
    out = boxtimes(pr, 2, (0,), (1, 0), k_system({2}))
    assert out.conclusion == S("[[p, ~p]]")
    assert out.rule.name == "Id"


def test_boxtimes_turns_base_diamond_into_two():
    s = S("<>a, [~a], [[]]")
    pr = build(s, DiaK((), F("<>a"), (0,)), [Proof(S("<>a, [~a, a], [[]]"), Id((0,), a))])
    out = boxtimes(pr, 2, (0,), (1, 0), k_system({2}))
    assert out.conclusion == S("<>a, [[~a]]")
    assert out.rule.name == "DiaK" and out.rule.n == 2
    assert check(out, k_system({2}, completed=False))


def test_boxtimes_lengthens_deep_diamond():
    s = S("<>a, [[~a]], [[]]")
    pr = build(s, DiaK((), F("<>a"), (0, 0)), [Proof(S("<>a, [[~a, a]], [[]]"), Id((0, 0), a))])
    out = boxtimes(pr, 2, (0,), (1, 0), k_system({2}))
    assert out.conclusion == S("<>a, [[[~a]]]")
    assert out.rule.n == 3
    assert check(out, k_system({2}))
    assert not check(out, k_system({2}, completed=False))


def test_boxtimes_completion_index():
    # 5 is in the completion of {3} but not in {3}
    pr = Proof(S("[p, ~p], [[[[[]]]]]"), Id((0,), p))
    out = boxtimes(pr, 5, (0,), (1, 0, 0, 0, 0), k_system({3}))
    assert out.conclusion == S("[[[[[p, ~p]]]]]")
    with pytest.raises(TransformError):
        boxtimes(Proof(S("[p, ~p], [[[[]]]]"), Id((0,), p)), 4, (0,), (1, 0, 0, 0), k_system({3}))


# -- cut elimination -----------------------------------------------------------


def _modal_cut():
    sys_ = k_system({2}, cut=True)
    ctx = S("[[~a]], <>a")
    left = build(
        S("<>a, [[~a]], <>a"),
        DiaK((), F("<>a"), (0, 0)),
        [Proof(S("<>a, [[~a, a]], <>a"), Id((0, 0), a))],
    )
    right = build(
        S("[]~a, [[~a]], <>a"),
        BoxR((), F("[]~a")),
        [build(S("[[~a]], <>a, [~a]"), DiaK((), F("<>a"), (1,)), [Proof(S("[[~a]], <>a, [~a, a]"), Id((1,), a))])],
    )
    return build(ctx, Cut((), F("<>a")), [left, right]), sys_


def test_modal_cut_reduces_to_atomic_cut():
    pr, sys_ = _modal_cut()
    assert check(pr, sys_) and pr.cut_rank == 1
    out = reduce_cut_rank(pr, sys_)
    assert check(out, sys_)
    assert out.conclusion == pr.conclusion
    assert out.cut_rank == 0
    assert any(n.rule.name == "Cut" and n.rule.cut_formula == a for _, n in out.walk())
    final = eliminate_cuts(pr, sys_)
    assert final.cut_count == 0 and check(final, k_system({2}))


def test_no_top_rank_cuts_means_unchanged():
    pr = derive_axiom_4n(2, p)
    assert reduce_cut_rank(pr, k_system({2}, cut=True)) is pr
    assert eliminate_cuts(pr, k_system({2}, cut=True)) is pr
    assert cuts_of_rank(pr, 1) == 0


def test_propositional_cut_eliminated():
    ctx = S("p | ~p")
    left = weaken(_or_id(), (), seq(q))
    right = weaken(_or_id(), (), seq(negate(q)))
    pr = build(ctx, Cut((), q), [left, right])
    out = eliminate_cuts(pr, k_system(cut=True))
    assert out.cut_count == 0 and out.conclusion == ctx
    assert check(out, K)


def test_axiom_k_pipeline():
    h = MP(AxiomK(F("a | ~a"), F("b | ~b")), Nec(Taut(F("(a | ~a) -> (b | ~b)"))))
    pr = hilbert_to_nested(h, ())
    assert pr.cut_count >= 1
    stats = CutStats()
    out = eliminate_cuts(pr, k_system(cut=True), stats)
    assert out.cut_count == 0 and out.conclusion == pr.conclusion
    assert check(out, K)
    assert stats.reductions > 0


# -- measure contracts ----------------------------------------------------------


@pytest.fixture(scope="module")
def corpus():
    return random_proofs(21, count=60, with_cuts=15)


def test_transformers_respect_measures(corpus):
    for i, (pr, sys_) in enumerate(corpus):
        for name, before, after, out_sys in transform_samples(pr, sys_, i):
            assert check(after, out_sys), name
            assert after.cut_rank <= before.cut_rank, name
            if name != "boxtimes":
                assert after.height <= before.height, name


@settings(max_examples=25, deadline=None, suppress_health_check=[HealthCheck.function_scoped_fixture])
@given(st.integers(0, 10**6))
def test_transformers_respect_measures_random_spots(corpus, seed):
    pr, sys_ = corpus[seed % len(corpus)]
    for name, before, after, out_sys in transform_samples(pr, sys_, seed):
        assert check(after, out_sys), name
        assert after.cut_rank <= before.cut_rank
        if name != "boxtimes":
            assert after.height <= before.height
