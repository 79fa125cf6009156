from __future__ import annotations

import pytest

from qtnested.formula import Box, Dia, Or, atom, box_n, negate, parse_formula
from qtnested.generators import chain, hilbert_corpus, random_hilbert
from qtnested.kernel import Id, Proof, RuleError, check, four_system, k_system
from qtnested.rewriter import eliminate_cuts, gid_proof
from qtnested.semantics import find_countermodel
from qtnested.sequent import EMPTY, parse_sequent, seq
from qtnested.translate import (
    MP,
    Axiom4n,
    AxiomK,
    HilbertError,
    Nec,
    Taut,
    check_hilbert,
    collapse_completion,
    derive_axiom_4n,
    hilbert_from_json,
    hilbert_to_json,
    hilbert_to_nested,
    is_tautology,
    k_to_4,
    lift_into_context,
    tautology_proof,
)

F = parse_formula
S = parse_sequent
p, q = atom("p"), atom("q")


@pytest.mark.parametrize("n", range(1, 7))
@pytest.mark.parametrize("a", ["p", "[]p", "p & q"])
def test_derive_axiom_4n(n, a):
    a = F(a)
    pr = derive_axiom_4n(n, a)
    assert pr.conclusion == seq(Or(Dia(negate(a)), box_n(n, a)))
    assert pr.is_cut_free()
    assert check(pr, k_system({n} if n > 1 else (), completed=False))


def test_derive_axiom_shape():
    pr = derive_axiom_4n(2, p)
    names = [n.rule.name for _, n in pr.walk()]
    assert names == ["OrR", "BoxR", "BoxR", "DiaK", "Id"]
    assert pr.premises[0].premises[0].premises[0].rule.n == 2
    # Id nodes have height zero, so one OrR, one BoxR and one DiaK give 3
    assert derive_axiom_4n(1, p).height == 3
    boxed = derive_axiom_4n(2, Box(q))
    assert boxed.height == pr.height + 2


def test_tautologies():
    assert is_tautology(F("p | ~p"))
    assert is_tautology(F("[]p | ~[]p"))
    assert is_tautology(F("(p -> q) -> ((q -> p) -> (p -> p))"))
    assert not is_tautology(F("p -> q"))
    assert not is_tautology(F("[]p -> p"))
    pr = tautology_proof(F("[](p & q) -> ([](p & q) | p)"))
    assert pr.is_cut_free() and check(pr, k_system())
    with pytest.raises(HilbertError):
        tautology_proof(F("p -> q"))


def test_axiom4n_step_translates_cut_free():
    pr = hilbert_to_nested(Axiom4n(2, p), {2})
    assert pr.cut_count == 0
    assert pr.conclusion == seq(F("<>~p | [][]p"))


def test_modus_ponens_gives_one_atomic_cut():
    # q | ~q from (p | ~p) -> (q | ~q) and p | ~p
    h = MP(Taut(F("(p | ~p) -> (q | ~q)")), Taut(F("p | ~p")))
    pr = hilbert_to_nested(h, ())
    assert pr.conclusion == seq(F("q | ~q"))
    assert pr.cut_count == 1
    assert pr.rule.name == "Cut" and pr.rule.cut_formula == F("p | ~p")
    assert check(pr, k_system((), completed=False, cut=True))
    with pytest.raises(HilbertError):
        check_hilbert(MP(Taut(F("p -> (q | ~q)")), Taut(F("p | ~p"))))


def test_modus_ponens_on_atom():
    # exactly one cut of rank 0 when the antecedent is atomic
    h = MP(Taut(F("(p -> p) -> ((p -> p) | q)")), Taut(F("p -> p")))
    pr = hilbert_to_nested(h, ())
    assert pr.cut_count == 1
    h = MP(Taut(F("~p | (q | ~q)")), Taut(F("p | ~p")))
    with pytest.raises(HilbertError):
        h.conclusion


def test_necessitation():
    pr = hilbert_to_nested(Nec(Taut(F("p | ~p"))), ())
    assert pr.conclusion == seq(F("[](p | ~p)"))
    assert pr.rule.name == "BoxR" and pr.is_cut_free()
    assert check(pr, k_system())


def test_lift_into_context():
    leaf = Proof(S("p, ~p"), Id((), p))
    out = lift_into_context(leaf, S("[]"), (0,))
    assert out.conclusion == S("[p, ~p]") and out.rule.position == (0,)
    out = lift_into_context(leaf, S("q, []"), (0,))
    assert out.conclusion == S("q, [p, ~p]")
    pr = derive_axiom_4n(2, p)
    lifted = lift_into_context(pr, S("[]"), (0,))
    assert lifted.conclusion == S("[<>~p | [][]p]")
    assert check(lifted, k_system({2}, completed=False))


def test_hilbert_errors():
    with pytest.raises(HilbertError):
        hilbert_to_nested(Axiom4n(3, p), {2})
    with pytest.raises(HilbertError):
        check_hilbert(Taut(F("p")))
    with pytest.raises(HilbertError):
        check_hilbert(Axiom4n(3, p), {2})


def test_hilbert_json_round_trip():
    for h, x in hilbert_corpus(4, per_set=5):
        d = hilbert_to_json(h)
        back = hilbert_from_json(d)
        assert back.conclusion == h.conclusion
        assert hilbert_to_json(back) == d
    with pytest.raises(HilbertError):
        hilbert_from_json({"step": "axK", "a": "p"})
    with pytest.raises(HilbertError):
        hilbert_from_json({"step": "bogus"})


def test_hilbert_corpus_is_well_formed():
    corpus = hilbert_corpus(0)
    assert len(corpus) >= 20
    for h, x in corpus:
        f = check_hilbert(h, x)
        assert find_countermodel(f, x, 3) is None


def test_chain_composes_implications():
    h = chain(Axiom4n(2, p), Axiom4n(2, Box(p)))
    assert h.conclusion == F("[]p -> [][][]p")
    with pytest.raises(ValueError):
        chain(Axiom4n(2, p), Axiom4n(2, q))


def _pipeline(h, x):
    pr = hilbert_to_nested(h, x)
    cf = eliminate_cuts(pr, k_system(x, cut=True))
    return pr, cf


def test_k_to_4_on_axiom_derivation():
    out = k_to_4(derive_axiom_4n(2, p))
    assert check(out, four_system({2}))
    names = [n.rule.name for _, n in out.walk()]
    assert "Dia4" in names and all(n.rule.n == 1 for _, n in out.walk() if n.rule.name == "DiaK")


def test_k_to_4_keeps_base_rules():
    pr = gid_proof(EMPTY, (), F("[]p"))
    out = k_to_4(pr)
    assert [n.rule.name for _, n in out.walk()] == [n.rule.name for _, n in pr.walk()]


def test_k_to_4_completion_index():
    pr = derive_axiom_4n(3, p)
    out = k_to_4(pr)
    assert any(n.rule.name == "Dia4" and n.rule.n == 3 for _, n in out.walk())
    assert check(out, four_system({2}, completed=True))
    assert not check(out, four_system({2}))
    with pytest.raises(RuleError):
        k_to_4(hilbert_to_nested(MP(Taut(F("(p | ~p) -> (q | ~q)")), Taut(F("p | ~p"))), ()))


def test_collapse_examples():
    out = collapse_completion(k_to_4(derive_axiom_4n(3, p)), {2})
    assert {n.rule.n for _, n in out.walk() if n.rule.name == "Dia4"} == {2}
    assert check(out, four_system({2}))
    out = collapse_completion(k_to_4(derive_axiom_4n(5, p)), {3})
    assert {n.rule.n for _, n in out.walk() if n.rule.name == "Dia4"} == {3}
    assert check(out, four_system({3}))
    raw = k_to_4(derive_axiom_4n(2, p))
    assert collapse_completion(raw, {2}).node_count == raw.node_count


def test_full_pipeline_on_chains():
    for x, h in [
        ({2}, chain(Axiom4n(2, p), Axiom4n(2, Box(p)))),
        ({3}, chain(Axiom4n(3, p), Axiom4n(3, box_n(2, p)))),
    ]:
        pr, cf = _pipeline(h, x)
        assert pr.cut_count > 0 and cf.cut_count == 0
        assert cf.conclusion == seq(h.conclusion)
        assert check(cf, k_system(x))
        final = collapse_completion(k_to_4(cf), x)
        assert final.conclusion == cf.conclusion
        assert check(final, four_system(x))
        assert final.cut_count == 0


def test_random_hilbert_derivations_translate():
    for seed in range(6):
        x = ({2}, {3}, {2, 3})[seed % 3]
        h = random_hilbert(seed, x, steps=2)
        pr = hilbert_to_nested(h, x)
        assert pr.conclusion == seq(check_hilbert(h, x))
        assert check(pr, k_system(x, completed=False, cut=True))
