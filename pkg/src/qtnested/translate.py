"""Translations between proof systems.

* Hilbert-style derivations (K plus 4_n axioms) into nested proofs with cut.
* DiaK(n) propagation into the Dia4 family (one Dia4, one DiaK(1), a weakening).
* Dia4(n) for completion indices outside the raw axiom set into raw indices.
"""

from __future__ import annotations

import itertools
from dataclasses import dataclass

from .completion import axiom_set, completion_contains, decompose
from .formula import (
    And,
    Atom,
    Box,
    Dia,
    Formula,
    NegAtom,
    Or,
    box_n,
    format_formula,
    implies,
    negate,
    parse_formula,
)
from .kernel import (
    AndR,
    BoxR,
    Cut,
    Dia4,
    DiaK,
    OrR,
    Proof,
    RuleError,
    identity_map,
    transport,
)
from .rewriter import _align_to, _mk, gid_proof, invert, lift, weaken_formula
from .sequent import EMPTY, Path, Sequent, seq


class HilbertError(ValueError):
    pass


# ---------------------------------------------------------------------------
# Hilbert derivations


@dataclass(frozen=True)
class Taut:
    formula: Formula

    @property
    def conclusion(self) -> Formula:
        return self.formula


@dataclass(frozen=True)
class AxiomK:
    a: Formula
    b: Formula

    @property
    def conclusion(self) -> Formula:
        return implies(Box(implies(self.a, self.b)), implies(Box(self.a), Box(self.b)))


@dataclass(frozen=True)
class Axiom4n:
    """The instance <>~a | []^n a, i.e. []a -> []^n a, dual to <>^n A -> <>A."""

    n: int
    a: Formula

    @property
    def conclusion(self) -> Formula:
        return Or(Dia(negate(self.a)), box_n(self.n, self.a))


@dataclass(frozen=True)
class MP:
    imp: object
    ant: object

    @property
    def conclusion(self) -> Formula:
        i = self.imp.conclusion
        a = self.ant.conclusion
        if not isinstance(i, Or) or i.left != negate(a):
            raise HilbertError(f"modus ponens: {format_formula(i)} is not an implication from {format_formula(a)}")
        return i.right


@dataclass(frozen=True)
class Nec:
    sub: object

    @property
    def conclusion(self) -> Formula:
        return Box(self.sub.conclusion)


HilbertProof = Taut | AxiomK | Axiom4n | MP | Nec


def _literal(f: Formula):
    """Propositional variable and polarity with modal formulas kept opaque."""
    match f:
        case Atom(i):
            return f"a{i}", True
        case NegAtom(i):
            return f"a{i}", False
        case Box():
            return f.key, True
        case Dia():
            return negate(f).key, False
    return None


def is_tautology(f: Formula, max_vars: int = 20) -> bool:
    """Truth-table check with maximal modal subformulas as opaque variables."""
    names: list[str] = []
    stack = [f]
    while stack:
        g = stack.pop()
        lit = _literal(g)
        if lit is not None:
            if lit[0] not in names:
                names.append(lit[0])
        else:
            stack += (g.left, g.right)
    if len(names) > max_vars:
        raise HilbertError(f"too many propositional variables ({len(names)}) for a truth table")

    def ev(g: Formula, val) -> bool:
        lit = _literal(g)
        if lit is not None:
            return val[lit[0]] == lit[1]
        if isinstance(g, And):
            return ev(g.left, val) and ev(g.right, val)
        return ev(g.left, val) or ev(g.right, val)

    for bits in itertools.product((False, True), repeat=len(names)):
        if not ev(f, dict(zip(names, bits))):
            return False
    return True


def tautology_proof(f: Formula) -> Proof:
    """Cut-free proof of the sequent ``f`` using only propositional rules and gid."""
    if not is_tautology(f):
        raise HilbertError(f"{format_formula(f)} is not a propositional tautology")
    return _prop_search(seq(f))


def _prop_search(s: Sequent) -> Proof:
    for g in s.formulas:
        if isinstance(g, Or):
            prem = s.without_formula((), g).with_formulas((), (g.left, g.right))
            return _mk(s, OrR((), g), _prop_search(prem))
    for g in s.formulas:
        if isinstance(g, And):
            base = s.without_formula((), g)
            return _mk(
                s,
                AndR((), g),
                _prop_search(base.with_formulas((), (g.left,))),
                _prop_search(base.with_formulas((), (g.right,))),
            )
    present = set(s.formulas)
    for g in s.formulas:
        ng = negate(g)
        if ng in present and (isinstance(g, (Atom, Box))):
            ctx = s.without_formula((), g).without_formula((), ng)
            return _align_to(gid_proof(ctx, (), g), s)
    raise HilbertError(f"propositional search failed on {s}")


def derive_axiom_4n(n: int, a: Formula) -> Proof:
    """Cut-free proof of ``<>~a | []^n a``: OrR, n BoxR steps, DiaK(n), gid."""
    if n < 1:
        raise ValueError("n must be at least 1")
    na = negate(a)
    dia = Dia(na)
    goal = Or(dia, box_n(n, a))
    s = seq(goal)
    cur = s.without_formula((), goal).with_formulas((), (dia, box_n(n, a)))
    chain = [cur]
    rules = [OrR((), goal)]
    for i in range(n):
        path = (0,) * i
        b = box_n(n - i, a)
        rules.append(BoxR(path, b))
        cur = cur.without_formula(path, b).with_child(path, seq(b.body))
        chain.append(cur)
    deep = (0,) * n
    rules.append(DiaK((), dia, deep))
    top = gid_proof(cur.without_formula(deep, a), deep, a)
    proof = top
    for concl, rule in zip(reversed([s] + chain), reversed(rules)):
        proof = _mk(concl, rule, proof)
    return proof


def axiom_k_proof(a: Formula, b: Formula) -> Proof:
    """Cut-free proof of [](a -> b) -> ([]a -> []b) from a fixed template."""
    goal = AxiomK(a, b).conclusion  # <>(a & ~b) | (<>~a | []b)
    d1, rest = goal.left, goal.right
    d2, bx = rest.left, rest.right
    s0 = seq(goal)
    s1 = seq(d1, rest)
    s2 = seq(d1, d2, bx)
    s3 = Sequent((d1, d2), (seq(b),))
    s4 = s3.with_formulas((0,), (d1.body,))
    s5 = s4.with_formulas((0,), (d2.body,))
    conj = d1.body
    left_ctx = Sequent((d1, d2), (seq(b),))
    right_ctx = Sequent((d1, d2), (seq(d2.body),))
    left = gid_proof(left_ctx, (0,), a)  # a with ~a
    right = gid_proof(right_ctx, (0,), b)  # b with ~b
    and_node = _mk(s5, AndR((0,), conj), left, right)
    p5 = _mk(s4, DiaK((), d2, (0,)), and_node)
    p4 = _mk(s3, DiaK((), d1, (0,)), p5)
    p3 = _mk(s2, BoxR((), bx), p4)
    p2 = _mk(s1, OrR((), rest), p3)
    return _mk(s0, OrR((), goal), p2)


def lift_into_context(p: Proof, wrapper: Sequent, at: Path) -> Proof:
    return lift(p, wrapper, at)


def hilbert_to_nested(h, x) -> Proof:
    """Proof (with cuts) of the one-formula sequent of ``h``'s conclusion.

    The result lives in the raw DiaK system over ``x`` with cut.
    """
    xs = axiom_set(x)
    memo: dict[int, Proof] = {}

    def go(h) -> Proof:
        if id(h) in memo:
            return memo[id(h)]
        match h:
            case Taut(f):
                out = tautology_proof(f)
            case AxiomK(a, b):
                out = axiom_k_proof(a, b)
            case Axiom4n(n, a):
                if n != 1 and n not in xs:
                    raise HilbertError(f"axiom 4_{n} is not in the axiom set {sorted(xs)}")
                out = derive_axiom_4n(n, a)
            case MP(imp, ant):
                b = h.conclusion
                a = ant.conclusion
                pi = invert(go(imp), "or", (), imp.conclusion)  # ~a, b
                pa = weaken_formula(go(ant), (), b)  # a, b
                out = _mk(seq(b), Cut((), a), pa, pi)
            case Nec(sub):
                inner = lift(go(sub), Sequent((), (EMPTY,)), (0,))  # [A]
                out = _mk(seq(h.conclusion), BoxR((), h.conclusion), inner)
            case _:
                raise HilbertError(f"not a Hilbert step: {h!r}")
        memo[id(h)] = out
        return out

    return go(h)


def hilbert_from_json(d) -> object:
    if not isinstance(d, dict) or "step" not in d:
        raise HilbertError("each Hilbert step must be an object with a 'step' field")
    step = d["step"]
    try:
        if step == "taut":
            return Taut(parse_formula(d["formula"]))
        if step == "axK":
            return AxiomK(parse_formula(d["a"]), parse_formula(d["b"]))
        if step == "ax4":
            return Axiom4n(int(d["n"]), parse_formula(d["a"]))
        if step == "mp":
            return MP(hilbert_from_json(d["imp"]), hilbert_from_json(d["ant"]))
        if step == "nec":
            return Nec(hilbert_from_json(d["sub"]))
    except KeyError as e:
        raise HilbertError(f"step {step!r} is missing field {e}") from None
    raise HilbertError(f"unknown Hilbert step {step!r}")


def hilbert_to_json(h) -> dict:
    f = format_formula
    match h:
        case Taut(g):
            return {"step": "taut", "formula": f(g)}
        case AxiomK(a, b):
            return {"step": "axK", "a": f(a), "b": f(b)}
        case Axiom4n(n, a):
            return {"step": "ax4", "n": n, "a": f(a)}
        case MP(i, a):
            return {"step": "mp", "imp": hilbert_to_json(i), "ant": hilbert_to_json(a)}
        case Nec(s):
            return {"step": "nec", "sub": hilbert_to_json(s)}
    raise HilbertError(f"not a Hilbert step: {h!r}")


def check_hilbert(h, x=None) -> Formula:
    """Validate every step; returns the conclusion."""
    match h:
        case Taut(f):
            if not is_tautology(f):
                raise HilbertError(f"{format_formula(f)} is not a tautology")
        case Axiom4n(n, _):
            if x is not None and n != 1 and n not in axiom_set(x):
                raise HilbertError(f"axiom 4_{n} is not in {sorted(axiom_set(x))}")
        case MP(i, a):
            check_hilbert(i, x)
            check_hilbert(a, x)
        case Nec(s):
            check_hilbert(s, x)
    return h.conclusion


# ---------------------------------------------------------------------------
# DiaK family to Dia4 family


def k_to_4(p: Proof) -> Proof:
    """Replace each DiaK(n), n > 1, by Dia4(n), DiaK(1) and a weakening."""
    memo: dict[int, Proof] = {}

    def go(q: Proof) -> Proof:
        if id(q) in memo:
            return memo[id(q)]
        r = q.rule
        if r.name == "Cut":
            raise RuleError("k_to_4 needs a cut-free proof")
        prem = tuple(go(x) for x in q.premises)
        if r.name == "DiaK" and r.n > 1:
            mid = r.position + r.spine[:-1]
            upper = weaken_formula(prem[0], mid, r.principal)
            with_dia = q.conclusion.with_formulas(mid, (r.principal,))
            step = _mk(with_dia, DiaK(mid, r.principal, r.spine[-1:]), upper)
            out = _mk(q.conclusion, Dia4(r.position, r.principal, r.spine[:-1]), step)
        else:
            out = Proof(q.conclusion, r, prem)
        memo[id(q)] = out
        return out

    return go(p)


def collapse_completion(p: Proof, x) -> Proof:
    """Rewrite Dia4(n) with n outside ``x`` into Dia4 steps with indices in ``x``."""
    xs = axiom_set(x)
    memo: dict[int, Proof] = {}

    def emit(concl: Sequent, pos: Path, dia: Formula, spine: Path, above: Proof) -> Proof:
        n = len(spine) + 1
        if n in xs:
            return _mk(concl, Dia4(pos, dia, spine), above)
        split = decompose(xs, n)
        if split is None:
            raise RuleError(f"Dia4({n}) is not admitted by the completion of {sorted(xs)}")
        m, l = split
        mid = pos + spine[: m - 1]
        upper_concl = concl.with_formulas(mid, (dia,))
        upper = emit(upper_concl, mid, dia, spine[m - 1 :], weaken_formula(above, mid, dia))
        return emit(concl, pos, dia, spine[: m - 1], upper)

    def go(q: Proof) -> Proof:
        if id(q) in memo:
            return memo[id(q)]
        r = q.rule
        prem = tuple(go(y) for y in q.premises)
        if r.name == "Dia4":
            out = emit(q.conclusion, r.position, r.principal, r.spine, prem[0])
        else:
            out = Proof(q.conclusion, r, prem)
        memo[id(q)] = out
        return out

    return go(p)
