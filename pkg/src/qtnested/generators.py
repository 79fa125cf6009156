"""Seeded random formulas, goals, Hilbert derivations and proof corpora."""

from __future__ import annotations

import random

from .formula import And, Box, Dia, Formula, NegAtom, Or, atom, box_n, degree, dia_n, implies, negate
from .completion import completion_upto
from .kernel import Family, Proof, SystemSpec, four_system, k_system
from .rewriter import boxtimes, contract, dia_inv, invert, weaken
from .sequent import EMPTY, Sequent, chain_positions, seq
from .translate import MP, Axiom4n, AxiomK, Nec, Taut, hilbert_to_nested

ATOM_NAMES = ("a", "b", "c", "d", "e")


def _rng(seed) -> random.Random:
    return seed if isinstance(seed, random.Random) else random.Random(seed)


def random_literal(rng: random.Random, atoms: int = 3) -> Formula:
    a = atom(ATOM_NAMES[rng.randrange(atoms)])
    return a if rng.random() < 0.5 else NegAtom(a.id)


def random_formula(seed, atoms: int = 3, max_degree: int = 4) -> Formula:
    """Random NNF formula whose (additive) degree is at most ``max_degree``."""
    rng = _rng(seed)

    def go(budget: int) -> Formula:
        if budget == 0 or rng.random() < 0.2:
            return random_literal(rng, atoms)
        roll = rng.random()
        if roll < 0.5:
            body = go(budget - 1)
            return Box(body) if rng.random() < 0.5 else Dia(body)
        left_budget = rng.randint(0, budget)
        pair = (go(left_budget), go(budget - left_budget))
        return And(*pair) if roll < 0.7 else Or(*pair)

    f = go(max_degree)
    assert degree(f) <= max_degree
    return f


def random_goal(seed, atoms: int = 3, max_degree: int = 4) -> Formula:
    """A goal formula; a share of them are shaped like quasi-transitivity instances."""
    rng = _rng(seed)
    kind = rng.random()
    if kind < 0.3:
        n = rng.randint(2, max(2, max_degree - 1))
        a = random_literal(rng, atoms)
        lhs = dia_n(n, a)
        if rng.random() < 0.5:
            return implies(lhs, Dia(a))
        return implies(Dia(a), lhs)
    if kind < 0.7:
        d = rng.randint(0, max_degree)
        return implies(random_formula(rng, atoms, d), random_formula(rng, atoms, max_degree - d))
    return random_formula(rng, atoms, max_degree)


# ---------------------------------------------------------------------------
# Hilbert derivations


def _small(rng: random.Random, atoms: int = 2) -> Formula:
    return random_formula(rng, atoms, rng.randint(0, 1))


def random_hilbert(seed, axioms, steps: int = 3, atoms: int = 2):
    """A random well-formed Hilbert derivation over the given axiom indices."""
    rng = _rng(seed)
    xs = sorted(axioms)

    def leaf():
        roll = rng.random()
        if roll < 0.5 and xs:
            return Axiom4n(rng.choice(xs), _small(rng, atoms))
        if roll < 0.75:
            return AxiomK(_small(rng, atoms), _small(rng, atoms))
        a = _small(rng, atoms)
        return Taut(implies(a, Or(a, _small(rng, atoms))))

    h = leaf()
    for _ in range(steps):
        c = h.conclusion
        roll = rng.random()
        if roll < 0.25:
            h = Nec(h)
        elif roll < 0.55 and isinstance(c, Or):
            # [](A -> B) turned into []A -> []B
            h = MP(AxiomK(negate(c.left), c.right), Nec(h))
        elif roll < 0.8 and isinstance(c, Or):
            # chain with a fresh 4_n instance whose antecedent matches the consequent
            if xs and isinstance(c.right, Box):
                h = chain(h, Axiom4n(rng.choice(xs), c.right.body))
            else:
                h = MP(Taut(implies(c, Or(c, _small(rng, atoms)))), h)
        else:
            h = MP(Taut(implies(c, Or(c, _small(rng, atoms)))), h)
    return h


def chain(h1, h2):
    """From derivations of X -> Y and Y -> Z, a derivation of X -> Z."""
    i1, i2 = h1.conclusion, h2.conclusion
    x, y, z = negate(i1.left), i1.right, i2.right
    if negate(i2.left) != y:
        raise ValueError("derivations do not compose")
    glue = Taut(implies(implies(x, y), implies(implies(y, z), implies(x, z))))
    return MP(MP(glue, h1), h2)


def hilbert_corpus(seed=0, per_set: int = 8):
    """Hilbert derivations for the axiom sets {2}, {3} and {2,3}, with the set used."""
    rng = _rng(seed)
    a = atom("a")
    out = []
    for xs in ({2}, {3}, {2, 3}):
        fixed = [Axiom4n(n, a) for n in sorted(xs)]
        n0 = min(xs)
        fixed.append(chain(Axiom4n(n0, a), Axiom4n(n0, box_n(n0 - 1, a))))
        out += [(h, xs) for h in fixed]
        for _ in range(per_set - len(fixed)):
            out.append((random_hilbert(rng, xs, steps=rng.randint(1, 3)), xs))
    return out


# ---------------------------------------------------------------------------
# proof corpora


def random_proofs(seed=0, count: int = 200, with_cuts: int = 40) -> list[tuple[Proof, SystemSpec]]:
    """Checker-valid proofs: prover output on random goals plus translated derivations with cuts."""
    from .prover import Budget, Proved, prove

    rng = _rng(seed)
    out: list[tuple[Proof, SystemSpec]] = []
    while len(out) < with_cuts:
        xs = rng.choice(({2}, {3}, {2, 3}))
        h = random_hilbert(rng, xs, steps=rng.randint(0, 2))
        out.append((hilbert_to_nested(h, xs), k_system(xs, completed=False, cut=True)))
    while len(out) < count:
        xs = rng.choice(((), (2,), (3,), (2, 3)))
        sys = k_system(xs) if rng.random() < 0.5 else four_system(xs)
        goal = random_goal(rng)
        res = prove(goal, sys, Budget(steps=3000))
        if isinstance(res, Proved):
            out.append((res.proof, sys))
    return out


# ---------------------------------------------------------------------------
# transformer samples


def _chain(n: int, inner: Sequent = EMPTY) -> Sequent:
    for _ in range(n):
        inner = Sequent((), (inner,))
    return inner


def transform_samples(
    p: Proof, sys: SystemSpec, seed=0, anywhere: bool = True
) -> list[tuple[str, Proof, Proof, SystemSpec]]:
    """Apply each admissible transformer at a random valid spot of ``p``.

    With ``anywhere`` the spot is inside a random subproof, whose conclusion
    usually has more structure than the root's.
    Returns (name, input, output, system the output must check in).  For
    contraction the input is ``p`` weakened by a copy of material already
    present, so the pair exercises a genuine duplicate.
    """
    rng = _rng(seed)
    if anywhere:
        p = rng.choice([q for _, q in p.walk()])
    s = p.conclusion
    paths = list(s.paths())
    out = []

    occ = [(q, f) for q in paths for f in dict.fromkeys(s.at(q).formulas) if isinstance(f, (Or, And, Box))]
    if occ:
        q, f = rng.choice(occ)
        which = {Or: "or", And: "and", Box: "box"}[type(f)]
        out.append((f"invert-{which}", p, invert(p, which, q, f, rng.randrange(2)), sys))

    at = rng.choice(paths)
    extra = Sequent((random_literal(rng, 2),), (seq(random_literal(rng, 2)),) if rng.random() < 0.5 else ())
    out.append(("weaken", p, weaken(p, at, extra), sys))

    at = rng.choice(paths)
    node = s.at(at)
    if node.children and rng.random() < 0.5:
        dup = Sequent((), (rng.choice(node.children),))
    elif node.formulas:
        dup = seq(rng.choice(node.formulas))
    else:
        dup = None
    if dup is not None:
        doubled = weaken(p, at, dup)
        out.append(("contract", doubled, contract(doubled, at, dup), sys))

    dias = [
        (q, f, t[len(q) :])
        for q in paths
        for f in dict.fromkeys(s.at(q).formulas)
        if isinstance(f, Dia)
        for k in range(1, 4)
        for t in chain_positions(s, q, k)
    ]
    if dias:
        q, f, spine = rng.choice(dias)
        out.append(("dia-inv", p, dia_inv(p, "diak", q, f, spine), sys))
    f = random_formula(rng, 2, 2)
    out.append(("cut-inv", p, dia_inv(p, "cut", rng.choice(paths), f, side=rng.randrange(2)), sys))

    if sys.family is Family.K and sys.axioms:
        n = rng.choice(sorted(completion_upto(sys.axioms, 5)) or sorted(sys.axioms))
        at = rng.choice(paths)
        k = len(s.at(at).children)
        mover = Sequent((random_literal(rng, 2),), ())
        q0 = weaken(p, at, Sequent((), (mover, _chain(n))))
        spine = at + (k + 1,) + (0,) * (n - 1)
        wide = sys.with_(completed=True)
        out.append(("boxtimes", q0, boxtimes(q0, n, at + (k,), spine, wide), wide))
    return out
