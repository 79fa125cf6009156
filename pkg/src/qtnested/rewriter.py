"""Admissible rules as proof transformations, and cut elimination.

Every function here takes layout-coherent proofs and returns a
layout-coherent proof whose conclusion is stated in the docstring.  None of
them checks its output; the test-suite runs the kernel checker on results.
"""

from __future__ import annotations

from dataclasses import dataclass

from .completion import decompose
from .formula import And, Atom, Box, Dia, Formula, NegAtom, Or, degree, negate
from .kernel import (
    AndR,
    BoxR,
    Cut,
    DiaK,
    Family,
    Id,
    OrR,
    Proof,
    RuleError,
    SystemSpec,
    identity_map,
    premises_of,
    transport,
)
from .sequent import EMPTY, Path, Sequent, seq


class TransformError(ValueError):
    """A transformation's precondition does not hold."""


# ---------------------------------------------------------------------------
# weakening, lifting and structural moves (all replays via ``transport``)


def weaken(p: Proof, at: Path, extra: Sequent) -> Proof:
    """Proof of ``p.conclusion`` with ``extra`` merged into the node at ``at``."""
    if not extra.formulas and not extra.children:
        return p
    return transport(p, p.conclusion.plug(at, extra), identity_map(p.conclusion))


def weaken_formula(p: Proof, at: Path, f: Formula) -> Proof:
    return weaken(p, at, seq(f))


def lift(p: Proof, wrapper: Sequent, at: Path) -> Proof:
    """Embed ``p`` at node ``at`` of ``wrapper``: proof of ``wrapper{p.conclusion}``."""
    base = len(wrapper.at(at).children)
    m = {}
    for q in p.conclusion.paths():
        m[q] = at if not q else at + (base + q[0],) + q[1:]
    return transport(p, wrapper.plug(at, p.conclusion), m)


def merge_boxes(p: Proof, parent: Path, source: int, target: int) -> Proof:
    """Move the content of child ``source`` of ``parent`` into child ``target``.

    Conclusion: ``p.conclusion`` without that child, its formulas and
    children appended to the target child.  Height preserving.
    """
    s = p.conclusion
    node = s.at(parent)
    if source == target or not (0 <= source < len(node.children)) or not (0 <= target < len(node.children)):
        raise TransformError(f"cannot merge child {source} into {target} at {list(parent)}")
    src = node.children[source]
    tgt = node.children[target]
    new_target = target - (target > source)
    merged = Sequent(tgt.formulas + src.formulas, tgt.children + src.children)
    kids = list(node.children)
    kids[target] = merged
    del kids[source]
    new = s.replace_at(parent, Sequent(node.formulas, tuple(kids)))
    d = len(parent)
    t0 = len(tgt.children)
    m = {}
    for q in s.paths():
        if len(q) <= d or q[:d] != parent:
            m[q] = q
            continue
        i = q[d]
        rest = q[d + 1 :]
        if i == source:
            m[q] = parent + (new_target,) + ((t0 + rest[0],) + rest[1:] if rest else ())
        else:
            m[q] = parent + (i - (i > source),) + rest
    return transport(p, new, m)


def deepen(p: Proof, source: Path, n: int) -> Proof:
    """Push the child at ``source`` down under n-1 fresh empty boxes.

    Propagation rules whose spine crosses into the child grow by n-1, so the
    result needs DiaK(k+n-1) wherever ``p`` used DiaK(k) into it.
    """
    if n < 1 or not source:
        raise TransformError("deepen needs n >= 1 and a non-root source")
    if n == 1:
        return p
    s = p.conclusion
    child = s.at(source)
    nested = child
    for _ in range(n - 1):
        nested = Sequent((), (nested,))
    new = s.replace_at(source, nested)
    pad = (0,) * (n - 1)
    d = len(source)
    m = {q: (q[:d] + pad + q[d:] if q[:d] == source else q) for q in s.paths()}
    return transport(p, new, m)


def boxtimes(p: Proof, n: int, merge_source: Path, spine: Path, sys: SystemSpec) -> Proof:
    """Structural rule: move box ``merge_source`` into the depth-n node ``spine``.

    ``merge_source`` is ``parent + (j,)`` and ``spine`` is an absolute path
    ``parent + (k1, ..., kn)`` not passing through child j.  The conclusion is
    ``p.conclusion`` without that box and with its content merged at the end
    of the spine.  Indices of the raw axiom set are handled directly; other
    members of the completion are split as n = m + l - 1.
    """
    if sys.family is not Family.K:
        raise TransformError("boxtimes is defined for the DiaK family")
    parent, j = merge_source[:-1], merge_source[-1]
    if spine[: len(parent)] != parent or len(spine) - len(parent) != n:
        raise TransformError("spine must descend exactly n steps from the parent of the moved box")
    if spine[len(parent)] == j:
        raise TransformError("spine passes through the moved box")
    if n != 1 and not sys.admits_index(n):
        raise TransformError(f"index {n} is not admitted by {sys.describe()}")
    if n == 1 or n in sys.axioms:
        return _push_down(p, merge_source, spine, n, n)
    m, l = decompose(sys.axioms, n)
    # move the box next to the depth-m node of the spine, then let the l-rule finish
    p = _push_down(p, merge_source, spine, m, m - 1)
    d = len(parent)
    spine = parent + (spine[d] - (spine[d] > j),) + spine[d + 1 :]
    mid = spine[: d + m - 1]
    k = len(p.conclusion.at(mid).children) - 1
    return boxtimes(p, l, mid + (k,), spine, sys)


def _push_down(p: Proof, source: Path, spine: Path, n: int, levels: int) -> Proof:
    """Deepen the box at ``source`` by n, then merge its first ``levels`` boxes into the spine."""
    parent, j = source[:-1], source[-1]
    p = deepen(p, source, n)
    node, src = parent, j
    for level in range(levels):
        tgt = spine[len(parent) + level]
        p = merge_boxes(p, node, src, tgt)
        node = node + (tgt - (tgt > src),)
        # the rest of the moved chain is now the last child of the merged node
        src = len(p.conclusion.at(node).children) - 1
    return p


# ---------------------------------------------------------------------------
# inversion


def invert(p: Proof, which: str, at: Path, f: Formula, side: int = 0) -> Proof:
    """Inverse rules: ``which`` is "or", "and" (with ``side`` 0/1) or "box".

    "or":  proof of C with ``f = A | B`` replaced by A, B at ``at``
    "and": ... replaced by the chosen conjunct
    "box": ... with ``f = []A`` replaced by a new last child [A] at ``at``
    Height and cut-rank preserving.
    """
    s = p.conclusion
    node = s.at(at)
    if f not in node.formulas:
        raise TransformError(f"{f} not present at {list(at)}")
    base = s.without_formula(at, f)
    if which == "or":
        if not isinstance(f, Or):
            raise TransformError("or-inversion needs a disjunction")
        new = base.with_formulas(at, (f.left, f.right))
        kind = "OrR"
    elif which == "and":
        if not isinstance(f, And):
            raise TransformError("and-inversion needs a conjunction")
        new = base.with_formulas(at, (f.right if side else f.left,))
        kind = "AndR"
    elif which == "box":
        if not isinstance(f, Box):
            raise TransformError("box-inversion needs a box")
        new = base.with_child(at, seq(f.body))
        kind = "BoxR"
    else:
        raise TransformError(f"unknown inversion {which!r}")
    k0 = len(node.children)

    def hook(q: Proof, new_q: Sequent, m):
        r = q.rule
        if r.name != kind or r.position != at or r.principal != f:
            return None
        if kind == "BoxR":
            old_child = at + (len(q.conclusion.at(at).children),)
            mm = dict(m)
            mm[old_child] = m[at] + (k0,)
            return transport(q.premises[0], new_q, mm)
        return transport(q.premises[side if kind == "AndR" else 0], new_q, m)

    return transport(p, new, identity_map(s), hook)


def invert_rule(p: Proof, r, position_formula_sequent: Sequent | None = None) -> list[Proof]:
    """Proofs of each premise of ``r`` applied to ``p.conclusion`` (all admissible)."""
    s = p.conclusion
    if r.name == "OrR":
        return [invert(p, "or", r.position, r.principal)]
    if r.name == "AndR":
        return [invert(p, "and", r.position, r.principal, 0), invert(p, "and", r.position, r.principal, 1)]
    if r.name == "BoxR":
        return [invert(p, "box", r.position, r.principal)]
    if r.name in ("DiaK", "Dia4"):
        added = r.principal.body if r.name == "DiaK" else r.principal
        return [weaken_formula(p, r.target, added)]
    if r.name == "Cut":
        return [weaken_formula(p, r.position, r.cut_formula), weaken_formula(p, r.position, negate(r.cut_formula))]
    if r.name == "Id":
        return []
    raise TransformError(f"no inverse for {r.name}")


def dia_inv(p: Proof, which: str, at: Path, f: Formula, spine: Path = (), side: int = 0) -> Proof:
    """Inverses that are weakenings.

    ``which="diak"``: ``f = <>A`` at ``at``; adds A at the end of ``spine``.
    ``which="cut"``: adds ``f`` (side 0) or its negation (side 1) at ``at``.
    """
    if which == "diak":
        if not isinstance(f, Dia) or f not in p.conclusion.at(at).formulas:
            raise TransformError(f"{f} is not a diamond present at {list(at)}")
        if not p.conclusion.has_path(at + tuple(spine)):
            raise TransformError("spine does not resolve")
        return weaken_formula(p, at + tuple(spine), f.body)
    if which == "cut":
        return weaken_formula(p, at, negate(f) if side else f)
    raise TransformError(f"unknown inverse {which!r}")


# ---------------------------------------------------------------------------
# contraction


def contract_formula(p: Proof, at: Path, f: Formula) -> Proof:
    """From a proof of C with two copies of ``f`` at ``at``, a proof with one."""
    s = p.conclusion
    node = s.at(at)
    if sum(1 for g in node.formulas if g == f) < 2:
        raise TransformError(f"{f} does not occur twice at {list(at)}")
    new = s.without_formula(at, f)
    r = p.rule
    principal_here = r.position == at and r.principal == f
    if principal_here and r.name == "OrR":
        q = invert(p.premises[0], "or", at, f)
        q = contract_formula(q, at, f.left)
        q = contract_formula(q, at, f.right)
        return Proof(new, r, (q,))
    if principal_here and r.name == "AndR":
        out = []
        for side, part in ((0, f.left), (1, f.right)):
            q = invert(p.premises[side], "and", at, f, side)
            out.append(contract_formula(q, at, part))
        return Proof(new, r, tuple(out))
    if principal_here and r.name == "BoxR":
        q = invert(p.premises[0], "box", at, f)
        k = len(q.conclusion.at(at).children)
        q = merge_boxes(q, at, k - 1, k - 2)
        q = contract_formula(q, at + (k - 2,), f.body)
        return Proof(new, r, (q,))
    expected = premises_of(new, r)
    prem = tuple(contract_formula(q, at, f) for q in p.premises)
    for e, q in zip(expected, prem):
        if e != q.conclusion:
            raise TransformError("contraction lost layout coherence")
    if r.name == "Id":
        return Proof(new, r)
    return Proof(new, r, prem)


def contract(p: Proof, at: Path, dup: Sequent) -> Proof:
    """From a proof of C{dup, dup} at ``at``, a proof of C{dup}.  Height preserving."""
    for child in dup.children:
        node = p.conclusion.at(at)
        idx = [i for i, c in enumerate(node.children) if c == child]
        if len(idx) < 2:
            raise TransformError(f"child [{child}] does not occur twice at {list(at)}")
        keep, drop = idx[-2], idx[-1]
        p = merge_boxes(p, at, drop, keep)
        p = contract(p, at + (keep - (keep > drop),), child)
    for f in dup.formulas:
        p = contract_formula(p, at, f)
    return p


# ---------------------------------------------------------------------------
# generalised identity


def gid_proof(ctx: Sequent, at: Path, a: Formula) -> Proof:
    """Cut-free proof of ``ctx`` with ``a`` and its negation added at ``at``."""
    na = negate(a)
    s = ctx.with_formulas(at, (a, na))
    if isinstance(a, (Atom, NegAtom)):
        return Proof(s, Id(at, a))
    if isinstance(a, (Dia, Or)):
        a, na = na, a
    if isinstance(a, Box):
        # the box opens a child, the diamond moves its body into it
        k = len(ctx.at(at).children)
        opened = s.without_formula(at, a).with_child(at, seq(a.body))
        inner = gid_proof(ctx.with_formulas(at, (na,)).with_child(at, EMPTY), at + (k,), a.body)
        return _mk(s, BoxR(at, a), _mk(opened, DiaK(at, na, (k,)), inner))
    # a is a conjunction, na the dual disjunction
    split = ctx.with_formulas(at, (a, na.left, na.right))
    left = gid_proof(ctx.with_formulas(at, (na.right,)), at, a.left)
    right = gid_proof(ctx.with_formulas(at, (na.left,)), at, a.right)
    return _mk(s, OrR(at, na), _mk(split, AndR(at, a), left, right))


def _mk(conclusion: Sequent, rule, *premises: Proof) -> Proof:
    """A node whose premises may list formulas in a different order."""
    expected = premises_of(conclusion, rule)
    if len(expected) != len(premises):
        raise TransformError(f"{rule.label()} expects {len(expected)} premises")
    return Proof(conclusion, rule, tuple(_align_to(q, e) for q, e in zip(premises, expected)))


def _align_to(p: Proof, target: Sequent) -> Proof:
    """Swap in ``target`` as conclusion when it differs only in formula order."""
    if p.conclusion is target:
        return p
    if p.conclusion != target:
        raise TransformError(f"internal mismatch: {p.conclusion} vs {target}")
    return Proof(target, p.rule, p.premises)


# ---------------------------------------------------------------------------
# cut elimination


@dataclass
class CutStats:
    reductions: int = 0
    passes: int = 0


class _Reducer:
    def __init__(self, sys: SystemSpec, limit: int, stats: CutStats):
        if sys.family is not Family.K:
            raise TransformError("cut elimination is implemented for the DiaK family")
        self.sys = sys
        self.limit = limit  # cuts of degree below this are kept
        self.stats = stats

    def cut(self, ctx: Sequent, pos: Path, a: Formula, pa: Proof, pna: Proof) -> Proof:
        """A proof of ``ctx`` from proofs of ctx{a} and ctx{~a} at ``pos``."""
        if degree(a) < self.limit:
            la = ctx.with_formulas(pos, (a,))
            lna = ctx.with_formulas(pos, (negate(a),))
            return Proof(ctx, Cut(pos, a), (_align_to(pa, la), _align_to(pna, lna)))
        return self.reduce(ctx, pos, a, pa, pna)

    def reduce(self, ctx: Sequent, pos: Path, a: Formula, pa: Proof, pna: Proof) -> Proof:
        self.stats.reductions += 1
        na = negate(a)
        # identity axioms
        for this, other, f in ((pa, pna, a), (pna, pa, na)):
            if this.rule.name == "Id":
                return self._from_axiom(ctx, pos, f, this, other)
        # propositional cut formulas: invert both sides
        if isinstance(a, (And, Or)):
            disj, pd, conj, pc = (a, pa, na, pna) if isinstance(a, Or) else (na, pna, a, pa)
            b, c = disj.left, disj.right
            both = invert(pd, "or", pos, disj)  # ctx, b, c
            nb = invert(pc, "and", pos, conj, 0)  # ctx, ~b
            nc = invert(pc, "and", pos, conj, 1)  # ctx, ~c
            ctx_b = ctx.with_formulas(pos, (b,))
            no_c = self.cut(ctx_b, pos, c, both, weaken_formula(nc, pos, b))
            return self.cut(ctx, pos, b, no_c, nb)
        if isinstance(a, (Atom, NegAtom)):
            return self._commute(ctx, pos, a, pa, pna)
        # modal cut formula: look at the diamond side
        dia, pdia, pbox = (a, pa, pna) if isinstance(a, Dia) else (na, pna, pa)
        r = pdia.rule
        if r.name == "DiaK" and r.position == pos and r.principal == dia:
            return self._modal(ctx, pos, dia, pdia, pbox)
        if r.name == "Dia4":
            raise TransformError("Dia4 rules are outside the DiaK family")
        if pdia is pa:
            return self._commute(ctx, pos, a, pa, pna)
        return self._commute(ctx, pos, na, pna, pa)

    def _from_axiom(self, ctx, pos, f, axiom: Proof, other: Proof) -> Proof:
        r = axiom.rule
        try:
            premises_of(ctx, r)
            return Proof(ctx, r)
        except RuleError:
            pass
        # the axiom uses the cut formula itself; its partner already sits in ctx
        partner = negate(f)
        if r.position != pos or not isinstance(f, (Atom, NegAtom)):
            raise TransformError("identity axiom does not involve the cut formula")
        return contract_formula(other, pos, partner)

    def _commute(self, ctx, pos, a, pa: Proof, pna: Proof) -> Proof:
        """The last rule of ``pa`` leaves ``a`` alone: permute the cut above it."""
        r = pa.rule
        ctx_prem = premises_of(ctx, r)
        others = invert_rule(pna, r)
        out = []
        for c, q, o in zip(ctx_prem, pa.premises, others):
            out.append(self.cut(c, pos, a, q, o))
        return Proof(ctx, r, tuple(out))

    def _modal(self, ctx, pos, dia: Dia, pdia: Proof, pbox: Proof) -> Proof:
        """Diamond side ends in a propagation rule on the cut formula."""
        r = pdia.rule
        box = negate(dia)
        b = dia.body
        nb = box.body
        target = r.target
        n = r.n
        # box side: open the box and carry its body down the spine
        opened = invert(pbox, "box", pos, box)
        k = len(ctx.at(pos).children)
        carried = boxtimes(opened, n, pos + (k,), target, self._sys_completed())
        # diamond side: same cut one step higher, with b present at the target
        raised = weaken_formula(pbox, target, b)
        ctx_b = ctx.with_formulas(target, (b,))
        with_b = self.cut(ctx_b, pos, dia, pdia.premises[0], raised)
        ctx_nb = ctx.with_formulas(target, (nb,))
        return self.cut(ctx, target, b, with_b, _align_to(carried, ctx_nb))

    def _sys_completed(self) -> SystemSpec:
        return self.sys.with_(completed=True)


def reduce_cut_rank(p: Proof, sys: SystemSpec, stats: CutStats | None = None, keep_below: int | None = None) -> Proof:
    """Remove every cut of the maximal degree, creating only cuts of lower degree.

    Cuts are replaced topmost first.  With ``keep_below=0`` all cuts are
    removed in one pass.
    """
    stats = stats or CutStats()
    top = p.cut_rank if keep_below is None else keep_below
    if p.cut_count == 0 or (keep_below is None and top == 0):
        return p
    red = _Reducer(sys, top, stats)
    memo: dict[int, Proof] = {}

    def go(q: Proof) -> Proof:
        key = id(q)
        if key in memo:
            return memo[key]
        if q.cut_count == 0 or (q.cut_rank < top and keep_below is None):
            memo[key] = q
            return q
        prem = tuple(go(x) for x in q.premises)
        r = q.rule
        if r.name == "Cut" and degree(r.cut_formula) >= top:
            out = red.reduce(q.conclusion, r.position, r.cut_formula, prem[0], prem[1])
        else:
            out = Proof(q.conclusion, r, prem)
        memo[key] = out
        return out

    stats.passes += 1
    return go(p)


def eliminate_cuts(p: Proof, sys: SystemSpec, stats: CutStats | None = None) -> Proof:
    """Cut-free proof of the same conclusion (rank by rank, then degree-0 cuts)."""
    stats = stats if stats is not None else CutStats()
    while p.cut_rank > 0:
        before = p.cut_rank
        p = reduce_cut_rank(p, sys, stats)
        if p.cut_rank >= before:
            raise AssertionError("cut rank did not drop")
    if p.cut_count:
        p = reduce_cut_rank(p, sys, stats, keep_below=0)
    return p
