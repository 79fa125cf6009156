"""Rule instances, proof trees and the proof checker.

Rules carry explicit addresses: ``position`` is the node the rule acts on,
``principal`` is the active formula (by value; any one occurrence is meant),
and propagation rules carry a relative ``spine`` of child steps leading from
``position`` to the node that receives material.

Proofs built by this package are *layout coherent*: each premise's
conclusion is exactly ``premises_of(conclusion, rule)`` including child
order, so a path valid in a conclusion stays valid in its premises.  Proofs
read from outside are only required to match up to multiset isomorphism;
``align`` converts them.
"""

from __future__ import annotations

from dataclasses import dataclass, field
from enum import Enum
from typing import Iterator

from .completion import axiom_set, completion_contains
from .formula import And, Atom, Box, Dia, Formula, NegAtom, Or, degree, negate
from .sequent import EMPTY, Path, PathError, Sequent, iso_map, same_layout, seq

RULE_NAMES = ("Id", "OrR", "AndR", "BoxR", "DiaK", "Dia4", "Cut")


class RuleError(ValueError):
    """A rule instance does not match the sequent it is applied to."""


@dataclass(frozen=True, slots=True)
class Rule:
    name: str
    position: Path = ()
    principal: Formula | None = None
    n: int | None = None
    spine: Path = ()
    cut_formula: Formula | None = None

    def __post_init__(self):
        if self.name not in RULE_NAMES:
            raise RuleError(f"unknown rule {self.name!r}")
        object.__setattr__(self, "position", tuple(self.position))
        object.__setattr__(self, "spine", tuple(self.spine))

    @property
    def target(self) -> Path:
        return self.position + self.spine

    def label(self) -> str:
        if self.name in ("DiaK", "Dia4"):
            return f"{self.name}({self.n})"
        if self.name == "Cut":
            return f"Cut({self.cut_formula})"
        return self.name


def Id(position: Path, p: Formula) -> Rule:
    if isinstance(p, NegAtom):
        p = Atom(p.id)
    return Rule("Id", position, p)


def OrR(position: Path, f: Formula) -> Rule:
    return Rule("OrR", position, f)


def AndR(position: Path, f: Formula) -> Rule:
    return Rule("AndR", position, f)


def BoxR(position: Path, f: Formula) -> Rule:
    return Rule("BoxR", position, f)


def DiaK(position: Path, f: Formula, spine: Path) -> Rule:
    return Rule("DiaK", position, f, n=len(spine), spine=spine)


def Dia4(position: Path, f: Formula, spine: Path) -> Rule:
    return Rule("Dia4", position, f, n=len(spine) + 1, spine=spine)


def Cut(position: Path, a: Formula) -> Rule:
    return Rule("Cut", position, cut_formula=a)


def _need(node: Sequent, f: Formula | None, kind, rule: Rule):
    if not isinstance(f, kind):
        raise RuleError(f"{rule.name} needs a {kind.__name__} principal, got {f}")
    if f not in node.formulas:
        raise RuleError(f"{rule.name}: principal {f} not present at {list(rule.position)}")


def premises_of(conclusion: Sequent, r: Rule) -> list[Sequent]:
    """Premises of ``r`` applied bottom-up to ``conclusion``."""
    try:
        node = conclusion.at(r.position)
    except PathError as e:
        raise RuleError(str(e)) from None
    pos = r.position
    name = r.name
    if name == "Id":
        if not isinstance(r.principal, Atom):
            raise RuleError("Id needs an atom as principal")
        if r.principal not in node.formulas or negate(r.principal) not in node.formulas:
            raise RuleError(f"Id: {r.principal} and its negation are not both at {list(pos)}")
        return []
    if name == "OrR":
        _need(node, r.principal, Or, r)
        s = conclusion.without_formula(pos, r.principal)
        return [s.with_formulas(pos, (r.principal.left, r.principal.right))]
    if name == "AndR":
        _need(node, r.principal, And, r)
        s = conclusion.without_formula(pos, r.principal)
        return [s.with_formulas(pos, (r.principal.left,)), s.with_formulas(pos, (r.principal.right,))]
    if name == "BoxR":
        _need(node, r.principal, Box, r)
        s = conclusion.without_formula(pos, r.principal)
        return [s.with_child(pos, seq(r.principal.body))]
    if name in ("DiaK", "Dia4"):
        _need(node, r.principal, Dia, r)
        if r.n is None:
            raise RuleError(f"{name} needs an index")
        want = r.n if name == "DiaK" else r.n - 1
        if name == "DiaK" and r.n < 1:
            raise RuleError("DiaK index must be at least 1")
        if name == "Dia4" and r.n < 2:
            raise RuleError("Dia4 index must exceed 1")
        if len(r.spine) != want:
            raise RuleError(f"{name}({r.n}) needs a spine of length {want}, got {len(r.spine)}")
        if not conclusion.has_path(r.target):
            raise RuleError(f"{name}: spine {list(r.spine)} does not resolve below {list(pos)}")
        added = r.principal.body if name == "DiaK" else r.principal
        return [conclusion.with_formulas(r.target, (added,))]
    if name == "Cut":
        a = r.cut_formula
        if not isinstance(a, Formula):
            raise RuleError("Cut needs a cut formula")
        return [conclusion.with_formulas(pos, (a,)), conclusion.with_formulas(pos, (negate(a),))]
    raise RuleError(f"unknown rule {name!r}")


# ---------------------------------------------------------------------------
# systems


class Family(str, Enum):
    K = "K"
    FOUR = "4"


@dataclass(frozen=True)
class SystemSpec:
    family: Family = Family.K
    axioms: frozenset[int] = frozenset()
    completed: bool = False
    cut_allowed: bool = False
    cut_rank_bound: int | None = None

    def __post_init__(self):
        object.__setattr__(self, "family", Family(self.family))
        object.__setattr__(self, "axioms", axiom_set(self.axioms))

    def admits_index(self, n: int) -> bool:
        return n in self.axioms or (self.completed and completion_contains(self.axioms, n))

    def admits(self, r: Rule) -> str | None:
        """None if ``r`` belongs to this system, else the reason it does not."""
        if r.name == "DiaK":
            if r.n == 1:
                return None
            if self.family is not Family.K:
                return f"DiaK({r.n}) is not a rule of the Dia4 family"
            if not self.admits_index(r.n):
                return f"DiaK({r.n}) index not admitted by {self.describe()}"
            return None
        if r.name == "Dia4":
            if self.family is not Family.FOUR:
                return f"Dia4({r.n}) is not a rule of the DiaK family"
            if not self.admits_index(r.n):
                return f"Dia4({r.n}) index not admitted by {self.describe()}"
            return None
        if r.name == "Cut":
            if not self.cut_allowed:
                return "cut is not allowed"
            if self.cut_rank_bound is not None and degree(r.cut_formula) > self.cut_rank_bound:
                return f"cut formula degree {degree(r.cut_formula)} exceeds bound {self.cut_rank_bound}"
        return None

    def describe(self) -> str:
        xs = ",".join(map(str, sorted(self.axioms))) or "-"
        s = f"{'DiaK' if self.family is Family.K else 'Dia4'}[{xs}]{'^' if self.completed else ''}"
        return s + ("+cut" if self.cut_allowed else "")

    def with_(self, **kw) -> SystemSpec:
        d = dict(
            family=self.family,
            axioms=self.axioms,
            completed=self.completed,
            cut_allowed=self.cut_allowed,
            cut_rank_bound=self.cut_rank_bound,
        )
        d.update(kw)
        return SystemSpec(**d)


def k_system(axioms=(), completed=True, cut=False) -> SystemSpec:
    return SystemSpec(Family.K, axioms, completed, cut)


def four_system(axioms=(), completed=False) -> SystemSpec:
    return SystemSpec(Family.FOUR, axioms, completed, False)


# ---------------------------------------------------------------------------
# proofs


@dataclass(frozen=True, eq=False)
class Proof:
    conclusion: Sequent
    rule: Rule
    premises: tuple[Proof, ...] = ()
    height: int = field(init=False)
    cut_rank: int = field(init=False)
    cut_count: int = field(init=False)
    node_count: int = field(init=False)

    def __post_init__(self):
        ps = tuple(self.premises)
        object.__setattr__(self, "premises", ps)
        object.__setattr__(self, "height", 1 + max(p.height for p in ps) if ps else 0)
        own = degree(self.rule.cut_formula) if self.rule.name == "Cut" else 0
        object.__setattr__(self, "cut_rank", max([own] + [p.cut_rank for p in ps]))
        object.__setattr__(
            self, "cut_count", (self.rule.name == "Cut") + sum(p.cut_count for p in ps)
        )
        object.__setattr__(self, "node_count", 1 + sum(p.node_count for p in ps))

    def walk(self) -> Iterator[tuple[tuple[int, ...], Proof]]:
        """Preorder (address, node) pairs; the address lists premise indices."""
        stack = [((), self)]
        while stack:
            addr, p = stack.pop()
            yield addr, p
            for i in range(len(p.premises) - 1, -1, -1):
                stack.append((addr + (i,), p.premises[i]))

    def is_cut_free(self) -> bool:
        return self.cut_count == 0


def height(p: Proof) -> int:
    return p.height


def cut_rank(p: Proof) -> int:
    return p.cut_rank


def cuts_of_rank(p: Proof, r: int) -> int:
    seen: dict[int, int] = {}

    def go(q: Proof) -> int:
        k = id(q)
        if k not in seen:
            own = int(q.rule.name == "Cut" and degree(q.rule.cut_formula) == r)
            seen[k] = own + sum(go(x) for x in q.premises)
        return seen[k]

    return go(p)


def build(conclusion: Sequent, rule: Rule, premises=()) -> Proof:
    """Make a node, checking premises against the rule and aligning layouts."""
    expected = premises_of(conclusion, rule)
    premises = list(premises)
    if len(expected) != len(premises):
        raise RuleError(f"{rule.label()} expects {len(expected)} premises, got {len(premises)}")
    out = []
    for e, p in zip(expected, premises):
        if not same_layout(e, p.conclusion):
            if e != p.conclusion:
                raise RuleError(f"{rule.label()}: premise {p.conclusion} does not match expected {e}")
            p = align(p, e)
        out.append(p)
    return Proof(conclusion, rule, tuple(out))


def map_rule(r: Rule, m) -> Rule:
    """Translate a rule's absolute addresses through the path map ``m``."""
    pos = m(r.position)
    if r.name in ("DiaK", "Dia4"):
        tgt = m(r.target)
        if tgt[: len(pos)] != pos:
            raise RuleError("path map does not preserve the spine")
        spine = tgt[len(pos) :]
        n = len(spine) if r.name == "DiaK" else len(spine) + 1
        return Rule(r.name, pos, r.principal, n, spine)
    return Rule(r.name, pos, r.principal, r.n, (), r.cut_formula)


def transport(p: Proof, new: Sequent, m: dict[Path, Path], hook=None) -> Proof:
    """Replay ``p`` over the conclusion ``new``.

    ``m`` maps every node path of ``p.conclusion`` to a node of ``new`` and
    must send children to children.  Each rule is re-addressed through ``m``
    and premises are recomputed from ``new``, so the result is layout
    coherent.  Propagation indices follow the new spine lengths.  ``hook``
    may intercept a node: called as ``hook(p, new, m)``, a non-None result
    replaces the default replay of that subtree.
    """
    if hook is not None:
        out = hook(p, new, m)
        if out is not None:
            return out
    rule = map_rule(p.rule, m.__getitem__)
    expected = premises_of(new, rule)
    mm = m
    if rule.name == "BoxR":
        old_k = len(p.conclusion.at(p.rule.position).children)
        new_k = len(new.at(rule.position).children)
        mm = dict(m)
        mm[p.rule.position + (old_k,)] = rule.position + (new_k,)
    prem = tuple(transport(q, e, mm, hook) for q, e in zip(p.premises, expected))
    return Proof(new, rule, prem)


def identity_map(s: Sequent) -> dict[Path, Path]:
    return {q: q for q in s.paths()}


def align(p: Proof, target: Sequent) -> Proof:
    """Re-express ``p`` so that it concludes exactly ``target`` (an isomorphic layout)."""
    if p.conclusion is target:
        return p
    m = iso_map(p.conclusion, target)
    if m is None:
        raise RuleError(f"cannot align {p.conclusion} with {target}")
    return transport(p, target, m)


# ---------------------------------------------------------------------------
# checking


@dataclass
class Violation:
    address: tuple[int, ...]
    reason: str

    def __str__(self) -> str:
        return f"node {list(self.address)}: {self.reason}"


@dataclass
class CheckReport:
    violations: list[Violation] = field(default_factory=list)

    @property
    def ok(self) -> bool:
        return not self.violations

    def __bool__(self) -> bool:
        return self.ok

    def __str__(self) -> str:
        return "ok" if self.ok else "; ".join(map(str, self.violations))


def check(p: Proof, sys: SystemSpec, max_violations: int | None = None) -> CheckReport:
    report = CheckReport()
    done: set[int] = set()
    stack = [((), p)]
    while stack:
        addr, node = stack.pop()
        if id(node) in done:
            continue
        done.add(id(node))
        bad = sys.admits(node.rule)
        if bad:
            report.violations.append(Violation(addr, bad))
        try:
            expected = premises_of(node.conclusion, node.rule)
        except RuleError as e:
            report.violations.append(Violation(addr, str(e)))
            expected = None
        if expected is not None:
            if len(expected) != len(node.premises):
                report.violations.append(
                    Violation(addr, f"{node.rule.label()} has {len(node.premises)} premises, expected {len(expected)}")
                )
            else:
                for i, (e, q) in enumerate(zip(expected, node.premises)):
                    if e != q.conclusion:
                        report.violations.append(
                            Violation(addr + (i,), f"premise {q.conclusion} does not match {node.rule.label()}, expected {e}")
                        )
        if max_violations is not None and len(report.violations) >= max_violations:
            break
        for i in range(len(node.premises) - 1, -1, -1):
            stack.append((addr + (i,), node.premises[i]))
    return report


def axiom_leaf(conclusion: Sequent) -> Proof | None:
    """An Id node for ``conclusion`` if some node holds a complementary pair."""
    for path in conclusion.paths():
        node = conclusion.at(path)
        keys = {f.key for f in node.formulas}
        for f in node.formulas:
            if isinstance(f, Atom) and f"n{f.id}" in keys:
                return Proof(conclusion, Id(path, f))
    return None


__all__ = [
    "EMPTY",
    "Rule",
    "RuleError",
    "Proof",
    "SystemSpec",
    "Family",
    "premises_of",
    "check",
    "build",
    "align",
    "height",
    "cut_rank",
    "cuts_of_rank",
]
