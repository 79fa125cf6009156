"""Backward proof search by saturation.

Each branch keeps, per node, the set of formulas that have ever been at that
node.  Propagation is skipped when the formula it would add is already in
that history, so contraction is built in.  Rule priority: Id, OrR, AndR,
BoxR, then propagation by increasing index; ties go to the first node in
preorder.  With a nonempty axiom set a node whose history is contained in
an ancestor's history is blocked from opening new boxes, which keeps the
tree finite.  An open saturated branch is turned into a Kripke model and
reported only if the model really falsifies the goal.
"""

from __future__ import annotations

import os
from dataclasses import dataclass

from .formula import And, Atom, Box, Dia, Formula, NegAtom, Or, atoms_of
from .kernel import (
    AndR,
    BoxR,
    Dia4,
    DiaK,
    Family,
    Id,
    OrR,
    Proof,
    SystemSpec,
    check,
    premises_of,
)
from .semantics import KripkeModel, close_frame, evaluate, find_countermodel
from .sequent import Path, Sequent, chain_positions, form_of, seq

DEFAULT_STEPS = 20000
DEFAULT_NODES = 400


@dataclass
class Budget:
    steps: int = DEFAULT_STEPS
    nodes: int = DEFAULT_NODES

    @classmethod
    def from_env(cls) -> Budget:
        raw = os.environ.get("QTNESTED_BUDGET")
        if not raw:
            return cls()
        try:
            return cls(steps=int(raw))
        except ValueError:
            raise ValueError(f"QTNESTED_BUDGET must be an integer, got {raw!r}") from None


@dataclass
class Proved:
    proof: Proof


@dataclass
class Refuted:
    model: KripkeModel
    world: int = 0


@dataclass
class Unknown:
    reason: str


SearchOutcome = Proved | Refuted | Unknown


class _OutOfBudget(Exception):
    pass


@dataclass
class _Open:
    sequent: Sequent
    hist: dict[Path, set[Formula]]


class _Search:
    def __init__(self, sys: SystemSpec, budget: Budget, blocking: bool):
        self.sys = sys
        self.budget = budget
        self.blocking = blocking
        self.steps = 0

    # -- rule selection -------------------------------------------------------

    def blocked(self, path: Path, hist) -> bool:
        if not self.blocking:
            return False
        mine = hist[path]
        return any(mine <= hist[path[:i]] for i in range(len(path)))

    def indices(self, depth: int) -> list[int]:
        out = [1]
        for n in range(2, depth + 2):
            if self.sys.family is Family.K and n <= depth and self.sys.admits_index(n):
                out.append(n)
            elif self.sys.family is Family.FOUR and n - 1 <= depth and self.sys.admits_index(n):
                out.append(n)
        return out

    def pick(self, s: Sequent, hist):
        paths = list(s.paths())
        nodes = [s.at(p) for p in paths]
        for p, node in zip(paths, nodes):
            present = set(node.formulas)
            for f in node.formulas:
                if isinstance(f, Atom) and NegAtom(f.id) in present:
                    return Id(p, f)
        for kind, make in ((Or, OrR), (And, AndR)):
            for p, node in zip(paths, nodes):
                for f in node.formulas:
                    if isinstance(f, kind):
                        return make(p, f)
        for p, node in zip(paths, nodes):
            for f in node.formulas:
                if isinstance(f, Box) and not self.blocked(p, hist):
                    return BoxR(p, f)
        depth = s.depth()
        for n in self.indices(depth):
            four = n > 1 and self.sys.family is Family.FOUR
            for p, node in zip(paths, nodes):
                for f in node.formulas:
                    if not isinstance(f, Dia):
                        continue
                    added = f if four else f.body
                    for tgt in chain_positions(s, p, n - 1 if four else n):
                        if added not in hist[tgt]:
                            spine = tgt[len(p) :]
                            return Dia4(p, f, spine) if four else DiaK(p, f, spine)
        return None

    # -- search ---------------------------------------------------------------

    def run(self, s: Sequent, hist) -> Proof | _Open:
        steps: list[tuple[Sequent, object]] = []
        while True:
            self.steps += 1
            if self.steps > self.budget.steps:
                raise _OutOfBudget(f"step budget {self.budget.steps} exhausted")
            r = self.pick(s, hist)
            if r is None:
                return _Open(s, hist)
            if r.name == "Id":
                proof = Proof(s, r)
                break
            prem = premises_of(s, r)
            if r.name == "AndR":
                subs = []
                for side, ps in enumerate(prem):
                    h = {k: set(v) for k, v in hist.items()}
                    h[r.position].add(r.principal.right if side else r.principal.left)
                    sub = self.run(ps, h)
                    if isinstance(sub, _Open):
                        return sub
                    subs.append(sub)
                proof = Proof(s, r, tuple(subs))
                break
            if r.name == "OrR":
                hist[r.position] |= {r.principal.left, r.principal.right}
            elif r.name == "BoxR":
                k = len(s.at(r.position).children)
                hist[r.position + (k,)] = {r.principal.body}
            else:
                added = r.principal.body if r.name == "DiaK" else r.principal
                hist[r.target].add(added)
            steps.append((s, r))
            s = prem[0]
            if s.node_count() > self.budget.nodes:
                raise _OutOfBudget(f"node budget {self.budget.nodes} exhausted")
        for concl, rule in reversed(steps):
            proof = Proof(concl, rule, (proof,))
        return proof


def _initial_hist(s: Sequent) -> dict[Path, set[Formula]]:
    return {p: set(s.at(p).formulas) for p in s.paths()}


def _search(goal: Sequent, sys: SystemSpec, budget: Budget, blocking: bool):
    return _Search(sys, budget, blocking).run(goal, _initial_hist(goal))


def extract_model(open_branch: _Open, sys: SystemSpec) -> KripkeModel:
    """Worlds are the nodes; blocked nodes borrow their ancestor's successors."""
    s, hist = open_branch.sequent, open_branch.hist
    paths = list(s.paths())
    index = {p: i for i, p in enumerate(paths)}
    edges = set()
    for p in paths:
        for k in range(len(s.at(p).children)):
            edges.add((index[p], index[p + (k,)]))
    for p in paths:
        if any(isinstance(f, Box) for f in s.at(p).formulas):
            anc = next((p[:i] for i in range(len(p)) if hist[p] <= hist[p[:i]]), None)
            if anc is not None:
                for k in range(len(s.at(anc).children)):
                    edges.add((index[p], index[anc + (k,)]))
    atoms = set()
    for p in paths:
        for f in hist[p]:
            atoms |= atoms_of(f)
    valuation = {a: frozenset(index[p] for p in paths if NegAtom(a) in hist[p]) for a in atoms}
    closed = close_frame(edges, sys.axioms, len(paths))
    return KripkeModel(len(paths), closed, valuation)


def prove(goal, sys: SystemSpec, budget: Budget | None = None, fallback_worlds: int = 3) -> SearchOutcome:
    """Search for a cut-free proof of ``goal`` (a formula or sequent) in ``sys``."""
    if sys.cut_allowed:
        raise ValueError("proof search is cut-free; use a system without cut")
    if isinstance(goal, Formula):
        goal = seq(goal)
    budget = budget or Budget.from_env()
    blocking = bool(sys.axioms)
    try:
        res = _search(goal, sys, budget, blocking)
    except _OutOfBudget as e:
        return Unknown(str(e))
    except RecursionError:
        return Unknown("search recursion too deep")
    if isinstance(res, Proof):
        report = check(res, sys)
        if not report.ok:
            raise AssertionError(f"prover produced an invalid proof: {report}")
        return Proved(res)
    f = form_of(goal)
    model = extract_model(res, sys)
    if not evaluate(model, 0, f):
        return Refuted(model, 0)
    if fallback_worlds and len(atoms_of(f)) <= 4:
        found = find_countermodel(f, sys.axioms, fallback_worlds)
        if found is not None:
            return Refuted(*found)
    return Unknown("saturated without a verified countermodel")
