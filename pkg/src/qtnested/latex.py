"""LaTeX rendering of proofs as bussproofs trees."""

from __future__ import annotations

from .formula import SYMBOLS, And, Atom, Box, Dia, Formula, NegAtom, Or
from .kernel import Proof, Rule
from .sequent import Sequent

_PREC = {Or: 1, And: 2}


def _name(i: int, symbols) -> str:
    n = symbols.name(i)
    head = n.rstrip("0123456789")
    tail = n[len(head) :]
    return f"{head}_{{{tail}}}" if head and tail else n


def formula_latex(f: Formula, symbols=SYMBOLS) -> str:
    def prec(g):
        return _PREC.get(type(g), 3)

    def go(g: Formula) -> str:
        match g:
            case Atom(i):
                return _name(i, symbols)
            case NegAtom(i):
                return rf"\bar{{{_name(i, symbols)}}}"
            case And(l, r) | Or(l, r):
                p = prec(g)
                ls, rs = go(l), go(r)
                if prec(l) < p:
                    ls = rf"({ls})"
                if prec(r) <= p:
                    rs = rf"({rs})"
                op = r" \wedge " if isinstance(g, And) else r" \vee "
                return ls + op + rs
            case Box(b) | Dia(b):
                bs = go(b)
                if prec(b) < 3:
                    bs = f"({bs})"
                return (r"\Box " if isinstance(g, Box) else r"\Diamond ") + bs
        raise TypeError(f"not a formula: {g!r}")

    return go(f)


def sequent_latex(s: Sequent, symbols=SYMBOLS) -> str:
    def body(n: Sequent) -> str:
        items = [formula_latex(f, symbols) for f in n.formulas]
        items += ["[" + (body(c) or r"\emptyset") + "]" for c in n.children]
        return ", ".join(items)

    return body(s) or r"\emptyset"


def rule_latex(r: Rule) -> str:
    match r.name:
        case "Id":
            return r"\mathsf{id}"
        case "OrR":
            return r"\vee"
        case "AndR":
            return r"\wedge"
        case "BoxR":
            return r"\Box"
        case "DiaK":
            return r"\Diamond" if r.n == 1 else rf"\Diamond_{{k{r.n}}}"
        case "Dia4":
            return rf"\Diamond_{{4{r.n}}}"
        case "Cut":
            return r"\mathsf{cut}"
    raise ValueError(f"unknown rule {r.name}")


def proof_latex(p: Proof, symbols=SYMBOLS, standalone: bool = False) -> str:
    """bussproofs source for ``p``; ``standalone`` wraps it in a document."""
    lines: list[str] = []
    infer = {0: r"\UnaryInfC", 1: r"\UnaryInfC", 2: r"\BinaryInfC", 3: r"\TrinaryInfC"}

    def go(q: Proof):
        if not q.premises:
            lines.append(r"\AxiomC{}")
        for sub in q.premises:
            go(sub)
        lines.append(rf"\RightLabel{{\scriptsize ${rule_latex(q.rule)}$}}")
        lines.append(rf"{infer[len(q.premises)]}{{${sequent_latex(q.conclusion, symbols)}$}}")

    go(p)
    tree = "\n".join([r"\begin{prooftree}", *lines, r"\end{prooftree}"])
    if not standalone:
        return tree
    return "\n".join(
        [
            r"\documentclass{article}",
            r"\usepackage{amssymb}",
            r"\usepackage{bussproofs}",
            r"\begin{document}",
            tree,
            r"\end{document}",
        ]
    )
