"""JSON and DOT encodings of proofs and Kripke models."""

from __future__ import annotations

from .formula import SYMBOLS, FormulaSyntaxError, format_formula, parse_formula
from .kernel import Proof, Rule, RuleError, build
from .semantics import KripkeModel
from .sequent import format_sequent, parse_sequent


class FormatError(ValueError):
    """Malformed input document; ``where`` locates the offending node."""

    def __init__(self, message: str, where: str = "$"):
        super().__init__(f"{where}: {message}")
        self.where = where


# ---------------------------------------------------------------------------
# proofs


def rule_to_json(r: Rule) -> dict:
    d: dict = {"name": r.name, "position": list(r.position)}
    if r.principal is not None:
        d["principal"] = format_formula(r.principal)
    if r.name in ("DiaK", "Dia4"):
        d["n"] = r.n
        d["spine"] = list(r.spine)
        d["target"] = list(r.target)
    if r.cut_formula is not None:
        d["cut_formula"] = format_formula(r.cut_formula)
    return d


def proof_to_json(p: Proof) -> dict:
    return {
        "sequent": format_sequent(p.conclusion),
        "rule": rule_to_json(p.rule),
        "premises": [proof_to_json(q) for q in p.premises],
    }


def _path(v, where: str, field: str) -> tuple[int, ...]:
    if not isinstance(v, list) or not all(isinstance(i, int) and not isinstance(i, bool) and i >= 0 for i in v):
        raise FormatError(f"{field} must be a list of non-negative integers", where)
    return tuple(v)


def _formula(v, where: str, field: str):
    if not isinstance(v, str):
        raise FormatError(f"{field} must be a formula string", where)
    try:
        return parse_formula(v)
    except FormulaSyntaxError as e:
        raise FormatError(f"{field}: {e}", where) from None


def rule_from_json(d, where: str = "$.rule") -> Rule:
    if not isinstance(d, dict):
        raise FormatError("rule must be an object", where)
    name = d.get("name")
    pos = _path(d.get("position", []), where, "position")
    principal = _formula(d["principal"], where, "principal") if "principal" in d else None
    cut = _formula(d["cut_formula"], where, "cut_formula") if "cut_formula" in d else None
    try:
        if name in ("DiaK", "Dia4"):
            if "spine" in d:
                spine = _path(d["spine"], where, "spine")
            elif "target" in d:
                tgt = _path(d["target"], where, "target")
                if tgt[: len(pos)] != pos:
                    raise FormatError("target must extend position", where)
                spine = tgt[len(pos) :]
            else:
                raise FormatError(f"{name} needs a spine or a target", where)
            n = len(spine) if name == "DiaK" else len(spine) + 1
            if "n" in d and d["n"] != n:
                raise FormatError(f"{name} index {d['n']} does not match spine length {len(spine)}", where)
            return Rule(name, pos, principal, n, spine)
        return Rule(name, pos, principal, None, (), cut)
    except RuleError as e:
        raise FormatError(str(e), where) from None


def proof_from_json(d, where: str = "$") -> Proof:
    """Rebuild a proof; sequent strings are authoritative.

    Premises that match their rule only up to reordering are re-laid out;
    premises that do not match are kept as given so the checker can report them.
    """
    if not isinstance(d, dict):
        raise FormatError("proof node must be an object", where)
    for key in ("sequent", "rule"):
        if key not in d:
            raise FormatError(f"missing field {key!r}", where)
    if not isinstance(d["sequent"], str):
        raise FormatError("sequent must be a string", where)
    try:
        concl = parse_sequent(d["sequent"])
    except FormulaSyntaxError as e:
        raise FormatError(f"sequent: {e}", where) from None
    rule = rule_from_json(d["rule"], where + ".rule")
    raw = d.get("premises", [])
    if not isinstance(raw, list):
        raise FormatError("premises must be a list", where)
    premises = [proof_from_json(q, f"{where}.premises[{i}]") for i, q in enumerate(raw)]
    try:
        return build(concl, rule, premises)
    except RuleError:
        return Proof(concl, rule, tuple(premises))


# ---------------------------------------------------------------------------
# models


def model_to_json(m: KripkeModel, world: int = 0, symbols=SYMBOLS) -> dict:
    return {
        "worlds": m.worlds,
        "edges": sorted([u, w] for u, w in m.edges),
        "valuation": {symbols.name(a): sorted(ws) for a, ws in sorted(m.valuation.items())},
        "world": world,
    }


def model_from_json(d, symbols=SYMBOLS) -> tuple[KripkeModel, int]:
    if not isinstance(d, dict):
        raise FormatError("model must be an object")
    try:
        worlds = int(d["worlds"])
        edges = {(int(u), int(w)) for u, w in d.get("edges", [])}
        valuation = {symbols.intern(k): frozenset(int(x) for x in v) for k, v in d.get("valuation", {}).items()}
        return KripkeModel(worlds, frozenset(edges), valuation), int(d.get("world", 0))
    except (KeyError, TypeError, ValueError) as e:
        raise FormatError(f"bad model: {e}") from None


def model_to_dot(m: KripkeModel, world: int = 0, symbols=SYMBOLS) -> str:
    lines = ["digraph model {"]
    for w in range(m.worlds):
        true = [symbols.name(a) for a, ws in sorted(m.valuation.items()) if w in ws]
        shape = "doublecircle" if w == world else "circle"
        label = f"{w}: {', '.join(true)}" if true else str(w)
        lines.append(f'  w{w} [shape={shape}, label="{label}"];')
    for u, w in sorted(m.edges):
        lines.append(f"  w{u} -> w{w};")
    lines.append("}")
    return "\n".join(lines)


# ---------------------------------------------------------------------------
# plain text


def proof_to_text(p: Proof, unicode: bool = True) -> str:
    """Indented tree, conclusion first, one node per line."""
    lines: list[str] = []
    stack = [(p, 0)]
    while stack:
        q, depth = stack.pop()
        lines.append(f"{'  ' * depth}{format_sequent(q.conclusion, unicode)}    ({q.rule.label()})")
        for sub in reversed(q.premises):
            stack.append((sub, depth + 1))
    return "\n".join(lines)


def model_to_text(m: KripkeModel, world: int = 0, symbols=SYMBOLS) -> str:
    lines = [f"worlds: {m.worlds} (formula false at world {world})"]
    lines.append("edges: " + (" ".join(f"{u}->{w}" for u, w in sorted(m.edges)) or "none"))
    for a, ws in sorted(m.valuation.items()):
        lines.append(f"{symbols.name(a)} true at: " + (" ".join(map(str, sorted(ws))) or "nowhere"))
    return "\n".join(lines)
