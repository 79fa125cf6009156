"""Modal formulas in negation normal form.

Negation is structural: only atoms carry it (``NegAtom``).  ``~`` and ``->``
exist only in the concrete syntax and are eliminated while parsing.
Atoms are integers; index 0 is the fixed atom ``p0`` used for bottom/top.
"""

from __future__ import annotations

import re
import threading
from dataclasses import dataclass, field
from typing import Iterator


class Formula:
    """Base class.  Equality and hashing go through a cached structural key."""

    __slots__ = ()
    key: str

    def __eq__(self, other: object) -> bool:
        return self is other or (isinstance(other, Formula) and self.key == other.key)

    def __hash__(self) -> int:
        return hash(self.key)

    def __lt__(self, other: Formula) -> bool:
        return self.key < other.key

    def __str__(self) -> str:
        return format_formula(self)


@dataclass(frozen=True, eq=False, slots=True)
class Atom(Formula):
    id: int
    key: str = field(init=False, repr=False)

    def __post_init__(self):
        if not isinstance(self.id, int) or self.id < 0:
            raise ValueError(f"atom index must be a non-negative int, got {self.id!r}")
        object.__setattr__(self, "key", f"a{self.id}")


@dataclass(frozen=True, eq=False, slots=True)
class NegAtom(Formula):
    id: int
    key: str = field(init=False, repr=False)

    def __post_init__(self):
        if not isinstance(self.id, int) or self.id < 0:
            raise ValueError(f"atom index must be a non-negative int, got {self.id!r}")
        object.__setattr__(self, "key", f"n{self.id}")


@dataclass(frozen=True, eq=False, slots=True)
class And(Formula):
    left: Formula
    right: Formula
    key: str = field(init=False, repr=False)

    def __post_init__(self):
        object.__setattr__(self, "key", f"&({self.left.key},{self.right.key})")


@dataclass(frozen=True, eq=False, slots=True)
class Or(Formula):
    left: Formula
    right: Formula
    key: str = field(init=False, repr=False)

    def __post_init__(self):
        object.__setattr__(self, "key", f"|({self.left.key},{self.right.key})")


@dataclass(frozen=True, eq=False, slots=True)
class Box(Formula):
    body: Formula
    key: str = field(init=False, repr=False)

    def __post_init__(self):
        object.__setattr__(self, "key", f"B{self.body.key}")


@dataclass(frozen=True, eq=False, slots=True)
class Dia(Formula):
    body: Formula
    key: str = field(init=False, repr=False)

    def __post_init__(self):
        object.__setattr__(self, "key", f"D{self.body.key}")


P0 = Atom(0)
BOTTOM = And(P0, NegAtom(0))
TOP = Or(P0, NegAtom(0))


def negate(f: Formula) -> Formula:
    """De Morgan dual; an involution."""
    match f:
        case Atom(i):
            return NegAtom(i)
        case NegAtom(i):
            return Atom(i)
        case And(l, r):
            return Or(negate(l), negate(r))
        case Or(l, r):
            return And(negate(l), negate(r))
        case Box(b):
            return Dia(negate(b))
        case Dia(b):
            return Box(negate(b))
    raise TypeError(f"not a formula: {f!r}")


def degree(f: Formula) -> int:
    """Additive degree: +1 per modality, summed over both sides of & and |.

    This equals the number of modal operator occurrences in ``f``.
    """
    match f:
        case Atom() | NegAtom():
            return 0
        case And(l, r) | Or(l, r):
            return degree(l) + degree(r)
        case Box(b) | Dia(b):
            return 1 + degree(b)
    raise TypeError(f"not a formula: {f!r}")


def modal_depth(f: Formula) -> int:
    match f:
        case Atom() | NegAtom():
            return 0
        case And(l, r) | Or(l, r):
            return max(modal_depth(l), modal_depth(r))
        case Box(b) | Dia(b):
            return 1 + modal_depth(b)
    raise TypeError(f"not a formula: {f!r}")


def implies(a: Formula, b: Formula) -> Formula:
    return Or(negate(a), b)


def box_n(n: int, f: Formula) -> Formula:
    for _ in range(n):
        f = Box(f)
    return f


def dia_n(n: int, f: Formula) -> Formula:
    for _ in range(n):
        f = Dia(f)
    return f


def atoms_of(f: Formula) -> set[int]:
    out = set()
    stack = [f]
    while stack:
        g = stack.pop()
        match g:
            case Atom(i) | NegAtom(i):
                out.add(i)
            case And(l, r) | Or(l, r):
                stack += (l, r)
            case Box(b) | Dia(b):
                stack.append(b)
    return out


def subformulas(f: Formula) -> Iterator[Formula]:
    """Post-order walk; children before parents."""
    match f:
        case And(l, r) | Or(l, r):
            yield from subformulas(l)
            yield from subformulas(r)
        case Box(b) | Dia(b):
            yield from subformulas(b)
    yield f


def size(f: Formula) -> int:
    return sum(1 for _ in subformulas(f))


# ---------------------------------------------------------------------------
# symbol table


class Symbols:
    """Interns atom names to indices.  ``p0`` is always index 0."""

    def __init__(self):
        self._lock = threading.Lock()
        self._ids: dict[str, int] = {"p0": 0}
        self._names: dict[int, str] = {0: "p0"}

    def intern(self, name: str) -> int:
        with self._lock:
            if name not in self._ids:
                i = max(self._names) + 1
                self._ids[name] = i
                self._names[i] = name
            return self._ids[name]

    def name(self, i: int) -> str:
        with self._lock:
            if i not in self._names:
                cand = f"p{i}"
                while cand in self._ids:
                    cand += "_"
                self._ids[cand] = i
                self._names[i] = cand
            return self._names[i]


SYMBOLS = Symbols()


def atom(name: str) -> Atom:
    return Atom(SYMBOLS.intern(name))


# ---------------------------------------------------------------------------
# printing

_PREC = {Or: 1, And: 2}


def format_formula(f: Formula, unicode: bool = False, symbols: Symbols = SYMBOLS) -> str:
    if unicode:
        ops = {"and": " ∧ ", "or": " ∨ ", "box": "□", "dia": "◇"}
    else:
        ops = {"and": " & ", "or": " | ", "box": "[]", "dia": "<>"}

    def prec(g):
        return _PREC.get(type(g), 3)

    def go(g: Formula) -> str:
        match g:
            case Atom(i):
                return symbols.name(i)
            case NegAtom(i):
                return symbols.name(i) + "̄" if unicode else "~" + symbols.name(i)
            case And(l, r) | Or(l, r):
                p = prec(g)
                ls = go(l)
                rs = go(r)
                if prec(l) < p:
                    ls = f"({ls})"
                # left associative: an equal-precedence right operand needs parens
                if prec(r) <= p:
                    rs = f"({rs})"
                return ls + (ops["and"] if isinstance(g, And) else ops["or"]) + rs
            case Box(b) | Dia(b):
                bs = go(b)
                if prec(b) < 3:
                    bs = f"({bs})"
                return (ops["box"] if isinstance(g, Box) else ops["dia"]) + bs
        raise TypeError(f"not a formula: {g!r}")

    return go(f)


# ---------------------------------------------------------------------------
# parsing


class FormulaSyntaxError(ValueError):
    def __init__(self, message: str, position: int):
        super().__init__(f"{message} at position {position}")
        self.position = position


_TOKEN = re.compile(
    r"(?:(?P<ident>[a-z][a-zA-Z0-9_]*\u0304?)|(?P<arrow>->|⊃)|(?P<dia><>|◇)|(?P<empty>\{\}|∅)"
    r"|(?P<box>\[\]|□)|(?P<sym>[~&|()\[\],¬∧∨]))"
)
# unicode spellings accepted on input
_ALIASES = {"⊃": "->", "◇": "<>", "∅": "{}", "□": "[]", "¬": "~", "∧": "&", "∨": "|"}


@dataclass
class Token:
    kind: str  # ident, ->, <>, [], {}, or the punctuation character itself
    text: str
    pos: int


def tokenize(text: str) -> list[Token]:
    out = []
    pos = 0
    n = len(text)
    while pos < n:
        if text[pos].isspace():
            pos += 1
            continue
        m = _TOKEN.match(text, pos)
        if not m:
            raise FormulaSyntaxError(f"unexpected character {text[pos]!r}", pos)
        tok = m.group(m.lastgroup)
        kind = "ident" if m.lastgroup == "ident" else _ALIASES.get(tok, tok)
        out.append(Token(kind, tok, pos))
        pos = m.end()
    out.append(Token("eof", "", n))
    return out


FORMULA_START = {"ident", "~", "(", "[]", "<>"}


class FormulaParser:
    """Recursive descent over a token list; shared with the sequent parser."""

    def __init__(self, tokens: list[Token], symbols: Symbols = SYMBOLS):
        self.toks = tokens
        self.i = 0
        self.symbols = symbols

    @property
    def peek(self) -> Token:
        return self.toks[self.i]

    def next(self) -> Token:
        t = self.toks[self.i]
        self.i += 1
        return t

    def expect(self, kind: str) -> Token:
        t = self.next()
        if t.kind != kind:
            raise FormulaSyntaxError(f"expected {kind!r}, found {t.text or 'end of input'!r}", t.pos)
        return t

    def formula(self) -> Formula:
        left = self.disjunction()
        if self.peek.kind == "->":
            self.next()
            right = self.formula()
            return implies(left, right)
        return left

    def disjunction(self) -> Formula:
        f = self.conjunction()
        while self.peek.kind == "|":
            self.next()
            f = Or(f, self.conjunction())
        return f

    def conjunction(self) -> Formula:
        f = self.unary()
        while self.peek.kind == "&":
            self.next()
            f = And(f, self.unary())
        return f

    def unary(self) -> Formula:
        t = self.peek
        if t.kind == "~":
            self.next()
            if self.peek.kind not in FORMULA_START:
                raise FormulaSyntaxError("negation must apply to a formula", self.peek.pos)
            return negate(self.unary())
        if t.kind == "[]":
            self.next()
            return Box(self.unary())
        if t.kind == "<>":
            self.next()
            return Dia(self.unary())
        if t.kind == "(":
            self.next()
            f = self.formula()
            self.expect(")")
            return f
        if t.kind == "ident":
            self.next()
            if t.text.endswith("\u0304"):  # p̄, as printed in unicode mode
                return NegAtom(self.symbols.intern(t.text[:-1]))
            return Atom(self.symbols.intern(t.text))
        raise FormulaSyntaxError(f"expected a formula, found {t.text or 'end of input'!r}", t.pos)


def parse_formula(text: str, symbols: Symbols = SYMBOLS) -> Formula:
    p = FormulaParser(tokenize(text), symbols)
    f = p.formula()
    if p.peek.kind != "eof":
        raise FormulaSyntaxError(f"unexpected {p.peek.text!r}", p.peek.pos)
    return f
