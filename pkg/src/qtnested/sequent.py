"""Nested sequents: multisets of formulas and boxed child sequents.

A sequent is stored as an ordered tree so that a path (a tuple of child
indices) can name one particular child occurrence.  Equality and hashing are
up to multiset isomorphism; ``same_layout`` compares the stored order too.
Every operation that adds material appends it, so existing paths stay valid.
"""

from __future__ import annotations

from dataclasses import dataclass, field
from typing import Iterable, Iterator

from .formula import (
    BOTTOM,
    SYMBOLS,
    Box,
    Formula,
    FormulaParser,
    FormulaSyntaxError,
    Or,
    Symbols,
    format_formula,
    tokenize,
)

Path = tuple[int, ...]


class PathError(ValueError):
    pass


@dataclass(frozen=True, eq=False, slots=True)
class Sequent:
    formulas: tuple[Formula, ...] = ()
    children: tuple[Sequent, ...] = ()
    canon: str = field(init=False, repr=False)
    _hash: int = field(init=False, repr=False)

    def __post_init__(self):
        if not isinstance(self.formulas, tuple):
            object.__setattr__(self, "formulas", tuple(self.formulas))
        if not isinstance(self.children, tuple):
            object.__setattr__(self, "children", tuple(self.children))
        fs = ";".join(sorted(f.key for f in self.formulas))
        cs = "".join(sorted(c.canon for c in self.children))
        canon = f"({fs}:{cs})"
        object.__setattr__(self, "canon", canon)
        object.__setattr__(self, "_hash", hash(canon))

    def __eq__(self, other: object) -> bool:
        return self is other or (isinstance(other, Sequent) and self.canon == other.canon)

    def __hash__(self) -> int:
        return self._hash

    def __str__(self) -> str:
        return format_sequent(self)

    # -- navigation ---------------------------------------------------------

    def at(self, path: Path) -> Sequent:
        node = self
        for depth, i in enumerate(path):
            if not (0 <= i < len(node.children)):
                raise PathError(f"path {list(path)} has no child {i} at depth {depth}")
            node = node.children[i]
        return node

    def has_path(self, path: Path) -> bool:
        try:
            self.at(path)
            return True
        except PathError:
            return False

    def replace_at(self, path: Path, new: Sequent) -> Sequent:
        if not path:
            return new
        i = path[0]
        if not (0 <= i < len(self.children)):
            raise PathError(f"no child {i}")
        kids = list(self.children)
        kids[i] = kids[i].replace_at(path[1:], new)
        return Sequent(self.formulas, tuple(kids))

    def edit(self, path: Path, fn) -> Sequent:
        return self.replace_at(path, fn(self.at(path)))

    def paths(self) -> Iterator[Path]:
        """All node paths in preorder."""
        stack: list[tuple[Path, Sequent]] = [((), self)]
        while stack:
            p, s = stack.pop()
            yield p
            for i in range(len(s.children) - 1, -1, -1):
                stack.append((p + (i,), s.children[i]))

    # -- local edits --------------------------------------------------------

    def with_formulas(self, path: Path, fs: Iterable[Formula]) -> Sequent:
        fs = tuple(fs)
        if not fs:
            return self
        return self.edit(path, lambda n: Sequent(n.formulas + fs, n.children))

    def with_child(self, path: Path, child: Sequent) -> Sequent:
        return self.edit(path, lambda n: Sequent(n.formulas, n.children + (child,)))

    def without_formula(self, path: Path, f: Formula) -> Sequent:
        def drop(n: Sequent) -> Sequent:
            fs = list(n.formulas)
            try:
                fs.remove(f)
            except ValueError:
                raise PathError(f"formula {f} not present at {list(path)}") from None
            return Sequent(tuple(fs), n.children)

        return self.edit(path, drop)

    def without_child(self, path: Path, i: int) -> Sequent:
        def drop(n: Sequent) -> Sequent:
            if not (0 <= i < len(n.children)):
                raise PathError(f"no child {i} at {list(path)}")
            return Sequent(n.formulas, n.children[:i] + n.children[i + 1 :])

        return self.edit(path, drop)

    def plug(self, at: Path, insert: Sequent) -> Sequent:
        """Merge ``insert`` into the node at ``at`` (multiset union, appended)."""
        return self.edit(at, lambda n: Sequent(n.formulas + insert.formulas, n.children + insert.children))

    # -- measures -----------------------------------------------------------

    def size(self) -> int:
        return len(self.formulas) + sum(1 + c.size() for c in self.children)

    def node_count(self) -> int:
        return 1 + sum(c.node_count() for c in self.children)

    def depth(self) -> int:
        return 1 + max((c.depth() for c in self.children), default=0) if self.children else 0


EMPTY = Sequent()


def seq(*items) -> Sequent:
    """Build a sequent from formulas and sequents (sequents become children)."""
    fs = tuple(i for i in items if isinstance(i, Formula))
    cs = tuple(i for i in items if isinstance(i, Sequent))
    if len(fs) + len(cs) != len(items):
        raise TypeError("items must be formulas or sequents")
    return Sequent(fs, cs)


def same_layout(a: Sequent, b: Sequent) -> bool:
    """Equal as multisets at every node with children in the same order."""
    if sorted(f.key for f in a.formulas) != sorted(f.key for f in b.formulas):
        return False
    if len(a.children) != len(b.children):
        return False
    return all(same_layout(x, y) for x, y in zip(a.children, b.children))


def depth_of(path: Path) -> int:
    return len(path)


def form_of(s: Sequent) -> Formula:
    """Literal formula translation; bottom disjuncts are kept."""
    f = BOTTOM
    for a in reversed(s.formulas):
        f = Or(a, f)
    for c in s.children:
        f = Or(f, Box(form_of(c)))
    return f


def chain_positions(s: Sequent, start: Path, length: int) -> list[Path]:
    """All paths extending ``start`` by exactly ``length`` steps."""
    node = s.at(start)
    out = []

    def walk(n: Sequent, p: Path, k: int):
        if k == 0:
            out.append(p)
            return
        for i, c in enumerate(n.children):
            walk(c, p + (i,), k - 1)

    walk(node, tuple(start), length)
    return out


def iso_map(a: Sequent, b: Sequent) -> dict[Path, Path] | None:
    """A path bijection witnessing a == b, or None if they differ."""
    if a != b:
        return None
    out: dict[Path, Path] = {}

    def go(x: Sequent, y: Sequent, px: Path, py: Path):
        out[px] = py
        pool: dict[str, list[int]] = {}
        for j, c in enumerate(y.children):
            pool.setdefault(c.canon, []).append(j)
        for i, c in enumerate(x.children):
            j = pool[c.canon].pop(0)
            go(c, y.children[j], px + (i,), py + (j,))

    go(a, b, (), ())
    return out


# ---------------------------------------------------------------------------
# text syntax


def format_sequent(s: Sequent, unicode: bool = False, symbols: Symbols = SYMBOLS) -> str:
    if not s.formulas and not s.children:
        return "∅" if unicode else "{}"

    def body(n: Sequent) -> str:
        items = [format_formula(f, unicode, symbols) for f in n.formulas]
        items += ["[" + body(c) + "]" for c in n.children]
        return ", ".join(items)

    return body(s)


class SequentSyntaxError(FormulaSyntaxError):
    pass


_FORMULA_START = {"ident", "~", "(", "[]", "<>"}


def parse_sequent(text: str, symbols: Symbols = SYMBOLS) -> Sequent:
    try:
        toks = tokenize(text)
    except FormulaSyntaxError as e:
        raise SequentSyntaxError(str(e).rsplit(" at position", 1)[0], e.position) from None
    p = FormulaParser(toks, symbols)

    def item_list(closer: str) -> Sequent:
        fs: list[Formula] = []
        cs: list[Sequent] = []
        if p.peek.kind == "{}":
            p.next()
            return EMPTY
        if p.peek.kind == closer:
            return EMPTY
        while True:
            t = p.peek
            if t.kind == "[":
                p.next()
                cs.append(item_list("]"))
                p.expect("]")
            elif t.kind == "[]" and p.toks[p.i + 1].kind not in _FORMULA_START:
                p.next()
                cs.append(EMPTY)
            else:
                fs.append(p.formula())
            if p.peek.kind != ",":
                break
            p.next()
        return Sequent(tuple(fs), tuple(cs))

    try:
        s = item_list("eof")
        if p.peek.kind != "eof":
            raise FormulaSyntaxError(f"unexpected {p.peek.text!r}", p.peek.pos)
    except SequentSyntaxError:
        raise
    except FormulaSyntaxError as e:
        raise SequentSyntaxError(str(e).rsplit(" at position", 1)[0], e.position) from None
    return s
