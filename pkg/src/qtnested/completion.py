"""Completion of an axiom index set under (m, n) -> m + n - 1.

Shifting every index down by one turns m + n - 1 into ordinary addition,
so the completion is ``{1 + s}`` for ``s`` a nonzero sum of generators
``x - 1``.  Membership is decided by a reachability table over sums.
"""

from __future__ import annotations

import threading
from functools import lru_cache


class AxiomError(ValueError):
    pass


def axiom_set(xs) -> frozenset[int]:
    out = frozenset(int(x) for x in xs)
    bad = sorted(x for x in out if x <= 1)
    if bad:
        raise AxiomError(f"axiom indices must exceed 1, got {bad}")
    return out


class _Table:
    """Growable reachability table for one generator set."""

    def __init__(self, gens: tuple[int, ...]):
        self.gens = gens
        self.reach = [True]  # reach[s]: s is a (possibly empty) sum of generators
        self.lock = threading.Lock()

    def upto(self, s: int) -> list[bool]:
        with self.lock:
            r = self.reach
            for k in range(len(r), s + 1):
                r.append(any(k >= g and r[k - g] for g in self.gens))
            return r


@lru_cache(maxsize=None)
def _table(x: frozenset[int]) -> _Table:
    return _Table(tuple(sorted(n - 1 for n in x)))


def completion_contains(x, n: int) -> bool:
    x = axiom_set(x)
    if n < 2 or not x:
        return False
    return _table(x).upto(n - 1)[n - 1]


def completion_upto(x, bound: int) -> set[int]:
    x = axiom_set(x)
    if not x:
        return set()
    r = _table(x).upto(max(bound - 1, 0))
    return {n for n in range(2, bound + 1) if r[n - 1]}


def fixpoint_upto(x, bound: int) -> set[int]:
    """Reference implementation: iterate X_{p+1} = X_p + {m+n-1} below bound."""
    cur = {n for n in axiom_set(x) if n <= bound}
    while True:
        new = {m + n - 1 for m in cur for n in cur if m + n - 1 <= bound}
        if new <= cur:
            return cur
        cur |= new


def decompose(x, n: int) -> tuple[int, int] | None:
    """Lexicographically least (m, l) with m + l - 1 = n and both in the completion.

    Returns None for members of ``x`` themselves (no split needed) and for
    non-members.
    """
    x = axiom_set(x)
    if n in x or not completion_contains(x, n):
        return None
    for m in range(2, n):
        l = n + 1 - m
        if completion_contains(x, m) and completion_contains(x, l):
            return m, l
    raise AssertionError(f"{n} is in the completion of {sorted(x)} but has no split")


def stage(x, n: int) -> int | None:
    """The least p with n in X_p, or None if n is not in the completion."""
    x = axiom_set(x)
    if not completion_contains(x, n):
        return None
    cur = {m for m in x if m <= n}
    p = 0
    while n not in cur:
        cur |= {a + b - 1 for a in cur for b in cur if a + b - 1 <= n}
        p += 1
    return p
