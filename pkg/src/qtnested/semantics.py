"""Kripke models for K with quasi-transitivity conditions.

The frame condition for index n: a path of exactly n steps from u to w
forces an edge u -> w.  ``find_countermodel`` is a brute-force oracle:
it enumerates closed frames (up to isomorphism) and all valuations of the
formula's atoms, evaluating a formula on every valuation at once with numpy.
"""

from __future__ import annotations

import itertools
import threading
from dataclasses import dataclass, field
from functools import lru_cache

import numpy as np

from .completion import axiom_set
from .formula import And, Atom, Box, Dia, Formula, NegAtom, Or, atoms_of


@dataclass(frozen=True)
class KripkeModel:
    worlds: int
    edges: frozenset[tuple[int, int]]
    valuation: dict[int, frozenset[int]] = field(default_factory=dict, hash=False)

    def __post_init__(self):
        object.__setattr__(self, "edges", frozenset((int(u), int(w)) for u, w in self.edges))
        for u, w in self.edges:
            if not (0 <= u < self.worlds and 0 <= w < self.worlds):
                raise ValueError(f"edge {(u, w)} mentions an unknown world")
        object.__setattr__(
            self, "valuation", {int(k): frozenset(v) for k, v in self.valuation.items()}
        )

    def successors(self, w: int) -> list[int]:
        return sorted(v for u, v in self.edges if u == w)

    def true_at(self, atom_id: int, w: int) -> bool:
        return w in self.valuation.get(atom_id, ())

    def is_closed(self, x) -> bool:
        return close_frame(self.edges, x, self.worlds) == self.edges


def evaluate(m: KripkeModel, w: int, f: Formula) -> bool:
    if not 0 <= w < m.worlds:
        raise ValueError(f"unknown world {w}")
    succ = {u: m.successors(u) for u in range(m.worlds)}

    def go(g: Formula, u: int) -> bool:
        match g:
            case Atom(i):
                return m.true_at(i, u)
            case NegAtom(i):
                return not m.true_at(i, u)
            case And(l, r):
                return go(l, u) and go(r, u)
            case Or(l, r):
                return go(l, u) or go(r, u)
            case Box(b):
                return all(go(b, v) for v in succ[u])
            case Dia(b):
                return any(go(b, v) for v in succ[u])
        raise TypeError(f"not a formula: {g!r}")

    return go(f, w)


def valid_in(m: KripkeModel, f: Formula) -> bool:
    return all(evaluate(m, w, f) for w in range(m.worlds))


# ---------------------------------------------------------------------------
# frame closure


def _succ_masks(edges, worlds: int) -> list[int]:
    succ = [0] * worlds
    for u, w in edges:
        succ[u] |= 1 << w
    return succ


def _close_masks(succ: list[int], xs) -> list[int]:
    succ = list(succ)
    W = len(succ)
    changed = True
    while changed:
        changed = False
        for n in sorted(xs):
            for u in range(W):
                reach = succ[u]
                for _ in range(n - 1):
                    nxt = 0
                    m = reach
                    while m:
                        low = m & -m
                        nxt |= succ[low.bit_length() - 1]
                        m ^= low
                    reach = nxt
                if reach & ~succ[u]:
                    succ[u] |= reach
                    changed = True
    return succ


def close_frame(edges, x, worlds: int | None = None) -> frozenset[tuple[int, int]]:
    """Least superset of ``edges`` closed under the conditions for ``x``."""
    xs = axiom_set(x)
    edges = {(int(u), int(w)) for u, w in edges}
    if worlds is None:
        worlds = 1 + max((max(e) for e in edges), default=-1)
    succ = _close_masks(_succ_masks(edges, worlds), xs)
    return frozenset((u, w) for u in range(worlds) for w in range(worlds) if succ[u] >> w & 1)


def close_matrices(R: np.ndarray, xs) -> np.ndarray:
    """Vectorised closure of a stack of boolean adjacency matrices (N, W, W)."""
    R = R.astype(bool).copy()
    while True:
        before = R.copy()
        for n in sorted(xs):
            P = R
            Ru = R.astype(np.uint8)
            for _ in range(n - 1):
                P = np.matmul(P.astype(np.uint8), Ru) > 0
            R = R | P
        if np.array_equal(R, before):
            return R


# ---------------------------------------------------------------------------
# enumeration of rooted closed frames


_frame_lock = threading.Lock()


@lru_cache(maxsize=None)
def _raw_rooted_frames(W: int, xs: frozenset[int]) -> np.ndarray:
    with _frame_lock:
        return _compute_frames(W, xs)


def _compute_frames(W: int, xs: frozenset[int]) -> np.ndarray:
    """Closed frames on W worlds in which every world is reachable from 0.

    One representative per isomorphism class fixing world 0, chosen as the
    closure of the first raw relation (ascending bitmask) producing it.
    Returns an array (F, W, W) of booleans.
    """
    nbits = W * W
    chunk = 1 << min(nbits, 18)
    total = 1 << nbits
    bitpos = np.arange(nbits, dtype=np.int64)
    perms = [(0,) + p for p in itertools.permutations(range(1, W))]
    seen: dict[int, None] = {}
    reps: list[np.ndarray] = []
    for start in range(0, total, chunk):
        raw = np.arange(start, min(start + chunk, total), dtype=np.int64)
        R = ((raw[:, None] >> bitpos) & 1).astype(bool).reshape(-1, W, W)
        R = close_matrices(R, xs)
        # rooted at 0: reachability from 0 covers all worlds
        reach = np.zeros((R.shape[0], W), dtype=bool)
        reach[:, 0] = True
        for _ in range(W):
            reach = reach | (np.einsum("nu,nuw->nw", reach.astype(np.uint8), R.astype(np.uint8)) > 0)
        keep = reach.all(axis=1)
        R = R[keep]
        if not len(R):
            continue
        flat = R.reshape(len(R), -1).astype(np.int64)
        canon = None
        for p in perms:
            Rp = R[:, p][:, :, p]
            code = (Rp.reshape(len(R), -1).astype(np.int64) << bitpos).sum(axis=1)
            canon = code if canon is None else np.minimum(canon, code)
        _, first = np.unique(canon, return_index=True)
        for i in sorted(first):
            c = int(canon[i])
            if c not in seen:
                seen[c] = None
                reps.append(R[i])
        del flat
    if not reps:
        return np.zeros((0, W, W), dtype=bool)
    return np.stack(reps)


def rooted_frames(W: int, x) -> np.ndarray:
    return _raw_rooted_frames(W, axiom_set(x))


# ---------------------------------------------------------------------------
# batched evaluation


def _eval_batch(f: Formula, R: np.ndarray, atom_index: dict[int, int], W: int) -> np.ndarray:
    """Truth of ``f`` for frames R (F, W, W) and every valuation: shape (F, V, W)."""
    k = len(atom_index)
    V = 1 << (k * W)
    vals = np.arange(V, dtype=np.int64)
    Rt = np.transpose(R, (0, 2, 1)).astype(np.uint8)
    F = R.shape[0]
    memo: dict[str, np.ndarray] = {}

    def atom_truth(i: int) -> np.ndarray:
        j = atom_index[i]
        bits = np.arange(W) + j * W
        t = ((vals[:, None] >> bits) & 1).astype(bool)  # (V, W)
        return np.broadcast_to(t, (F, V, W))

    def go(g: Formula) -> np.ndarray:
        if g.key in memo:
            return memo[g.key]
        match g:
            case Atom(i):
                out = atom_truth(i)
            case NegAtom(i):
                out = ~atom_truth(i)
            case And(l, r):
                out = go(l) & go(r)
            case Or(l, r):
                out = go(l) | go(r)
            case Dia(b):
                out = np.matmul(go(b).astype(np.uint8), Rt) > 0
            case Box(b):
                out = ~(np.matmul((~go(b)).astype(np.uint8), Rt) > 0)
            case _:
                raise TypeError(f"not a formula: {g!r}")
        memo[g.key] = out
        return out

    return go(f)


def find_countermodel(f: Formula, x, max_worlds: int = 4, batch: int = 256):
    """First closed model (canonical order) falsifying ``f``, as (model, world), or None.

    Only frames generated by world 0 are enumerated: truth at a world
    depends only on the worlds reachable from it, and the reachable part of
    a closed frame is itself closed.
    """
    xs = axiom_set(x)
    ids = sorted(atoms_of(f))
    atom_index = {a: j for j, a in enumerate(ids)}
    for W in range(1, max_worlds + 1):
        frames = rooted_frames(W, xs)
        for s in range(0, len(frames), batch):
            R = frames[s : s + batch]
            T = _eval_batch(f, R, atom_index, W)[:, :, 0]  # (F, V)
            bad = np.argwhere(~T)
            if len(bad):
                fi, v = (int(a) for a in bad[0])
                Rm = R[fi]
                edges = {(u, w) for u in range(W) for w in range(W) if Rm[u, w]}
                valuation = {
                    a: frozenset(w for w in range(W) if v >> (atom_index[a] * W + w) & 1) for a in ids
                }
                return KripkeModel(W, frozenset(edges), valuation), 0
    return None


def is_valid(f: Formula, x, max_worlds: int = 4) -> bool:
    return find_countermodel(f, x, max_worlds) is None
