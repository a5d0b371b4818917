"""Recognising group, abelian group, ring and lattice reducts from the tables."""

from __future__ import annotations

from dataclasses import dataclass
from typing import Optional

import numpy as np

from .core import FiniteAlgebra

PREFERRED = ("mul", "add", "join", "meet")


def _binary_ops(A: FiniteAlgebra):
    names = [s for s, a in A.signature if a == 2]
    return sorted(names, key=lambda s: (PREFERRED.index(s) if s in PREFERRED else len(PREFERRED), names.index(s)))


def _associative(T):
    return np.array_equal(T[T, :], T[:, T])


@dataclass(frozen=True)
class GroupReduct:
    op: str
    identity: int
    inverse: np.ndarray
    abelian: bool


def _group_check(A, sym) -> Optional[GroupReduct]:
    T = A.tables[sym]
    n = A.size
    if n > 512 or not _associative(T):
        return None
    ar = np.arange(n)
    ids = [e for e in range(n) if np.array_equal(T[e], ar) and np.array_equal(T[:, e], ar)]
    if not ids:
        return None
    e = ids[0]
    hits = T == e
    if not hits.any(axis=1).all():
        return None
    inv = hits.argmax(axis=1)
    if not (T[inv, ar] == e).all():
        return None
    return GroupReduct(sym, e, inv, bool(np.array_equal(T, T.T)))


def group_reduct(A: FiniteAlgebra) -> Optional[GroupReduct]:
    key = ("group_reduct",)
    if key not in A._cache:
        found = None
        for sym in _binary_ops(A):
            found = _group_check(A, sym)
            if found:
                break
        A._cache[key] = found
    return A._cache[key]


def abelian_group_reducts(A: FiniteAlgebra) -> list[GroupReduct]:
    key = ("abelian_reducts",)
    if key not in A._cache:
        out = []
        for sym in _binary_ops(A):
            g = _group_check(A, sym)
            if g and g.abelian:
                out.append(g)
        A._cache[key] = out
    return A._cache[key]


@dataclass(frozen=True)
class RingReduct:
    add: str
    mul: str
    zero: int
    neg: np.ndarray


def ring_reduct(A: FiniteAlgebra) -> Optional[RingReduct]:
    """An abelian group operation plus an associative operation distributing over it."""
    key = ("ring_reduct",)
    if key in A._cache:
        return A._cache[key]
    found = None
    for g in abelian_group_reducts(A):
        P = A.tables[g.op]
        for sym in _binary_ops(A):
            if sym == g.op:
                continue
            M = A.tables[sym]
            if not _associative(M):
                continue
            # a(b+c) = ab+ac and (b+c)a = ba+ca
            left = M[:, P]                     # [a, b, c] -> a(b+c)
            right = P[M[:, :, None], M[:, None, :]]
            lhs2 = M[P]                        # [b, c, a] -> (b+c)a
            rhs2 = P[M[:, None, :], M[None, :, :]]
            if np.array_equal(left, right) and np.array_equal(lhs2, rhs2):
                found = RingReduct(g.op, sym, g.identity, g.inverse)
                break
        if found:
            break
    A._cache[key] = found
    return found


@dataclass(frozen=True)
class LatticeReduct:
    meet: str
    join: str

    def leq(self, A: FiniteAlgebra, a: int, b: int) -> bool:
        return int(A.tables[self.meet][a, b]) == a


def lattice_reduct(A: FiniteAlgebra) -> Optional[LatticeReduct]:
    key = ("lattice_reduct",)
    if key in A._cache:
        return A._cache[key]
    found = None
    ops = [s for s, a in A.signature if a == 2]
    n = A.size
    ar = np.arange(n)

    def semilattice(T):
        return np.array_equal(T, T.T) and _associative(T) and np.array_equal(T[ar, ar], ar)

    for m in ops:
        for j in ops:
            if m == j:
                continue
            M, J = A.tables[m], A.tables[j]
            if not (semilattice(M) and semilattice(J)):
                continue
            # absorption: a meet (a join b) = a, a join (a meet b) = a
            if not (M[ar[:, None], J] == ar[:, None]).all() or not (J[ar[:, None], M] == ar[:, None]).all():
                continue
            found = LatticeReduct(m, j)
            break
        if found:
            break
    A._cache[key] = found
    return found
