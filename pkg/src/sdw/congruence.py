"""Partitions and congruences: generation, joins and meets, permutability, lattices."""

from __future__ import annotations

from collections import deque
from dataclasses import dataclass, field
from typing import Iterable, Optional, Sequence

import numpy as np
from scipy.sparse import coo_matrix
from scipy.sparse.csgraph import connected_components

from .core import AlgebraError, CapExceeded, FiniteAlgebra

DEFAULT_LATTICE_CAP = 10**5
DEFAULT_CG_BUDGET = 10**10


def canonical(labels) -> np.ndarray:
    """Representative map (least element of each block) from arbitrary block labels."""
    labels = np.asarray(labels)
    if labels.size == 0:
        return np.zeros(0, dtype=np.int64)
    _, first, inv = np.unique(labels, return_index=True, return_inverse=True)
    return first[inv.ravel()].astype(np.int64)


def _components(n: int, a, b) -> np.ndarray:
    a = np.asarray(a, dtype=np.int64)
    b = np.asarray(b, dtype=np.int64)
    g = coo_matrix((np.ones(len(a), dtype=np.int8), (a, b)), shape=(n, n))
    _, labels = connected_components(g, directed=False)
    return canonical(labels)


class Partition:
    """Equivalence relation on {0, ..., n-1}, stored as the map to least block elements."""

    __slots__ = ("rep", "_key")

    def __init__(self, rep):
        rep = np.asarray(rep, dtype=np.int64)
        if rep.ndim != 1:
            raise AlgebraError("representative map must be one-dimensional")
        if rep.size and (rep.min() < 0 or rep.max() >= rep.size or not np.array_equal(rep[rep], rep)
                         or (rep > np.arange(rep.size)).any()):
            rep = canonical(rep)
        rep.setflags(write=False)
        self.rep = rep
        self._key = None

    @classmethod
    def identity(cls, n: int) -> "Partition":
        return cls(np.arange(n))

    @classmethod
    def total(cls, n: int) -> "Partition":
        return cls(np.zeros(n, dtype=np.int64))

    @classmethod
    def from_blocks(cls, n: int, blocks: Iterable[Iterable[int]]) -> "Partition":
        labels = np.arange(n)
        seen = set()
        for blk in blocks:
            blk = [int(x) for x in blk]
            for x in blk:
                if not 0 <= x < n:
                    raise AlgebraError(f"block element {x} outside carrier of size {n}")
                if x in seen:
                    raise AlgebraError(f"element {x} appears in two blocks")
                seen.add(x)
            if blk:
                labels[blk] = min(blk)
        return cls(canonical(labels))

    @classmethod
    def from_pairs(cls, n: int, pairs) -> "Partition":
        pairs = np.asarray(list(pairs), dtype=np.int64).reshape(-1, 2)
        ar = np.arange(n)
        return cls(_components(n, np.concatenate([ar, pairs[:, 0]]), np.concatenate([ar, pairs[:, 1]])))

    @property
    def n(self) -> int:
        return int(self.rep.size)

    def key(self) -> bytes:
        if self._key is None:
            self._key = self.rep.tobytes()
        return self._key

    def __eq__(self, other):
        if not isinstance(other, Partition):
            return NotImplemented
        return self.n == other.n and self.key() == other.key()

    def __hash__(self):
        return hash(self.key())

    def blocks(self) -> list[list[int]]:
        out: dict[int, list[int]] = {}
        for i, r in enumerate(self.rep.tolist()):
            out.setdefault(r, []).append(i)
        return [out[r] for r in sorted(out)]

    def num_blocks(self) -> int:
        return int(np.count_nonzero(self.rep == np.arange(self.n)))

    def related(self, a: int, b: int) -> bool:
        return bool(self.rep[a] == self.rep[b])

    def block_index(self) -> np.ndarray:
        """Element -> index of its block, blocks numbered by least element."""
        reps = np.flatnonzero(self.rep == np.arange(self.n))
        return np.searchsorted(reps, self.rep)

    def leq(self, other: "Partition") -> bool:
        return bool(np.array_equal(other.rep[self.rep], other.rep))

    def is_identity(self) -> bool:
        return bool(np.array_equal(self.rep, np.arange(self.n)))

    def is_total(self) -> bool:
        return bool((self.rep == 0).all())

    def pairs(self) -> np.ndarray:
        """All related pairs (a, b), including a = b."""
        out = []
        for blk in self.blocks():
            b = np.asarray(blk)
            out.append(np.stack(np.meshgrid(b, b, indexing="ij"), axis=-1).reshape(-1, 2))
        return np.concatenate(out) if out else np.zeros((0, 2), dtype=np.int64)

    def to_json(self) -> list[list[int]]:
        return self.blocks()

    def __repr__(self):
        return f"{type(self).__name__}({self.blocks()})"


class Congruence(Partition):
    __slots__ = ("algebra",)

    def __init__(self, algebra: FiniteAlgebra, rep):
        super().__init__(rep)
        if self.n != algebra.size:
            raise AlgebraError(f"partition of {self.n} points given for algebra of size {algebra.size}")
        self.algebra = algebra

    @classmethod
    def zero(cls, A: FiniteAlgebra) -> "Congruence":
        return cls(A, np.arange(A.size))

    @classmethod
    def one(cls, A: FiniteAlgebra) -> "Congruence":
        return cls(A, np.zeros(A.size, dtype=np.int64))

    @classmethod
    def checked(cls, A: FiniteAlgebra, part) -> "Congruence":
        """Wrap a partition after verifying compatibility with every operation."""
        from .core import NotACongruence, compatibility_violation
        rep = getattr(part, "rep", part)
        bad = compatibility_violation(A, np.asarray(rep))
        if bad is not None:
            sym, u, v = bad
            raise NotACongruence(f"partition is not compatible with {sym!r} at arguments {u} vs {v}",
                                 op=sym, args=(u, v))
        return cls(A, rep)


def _same_algebra(t1: Partition, t2: Partition):
    a1 = getattr(t1, "algebra", None)
    a2 = getattr(t2, "algebra", None)
    if a1 is not None and a2 is not None and a1 is not a2:
        raise AlgebraError("congruences belong to different algebras")
    if t1.n != t2.n:
        raise AlgebraError("partitions of different carriers")
    return a1 if a1 is not None else a2


def _wrap(alg, rep):
    return Congruence(alg, rep) if alg is not None else Partition(rep)


def join(t1: Partition, t2: Partition) -> Partition:
    alg = _same_algebra(t1, t2)
    n = t1.n
    ar = np.arange(n)
    rep = _components(n, np.concatenate([ar, ar]), np.concatenate([t1.rep, t2.rep]))
    return _wrap(alg, rep)


def meet(t1: Partition, t2: Partition) -> Partition:
    alg = _same_algebra(t1, t2)
    return _wrap(alg, canonical(t1.rep * t1.n + t2.rep))


def join_all(parts: Sequence[Partition], n: Optional[int] = None) -> Partition:
    parts = list(parts)
    if not parts:
        return Partition.identity(n)
    out = parts[0]
    for p in parts[1:]:
        out = join(out, p)
    return out


def cg(A: FiniteAlgebra, pairs=(), base: Optional[Partition] = None,
       budget: int = DEFAULT_CG_BUDGET) -> Congruence:
    """Least congruence of ``A`` containing ``pairs`` (and ``base`` if given).

    Every round compares f(..., u, ...) with f(..., rep(u), ...) for every
    operation, position and argument tuple, and merges the blocks of results
    that disagree; a partition passing a full round is compatible.
    """
    n = A.size
    pairs = np.asarray(list(pairs) if not isinstance(pairs, np.ndarray) else pairs, dtype=np.int64).reshape(-1, 2)
    if pairs.size and (pairs.min() < 0 or pairs.max() >= n):
        raise AlgebraError("pair entries outside the carrier")
    rep = np.arange(n) if base is None else np.asarray(base.rep)
    if len(pairs):
        rep = _components(n, np.concatenate([np.arange(n), pairs[:, 0]]), np.concatenate([rep, pairs[:, 1]]))
    ops = [(A.tables[s], a) for s, a in A.signature if a >= 1]
    spent = 0
    while True:
        ea, eb = [], []
        for T, arity in ops:
            rT = rep[T]
            for pos in range(arity):
                spent += T.size
                if spent > budget:
                    from .closure import BudgetExhausted
                    raise BudgetExhausted(f"congruence generation exceeded its budget of {budget} lookups",
                                          reached=spent, cap=budget)
                moved = rep[np.take(T, rep, axis=pos)]
                diff = moved != rT
                if diff.any():
                    ea.append(rT[diff])
                    eb.append(moved[diff])
        if not ea:
            return Congruence(A, rep)
        ea = np.concatenate(ea)
        eb = np.concatenate(eb)
        key = np.unique(np.minimum(ea, eb) * n + np.maximum(ea, eb))
        ar = np.arange(n)
        rep = _components(n, np.concatenate([ar, key // n]), np.concatenate([rep, key % n]))


@dataclass
class PermuteResult:
    ok: bool
    witness: Optional[tuple] = None     # (x, z) in t1∘t2 but not in t2∘t1

    def __bool__(self):
        return self.ok


def permute(t1: Partition, t2: Partition) -> PermuteResult:
    """Whether t1∘t2 = t2∘t1.

    The composite t1∘t2 relates x, z iff the t1-block of x meets the t2-block
    of z, so the two relations commute iff every connected component of the
    "blocks meet" bipartite graph is complete bipartite.
    """
    _same_algebra(t1, t2)
    n = t1.n
    if n == 0:
        return PermuteResult(True)
    b1 = t1.block_index()
    b2 = t2.block_index()
    k1 = int(b1.max()) + 1
    edges = np.unique(b1 * n + b2)
    e1, e2 = edges // n, edges % n
    comp = _components(k1 + n, e1, e2 + k1)
    c1 = comp[:k1]
    ncomp_nodes1 = np.bincount(c1, minlength=k1 + n)
    used2 = np.unique(e2)
    ncomp_nodes2 = np.bincount(comp[used2 + k1], minlength=k1 + n)
    nedges = np.bincount(comp[e1], minlength=k1 + n)
    bad = np.flatnonzero(nedges != ncomp_nodes1 * ncomp_nodes2)
    if not bad.size:
        return PermuteResult(True)
    # witness from a shortest path P' - Q - P - Q' with P' and Q' not adjacent
    adj1: dict[int, list[int]] = {}
    adj2: dict[int, list[int]] = {}
    for a, b in zip(e1.tolist(), e2.tolist()):
        adj1.setdefault(a, []).append(b)
        adj2.setdefault(b, []).append(a)
    target = int(bad[0])
    for p0 in [p for p in range(k1) if c1[p] == target]:
        nb = set(adj1[p0])
        for q in adj1[p0]:
            for p in adj2[q]:
                for q2 in adj1[p]:
                    if q2 not in nb:
                        x = _meet_point(b1, b2, p, q2)
                        z = _meet_point(b1, b2, p0, q)
                        return PermuteResult(False, (x, z))
    raise AssertionError("unreachable: incomplete component without a witness")


def _meet_point(b1, b2, p, q) -> int:
    return int(np.flatnonzero((b1 == p) & (b2 == q))[0])


def composite(t1: Partition, t2: Partition) -> np.ndarray:
    """Boolean matrix of t1∘t2 (x related to z)."""
    b1 = t1.block_index()
    b2 = t2.block_index()
    R = np.zeros((b1.max() + 1, b2.max() + 1), dtype=bool)
    R[b1, b2] = True
    return R[b1][:, b2]


# -- lattices -------------------------------------------------------------

class FiniteLattice:
    """A finite lattice given by its order matrix (leq[i, j] means i <= j)."""

    def __init__(self, leq, labels=None):
        leq = np.asarray(leq, dtype=bool)
        self.leq = leq
        self.size = leq.shape[0]
        self.labels = list(labels) if labels is not None else list(range(self.size))
        self._join = None
        self._meet = None

    def _bound(self, up: bool):
        L = self.leq if up else self.leq.T
        n = self.size
        out = np.full((n, n), -1, dtype=np.int64)
        for i in range(n):
            ub = L[i][None, :] & L            # ub[j, k]: k above i and j
            for j in range(n):
                cand = np.flatnonzero(ub[j])
                least = cand[L[np.ix_(cand, cand)].all(axis=1)]
                if least.size != 1:
                    raise AlgebraError("order is not a lattice")
                out[i, j] = least[0]
        return out

    @property
    def join_table(self):
        if self._join is None:
            self._join = self._bound(True)
        return self._join

    @property
    def meet_table(self):
        if self._meet is None:
            self._meet = self._bound(False)
        return self._meet

    def covers(self) -> list[tuple[int, int]]:
        lt = self.leq & ~np.eye(self.size, dtype=bool)
        between = (lt.astype(np.int64) @ lt.astype(np.int64)) > 0
        cov = lt & ~between
        return [(int(a), int(b)) for a, b in zip(*np.nonzero(cov))]


@dataclass
class ModularityResult:
    ok: bool
    witness: Optional[dict] = None

    def __bool__(self):
        return self.ok


def is_modular(lattice) -> ModularityResult:
    """No pentagon: a < c with a∨b = c∨b and a∧b = c∧b for some b."""
    L = lattice.lattice if isinstance(lattice, ConLattice) else lattice
    J, M = L.join_table, L.meet_table
    lt = L.leq & ~np.eye(L.size, dtype=bool)
    for a, c in zip(*np.nonzero(lt)):
        hit = np.flatnonzero((J[a] == J[c]) & (M[a] == M[c]))
        if hit.size:
            b = int(hit[0])
            w = {"bottom": int(M[a, b]), "a": int(a), "c": int(c), "b": b, "top": int(J[a, b])}
            return ModularityResult(False, {k: L.labels[v] if not isinstance(L.labels[v], Partition) else v
                                            for k, v in w.items()})
    return ModularityResult(True)


@dataclass
class ConLattice:
    algebra: FiniteAlgebra
    congruences: list
    lattice: FiniteLattice
    index: dict = field(default_factory=dict)

    def __len__(self):
        return len(self.congruences)

    def index_of(self, theta: Partition) -> int:
        return self.index[theta.key()]

    @property
    def zero(self):
        return self.congruences[0]

    @property
    def one(self):
        return self.congruences[-1]

    def covers(self):
        return self.lattice.covers()

    def join_index(self, i: int, j: int) -> int:
        return int(self.lattice.join_table[i, j])

    def meet_index(self, i: int, j: int) -> int:
        return int(self.lattice.meet_table[i, j])


def con_lattice(A: FiniteAlgebra, cap: int = DEFAULT_LATTICE_CAP) -> ConLattice:
    """All congruences of ``A`` as joins of principal ones, bottom first, with the order."""
    key = ("con_lattice",)
    if key in A._cache:
        return A._cache[key]
    n = A.size
    principal: dict[bytes, Congruence] = {}
    for a in range(n):
        for b in range(a + 1, n):
            th = cg(A, [(a, b)])
            principal.setdefault(th.key(), th)
    found: dict[bytes, Congruence] = {}
    zero = Congruence.zero(A)
    found[zero.key()] = zero
    queue = deque([zero])
    prin = list(principal.values())
    while queue:
        th = queue.popleft()
        for p in prin:
            j = join(th, p)
            if j.key() not in found:
                found[j.key()] = j
                if len(found) > cap:
                    raise CapExceeded(f"more than {cap} congruences", reached=len(found), cap=cap)
                queue.append(j)
    congs = sorted(found.values(), key=lambda t: (-t.num_blocks(), t.rep.tolist()))
    reps = np.stack([t.rep for t in congs]) if congs else np.zeros((0, n), np.int64)
    # leq[i, j]: rep_j constant on blocks of congruence i
    leq = np.array([[np.array_equal(reps[j][reps[i]], reps[j]) for j in range(len(congs))]
                    for i in range(len(congs))], dtype=bool)
    res = ConLattice(A, congs, FiniteLattice(leq, labels=congs),
                     {t.key(): i for i, t in enumerate(congs)})
    A._cache[key] = res
    return res
