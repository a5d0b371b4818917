"""Subuniverse closure inside finite products, with replayable derivations.

The engine works on rows: an element of ``F_1 x ... x F_m`` is a row of m
carrier indices.  New elements are found semi-naively (every operation is
applied only to argument tuples containing at least one element that was not
available in the previous round).  For associative binary operations only
right multiplication by "pool" elements (those not themselves produced by
that operation) is needed, which keeps group and monoid closures linear in
the size of the result.
"""

from __future__ import annotations

from dataclasses import dataclass, field
from typing import Callable, Optional, Sequence

import numpy as np

from .core import (AlgebraError, App, CapExceeded, FiniteAlgebra, Term, Var,
                   max_carrier)

BITSET_LIMIT = 1 << 27
CHUNK = 1 << 17


class BudgetExhausted(CapExceeded):
    pass


def is_associative(A: FiniteAlgebra, sym: str, limit: int = 256) -> bool:
    if A.signature.arity(sym) != 2 or A.size > limit:
        return False
    key = ("assoc", sym)
    if key not in A._cache:
        T = A.tables[sym]
        A._cache[key] = bool(np.array_equal(T[T, :], T[:, T]))
    return A._cache[key]


class _Membership:
    """Set of rows keyed by mixed-radix codes (bitset when small) or raw bytes."""

    def __init__(self, radices):
        self.radices = [int(r) for r in radices]
        total = 1
        for r in self.radices:
            total *= r
            if total >= 2**62:
                break
        self.int_keys = total < 2**62
        if self.int_keys:
            w, weights = 1, []
            for r in reversed(self.radices):
                weights.append(w)
                w *= r
            self.weights = np.asarray(weights[::-1], dtype=np.int64)
            self.bitset = np.zeros(total, dtype=bool) if total <= BITSET_LIMIT else None
            self.pyset = set() if self.bitset is None else None
        else:
            self.pyset = set()

    def keys(self, rows: np.ndarray):
        if self.int_keys:
            return rows.astype(np.int64) @ self.weights
        rows = np.ascontiguousarray(rows, dtype=np.int32)
        return rows.view(np.dtype((np.void, rows.shape[1] * 4))).ravel()

    def fresh(self, keys) -> np.ndarray:
        """Indices of first occurrences of keys not yet present, in input order."""
        if len(keys) == 0:
            return np.zeros(0, dtype=np.int64)
        _, first = np.unique(keys, return_index=True)
        first.sort()
        if self.int_keys and self.bitset is not None:
            first = first[~self.bitset[keys[first]]]
        else:
            s = self.pyset
            if self.int_keys:
                first = first[np.fromiter((int(keys[i]) not in s for i in first), bool, len(first))]
            else:
                first = first[np.fromiter((keys[i].tobytes() not in s for i in first), bool, len(first))]
        return first

    def add(self, keys):
        if self.int_keys and self.bitset is not None:
            self.bitset[keys] = True
        elif self.int_keys:
            self.pyset.update(int(k) for k in keys)
        else:
            self.pyset.update(k.tobytes() for k in keys)

    def contains(self, rows: np.ndarray) -> np.ndarray:
        keys = self.keys(np.atleast_2d(rows))
        if self.int_keys and self.bitset is not None:
            return self.bitset[keys]
        if self.int_keys:
            return np.fromiter((int(k) in self.pyset for k in keys), bool, len(keys))
        return np.fromiter((k.tobytes() in self.pyset for k in keys), bool, len(keys))


@dataclass
class ClosureResult:
    factors: list
    rows: np.ndarray
    op_names: tuple
    recipe_op: np.ndarray        # -1 marks a generator
    recipe_args: np.ndarray      # generator number in column 0 for generators
    complete: bool = True
    found: Optional[int] = None
    evaluations: int = 0
    generator_rows: list = field(default_factory=list)

    @property
    def size(self) -> int:
        return len(self.rows)

    def term(self, index: int) -> Term:
        """Term over the generators (variable j = j-th generator) producing element ``index``."""
        memo: dict[int, Term] = {}
        stack = [index]
        while stack:
            i = stack[-1]
            if i in memo:
                stack.pop()
                continue
            op = int(self.recipe_op[i])
            if op < 0:
                memo[i] = Var(int(self.recipe_args[i, 0]))
                stack.pop()
                continue
            sym, arity = self.op_names[op]
            kids = [int(c) for c in self.recipe_args[i, :arity]]
            todo = [c for c in kids if c not in memo]
            if todo:
                stack.extend(todo)
                continue
            memo[i] = App(sym, tuple(memo[c] for c in kids))
            stack.pop()
        return memo[index]

    def derived(self) -> list["DerivedElement"]:
        out: list[DerivedElement] = []
        for i in range(self.size):
            op = int(self.recipe_op[i])
            if op < 0:
                recipe = ("generator", int(self.recipe_args[i, 0]))
            else:
                sym, arity = self.op_names[op]
                recipe = (sym, tuple(out[int(c)] for c in self.recipe_args[i, :arity]))
            out.append(DerivedElement(self._element(i), recipe))
        return out

    def _element(self, i):
        row = self.rows[i]
        if len(row) == 1:
            return int(row[0])
        return tuple(int(x) for x in row)


@dataclass(eq=False)
class DerivedElement:
    element: object
    recipe: tuple

    def replay(self, A: FiniteAlgebra, generators: Sequence[int]) -> int:
        """Re-evaluate the recipe through the tables of ``A`` (single-coordinate closures)."""
        memo: dict[int, int] = {}

        def go(d: "DerivedElement") -> int:
            k = id(d)
            if k not in memo:
                if d.recipe[0] == "generator":
                    memo[k] = int(generators[d.recipe[1]])
                else:
                    sym, kids = d.recipe
                    memo[k] = A.op(sym, *[go(c) for c in kids])
            return memo[k]

        return go(self)

    def __repr__(self):
        kind = self.recipe[0]
        return f"DerivedElement({self.element!r}, via {kind!r})"


def _apply(factors, groups, sym, args):
    """Apply ``sym`` coordinatewise to argument row blocks."""
    if groups is None:
        return factors[0].tables[sym][tuple(args)]
    out = np.empty_like(args[0])
    for F, cols in groups:
        out[:, cols] = F.tables[sym][tuple(a[:, cols] for a in args)]
    return out


def close(factors: Sequence[FiniteAlgebra], generators, cap: int | None = None,
          budget: int | None = None, stop: Callable | None = None,
          sequential: bool = True) -> ClosureResult:
    """Closure of ``generators`` (rows) in the product of ``factors``.

    ``stop(rows) -> bool mask`` is called on every batch of new elements and
    ends the run early at the first hit.  ``cap`` bounds the number of
    elements, ``budget`` the number of operation evaluations; both raise.
    """
    factors = list(factors)
    if not factors:
        raise AlgebraError("closure needs at least one coordinate")
    sig = factors[0].signature
    for F in factors[1:]:
        if F.signature != sig:
            raise AlgebraError("coordinates do not share a signature")
    m = len(factors)
    cap = max_carrier() if cap is None else cap
    distinct: dict[int, tuple] = {}
    for j, F in enumerate(factors):
        distinct.setdefault(id(F), (F, []))[1].append(j)
    groups = None if len(distinct) == 1 else [(F, np.asarray(c)) for F, c in distinct.values()]
    ops = tuple(sig.symbols)
    maxar = max([a for _, a in ops] + [1])
    assoc = [a == 2 and all(is_associative(F, s) for F, _ in distinct.values()) for s, a in ops]

    gens = np.asarray(generators, dtype=np.int64).reshape(-1, m) if len(generators) else np.zeros((0, m), np.int64)
    radices = [F.size for F in factors]
    if gens.size and ((gens < 0).any() or (gens >= np.asarray(radices)).any()):
        raise AlgebraError("generator coordinates out of range")

    dtype = np.int16 if max(radices) < 2**15 else np.int32
    mem = _Membership(radices)
    cap_rows = 1024
    rows = np.zeros((cap_rows, m), dtype=dtype)
    rop = np.zeros(cap_rows, dtype=np.int32)
    rargs = np.zeros((cap_rows, maxar), dtype=np.int32)
    n = 0
    pools = {i: [] for i, a in enumerate(assoc) if a}
    evaluations = 0
    state = {"found": None}

    def push(new_rows, op_index, arg_block):
        nonlocal n, rows, rop, rargs
        keys = mem.keys(new_rows)
        idx = mem.fresh(keys)
        if not len(idx):
            return 0
        k = len(idx)
        if n + k > cap:
            raise CapExceeded(f"closure exceeded cap {cap} (reached at least {n + k} elements)",
                              reached=n + k, cap=cap)
        while n + k > len(rows):
            grow = len(rows) * 2
            rows = np.resize(rows, (grow, m))
            rop = np.resize(rop, grow)
            rargs = np.resize(rargs, (grow, maxar))
        rows[n:n + k] = new_rows[idx]
        rop[n:n + k] = op_index
        rargs[n:n + k] = 0
        if arg_block is not None:
            rargs[n:n + k, :arg_block.shape[1]] = arg_block[idx]
        mem.add(keys[idx])
        for p in pools:
            if op_index != p:
                pools[p].append(np.arange(n, n + k))
        start = n
        n += k
        if stop is not None and state["found"] is None:
            hit = np.flatnonzero(stop(rows[start:n]))
            if hit.size:
                state["found"] = start + int(hit[0])
        return k

    def charge(count):
        nonlocal evaluations
        evaluations += count
        if budget is not None and evaluations > budget:
            raise BudgetExhausted(f"evaluation budget {budget} exhausted with {n} elements found",
                                  reached=n, cap=budget)

    def saturate(lo):
        """Run until nothing new appears; elements from ``lo`` on are unprocessed.

        Associative operations are saturated first (right multiplication by
        pool elements), the remaining operations afterwards.  Invariants: every
        product (s, p) with s, p below ``lo_a`` and p pooled is evaluated, and
        every non-pooled operation has seen all tuples below ``lo_b``.
        """
        lo_a = lo_b = lo
        while state["found"] is None:
            while lo_a < n and state["found"] is None:
                hi = n
                for oi in pools:
                    sym = ops[oi][0]
                    allpool = np.concatenate(pools[oi]) if pools[oi] else np.zeros(0, np.int64)
                    pools[oi] = [allpool] if allpool.size else []
                    allpool = allpool[allpool < hi]
                    _pairs(lo_a, hi, allpool, oi, sym)
                    _pairs(0, lo_a, allpool[allpool >= lo_a], oi, sym)
                lo_a = hi
            if lo_b >= n or state["found"] is not None:
                break
            hi = n
            for oi, (sym, arity) in enumerate(ops):
                if state["found"] is not None or arity == 0 or oi in pools:
                    continue
                if arity == 1:
                    for s in range(lo_b, hi, CHUNK):
                        e = min(hi, s + CHUNK)
                        charge(e - s)
                        a = np.arange(s, e)
                        push(_apply(factors, groups, sym, [rows[a]]), oi, a[:, None])
                else:
                    _general(lo_b, hi, oi, sym, arity)
            lo_b = hi

    def _pairs(a0, a1, right, oi, sym):
        if a1 <= a0 or right.size == 0:
            return
        left = np.arange(a0, a1)
        step = max(1, CHUNK // max(1, right.size))
        for s in range(0, left.size, step):
            if state["found"] is not None:
                return
            L = np.repeat(left[s:s + step], right.size)
            R = np.tile(right, min(step, left.size - s))
            charge(L.size)
            push(_apply(factors, groups, sym, [rows[L], rows[R]]), oi, np.stack([L, R], axis=1))

    def _general(lo, hi, oi, sym, arity):
        # tuples whose first "new" argument sits at position j
        for j in range(arity):
            dims = [lo] * j + [hi - lo] + [hi] * (arity - j - 1)
            total = int(np.prod(dims, dtype=object))
            if total == 0:
                continue
            for s in range(0, total, CHUNK):
                if state["found"] is not None:
                    return
                flat = np.arange(s, min(total, s + CHUNK), dtype=np.int64)
                idx = np.stack(np.unravel_index(flat, dims), axis=1)
                idx[:, j] += lo
                charge(len(flat))
                push(_apply(factors, groups, sym, [rows[idx[:, t]] for t in range(arity)]), oi, idx)

    # constants first so that they are available to every generator phase
    gen_rows = [tuple(int(x) for x in g) for g in gens]
    if sequential:
        phases = list(range(len(gens)))
    else:
        phases = [None]
    const_rows = []
    for oi, (sym, arity) in enumerate(ops):
        if arity == 0:
            const_rows.append((oi, np.asarray([[F.tables[sym][()] for F in factors]], dtype=dtype)))
    started = False
    for ph in phases if phases else [None]:
        if state["found"] is not None:
            break
        lo = n
        if ph is None:
            for g in range(len(gens)):
                push(gens[g:g + 1].astype(dtype), -1, np.asarray([[g]]))
        else:
            push(gens[ph:ph + 1].astype(dtype), -1, np.asarray([[ph]]))
        if not started:
            for oi, r in const_rows:
                push(r, oi, None)
            started = True
        saturate(lo)
    if not started:
        for oi, r in const_rows:
            push(r, oi, None)
        saturate(0)

    return ClosureResult(factors, rows[:n].copy(), ops, rop[:n].copy(), rargs[:n].copy(),
                         complete=state["found"] is None, found=state["found"],
                         evaluations=evaluations, generator_rows=gen_rows)


def subuniverse_closure(A: FiniteAlgebra, X, cap: int | None = None) -> list[DerivedElement]:
    """Subuniverse of ``A`` generated by ``X``; every element carries its derivation."""
    X = [int(x) for x in X]
    for x in X:
        if not 0 <= x < A.size:
            raise AlgebraError(f"{x} is not in the carrier of {A.name}")
    res = close([A], [[x] for x in X], cap=cap)
    return res.derived()


def closure_set(A: FiniteAlgebra, X) -> set[int]:
    return {d.element for d in subuniverse_closure(A, X)}
