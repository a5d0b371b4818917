"""Subgroups of (Z/p^e)^N in Howell form, and coordinates for finite abelian groups.

A finite abelian group splits into its Sylow subgroups, so every lattice
computation here is done one prime at a time over the local ring Z/p^e,
where the entry of least p-adic valuation always divides the others.
"""

from __future__ import annotations

from dataclasses import dataclass
from itertools import product
from typing import Optional

import numpy as np


def _valuation(c: np.ndarray, p: int, e: int) -> np.ndarray:
    v = np.zeros(c.shape, dtype=np.int64)
    x = c.copy()
    for _ in range(e):
        div = (x % p == 0) & (x != 0)
        v += div
        x = np.where(div, x // p, x)
    return v


@dataclass
class Howell:
    """Echelon basis of a subgroup of (Z/q)^N, q = p^e, with the Howell property.

    Rows with pivot column >= j span exactly the elements vanishing on the
    first j columns, which makes projections and intersections exact.
    """
    p: int
    e: int
    rows: np.ndarray
    pivots: np.ndarray

    @property
    def q(self) -> int:
        return self.p**self.e

    @property
    def ncols(self) -> int:
        return self.rows.shape[1]

    def log_order(self) -> float:
        """log_p of the subgroup order."""
        if not len(self.rows):
            return 0
        vals = self.rows[np.arange(len(self.rows)), self.pivots]
        return int(sum(self.e - _valuation(vals, self.p, self.e)))

    def order(self) -> int:
        return self.p**self.log_order()

    def sift(self, vecs: np.ndarray) -> tuple[np.ndarray, np.ndarray]:
        """Reduce vectors against the basis; returns (residuals, membership mask)."""
        q = self.q
        V = np.atleast_2d(np.asarray(vecs, dtype=np.int64)) % q
        ok = np.ones(len(V), dtype=bool)
        for row, j in zip(self.rows, self.pivots):
            pv = int(row[j])
            c = V[:, j]
            ok &= c % pv == 0
            V = (V - (c // pv)[:, None] * row[None, :]) % q
        ok &= ~V.any(axis=1)
        return V, ok

    def contains(self, vecs) -> np.ndarray:
        return self.sift(vecs)[1]

    def __eq__(self, other):
        if not isinstance(other, Howell):
            return NotImplemented
        return (self.q == other.q and self.ncols == other.ncols
                and other.contains(self.rows).all() and self.contains(other.rows).all())


def howell(rows, p: int, e: int, ncols: Optional[int] = None) -> Howell:
    q = p**e
    R = np.asarray(rows, dtype=np.int64)
    if R.ndim == 1:
        R = R[None, :] if R.size else R.reshape(0, ncols or 0)
    if ncols is None:
        ncols = R.shape[1]
    R = R.reshape(-1, ncols) % q
    R = R[R.any(axis=1)]
    out_rows, out_piv = [], []
    for j in range(ncols):
        if not len(R):
            break
        col = R[:, j]
        nz = np.flatnonzero(col)
        if not nz.size:
            continue
        vals = _valuation(col[nz], p, e)
        r = int(nz[np.argmin(vals)])
        v = int(vals.min())
        pv = p**v
        unit = int(col[r]) // pv
        piv = (R[r] * pow(unit, -1, q)) % q
        rest = np.delete(R, r, axis=0)
        if len(rest):
            rest = (rest - (rest[:, j] // pv)[:, None] * piv[None, :]) % q
        extra = (piv * (q // pv)) % q
        R = np.vstack([rest, extra[None, :]]) if extra.any() else rest
        R = R[R.any(axis=1)]
        out_rows.append(piv)
        out_piv.append(j)
    H = np.asarray(out_rows, dtype=np.int64).reshape(-1, ncols)
    return Howell(p, e, H, np.asarray(out_piv, dtype=np.int64))


def intersect(H1: Howell, H2: Howell) -> Howell:
    N = H1.ncols
    top = np.hstack([H1.rows, H1.rows])
    bot = np.hstack([H2.rows, np.zeros_like(H2.rows)])
    H = howell(np.vstack([top, bot]), H1.p, H1.e, 2 * N)
    keep = H.pivots >= N
    return howell(H.rows[keep][:, N:], H1.p, H1.e, N)


# -- finite abelian groups ----------------------------------------------

@dataclass
class PrimaryPart:
    p: int
    e: int
    coords: np.ndarray      # element -> vector in (Z/p^e)^r
    basis_orders: tuple

    @property
    def rank(self) -> int:
        return self.coords.shape[1]


@dataclass
class AbelianCoordinates:
    """Injective homomorphism of a finite abelian group into a sum of (Z/p^e)^r."""
    n: int
    parts: list
    decode_table: dict

    def encode(self, elements) -> list[np.ndarray]:
        elements = np.asarray(elements)
        return [P.coords[elements] for P in self.parts]

    def decode(self, vectors: list[np.ndarray]) -> np.ndarray:
        """Inverse of encode for vectors in the image (one array per prime)."""
        flat = np.concatenate([np.asarray(v, dtype=np.int64) % P.p**P.e
                               for v, P in zip(vectors, self.parts)], axis=-1)
        flat = np.atleast_2d(flat)
        return np.asarray([self.decode_table[tuple(int(x) for x in row)] for row in flat])


def _subgroup(add, zero, gens):
    seen = {zero}
    frontier = [zero]
    while frontier:
        nxt = []
        for a in frontier:
            for g in gens:
                b = int(add[a, g])
                if b not in seen:
                    seen.add(b)
                    nxt.append(b)
        frontier = nxt
    return seen


def _orders(add, zero):
    n = add.shape[0]
    out = np.zeros(n, dtype=np.int64)
    for a in range(n):
        x, k = a, 1
        while x != zero:
            x = int(add[x, a])
            k += 1
        out[a] = k
    return out


def abelian_coordinates(add: np.ndarray, zero: int) -> AbelianCoordinates:
    """Decompose the group (carrier, add) into cyclic factors of prime power order."""
    add = np.asarray(add)
    n = add.shape[0]
    orders = _orders(add, zero)
    parts = []
    for p in _primes(n):
        sylow = [a for a in range(n) if orders[a] == p**_pexp(int(orders[a]), p)]
        size = len(sylow)
        cands = sorted((a for a in sylow if a != zero), key=lambda a: (-orders[a], a))
        basis = _find_basis(add, zero, cands, orders, size)
        bord = tuple(int(orders[g]) for g in basis)
        e = max(_pexp(o, p) for o in bord)
        q = p**e
        coords = np.zeros((n, len(basis)), dtype=np.int64)
        # every element of the p-part is a unique combination of the basis
        for coeffs in product(*[range(o) for o in bord]):
            x = zero
            for c, g in zip(coeffs, basis):
                for _ in range(c):
                    x = int(add[x, g])
            coords[x] = [c * (q // o) for c, o in zip(coeffs, bord)]
        parts.append((p, e, coords, bord, set(sylow)))
    # general element = sum of its primary components
    comps = {}
    for a in range(n):
        comps[a] = []
        for p, e, coords, bord, syl in parts:
            # p-component is the multiple of a killing all other primes
            m = orders[a] // p**_pexp(int(orders[a]), p)
            inv = pow(int(m), -1, p**_pexp(int(orders[a]), p)) if orders[a] % p == 0 else 0
            x = zero
            for _ in range((m * inv) % orders[a]):
                x = int(add[x, a])
            comps[a].append(x)
    out_parts = []
    for idx, (p, e, coords, bord, syl) in enumerate(parts):
        full = np.stack([coords[comps[a][idx]] for a in range(n)]) if n else coords
        out_parts.append(PrimaryPart(p, e, full, bord))
    table = {}
    for a in range(n):
        key = tuple(int(x) for P in out_parts for x in P.coords[a])
        table[key] = a
    return AbelianCoordinates(n, out_parts, table)


def _primes(n: int) -> list[int]:
    out, d = [], 2
    while d * d <= n:
        if n % d == 0:
            out.append(d)
            while n % d == 0:
                n //= d
        d += 1
    if n > 1:
        out.append(n)
    return out


def _pexp(x: int, p: int) -> int:
    k = 0
    while x % p == 0 and x > 1:
        x //= p
        k += 1
    return k


def _find_basis(add, zero, cands, orders, size):
    def search(chosen, span, start):
        if len(span) == size:
            return chosen
        for i in range(start, len(cands)):
            g = cands[i]
            if g in span:
                continue
            new = _subgroup(add, zero, chosen + [g])
            expect = len(span) * orders[g]
            if len(new) != expect:
                continue
            res = search(chosen + [g], new, i + 1)
            if res is not None:
                return res
        return None

    basis = search([], {zero}, 0)
    if basis is None:
        raise ValueError("no cyclic decomposition found")
    return basis
