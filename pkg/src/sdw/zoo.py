"""Small named algebras used by the tests, the acceptance suite and the CLI."""

from __future__ import annotations

from functools import lru_cache
from itertools import permutations, product

from .core import FiniteAlgebra, algebra_from_functions

GROUP_SIG = ("mul", "inv", "one")


def _compose(p, q):
    # (p*q)(i) = p(q(i))
    return tuple(p[i] for i in q)


def _perm_inverse(p):
    out = [0] * len(p)
    for i, v in enumerate(p):
        out[v] = i
    return tuple(out)


def perm_group(name: str, gens) -> FiniteAlgebra:
    gens = [tuple(g) for g in gens]
    ident = tuple(range(len(gens[0])))
    seen = {ident}
    frontier = [ident]
    while frontier:
        nxt = []
        for p in frontier:
            for g in gens:
                q = _compose(p, g)
                if q not in seen:
                    seen.add(q)
                    nxt.append(q)
        frontier = nxt
    elems = sorted(seen)
    return algebra_from_functions(name, elems, [
        ("mul", 2, _compose), ("inv", 1, _perm_inverse), ("one", 0, lambda: ident)])


def abelian_group(name: str, moduli) -> FiniteAlgebra:
    """Direct sum of cyclic groups in multiplicative signature."""
    moduli = tuple(moduli)
    elems = list(product(*[range(m) for m in moduli]))
    return algebra_from_functions(name, elems, [
        ("mul", 2, lambda a, b: tuple((x + y) % m for x, y, m in zip(a, b, moduli))),
        ("inv", 1, lambda a: tuple((-x) % m for x, m in zip(a, moduli))),
        ("one", 0, lambda: tuple(0 for _ in moduli))])


def cyclic(n: int) -> FiniteAlgebra:
    """Z_n with signature (add, neg, zero)."""
    return _cyclic_additive(n)


@lru_cache(maxsize=None)
def _cyclic_additive(n):
    return algebra_from_functions(f"Z{n}", list(range(n)), [
        ("add", 2, lambda a, b: (a + b) % n), ("neg", 1, lambda a: (-a) % n), ("zero", 0, lambda: 0)])


def _q8():
    # quaternion units as (sign, unit) with unit in 1, i, j, k
    table = {
        ("1", "1"): (1, "1"), ("1", "i"): (1, "i"), ("1", "j"): (1, "j"), ("1", "k"): (1, "k"),
        ("i", "1"): (1, "i"), ("i", "i"): (-1, "1"), ("i", "j"): (1, "k"), ("i", "k"): (-1, "j"),
        ("j", "1"): (1, "j"), ("j", "i"): (-1, "k"), ("j", "j"): (-1, "1"), ("j", "k"): (1, "i"),
        ("k", "1"): (1, "k"), ("k", "i"): (1, "j"), ("k", "j"): (-1, "i"), ("k", "k"): (-1, "1"),
    }
    elems = [(s, u) for u in "1ijk" for s in (1, -1)]

    def mul(a, b):
        s, u = table[(a[1], b[1])]
        return (a[0] * b[0] * s, u)

    def inv(a):
        return a if a[1] == "1" else (-a[0], a[1])

    return algebra_from_functions("Q8", elems, [("mul", 2, mul), ("inv", 1, inv), ("one", 0, lambda: (1, "1"))])


@lru_cache(maxsize=None)
def group(name: str) -> FiniteAlgebra:
    if name.startswith("Z") and name[1:].isdigit():
        return abelian_group(name, [int(name[1:])])
    if name == "Z2^2":
        return abelian_group(name, [2, 2])
    if name == "Z2^3":
        return abelian_group(name, [2, 2, 2])
    if name == "Z4xZ2":
        return abelian_group(name, [4, 2])
    if name == "S3":
        return perm_group("S3", [(1, 0, 2), (1, 2, 0)])
    if name == "D4":
        return perm_group("D4", [(1, 2, 3, 0), (0, 3, 2, 1)])
    if name == "Q8":
        return _q8()
    raise KeyError(f"unknown group {name!r}")


GROUP_NAMES = ("Z1", "Z2", "Z3", "Z4", "Z2^2", "Z5", "Z6", "S3", "Z7", "Z8", "Z4xZ2", "Z2^3", "D4", "Q8")


def groups() -> list[FiniteAlgebra]:
    return [group(n) for n in GROUP_NAMES]


def _ring(name, elems, add, neg, zero, mul):
    return algebra_from_functions(name, elems, [
        ("add", 2, add), ("neg", 1, neg), ("zero", 0, lambda: zero), ("mul", 2, mul)])


@lru_cache(maxsize=None)
def ring(name: str) -> FiniteAlgebra:
    if name in ("Z4", "Z8", "Z2", "Z3", "Z6", "Z9"):
        n = int(name[1:])
        return _ring(name, list(range(n)), lambda a, b: (a + b) % n, lambda a: (-a) % n, 0,
                     lambda a, b: (a * b) % n)
    if name == "Z2xZ2":
        elems = list(product(range(2), repeat=2))
        return _ring(name, elems, lambda a, b: ((a[0] + b[0]) % 2, (a[1] + b[1]) % 2), lambda a: a, (0, 0),
                     lambda a, b: (a[0] * b[0], a[1] * b[1]))
    if name == "UT2":
        # upper triangular [[a, b], [0, c]] over GF(2)
        elems = list(product(range(2), repeat=3))
        return _ring(name, elems, lambda p, q: tuple((x + y) % 2 for x, y in zip(p, q)), lambda p: p, (0, 0, 0),
                     lambda p, q: (p[0] * q[0] % 2, (p[0] * q[1] + p[1] * q[2]) % 2, p[2] * q[2] % 2))
    if name == "F2[x]/x^2":
        elems = list(product(range(2), repeat=2))
        return _ring(name, elems, lambda p, q: ((p[0] + q[0]) % 2, (p[1] + q[1]) % 2), lambda p: p, (0, 0),
                     lambda p, q: (p[0] * q[0] % 2, (p[0] * q[1] + p[1] * q[0]) % 2))
    raise KeyError(f"unknown ring {name!r}")


RING_NAMES = ("Z4", "Z8", "Z2xZ2", "UT2")


def rings() -> list[FiniteAlgebra]:
    return [ring(n) for n in RING_NAMES]


def _lattice_from_leq(name, elems, leq, ops=("meet", "join")):
    def meet(a, b):
        lower = [c for c in elems if leq(c, a) and leq(c, b)]
        return next(c for c in lower if all(leq(d, c) for d in lower))

    def join(a, b):
        upper = [c for c in elems if leq(a, c) and leq(b, c)]
        return next(c for c in upper if all(leq(c, d) for d in upper))

    fns = {"meet": meet, "join": join}
    return algebra_from_functions(name, elems, [(o, 2, fns[o]) for o in ops])


@lru_cache(maxsize=None)
def lattice(name: str) -> FiniteAlgebra:
    if name == "2":
        return _lattice_from_leq("L2", [0, 1], lambda a, b: a <= b)
    if name == "SL2":
        return _lattice_from_leq("SL2", [0, 1], lambda a, b: a <= b, ops=("meet",))
    if name == "M3":
        # 0 = bottom, 1..3 = atoms a, b, c, 4 = top
        return _lattice_from_leq("M3", [0, 1, 2, 3, 4], lambda p, q: p == q or p == 0 or q == 4)
    if name == "N5":
        # 0 < 1 < 2 < 4 and 0 < 3 < 4
        below = {0: {0}, 1: {0, 1}, 2: {0, 1, 2}, 3: {0, 3}, 4: {0, 1, 2, 3, 4}}
        return _lattice_from_leq("N5", [0, 1, 2, 3, 4], lambda p, q: p in below[q])
    if name == "3":
        return _lattice_from_leq("L3", [0, 1, 2], lambda a, b: a <= b)
    raise KeyError(f"unknown lattice {name!r}")


M3_ATOMS = {"x": 1, "y": 2, "z": 3}


def named(spec: str) -> FiniteAlgebra:
    """Resolve ``group:S3``, ``ring:UT2``, ``lattice:M3`` or ``cyclic:4``."""
    kind, _, name = spec.partition(":")
    if kind == "group":
        return group(name)
    if kind == "ring":
        return ring(name)
    if kind == "lattice":
        return lattice(name)
    if kind == "cyclic":
        return cyclic(int(name))
    raise KeyError(f"unknown algebra spec {spec!r}")


def corpus() -> list[FiniteAlgebra]:
    return groups() + rings() + [lattice("2"), lattice("SL2"), lattice("M3"), lattice("N5")]
