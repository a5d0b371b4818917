"""Higher term-condition commutators.

Cube functions live in A^(2^k); coordinate x = (x_1, ..., x_k) sits at index
sum x_i 2^(k-i), so x_1 is the most significant bit and the last coordinate
is the "result direction": the edge for x' in {0,1}^(k-1) joins indices 2x'
and 2x'+1, and the final edge is (2^k - 2, 2^k - 1).

Two exact routes compute the fixpoint.  The explicit route enumerates
M_A(alpha_1, ..., alpha_k).  When the algebra is an abelian group with
multilinear extra operations (modules, rings) M is a subgroup of A^(2^k), and
the fixpoint is computed on a Howell basis of M instead, which stays small
even when M is all of A^(2^k).
"""

from __future__ import annotations

from dataclasses import dataclass, field
from itertools import permutations, product
from typing import Optional, Sequence

import numpy as np

from . import linalg
from .closure import close
from .congruence import Congruence, Partition, cg, con_lattice, join, meet
from .core import AlgebraError, CapExceeded, FiniteAlgebra
from .reducts import abelian_group_reducts, group_reduct, ring_reduct

DEFAULT_K_CAP = 3
DEFAULT_M_CAP = 10**6


@dataclass(frozen=True)
class CubeFunction:
    k: int
    values: tuple

    def __post_init__(self):
        if len(self.values) != 2**self.k:
            raise AlgebraError(f"cube function of arity {self.k} needs {2**self.k} values")

    def at(self, bits: Sequence[int]) -> int:
        idx = 0
        for b in bits:
            idx = 2 * idx + int(b)
        return self.values[idx]


def cube(k: int, i: int, a: int, b: int) -> CubeFunction:
    """cube^k_i(a, b) with i counted from 1."""
    shift = k - i
    return CubeFunction(k, tuple(b if (x >> shift) & 1 else a for x in range(2**k)))


def _check_k(k, k_cap):
    if k < 1:
        raise AlgebraError("commutator arity must be at least 1")
    if k > k_cap:
        raise CapExceeded(f"arity {k} exceeds the commutator cap {k_cap}", reached=k, cap=k_cap)


def cube_generators(A: FiniteAlgebra, k: int, alphas: Sequence[Partition],
                    k_cap: int = DEFAULT_K_CAP) -> list[CubeFunction]:
    _check_k(k, k_cap)
    if len(alphas) != k:
        raise AlgebraError(f"need {k} congruences, got {len(alphas)}")
    out = []
    for i, al in enumerate(alphas, start=1):
        for a, b in al.pairs():
            out.append(cube(k, i, int(a), int(b)))
    return out


def generate_M(A: FiniteAlgebra, k: int, alphas: Sequence[Partition], cap: int = DEFAULT_M_CAP,
               k_cap: int = DEFAULT_K_CAP):
    """M_A(alpha_1, ..., alpha_k) as a subproduct of A^(2^k)."""
    from .subdirect import SubproductAlgebra
    gens = cube_generators(A, k, alphas, k_cap)
    rows = np.asarray([g.values for g in gens], dtype=np.int64)
    res = close([A] * 2**k, rows, cap=cap)
    return SubproductAlgebra([A] * 2**k, res.rows, closure=res, name=f"M_{A.name}")


@dataclass
class CommutatorResult:
    alphas: tuple
    gamma: Congruence
    iterations: int
    m_size: int
    route: str
    caveat: Optional[str] = None

    def to_json(self):
        return {"inputs": [a.blocks() for a in self.alphas], "commutator": self.gamma.blocks(),
                "iterations": self.iterations, "M_size": self.m_size, "route": self.route,
                "caveat": self.caveat}


# -- linear route ------------------------------------------------------------

@dataclass
class LinearModel:
    plus: str
    zero: int
    coords: linalg.AbelianCoordinates
    linear_ops: list          # (symbol, arity) of every non-constant operation


def linear_model(A: FiniteAlgebra) -> Optional[LinearModel]:
    """An abelian group operation making every other operation affine (unary) or multilinear."""
    key = ("linear_model",)
    if key in A._cache:
        return A._cache[key]
    found = None
    n = A.size
    for g in abelian_group_reducts(A):
        P = A.tables[g.op]
        neg = g.inverse
        ok = True
        lin = []
        for sym, arity in A.signature.symbols:
            if arity == 0:
                continue
            T = A.tables[sym]
            if sym == g.op:
                lin.append((sym, arity))
                continue
            if arity == 1:
                # f(a + b) = f(a) + f(b) - f(0)
                f0 = T[g.identity]
                lhs = T[P]
                rhs = P[P[T[:, None], T[None, :]], neg[f0]]
                ok = np.array_equal(lhs, rhs)
            else:
                if n ** (arity + 1) > 1 << 22:
                    ok = False
                for pos in range(arity):
                    if not ok:
                        break
                    # f(.., a + b, ..) = f(.., a, ..) + f(.., b, ..)
                    moved = np.moveaxis(T, pos, 0)                       # [a, rest]
                    lhs = moved[P]                                        # [a, b, rest]
                    rhs = P[moved[:, None], moved[None, :]]
                    ok = np.array_equal(lhs, rhs)
            if not ok:
                break
            lin.append((sym, arity))
        if ok:
            found = LinearModel(g.op, g.identity, linalg.abelian_coordinates(P, g.identity), lin)
            break
    A._cache[key] = found
    return found


def _encode_rows(model: LinearModel, rows: np.ndarray):
    """Rows of A^m -> one (N, m * r_p) matrix per prime."""
    out = []
    for P in model.coords.parts:
        out.append(P.coords[rows].reshape(len(rows), -1))
    return out


def _decode_vectors(model: LinearModel, pidx: int, vecs: np.ndarray, m: int) -> np.ndarray:
    """Vectors of one primary part (other parts zero) -> rows of A^m."""
    parts = model.coords.parts
    r = parts[pidx].rank
    out = np.empty((len(vecs), m), dtype=np.int64)
    for c in range(m):
        blocks = [np.zeros((len(vecs), P.rank), dtype=np.int64) for P in parts]
        blocks[pidx] = vecs[:, c * r:(c + 1) * r]
        out[:, c] = model.coords.decode(blocks) if len(vecs) else []
    return out


def _edge_transform(k: int, r: int) -> np.ndarray:
    """Matrix T with (row vector) v @ T = [face diffs | last diff | edge bases]."""
    m = 2**k
    half = m // 2
    T = np.zeros((m * r, m * r), dtype=np.int64)
    col = 0
    # face differences for x' != 1...1, then the final edge difference
    for e in range(half):
        for t in range(r):
            T[(2 * e + 1) * r + t, col] = 1
            T[(2 * e) * r + t, col] = -1
            col += 1
    for e in range(half):
        for t in range(r):
            T[(2 * e) * r + t, col] = 1
            col += 1
    return T


def _linear_M(A, model: LinearModel, k: int, alphas):
    """Howell bases (one per prime) of M_A(alphas) in plain coordinates."""
    m = 2**k
    n = A.size
    gens = [np.full(m, a) for a in range(n)]
    for i, al in enumerate(alphas, start=1):
        for v in np.flatnonzero(al.rep == al.rep[model.zero]):
            gens.append(np.asarray(cube(k, i, model.zero, int(v)).values))
    gens = np.asarray(gens, dtype=np.int64)
    parts = model.coords.parts
    mats = _encode_rows(model, gens)
    H = [linalg.howell(M, P.p, P.e, m * P.rank) for M, P in zip(mats, parts)]
    ops = [(s, a) for s, a in model.linear_ops if s != model.plus]
    while ops:
        basis = np.concatenate([_decode_vectors(model, j, h.rows, m) for j, h in enumerate(H)]
                               + [np.zeros((0, m), np.int64)])
        new = []
        for sym, arity in ops:
            T = A.tables[sym]
            if len(basis) ** arity > 1 << 22:
                raise CapExceeded("too many basis tuples in the linear route")
            idx = np.indices((len(basis),) * arity).reshape(arity, -1)
            vals = T[tuple(basis[i] for i in idx)]
            new.append(vals)
        cand = np.concatenate(new)
        grew = False
        enc = _encode_rows(model, cand)
        for j, (h, E, P) in enumerate(zip(H, enc, parts)):
            res, ok = h.sift(E)
            if not ok.all():
                H[j] = linalg.howell(np.vstack([h.rows, res[~ok]]), P.p, P.e, m * P.rank)
                grew = True
        if not grew:
            break
    return H


def _commutator_linear(A, model: LinearModel, alphas):
    k = len(alphas)
    m = 2**k
    half = m // 2
    parts = model.coords.parts
    H = _linear_M(A, model, k, alphas)
    HT = []
    m_size = 1
    for h, P in zip(H, parts):
        m_size *= h.order()
        T = _edge_transform(k, P.rank)
        HT.append(linalg.howell(h.rows @ T, P.p, P.e, m * P.rank))
    gamma = Congruence.zero(A)
    iterations = 0
    while True:
        iterations += 1
        zero_class = np.flatnonzero(gamma.rep == gamma.rep[model.zero])
        pairs = []
        for j, (h, P) in enumerate(zip(HT, parts)):
            r = P.rank
            if r == 0:
                continue
            G = linalg.howell(P.coords[zero_class], P.p, P.e, r)
            nf = half - 1
            rows = []
            for f in range(nf):
                blk = np.zeros((len(G.rows), m * r), dtype=np.int64)
                blk[:, f * r:(f + 1) * r] = G.rows
                rows.append(blk)
            free = np.eye(m * r, dtype=np.int64)[nf * r:]
            rows.append(free)
            L2 = linalg.howell(np.vstack(rows), P.p, P.e, m * r)
            K = linalg.intersect(h, L2)
            E = K.rows[:, nf * r:(nf + 1) * r]
            E = E[E.any(axis=1)]
            if len(E):
                blocks = [np.zeros((len(E), Q.rank), dtype=np.int64) for Q in parts]
                blocks[j] = E
                for e in model.coords.decode(blocks):
                    pairs.append((model.zero, int(e)))
        new = cg(A, pairs, base=gamma)
        if new == gamma:
            return gamma, iterations, m_size
        gamma = new


# -- explicit route ------------------------------------------------------------

def _commutator_explicit(A, alphas, cap):
    k = len(alphas)
    M = generate_M(A, k, alphas, cap=cap, k_cap=max(k, 1))
    rows = M.rows
    m = 2**k
    gamma = Congruence.zero(A)
    iterations = 0
    while True:
        iterations += 1
        rep = gamma.rep
        ok = np.ones(len(rows), dtype=bool)
        for e in range(m // 2 - 1):
            ok &= rep[rows[:, 2 * e]] == rep[rows[:, 2 * e + 1]]
        pairs = np.unique(rows[ok][:, [m - 2, m - 1]], axis=0)
        new = cg(A, pairs, base=gamma)
        if new == gamma:
            return gamma, iterations, M.size
        gamma = new


def _malcev_caveat(A) -> Optional[str]:
    from .synthesis import NONE_FOUND, malcev_status
    status = malcev_status(A)
    if status == "found":
        return None
    if status == NONE_FOUND:
        return "no Mal'cev term: term-condition closure (non-modular caveat)"
    return f"Mal'cev search inconclusive ({status}): term-condition closure (non-modular caveat)"


def commutator(A: FiniteAlgebra, alphas: Sequence[Partition], route: str = "auto",
               cap: int = DEFAULT_M_CAP, k_cap: int = DEFAULT_K_CAP,
               check_malcev: bool = True) -> CommutatorResult:
    """[alpha_1, ..., alpha_k] as the least fixpoint of the term condition.

    ``route`` is "auto", "explicit" or "linear".  Results are cached on the
    algebra per input tuple.
    """
    alphas = tuple(alphas)
    k = len(alphas)
    _check_k(k, k_cap)
    for al in alphas:
        if al.n != A.size:
            raise AlgebraError("congruence does not belong to the algebra")
    key = ("comm", route, tuple(al.key() for al in alphas))
    hit = A._cache.get(key)
    if hit is None and route == "auto":
        hit = A._cache.get(("comm", "any", key[2]))
    if hit is not None:
        return hit
    model = linear_model(A) if route in ("auto", "linear") else None
    if route == "linear" and model is None:
        raise AlgebraError("algebra has no abelian group structure with multilinear operations")
    if model is not None:
        gamma, it, msize = _commutator_linear(A, model, alphas)
        used = "linear"
    else:
        gamma, it, msize = _commutator_explicit(A, alphas, cap)
        used = "explicit"
    caveat = _malcev_caveat(A) if check_malcev else None
    res = CommutatorResult(alphas, gamma, it, msize, used, caveat)
    A._cache[key] = res
    A._cache[("comm", "any", key[2])] = res
    return res


def term_condition_holds(A: FiniteAlgebra, alphas: Sequence[Partition], gamma: Partition,
                         cap: int = DEFAULT_M_CAP) -> bool:
    """Direct check of the term condition for ``gamma`` over all of M."""
    k = len(alphas)
    M = generate_M(A, k, alphas, cap=cap, k_cap=max(k, 1))
    rows = M.rows
    m = 2**k
    rep = gamma.rep
    ok = np.ones(len(rows), dtype=bool)
    for e in range(m // 2 - 1):
        ok &= rep[rows[:, 2 * e]] == rep[rows[:, 2 * e + 1]]
    return bool((rep[rows[ok, m - 2]] == rep[rows[ok, m - 1]]).all())


# -- oracles -------------------------------------------------------------------------

def _closure_by(op_table, gens, start):
    seen = set(start)
    frontier = list(seen)
    gens = list(gens)
    while frontier:
        nxt = []
        for a in frontier:
            for g in gens:
                b = int(op_table[a, g])
                if b not in seen:
                    seen.add(b)
                    nxt.append(b)
        frontier = nxt
    return seen


def _zero_class(theta: Partition, e: int) -> list[int]:
    return [int(x) for x in np.flatnonzero(theta.rep == theta.rep[e])]


def group_oracle(A: FiniteAlgebra, Ns: Sequence[Partition]) -> Congruence:
    """Product over permutations of left-associated iterated element commutators."""
    red = group_reduct(A)
    if red is None:
        raise AlgebraError(f"{A.name} has no group reduct")
    mul, e, inv = A.tables[red.op], red.identity, red.inverse
    subs = [_zero_class(N, e) for N in Ns]

    def comm(H, N):
        gens = {int(mul[mul[inv[h], inv[n]], mul[h, n]]) for h in H for n in N}
        return _closure_by(mul, gens, {e})

    total = {e}
    for sigma in permutations(range(len(subs))):
        H = set(subs[sigma[0]])
        for t in sigma[1:]:
            H = comm(H, subs[t])
        total |= H
    Nf = _closure_by(mul, total, {e})
    labels = [min(int(mul[n, a]) for n in Nf) for a in range(A.size)]
    return Congruence.checked(A, labels)


def ring_oracle(A: FiniteAlgebra, Is: Sequence[Partition]) -> Congruence:
    """Sum over permutations of the ideal products."""
    red = ring_reduct(A)
    if red is None:
        raise AlgebraError(f"{A.name} has no ring reduct")
    add, mul, z, neg = A.tables[red.add], A.tables[red.mul], red.zero, red.neg
    ideals = [_zero_class(I, z) for I in Is]
    gens = set()
    for sigma in permutations(range(len(ideals))):
        prods = set(ideals[sigma[0]])
        for t in sigma[1:]:
            prods = {int(mul[p, b]) for p in prods for b in ideals[t]}
        gens |= prods
    J = _closure_by(add, gens, {z})
    labels = [min(int(add[a, neg[j]]) for j in J) for a in range(A.size)]
    return Congruence.checked(A, labels)


# -- property suite ------------------------------------------------------------------

@dataclass
class PropertyReport:
    algebra: str
    malcev: str
    counts: dict = field(default_factory=dict)
    violations: dict = field(default_factory=dict)

    @property
    def ok(self) -> bool:
        return not any(self.violations.values())

    def to_json(self):
        return {"algebra": self.algebra, "malcev": self.malcev, "checked": self.counts,
                "violations": {k: v[:5] for k, v in self.violations.items()}}


def property_suite(A: FiniteAlgebra, congruences: Optional[Sequence[Partition]] = None,
                   k_max: int = 3, route: str = "auto") -> PropertyReport:
    """Check (C1)-(C6) on all tuples (arity <= k_max) from ``congruences``."""
    from .synthesis import malcev_status
    L = con_lattice(A)
    congs = list(L.congruences) if congruences is None else list(congruences)
    idx = {c.key(): i for i, c in enumerate(L.congruences)}
    leq = L.lattice.leq
    J = L.lattice.join_table
    M = L.lattice.meet_table
    covers: dict[int, list[int]] = {}
    for a, b in L.covers():
        covers.setdefault(a, []).append(b)
    sel = [idx[c.key()] for c in congs]
    memo: dict = {}

    def br(t):
        if t not in memo:
            res = commutator(A, [L.congruences[i] for i in t], route=route)
            memo[t] = idx[res.gamma.key()]
        return memo[t]

    rep = PropertyReport(A.name, malcev_status(A), {f"C{i}": 0 for i in range(1, 7)},
                         {f"C{i}": [] for i in range(1, 7)})

    def record(name, ok, witness):
        rep.counts[name] += 1
        if not ok:
            rep.violations[name].append(witness)

    for k in range(1, k_max + 1):
        for t in product(sel, repeat=k):
            g = br(t)
            mt = t[0]
            for x in t[1:]:
                mt = M[mt, x]
            record("C1", leq[g, mt], {"tuple": t})
            for pos in range(k):
                for up in covers.get(t[pos], []):
                    t2 = t[:pos] + (up,) + t[pos + 1:]
                    record("C2", leq[g, br(t2)], {"tuple": t, "raised": t2})
            if k >= 2:
                record("C3", leq[g, br(t[1:])], {"tuple": t})
            for s in set(permutations(t)):
                record("C4", br(s) == g, {"tuple": t, "perm": s})
    for k in range(1, k_max + 1):
        for rest in product(sel, repeat=k - 1):
            for b1 in sel:
                for b2 in sel:
                    lhs = br((int(J[b1, b2]),) + rest)
                    rhs = J[br((b1,) + rest), br((b2,) + rest)]
                    record("C5", lhs == rhs, {"betas": (b1, b2), "rest": rest})
    for k in range(1, k_max):
        for ell in range(1, k_max - k + 1):
            for t in product(sel, repeat=k):
                inner = br(t)
                for bs in product(sel, repeat=ell):
                    record("C6", leq[br((inner,) + bs), br(t + bs)], {"alphas": t, "betas": bs})
    return rep


# -- subdirect products and supernilpotence -------------------------------------------

def _project_congruence(C, gamma: Partition, j: int) -> Congruence:
    rows = C.rows
    a, b = np.nonzero(gamma.rep[:, None] == gamma.rep[None, :])
    pairs = np.stack([rows[a, j], rows[b, j]], axis=1)
    return cg(C.factors[j], np.unique(pairs, axis=0))


def sdcom_check(C, gammas: Sequence[Partition], route: str = "auto") -> dict:
    """[g_1..g_k] <=_sd [pi_A g_i] x [pi_B g_i] for a two-factor subproduct C."""
    if C.n_factors != 2:
        raise AlgebraError("sdcom_check needs exactly two factors")
    Calg = C.as_algebra()
    left = commutator(Calg, gammas, route=route).gamma
    sides = []
    for j in range(2):
        proj = [_project_congruence(C, g, j) for g in gammas]
        sides.append(commutator(C.factors[j], proj, route=route).gamma)
    a, b = np.nonzero(left.rep[:, None] == left.rep[None, :])
    contained = True
    onto = []
    for j in range(2):
        x, y = C.rows[a, j], C.rows[b, j]
        rep = sides[j].rep
        contained &= bool((rep[x] == rep[y]).all())
        got = Partition.from_pairs(C.factors[j].size, np.stack([x, y], axis=1))
        onto.append(got == sides[j])
    return {"contained": contained, "subdirect": all(onto), "ok": contained and all(onto),
            "left": left.blocks(), "A_side": sides[0].blocks(), "B_side": sides[1].blocks()}


@dataclass
class SupernilpotenceResult:
    status: str                  # "class", "exceeds", "inconclusive"
    cls: Optional[int]
    evidence: list

    def to_json(self):
        return {"status": self.status, "class": self.cls, "evidence": self.evidence}


def supernilpotence_class(A: FiniteAlgebra, relative_to: Optional[Partition] = None, max_k: int = 2,
                          k_cap: int = DEFAULT_K_CAP, route: str = "auto") -> SupernilpotenceResult:
    """Least k with the (k+1)-ary self-commutator of ``relative_to`` equal to 0.

    Arities above the cap are bounded from below by the iterated binary
    commutator, which is smaller by (C6).
    """
    alpha = Congruence.one(A) if relative_to is None else relative_to
    if max_k < 0:
        raise AlgebraError("max_k must be non-negative")
    evidence = []
    if alpha.is_identity():
        return SupernilpotenceResult("class", 0, [{"arity": 1, "zero": True}])
    for k in range(1, max_k + 1):
        if k + 1 <= k_cap:
            g = commutator(A, [alpha] * (k + 1), route=route, k_cap=k_cap).gamma
            evidence.append({"arity": k + 1, "zero": g.is_identity(), "commutator": g.blocks()})
            if g.is_identity():
                return SupernilpotenceResult("class", k, evidence)
            continue
        # beyond the cap: [..[[a, a], a].., a] <= [a, ..., a]
        it = alpha
        for _ in range(k):
            it = commutator(A, [it, alpha], route=route, k_cap=k_cap).gamma
        evidence.append({"arity": k + 1, "iterated_binary_zero": it.is_identity(), "bound": "lower"})
        if it.is_identity():
            return SupernilpotenceResult("inconclusive", None, evidence)
    return SupernilpotenceResult("exceeds", None, evidence)
