"""Subdirect and fiber products, factor kernels, projections and pair analysis."""

from __future__ import annotations

import json
import os
from dataclasses import dataclass, field
from itertools import product as iproduct
from typing import Optional, Sequence

import numpy as np

from .closure import ClosureResult, close
from .congruence import (Congruence, Partition, _components, canonical, cg, con_lattice,
                         is_modular, join, permute)
from .core import (MAX_TABLE_ENTRIES, AlgebraError, CapExceeded, FiniteAlgebra,
                   ProductCodec, SignatureMismatch, is_homomorphism, load_algebra,
                   max_carrier, quotient)
from .reducts import abelian_group_reducts


class SubproductAlgebra:
    """A subuniverse of ``F_1 x ... x F_n``, stored as sorted product codes."""

    def __init__(self, factors: Sequence[FiniteAlgebra], rows, closure: Optional[ClosureResult] = None,
                 name: str = "C"):
        self.factors = list(factors)
        if not self.factors:
            raise AlgebraError("a subproduct needs at least one factor")
        sig = self.factors[0].signature
        for F in self.factors[1:]:
            if F.signature != sig:
                raise SignatureMismatch(f"factor {F.name!r} has a different signature")
        self.codec = ProductCodec([F.size for F in self.factors])
        if not self.codec.fits_int64:
            raise CapExceeded("product carrier too large for flat indexing")
        rows = np.asarray(rows, dtype=np.int64).reshape(-1, len(self.factors))
        codes = self.codec.encode_rows(rows) if len(rows) else np.zeros(0, np.int64)
        codes, first = np.unique(codes, return_index=True)
        self.codes = codes
        self.rows = rows[first]
        self.closure = closure
        self.name = name
        self._alg = None
        self._cache: dict = {}

    # construction -------------------------------------------------------
    @classmethod
    def from_generators(cls, factors, generators, cap: Optional[int] = None, name="C") -> "SubproductAlgebra":
        factors = list(factors)
        res = close(factors, np.asarray(generators, dtype=np.int64).reshape(-1, len(factors)), cap=cap)
        return cls(factors, res.rows, closure=res, name=name)

    @classmethod
    def from_elements(cls, factors, elements, check: bool = True, name="C") -> "SubproductAlgebra":
        C = cls(factors, elements, name=name)
        if check:
            res = close(C.factors, C.rows, cap=max(len(C.rows) * 4, 16))
            if len(res.rows) != len(C.rows):
                extra = res.rows[~C.contains(res.rows)][0]
                raise AlgebraError(f"element list is not closed: {tuple(int(x) for x in extra)} is generated")
        return C

    # basic queries ------------------------------------------------------
    @property
    def n_factors(self) -> int:
        return len(self.factors)

    @property
    def size(self) -> int:
        return len(self.codes)

    def __len__(self):
        return self.size

    def index_of(self, rows) -> np.ndarray:
        """Position of each row in the element list, -1 when absent."""
        rows = np.atleast_2d(np.asarray(rows, dtype=np.int64))
        codes = self.codec.encode_rows(rows)
        pos = np.searchsorted(self.codes, codes)
        pos = np.minimum(pos, max(len(self.codes) - 1, 0))
        ok = len(self.codes) > 0
        found = (self.codes[pos] == codes) if ok else np.zeros(len(codes), bool)
        return np.where(found, pos, -1)

    def contains(self, rows) -> np.ndarray:
        return self.index_of(rows) >= 0

    def elements(self) -> list[tuple[int, ...]]:
        return [tuple(int(x) for x in r) for r in self.rows]

    def as_algebra(self) -> FiniteAlgebra:
        """The subalgebra as a stand-alone algebra on positions 0..|C|-1."""
        if self._alg is not None:
            return self._alg
        N = self.size
        tables = {}
        for sym, arity in self.factors[0].signature:
            if N**arity > MAX_TABLE_ENTRIES:
                raise CapExceeded(f"table of {sym!r} for a subalgebra of size {N} is too large",
                                  reached=N**arity, cap=MAX_TABLE_ENTRIES)
            if arity == 0:
                row = np.asarray([[F.tables[sym][()] for F in self.factors]])
                tables[sym] = np.asarray(self.index_of(row)[0])
                continue
            grids = np.indices((N,) * arity).reshape(arity, -1)
            out = np.empty((grids.shape[1], self.n_factors), dtype=np.int64)
            for j, F in enumerate(self.factors):
                out[:, j] = F.tables[sym][tuple(self.rows[g, j] for g in grids)]
            idx = self.index_of(out)
            if (idx < 0).any():
                raise AlgebraError("element set is not closed under " + sym)
            tables[sym] = idx.reshape((N,) * arity)
        self._alg = FiniteAlgebra(self.name, N, self.factors[0].signature, tables)
        return self._alg

    def kernel_partition(self, i: int) -> Partition:
        return Partition(canonical(self.rows[:, i]))

    def kernel(self, i: int) -> Congruence:
        """ker of the i-th projection as a congruence of ``as_algebra()``."""
        return Congruence(self.as_algebra(), canonical(self.rows[:, i]))

    def to_json(self, factor_paths=None) -> dict:
        return {"factors": factor_paths or [F.name for F in self.factors],
                "elements": [list(e) for e in self.elements()]}

    def __repr__(self):
        return f"SubproductAlgebra({self.size} elements of {' x '.join(F.name for F in self.factors)})"


def full_product(factors) -> SubproductAlgebra:
    factors = list(factors)
    codec = ProductCodec([F.size for F in factors])
    if codec.size > max_carrier():
        raise CapExceeded(f"product of size {codec.size} exceeds cap", reached=codec.size, cap=max_carrier())
    return SubproductAlgebra(factors, codec.decode_codes(np.arange(codec.size)))


def diagonal(A: FiniteAlgebra, n: int = 2) -> SubproductAlgebra:
    return SubproductAlgebra([A] * n, np.repeat(np.arange(A.size)[:, None], n, axis=1))


# -- queries ----------------------------------------------------------------

@dataclass
class Check:
    ok: bool
    witness: object = None
    details: dict = field(default_factory=dict)

    def __bool__(self):
        return self.ok


def is_subdirect(C: SubproductAlgebra) -> Check:
    for j, F in enumerate(C.factors):
        hit = np.zeros(F.size, dtype=bool)
        hit[C.rows[:, j]] = True
        if not hit.all():
            return Check(False, {"coordinate": j, "missing": int(np.flatnonzero(~hit)[0])})
    return Check(True)


def _require_subdirect(C):
    r = is_subdirect(C)
    if not r:
        w = r.witness
        raise AlgebraError(f"not subdirect: coordinate {w['coordinate']} misses {w['missing']}")


def _require_two(C):
    if C.n_factors != 2:
        raise AlgebraError(f"expected 2 factors, got {C.n_factors}")


def fiber_product(A: FiniteAlgebra, B: FiniteAlgebra, g, h, D: FiniteAlgebra) -> SubproductAlgebra:
    """{(a, b) : g(a) = h(b)} for surjective homomorphisms g: A -> D, h: B -> D."""
    g = np.asarray(g, dtype=np.int64)
    h = np.asarray(h, dtype=np.int64)
    for nm, X, f in (("g", A, g), ("h", B, h)):
        r = is_homomorphism(X, D, f)
        if not r:
            raise AlgebraError(f"{nm} is not a homomorphism into {D.name}: {r.witness}")
        if len(np.unique(f)) != D.size:
            missing = sorted(set(range(D.size)) - set(f.tolist()))[0]
            raise AlgebraError(f"{nm} is not surjective: {missing} has no preimage")
    a, b = np.nonzero(g[:, None] == h[None, :])
    return SubproductAlgebra([A, B], np.stack([a, b], axis=1), name=f"{A.name}x_{D.name}{B.name}")


def _bipartite(C: SubproductAlgebra):
    """Components of the graph on A ⊔ B with an edge per element of C."""
    nA, nB = C.factors[0].size, C.factors[1].size
    lab = _components(nA + nB, C.rows[:, 0], C.rows[:, 1] + nA)
    return lab[:nA], lab[nA:]


@dataclass
class FactorKernels:
    lambda_A: Congruence
    lambda_B: Congruence
    quotient: FiniteAlgebra
    bijection: np.ndarray        # block index of A/λ_A -> block index of B/λ_B
    join: Congruence             # ker π_A ∨ ker π_B on C


def factor_kernels(C: SubproductAlgebra) -> FactorKernels:
    _require_two(C)
    _require_subdirect(C)
    A, B = C.factors
    la, lb = _bipartite(C)
    lam_A = Congruence(A, canonical(la))
    lam_B = Congruence(B, canonical(lb))
    ia, ib = lam_A.block_index(), lam_B.block_index()
    k = lam_A.num_blocks()
    if k != lam_B.num_blocks():
        raise AssertionError("factor quotients differ in size")
    bij = np.full(k, -1, dtype=np.int64)
    bij[ia[C.rows[:, 0]]] = ib[C.rows[:, 1]]
    # the bijection induced through C is an isomorphism A/λ_A -> B/λ_B
    QA, _ = quotient(A, lam_A)
    QB, _ = quotient(B, lam_B)
    iso = is_homomorphism(QA, QB, bij)
    if not iso or len(np.unique(bij)) != k:
        raise AssertionError(f"induced map between factor quotients is not an isomorphism: {iso.witness}")
    Calg = C.as_algebra()
    jn = join(C.kernel(0), C.kernel(1))
    Q, _ = quotient(Calg, jn)
    return FactorKernels(lam_A, lam_B, Q, bij, jn)


@dataclass
class FiberWitness:
    g: np.ndarray
    h: np.ndarray
    D: FiniteAlgebra


def is_fiber_product(C: SubproductAlgebra) -> Check:
    """Fleischer's test: C is a fiber product iff the projection kernels permute."""
    _require_two(C)
    _require_subdirect(C)
    pr = permute(C.kernel_partition(0), C.kernel_partition(1))
    if not pr.ok:
        x, z = pr.witness
        return Check(False, {"x": C.elements()[x], "z": C.elements()[z]},
                     {"reason": "projection kernels do not permute"})
    A, B = C.factors
    la, lb = _bipartite(C)
    lam_A = Congruence(A, canonical(la))
    D, g = quotient(A, lam_A)
    ia = lam_A.block_index()
    comp_to_block = {}
    for a in range(A.size):
        comp_to_block.setdefault(int(la[a]), int(ia[a]))
    h = np.asarray([comp_to_block[int(c)] for c in lb], dtype=np.int64)
    wit = FiberWitness(np.asarray(g), h, D)
    # sanity: C is exactly the equalizer
    a, b = C.rows[:, 0], C.rows[:, 1]
    assert (wit.g[a] == wit.h[b]).all()
    assert len(C) == int(sum(np.bincount(wit.g, minlength=D.size) * np.bincount(wit.h, minlength=D.size)))
    return Check(True, wit)


def project(C: SubproductAlgebra, I: Sequence[int]) -> SubproductAlgebra:
    I = [int(i) for i in I]
    if not I:
        raise AlgebraError("projection onto an empty coordinate set")
    for i in I:
        if not 0 <= i < C.n_factors:
            raise AlgebraError(f"coordinate {i} out of range")
    return SubproductAlgebra([C.factors[i] for i in I], C.rows[:, I], name=f"pi{I}({C.name})")


def split(C: SubproductAlgebra, I: Sequence[int], J: Sequence[int]) -> SubproductAlgebra:
    """View C as a subdirect product of pi_I(C) and pi_J(C)."""
    I, J = list(I), list(J)
    CI, CJ = project(C, I), project(C, J)
    AI, AJ = CI.as_algebra(), CJ.as_algebra()
    rows = np.stack([CI.index_of(C.rows[:, I]), CJ.index_of(C.rows[:, J])], axis=1)
    return SubproductAlgebra([AI, AJ], rows, name=f"{C.name}[{I}|{J}]")


@dataclass
class PairEntry:
    i: int
    j: int
    surjective: bool
    quotient_size: int
    lambda_ij: Partition     # on A_j
    lambda_ji: Partition     # on A_i


@dataclass
class PairReport:
    entries: list

    def __getitem__(self, ij):
        for e in self.entries:
            if (e.i, e.j) == tuple(ij):
                return e
        raise KeyError(ij)

    def all_surjective(self) -> bool:
        return all(e.surjective for e in self.entries)

    def to_json(self):
        return [{"pair": [e.i, e.j], "surjective": e.surjective, "quotient_size": e.quotient_size,
                 "lambda_ij": e.lambda_ij.blocks(), "lambda_ji": e.lambda_ji.blocks()} for e in self.entries]


def pair_lambda(C: SubproductAlgebra, i: int, j: int) -> Congruence:
    """λ_ij = π_j(ker π_i ∨ ker π_j) as a congruence of A_j."""
    P = project(C, [i, j])
    _, lb = _bipartite(P)
    return Congruence(C.factors[j], canonical(lb))


def pair_report(C: SubproductAlgebra) -> PairReport:
    if C.n_factors < 2:
        raise AlgebraError("pair report needs at least two factors")
    out = []
    for i in range(C.n_factors):
        for j in range(i + 1, C.n_factors):
            P = project(C, [i, j])
            la, lb = _bipartite(P)
            lam_ji = Congruence(C.factors[i], canonical(la))
            lam_ij = Congruence(C.factors[j], canonical(lb))
            q = lam_ij.num_blocks()
            assert q == lam_ji.num_blocks()
            full = P.size == C.factors[i].size * C.factors[j].size
            out.append(PairEntry(i, j, full, q, lam_ij, lam_ji))
    return PairReport(out)


def union_of_classes(C: SubproductAlgebra, thetas: Sequence[Partition]) -> Check:
    """Whether every theta_1 x ... x theta_n class meeting C lies inside C."""
    thetas = list(thetas)
    if len(thetas) != C.n_factors:
        raise AlgebraError(f"need {C.n_factors} congruences, got {len(thetas)}")
    reps = np.stack([t.rep[C.rows[:, j]] for j, t in enumerate(thetas)], axis=1)
    keys = C.codec.encode_rows(reps)
    uniq, first, counts = np.unique(keys, return_index=True, return_counts=True)
    sizes = [np.bincount(t.rep, minlength=t.n) for t in thetas]
    expect = np.ones(len(uniq), dtype=np.int64)
    for j in range(C.n_factors):
        expect *= sizes[j][reps[first, j]]
    bad = np.flatnonzero(counts != expect)
    if not bad.size:
        return Check(True)
    c = C.rows[first[bad[0]]]
    blocks = [np.flatnonzero(thetas[j].rep == thetas[j].rep[c[j]]) for j in range(C.n_factors)]
    for cand in iproduct(*blocks):
        if not C.contains([cand])[0]:
            return Check(False, {"element": tuple(int(x) for x in c), "escapes_to": tuple(int(x) for x in cand)})
    raise AssertionError("unreachable")


def module_fiber_quotient_check(C: SubproductAlgebra, g, h, D: FiniteAlgebra,
                                op: Optional[str] = None) -> Check:
    """|A x B| / |C| = |D| and (a, b) -> g(a) - h(b) has kernel exactly C and image D."""
    _require_two(C)
    A, B = C.factors
    groups = {}
    for X in (A, B, D):
        cands = {r.op: r for r in abelian_group_reducts(X)}
        groups[id(X)] = cands
    common = set(groups[id(A)]) & set(groups[id(B)]) & set(groups[id(D)])
    if op is not None:
        common &= {op}
    if not common:
        raise AlgebraError("factors and quotient need a shared abelian group operation")
    sym = sorted(common)[0]
    rD = groups[id(D)][sym]
    g = np.asarray(g, dtype=np.int64)
    h = np.asarray(h, dtype=np.int64)
    Dadd = D.tables[sym]
    phi = Dadd[g[:, None], rD.inverse[h][None, :]]          # phi[a, b] = g(a) - h(b)
    details = {"op": sym, "|A|": A.size, "|B|": B.size, "|C|": C.size, "|D|": D.size}
    if A.size * B.size != C.size * D.size:
        return Check(False, {"reason": "index mismatch"}, details)
    ker = np.argwhere(phi == rD.identity)
    inC = np.zeros((A.size, B.size), dtype=bool)
    inC[C.rows[:, 0], C.rows[:, 1]] = True
    if not np.array_equal(inC, phi == rD.identity):
        diff = np.argwhere(inC != (phi == rD.identity))[0]
        return Check(False, {"reason": "kernel differs from C", "pair": tuple(int(x) for x in diff)}, details)
    if len(np.unique(phi)) != D.size:
        return Check(False, {"reason": "map is not onto D"}, details)
    # additivity of phi on A x B
    Aa, Ba = A.tables[sym], B.tables[sym]
    if A.size * B.size <= 4096:
        a = np.arange(A.size)
        b = np.arange(B.size)
        lhs = phi[Aa[:, None, :, None], Ba[None, :, None, :]]
        rhs = Dadd[phi[:, :, None, None], phi[None, None, :, :]]
        if not np.array_equal(lhs, rhs):
            return Check(False, {"reason": "map is not additive"}, details)
    details["kernel_size"] = int(len(ker))
    return Check(True, None, details)


# -- kernel checks on finite instances -----------------------------------------

def greedy_congruence_generators(A: FiniteAlgebra, theta: Partition) -> list[tuple[int, int]]:
    """A generating set for theta, grown pair by pair in lexicographic order."""
    target = theta.rep
    cur = Congruence.zero(A)
    gens = []
    for x in range(A.size):
        r = int(target[x])
        if r != x and cur.rep[x] != cur.rep[r]:
            gens.append((r, x))
            cur = cg(A, gens)
            if np.array_equal(cur.rep, target):
                break
    if not np.array_equal(cur.rep, target):
        raise AlgebraError("partition is not a congruence")
    return gens


def lambda_generation_check(C: SubproductAlgebra) -> Check:
    """λ_B = Cg^B(π_B(P)) for a generating set P of ker π_A (two factors)."""
    _require_two(C)
    Calg = C.as_algebra()
    P = greedy_congruence_generators(Calg, C.kernel(0))
    B = C.factors[1]
    pb = [(int(C.rows[u, 1]), int(C.rows[v, 1])) for u, v in P]
    lam_B = Congruence(B, canonical(_bipartite(C)[1]))
    got = cg(B, pb)
    return Check(got == lam_B, None, {"P": P, "lambda_B": lam_B.blocks(), "cg": got.blocks()})


def kernel_interval_check(C: SubproductAlgebra) -> Check:
    """Modular case: θ -> θ ∨ ker π_B maps [0, ker π_A] onto [ker π_B, ker π_A ∨ ker π_B] bijectively."""
    _require_two(C)
    L = con_lattice(C.as_algebra())
    mod = is_modular(L)
    kA, kB = C.kernel(0), C.kernel(1)
    top = join(kA, kB)
    lower = [t for t in L.congruences if t.leq(kA)]
    upper = [t for t in L.congruences if kB.leq(t) and t.leq(top)]
    image = {join(t, kB).key() for t in lower}
    ok = len(image) == len(lower) == len(upper) and image == {t.key() for t in upper}
    return Check(ok or not mod.ok, None, {"modular": mod.ok, "lower": len(lower), "upper": len(upper),
                                          "bijective": ok})


# -- random instances ----------------------------------------------------------

def random_subdirect(factors: Sequence[FiniteAlgebra], rng: np.random.Generator,
                     n_gens: int = 2) -> SubproductAlgebra:
    """Closure of a few random tuples, enlarged by random tuples until subdirect."""
    factors = list(factors)
    sizes = np.asarray([F.size for F in factors])
    gens = [rng.integers(0, sizes) for _ in range(n_gens)]
    while True:
        C = SubproductAlgebra.from_generators(factors, gens)
        if is_subdirect(C):
            return C
        gens.append(rng.integers(0, sizes))


# -- file format -------------------------------------------------------------------

def load_subproduct(path) -> SubproductAlgebra:
    from . import zoo
    path = os.fspath(path)
    with open(path) as fh:
        try:
            data = json.load(fh)
        except json.JSONDecodeError as exc:
            raise AlgebraError(f"{path}:{exc.lineno}:{exc.colno}: invalid JSON: {exc.msg}") from None
    if not isinstance(data, dict) or "factors" not in data:
        raise AlgebraError(f"{path}: expected an object with 'factors'")
    base = os.path.dirname(path)
    factors = [resolve_algebra(f, base) for f in data["factors"]]
    if "generators" in data:
        return SubproductAlgebra.from_generators(factors, data["generators"], name=data.get("name", "C"))
    if "elements" in data:
        return SubproductAlgebra.from_elements(factors, data["elements"], name=data.get("name", "C"))
    raise AlgebraError(f"{path}: need 'generators' or 'elements'")


def resolve_algebra(ref: str, base: str = ".") -> FiniteAlgebra:
    """A path to an algebra JSON file, or a built-in name such as ``group:S3``."""
    from . import zoo
    if isinstance(ref, str) and ":" in ref and not os.path.exists(os.path.join(base, ref)):
        try:
            return zoo.named(ref)
        except (KeyError, ValueError):
            raise AlgebraError(f"unknown algebra reference {ref!r}")
    return load_algebra(os.path.join(base, ref))
