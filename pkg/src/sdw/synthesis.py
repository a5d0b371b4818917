"""Mal'cev terms, lifted generating sets and finite-generation certificates."""

from __future__ import annotations

from dataclasses import dataclass, field
from typing import Optional, Sequence

import numpy as np

from .closure import BudgetExhausted, close
from .commutator import DEFAULT_K_CAP, commutator
from .congruence import Congruence, cg
from .core import AlgebraError, CapExceeded, FiniteAlgebra, Signature, Term, eval_term_vec, parse_term, quotient
from .subdirect import (Check, SubproductAlgebra, factor_kernels, is_subdirect, pair_report, project,
                        union_of_classes)

DEFAULT_BUDGET = 5_000_000
NONE_FOUND = "none in V(A)"
EXHAUSTED = "budget exhausted"


@dataclass
class MalcevWitness:
    term: Term
    table: np.ndarray          # [a, b] -> (m(a,a,b), m(b,a,a))
    closure_size: int
    evaluations: int
    source: str = "closure"

    @property
    def ok(self) -> bool:
        n = self.table.shape[0]
        b = np.arange(n)[None, :]
        return bool((self.table[..., 0] == b).all() and (self.table[..., 1] == b).all())

    def to_json(self):
        return {"term": str(self.term), "verified_pairs": int(self.table.shape[0] ** 2),
                "all_pass": self.ok, "closure_size": self.closure_size, "source": self.source}


@dataclass
class MalcevSearch:
    status: str                       # "found", NONE_FOUND or EXHAUSTED
    witness: Optional[MalcevWitness]
    closure_size: int
    evaluations: int

    def __bool__(self):
        return self.witness is not None

    def to_json(self):
        out = {"status": self.status, "closure_size": self.closure_size, "evaluations": self.evaluations}
        if self.witness is not None:
            out["witness"] = self.witness.to_json()
        return out


def malcev_table(A: FiniteAlgebra, term: Term) -> np.ndarray:
    """Values of (m(a,a,b), m(b,a,a)) for every pair, from direct evaluation."""
    n = A.size
    a, b = np.meshgrid(np.arange(n), np.arange(n), indexing="ij")
    a, b = a.ravel(), b.ravel()
    first = eval_term_vec(A, term, [a, a, b])
    second = eval_term_vec(A, term, [b, a, a])
    return np.stack([first, second], axis=-1).reshape(n, n, 2)


def check_malcev(A: FiniteAlgebra, term) -> MalcevWitness:
    if isinstance(term, str):
        term = parse_term(term)
    return MalcevWitness(term, malcev_table(A, term), 0, 0, source="given")


def _coordinates(n: int) -> np.ndarray:
    """Triples (a,a,b) then (b,a,a) with b != a; the only places the identities look at."""
    out = [(a, a, b) for a in range(n) for b in range(n)]
    out += [(b, a, a) for a in range(n) for b in range(n) if b != a]
    return np.asarray(out, dtype=np.int64)


def find_malcev_term(A: FiniteAlgebra, budget: Optional[int] = DEFAULT_BUDGET,
                     hints: Sequence = (), cap: Optional[int] = None) -> MalcevSearch:
    """Search the 3-generated free algebra of V(A) for a Mal'cev term.

    Only coordinates of the form (a,a,b) and (b,a,a) are kept; projecting
    onto them is a homomorphism, so the search stays exact.
    """
    for h in hints:
        w = check_malcev(A, h)
        if w.ok:
            w.source = "hint"
            return MalcevSearch("found", w, 0, 0)
    coords = _coordinates(A.size)
    gens = coords.T.copy()
    target = np.where(np.arange(len(coords)) < A.size**2, coords[:, 2], coords[:, 0])

    def stop(rows):
        return (rows == target).all(axis=1)

    N = len(coords)
    spent = 0
    res = None
    # a term over a reduct is a term of A; only the full signature can rule one out
    for R in _reducts(A):
        try:
            res = close([R] * N, gens, cap=cap, budget=budget, stop=stop)
        except (BudgetExhausted, CapExceeded) as exc:
            if R is A:
                return MalcevSearch(EXHAUSTED, None, int(getattr(exc, "reached", 0) or 0), spent)
            continue
        spent += res.evaluations
        if res.found is not None:
            break
    if res.found is None:
        return MalcevSearch(NONE_FOUND, None, res.size, spent)
    term = res.term(res.found)
    w = MalcevWitness(term, malcev_table(A, term), res.size, spent)
    if not w.ok:
        raise AssertionError(f"extracted term {term} fails the Mal'cev identities")
    return MalcevSearch("found", w, res.size, spent)


def _reducts(A: FiniteAlgebra):
    """One binary operation with all unary operations and constants, then A itself."""
    sig = A.signature.symbols
    small = [(s, a) for s, a in sig if a < 2]
    big = [(s, a) for s, a in sig if a >= 2]
    if len(big) > 1:
        for b in big:
            part = [x for x in sig if x in small or x == b]
            yield FiniteAlgebra(A.name, A.size, Signature(tuple(part)),
                                {s: A.tables[s] for s, _ in part})
    yield A


def malcev_status(A: FiniteAlgebra, budget: int = DEFAULT_BUDGET) -> str:
    """Cached outcome of ``find_malcev_term``: "found", NONE_FOUND or EXHAUSTED."""
    key = ("malcev", budget)
    if key not in A._cache:
        res = find_malcev_term(A, budget=budget)
        A._cache[key] = res.status
        A._cache[("malcev_search", budget)] = res
    return A._cache[key]


def malcev_search(A: FiniteAlgebra, budget: int = DEFAULT_BUDGET) -> MalcevSearch:
    malcev_status(A, budget)
    return A._cache[("malcev_search", budget)]


# -- generating sets ---------------------------------------------------------------------

@dataclass
class GenerationCertificate:
    ok: bool
    generators: list
    closure_size: int
    target_size: int
    evidence: dict = field(default_factory=dict)
    failures: list = field(default_factory=list)

    def __bool__(self):
        return self.ok

    def to_json(self):
        return {"ok": self.ok, "generators": [list(map(int, g)) for g in self.generators],
                "closure_size": self.closure_size, "target_size": self.target_size,
                "evidence": self.evidence, "failures": self.failures}


def _generates(A: FiniteAlgebra, X) -> bool:
    return close([A], np.asarray(list(X), dtype=np.int64).reshape(-1, 1)).size == A.size


def lift_generators(C: SubproductAlgebra, X: Sequence[int], Y: Sequence[int],
                    U: Sequence[tuple[int, int]], m: MalcevWitness | Term | str) -> GenerationCertificate:
    """X' u Y' u U' for a fiber product C <= A x B, verified by closure."""
    if C.n_factors != 2:
        raise AlgebraError("lift_generators needs a two-factor subproduct")
    A, B = C.factors
    chk = is_subdirect(C)
    if not chk:
        raise AlgebraError(f"C is not subdirect: {chk.witness}")
    if not _generates(A, X):
        raise AlgebraError("X does not generate the first factor")
    if not _generates(B, Y):
        raise AlgebraError("Y does not generate the second factor")
    term = m.term if isinstance(m, MalcevWitness) else m
    for F in (A, B):
        if not check_malcev(F, term).ok:
            raise AlgebraError(f"{term} is not a Mal'cev term on {F.name}")
    lam_B = factor_kernels(C).lambda_B
    got = cg(B, list(U))
    if got != lam_B:
        raise AlgebraError(f"U generates {got.blocks()} but lambda_B is {lam_B.blocks()}")
    rows = C.rows     # sorted by flat index
    gens, evidence = [], {"X'": [], "Y'": [], "U'": []}
    for x in X:
        r = rows[np.flatnonzero(rows[:, 0] == x)[0]]
        gens.append(r)
        evidence["X'"].append([int(r[0]), int(r[1])])
    for y in Y:
        r = rows[np.flatnonzero(rows[:, 1] == y)[0]]
        gens.append(r)
        evidence["Y'"].append([int(r[0]), int(r[1])])
    for u, v in U:
        over_u = set(rows[rows[:, 1] == u, 0].tolist())
        common = [int(a) for a in rows[rows[:, 1] == v, 0] if int(a) in over_u]
        if not common:
            raise AlgebraError(f"no a with (a,{u}) and (a,{v}) in C; C is not a fiber product over lambda_B")
        a = min(common)
        gens += [np.asarray([a, u]), np.asarray([a, v])]
        evidence["U'"].append([[a, int(u)], [a, int(v)]])
    G = np.asarray(gens, dtype=np.int64).reshape(-1, 2)
    res = close(C.factors, G, cap=C.size + 1)
    ok = res.size == C.size and bool(C.contains(res.rows).all())
    fails = [] if ok else [f"closure has {res.size} elements, C has {C.size}"]
    return GenerationCertificate(ok, [tuple(int(v) for v in g) for g in G], res.size, C.size, evidence, fails)


def greedy_generating_set(C: SubproductAlgebra, start: Sequence = ()) -> list[tuple[int, ...]]:
    """Grow X by the element whose addition gives the largest closure (ties: least index)."""
    X = [np.asarray(s, dtype=np.int64) for s in start]
    cur = close(C.factors, np.asarray(X).reshape(-1, C.n_factors)) if X else None
    while cur is None or cur.size < C.size:
        inside = np.zeros(C.size, dtype=bool)
        if cur is not None:
            idx = C.index_of(cur.rows)
            inside[idx[idx >= 0]] = True
        best, best_res = None, None
        for i in np.flatnonzero(~inside):
            cand = np.asarray(X + [C.rows[i]]).reshape(-1, C.n_factors)
            r = close(C.factors, cand)
            if best_res is None or r.size > best_res.size:
                best, best_res = i, r
                if r.size == C.size:
                    break
        X.append(C.rows[best])
        cur = best_res
    return [tuple(int(v) for v in x) for x in X]


# -- union-of-classes checks ---------------------------------------------------------

MAX_FACTORS = DEFAULT_K_CAP + 1


def thm41_gammas(C: SubproductAlgebra, route: str = "auto") -> list[Congruence]:
    """gamma_j = [lambda_1j, ..., lambda_nj] (i != j, increasing i)."""
    n = C.n_factors
    if n < 2:
        raise AlgebraError("need at least two factors")
    if n > MAX_FACTORS:
        raise CapExceeded(f"{n} factors need {n - 1}-ary commutators; the cap is {DEFAULT_K_CAP} "
                          f"so at most {MAX_FACTORS} factors are supported", reached=n, cap=MAX_FACTORS)
    rep = pair_report(C)
    out = []
    for j in range(n):
        lams = []
        for i in range(n):
            if i == j:
                continue
            e = rep[(min(i, j), max(i, j))]
            lams.append(e.lambda_ij if i < j else e.lambda_ji)
        out.append(commutator(C.factors[j], lams, route=route).gamma)
    return out


def verify_thm41a(C: SubproductAlgebra) -> Check:
    gammas = thm41_gammas(C)
    res = union_of_classes(C, gammas)
    res.details = dict(res.details or {}, gammas=[g.blocks() for g in gammas])
    return res


def fg_certificate(C: SubproductAlgebra, X: Sequence) -> GenerationCertificate:
    """Clause (i): X generates C modulo the gammas; clause (ii): pair projections; then <X> = C."""
    X = np.asarray(X, dtype=np.int64).reshape(-1, C.n_factors)
    if len(X) and not C.contains(X).all():
        raise AlgebraError("X is not a subset of C")
    gammas = thm41_gammas(C)
    failures = []
    evidence = {"gammas": [g.blocks() for g in gammas]}
    # (i) modulo gamma_1 x ... x gamma_n
    Qs, maps = zip(*[quotient(F, g) for F, g in zip(C.factors, gammas)])
    maps = [np.asarray(mp) for mp in maps]
    img = lambda R: np.stack([maps[j][R[:, j]] for j in range(C.n_factors)], axis=1)
    target = np.unique(img(C.rows), axis=0)
    got = close(list(Qs), img(X), cap=len(target) + 1) if len(X) else None
    ok_i = got is not None and got.size == len(target)
    evidence["modulo_gamma"] = {"target": int(len(target)), "closure": 0 if got is None else got.size}
    if not ok_i:
        failures.append("clause (i): X does not generate C modulo the gammas")
    # (ii) every pair projection
    pairs = {}
    for i in range(C.n_factors):
        for j in range(i + 1, C.n_factors):
            P = project(C, [i, j])
            r = close([C.factors[i], C.factors[j]], X[:, [i, j]], cap=P.size + 1) if len(X) else None
            good = r is not None and r.size == P.size
            pairs[f"{i},{j}"] = {"target": P.size, "closure": 0 if r is None else r.size}
            if not good:
                failures.append(f"clause (ii): projection onto pair ({i},{j}) is not generated")
    evidence["pairs"] = pairs
    full = close(C.factors, X, cap=C.size + 1) if len(X) else None
    size = 0 if full is None else full.size
    ok = size == C.size
    if not ok and not failures:
        failures.append("closure differs from C although both clauses hold")
    if ok and failures:
        raise AssertionError("X generates C but a clause failed")
    return GenerationCertificate(ok and not failures, [tuple(int(v) for v in x) for x in X], size, C.size,
                                 evidence, failures)


__all__ = ["MalcevWitness", "MalcevSearch", "find_malcev_term", "check_malcev", "malcev_status",
           "malcev_search", "GenerationCertificate", "lift_generators", "greedy_generating_set",
           "thm41_gammas", "verify_thm41a", "fg_certificate", "NONE_FOUND", "EXHAUSTED"]
