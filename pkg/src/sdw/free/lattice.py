"""Terms of the free lattice and Whitman's solution of its word problem."""

from __future__ import annotations

import re
from dataclasses import dataclass, field
from functools import lru_cache
from typing import Mapping, Optional

import numpy as np

from ..core import AlgebraError, FiniteAlgebra
from ..reducts import lattice_reduct

VAR, MEET, JOIN = "var", "meet", "join"
_SYM = {MEET: " /\\ ", JOIN: " \\/ "}
_TABLE: dict = {}


class LatticeTerm:
    """Hash-consed term; meets and joins are flattened, sorted and deduplicated."""
    __slots__ = ("kind", "name", "args", "key", "depth", "__weakref__")

    def __new__(cls, kind: str, name: Optional[str] = None, args: tuple = ()):
        ident = (kind, name, tuple(id(a) for a in args))
        hit = _TABLE.get(ident)
        if hit is not None:
            return hit
        self = super().__new__(cls)
        self.kind, self.name, self.args = kind, name, args
        if kind == VAR:
            self.key = name
            self.depth = 0
        else:
            parts = [a.key if a.kind == VAR or a.kind == kind else f"({a.key})" for a in args]
            self.key = _SYM[kind].join(parts)
            self.depth = 1 + max(a.depth for a in args)
        _TABLE[ident] = self
        return self

    def __repr__(self):
        return f"LatticeTerm({self.key!r})"

    def __str__(self):
        return self.key

    def __and__(self, other):
        return meet(self, other)

    def __or__(self, other):
        return join(self, other)

    def __reduce__(self):
        return (parse_lattice_term, (self.key,))

    @property
    def is_var(self) -> bool:
        return self.kind == VAR

    def variables(self) -> set:
        if self.kind == VAR:
            return {self.name}
        out = set()
        for a in self.args:
            out |= a.variables()
        return out

    def size(self) -> int:
        return 1 if self.kind == VAR else 1 + sum(a.size() for a in self.args)


def gen(name: str) -> LatticeTerm:
    return LatticeTerm(VAR, name)


def _combine(kind: str, terms) -> LatticeTerm:
    flat = []
    for t in terms:
        flat.extend(t.args if t.kind == kind else (t,))
    uniq = sorted({id(t): t for t in flat}.values(), key=lambda t: t.key)
    if not uniq:
        raise AlgebraError("empty meet or join")
    if len(uniq) == 1:
        return uniq[0]
    return LatticeTerm(kind, None, tuple(uniq))


def meet(*terms: LatticeTerm) -> LatticeTerm:
    return _combine(MEET, terms)


def join(*terms: LatticeTerm) -> LatticeTerm:
    return _combine(JOIN, terms)


# -- parsing ------------------------------------------------------------------

_LEX = re.compile(r"\s*(?:(/\\|∧|&)|(\\/|∨|\|)|(\()|(\))|([A-Za-z_][A-Za-z0-9_]*))")


def parse_lattice_term(text: str) -> LatticeTerm:
    """``x /\\ (y \\/ z)``; meet binds tighter than join."""
    toks = []
    pos = 0
    text = text.rstrip()
    while pos < len(text):
        m = _LEX.match(text, pos)
        if not m:
            raise AlgebraError(f"unexpected character {text[pos]!r} at position {pos} in {text!r}")
        pos = m.end()
        kind = ("meet", "join", "(", ")", "name")[m.lastindex - 1]
        toks.append((kind, m.group(m.lastindex)))
    i = 0

    def peek():
        return toks[i][0] if i < len(toks) else None

    def expr():
        nonlocal i
        parts = [term()]
        while peek() == "join":
            i += 1
            parts.append(term())
        return join(*parts)

    def term():
        nonlocal i
        parts = [atom()]
        while peek() == "meet":
            i += 1
            parts.append(atom())
        return meet(*parts)

    def atom():
        nonlocal i
        k = peek()
        if k == "name":
            i += 1
            return gen(toks[i - 1][1])
        if k == "(":
            i += 1
            t = expr()
            if peek() != ")":
                raise AlgebraError(f"missing ')' in {text!r}")
            i += 1
            return t
        raise AlgebraError(f"expected a variable or '(' in {text!r}")

    if not toks:
        raise AlgebraError("empty lattice term")
    t = expr()
    if i != len(toks):
        raise AlgebraError(f"trailing input in {text!r}")
    return t


# -- Whitman's condition ------------------------------------------------------------

@lru_cache(maxsize=None)
def whitman_leq(p: LatticeTerm, q: LatticeTerm) -> bool:
    """p <= q in the free lattice."""
    if p is q:
        return True
    if p.kind == JOIN:
        return all(whitman_leq(a, q) for a in p.args)
    if q.kind == MEET:
        return all(whitman_leq(p, b) for b in q.args)
    if p.kind == VAR:
        if q.kind == VAR:
            return False
        return any(whitman_leq(p, b) for b in q.args)
    # p is a meet, q a variable or a join
    if any(whitman_leq(a, q) for a in p.args):
        return True
    if q.kind == JOIN:
        return any(whitman_leq(p, b) for b in q.args)
    return False


@dataclass
class Comparison:
    holds: bool
    p: LatticeTerm
    q: LatticeTerm
    trace: list = field(default_factory=list)

    def __bool__(self):
        return self.holds

    def to_json(self):
        return {"leq": self.holds, "p": str(self.p), "q": str(self.q), "trace": self.trace}


def explain_leq(p: LatticeTerm, q: LatticeTerm, depth: int = 6) -> Comparison:
    """Like whitman_leq, with a trace naming the rule used at each level."""
    trace: list[str] = []

    def go(a, b, d, pad):
        ok = whitman_leq(a, b)
        rel = "<=" if ok else "</="
        if d == 0:
            trace.append(f"{pad}{a} {rel} {b}")
            return
        if a is b:
            trace.append(f"{pad}{a} <= {b}: identical")
        elif a.kind == JOIN:
            if ok:
                trace.append(f"{pad}{a} <= {b}: every joinand is below")
            else:
                bad = next(x for x in a.args if not whitman_leq(x, b))
                trace.append(f"{pad}{a} </= {b}: joinand {bad} is not below")
                go(bad, b, d - 1, pad + "  ")
        elif b.kind == MEET:
            if ok:
                trace.append(f"{pad}{a} <= {b}: below every meetand")
            else:
                bad = next(y for y in b.args if not whitman_leq(a, y))
                trace.append(f"{pad}{a} </= {b}: not below meetand {bad}")
                go(a, bad, d - 1, pad + "  ")
        elif a.kind == VAR and b.kind == VAR:
            trace.append(f"{pad}{a} </= {b}: distinct generators")
        else:
            cands = []
            if a.kind == MEET:
                cands += [(x, b) for x in a.args]
            if b.kind == JOIN:
                cands += [(a, y) for y in b.args]
            if ok:
                x, y = next(c for c in cands if whitman_leq(*c))
                trace.append(f"{pad}{a} <= {b}: via {x} <= {y}")
            else:
                trace.append(f"{pad}{a} </= {b}: all {len(cands)} Whitman alternatives fail")
                for x, y in cands:
                    go(x, y, d - 1, pad + "  ")

    go(p, q, depth, "")
    return Comparison(whitman_leq(p, q), p, q, trace)


def lattice_equal(p: LatticeTerm, q: LatticeTerm) -> bool:
    return whitman_leq(p, q) and whitman_leq(q, p)


# -- evaluation -------------------------------------------------------------------

def lattice_eval(t: LatticeTerm, L: FiniteAlgebra, assignment: Mapping[str, int]) -> int:
    red = lattice_reduct(L)
    if red is None:
        raise AlgebraError(f"{L.name} has no lattice reduct")
    M, J = L.tables[red.meet], L.tables[red.join]
    memo: dict[int, int] = {}

    def go(s):
        hit = memo.get(id(s))
        if hit is not None:
            return hit
        if s.kind == VAR:
            if s.name not in assignment:
                raise AlgebraError(f"no value for variable {s.name!r}")
            v = int(assignment[s.name])
            if not 0 <= v < L.size:
                raise AlgebraError(f"value {v} for {s.name!r} is outside the carrier")
        else:
            T = M if s.kind == MEET else J
            vals = [go(a) for a in s.args]
            v = vals[0]
            for w in vals[1:]:
                v = int(T[v, w])
        memo[id(s)] = v
        return v

    return go(t)


# -- the x_n, y_n, z_n chains ---------------------------------------------------------

def xyz_sequence(n: int, names=("x", "y", "z")) -> tuple[LatticeTerm, LatticeTerm, LatticeTerm]:
    if n < 0:
        raise AlgebraError("n must be non-negative")
    x, y, z = (gen(s) for s in names)
    xn, yn, zn = x, y, z
    for _ in range(n):
        xn, yn, zn = x | (yn & zn), y | (xn & zn), z | (xn & yn)
    return xn, yn, zn


@dataclass
class ClaimReport:
    max_n: int
    claims: dict
    base: dict

    @property
    def ok(self) -> bool:
        return all(c["ok"] for c in self.claims.values()) and all(self.base.values())

    def to_json(self):
        return {"max_n": self.max_n, "bounded": True, "ok": self.ok, "base": self.base,
                "claims": self.claims}


def xyz_claims(max_n: int = 6, L: Optional[FiniteAlgebra] = None, atoms=None) -> ClaimReport:
    """Check the four bounded claims about the chains for all n, m <= max_n."""
    from .. import zoo
    if L is None:
        L = zoo.lattice("M3")
    phi = dict(zoo.M3_ATOMS if atoms is None else atoms)
    atoms = [phi["x"], phi["y"], phi["z"]]
    seq = [xyz_sequence(n) for n in range(max_n + 2)]
    claims = {}

    fails = [(n, k) for n in range(max_n + 1) for k in range(3)
             if lattice_eval(seq[n][k], L, phi) != atoms[k]]
    claims["a"] = {"statement": "phi(x_n)=a, phi(y_n)=b, phi(z_n)=c", "ok": not fails, "failures": fails}

    fails = []
    for n in range(max_n + 1):
        for m in range(max_n + 1):
            for k in range(3):
                for l in range(3):
                    if k != l and (whitman_leq(seq[n][k], seq[m][l]) or whitman_leq(seq[m][l], seq[n][k])):
                        fails.append((n, k, m, l))
    claims["b"] = {"statement": "x_n incomparable with y_m and z_m (and symmetric)", "ok": not fails,
                   "failures": fails}

    fails = []
    for n in range(max_n + 1):
        for k in range(3):
            a, b = seq[n][k], seq[n + 1][k]
            if not (whitman_leq(a, b) and not whitman_leq(b, a)):
                fails.append((n, k))
    claims["c"] = {"statement": "x_n < x_(n+1)", "ok": not fails, "failures": fails}

    fails = []
    for n in range(max_n + 1):
        top = seq[n + 1][0] & seq[n + 1][1]
        for m in range(n + 1):
            if whitman_leq(top, seq[m][0]):
                fails.append((n, m))
    claims["d"] = {"statement": "x_(n+1) /\\ y_(n+1) not <= x_m for m <= n", "ok": not fails,
                   "failures": fails}

    x, y, z = gen("x"), gen("y"), gen("z")
    x1 = x | (y & z)
    base = {"x <= x \\/ (y /\\ z)": whitman_leq(x, x1), "x \\/ (y /\\ z) </= x": not whitman_leq(x1, x)}
    return ClaimReport(max_n, claims, base)


def random_term(rng: np.random.Generator, depth: int, alphabet=("x", "y", "z")) -> LatticeTerm:
    if depth == 0 or rng.random() < 0.25:
        return gen(alphabet[int(rng.integers(len(alphabet)))])
    a, b = random_term(rng, depth - 1, alphabet), random_term(rng, depth - 1, alphabet)
    return meet(a, b) if rng.random() < 0.5 else join(a, b)
