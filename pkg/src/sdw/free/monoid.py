"""Congruences on free monoids given by (pumped) generating pairs, and submonoids of N_0^k."""

from __future__ import annotations

import os
from collections import deque
from dataclasses import dataclass, field
from itertools import combinations
from typing import Optional, Sequence, Union

import numpy as np

from ..core import AlgebraError
from .words import Family, parse_family, words_up_to

DEFAULT_MAX_LEN = 12
DEFAULT_MAX_STATES = 10**6

SIGMA = """\
x y^i x = x y x : i>=1
x^2 y^2 = x^2 y
y^2 x^2 = y x^2
"""

TAU = """\
y x^i y = y x y : i>=1
y^2 x^2 = y^2 x
x^2 y^2 = x y^2
"""

RHO = """\
x y^2 x = x y x
y x^2 y = y x y
x^2 y^2 = x^2 y
y^2 x^2 = y x^2
y^2 x^2 = y^2 x
x^2 y^2 = x y^2
"""


@dataclass
class RewritePresentation:
    alphabet: str
    families: list

    @classmethod
    def parse(cls, text: str, alphabet: Optional[str] = None) -> "RewritePresentation":
        fams = []
        for n, line in enumerate(text.splitlines(), start=1):
            line = line.split("#", 1)[0].strip()
            if not line:
                continue
            try:
                fams.append(parse_family(line))
            except AlgebraError as exc:
                raise AlgebraError(f"line {n}: {exc}") from None
        letters = set()
        for f in fams:
            for p in (f.lhs, f.rhs):
                letters |= set(p.prefix + (p.letter or "") + p.suffix)
        if alphabet is None:
            alphabet = "".join(sorted(letters))
        elif not letters <= set(alphabet):
            raise AlgebraError(f"letters {sorted(letters - set(alphabet))} are not in the alphabet")
        return cls(alphabet, fams)

    @classmethod
    def load(cls, path) -> "RewritePresentation":
        with open(os.fspath(path)) as fh:
            return cls.parse(fh.read())

    def restrict(self, max_i: int) -> "RewritePresentation":
        """Every pumped family cut to parameters <= max_i."""
        out = []
        for f in self.families:
            if f.pumped:
                hi = max_i if f.hi is None else min(f.hi, max_i)
                if hi < f.lo:
                    continue
                f = Family(f.lhs, f.rhs, f.lo, hi)
            out.append(f)
        return RewritePresentation(self.alphabet, out)

    def pairs(self, max_len: int) -> list[tuple[str, str]]:
        """Expanded generating pairs with both sides of length <= max_len."""
        seen, out = set(), []
        for f in self.families:
            for pair in f.instances(max_len):
                if pair not in seen and pair[0] != pair[1]:
                    seen.add(pair)
                    out.append(pair)
        return out

    def rules(self, max_len: int) -> list[tuple[str, str]]:
        """Pairs in both directions."""
        out = []
        for a, b in self.pairs(max_len):
            out.append((a, b))
            out.append((b, a))
        return out

    def __str__(self):
        return "\n".join(str(f) for f in self.families)


@dataclass(frozen=True)
class Step:
    before: str
    after: str
    position: int
    lhs: str
    rhs: str


@dataclass
class Related:
    u: str
    v: str
    path: list
    explored: int

    def __bool__(self):
        return True

    def replay_ok(self) -> bool:
        w = self.u
        for s in self.path:
            if s.before != w or w[s.position:s.position + len(s.lhs)] != s.lhs:
                return False
            w = w[:s.position] + s.rhs + w[s.position + len(s.lhs):]
            if w != s.after:
                return False
        return w == self.v

    def to_json(self):
        return {"related": True, "u": self.u, "v": self.v, "explored": self.explored,
                "path": [[s.before, s.after, s.position, s.lhs, s.rhs] for s in self.path]}


@dataclass
class NotWithinBounds:
    u: str
    v: str
    bound: str               # "max_len": both components exhausted; "max_states": search cut off
    explored: int
    bounds: dict

    def __bool__(self):
        return False

    def to_json(self):
        return {"related": False, "u": self.u, "v": self.v, "bound": self.bound,
                "explored": self.explored, "bounds": self.bounds}


def _neighbours(w: str, rules, max_len: int):
    for lhs, rhs in rules:
        if len(w) - len(lhs) + len(rhs) > max_len:
            continue
        start = w.find(lhs)
        while start >= 0:
            yield w[:start] + rhs + w[start + len(lhs):], start, lhs, rhs
            start = w.find(lhs, start + 1)


def monoid_relate(pres: RewritePresentation, u: str, v: str, max_len: int = DEFAULT_MAX_LEN,
                  max_states: int = DEFAULT_MAX_STATES) -> Union[Related, NotWithinBounds]:
    """Bidirectional breadth-first search through words of length <= max_len."""
    for w in (u, v):
        bad = set(w) - set(pres.alphabet)
        if bad:
            raise AlgebraError(f"word {w!r} uses letters {sorted(bad)} outside the alphabet")
    bounds = {"max_len": max_len, "max_states": max_states}
    if u == v:
        return Related(u, v, [], 1)
    if len(u) > max_len or len(v) > max_len:
        return NotWithinBounds(u, v, "max_len", 0, bounds)
    rules = pres.rules(max_len)
    parents = [{u: None}, {v: None}]
    frontiers = [deque([u]), deque([v])]
    explored = 2
    while frontiers[0] and frontiers[1]:
        side = 0 if len(frontiers[0]) <= len(frontiers[1]) else 1
        mine, other = parents[side], parents[1 - side]
        nxt = deque()
        for w in frontiers[side]:
            for w2, pos, lhs, rhs in _neighbours(w, rules, max_len):
                if w2 in mine:
                    continue
                mine[w2] = (w, pos, lhs, rhs)
                explored += 1
                if w2 in other:
                    return Related(u, v, _path(parents, w2), explored)
                if explored >= max_states:
                    return NotWithinBounds(u, v, "max_states", explored, bounds)
                nxt.append(w2)
        frontiers[side] = nxt
    return NotWithinBounds(u, v, "max_len", explored, bounds)


def _path(parents, meet_word) -> list[Step]:
    left = []
    w = meet_word
    while parents[0][w] is not None:
        prev, pos, lhs, rhs = parents[0][w]
        left.append(Step(prev, w, pos, lhs, rhs))
        w = prev
    left.reverse()
    w = meet_word
    while parents[1][w] is not None:
        prev, pos, lhs, rhs = parents[1][w]
        # the recorded step went prev -> w; walk it backwards
        left.append(Step(w, prev, pos, rhs, lhs))
        w = prev
    return left


def components(pres: RewritePresentation, max_len: int) -> tuple[list[str], np.ndarray]:
    """Classes of the congruence restricted to moves between words of length <= max_len."""
    from scipy.sparse import coo_matrix
    from scipy.sparse.csgraph import connected_components
    words = list(words_up_to(pres.alphabet, max_len))
    index = {w: i for i, w in enumerate(words)}
    src, dst = [], []
    rules = pres.pairs(max_len)
    for w in words:
        for w2, _, _, _ in _neighbours(w, rules, max_len):
            src.append(index[w])
            dst.append(index[w2])
    g = coo_matrix((np.ones(len(src)), (src, dst)), shape=(len(words), len(words)))
    _, labels = connected_components(g, directed=False)
    return words, labels


def _collapse(w: str, letter: str) -> str:
    """Shrink every run of ``letter`` to a single occurrence."""
    out = []
    for ch in w:
        if ch == letter and out and out[-1] == letter:
            continue
        out.append(ch)
    return "".join(out)


@dataclass
class JoinClaimReport:
    bounds: dict
    generators_related: dict
    meet_trivial: dict
    invariants: dict
    non_fg_evidence: dict

    @property
    def ok(self) -> bool:
        return (all(r["related"] for r in self.generators_related.values())
                and self.meet_trivial["ok"] and all(self.invariants.values())
                and all(e["isolated"] for e in self.non_fg_evidence["cases"]))

    def to_json(self):
        return {"ok": self.ok, "bounds": self.bounds, "generators_related": self.generators_related,
                "meet_trivial": self.meet_trivial, "invariants": self.invariants,
                "non_fg_evidence": self.non_fg_evidence}


def check_cong_join_claim(sigma: RewritePresentation, tau: RewritePresentation, rho: RewritePresentation,
                          max_i: int = 6, max_len: int = DEFAULT_MAX_LEN,
                          max_states: int = DEFAULT_MAX_STATES, pair_len: int = 8) -> JoinClaimReport:
    """Bounded checks that rho generates sigma v tau and that sigma meets tau trivially."""
    bounds = {"max_i": max_i, "max_len": max_len, "max_states": max_states, "pair_len": pair_len}
    related = {}
    for name, pres in (("sigma", sigma), ("tau", tau)):
        for a, b in pres.restrict(max_i).pairs(max_len):
            r = monoid_relate(rho, a, b, max_len, max_states)
            related[f"{name}: {a} = {b}"] = {"related": bool(r), "steps": len(r.path) if r else None,
                                             "bound": None if r else r.bound}
    # run-collapse invariants: sigma never changes the x-runs, tau never the y-runs
    inv = {
        "sigma preserves x-runs": all(_collapse(a, "y") == _collapse(b, "y") for a, b in sigma.pairs(max_len)),
        "tau preserves y-runs": all(_collapse(a, "x") == _collapse(b, "x") for a, b in tau.pairs(max_len)),
    }
    words_s, lab_s = components(sigma, max_len)
    _, lab_t = components(tau, max_len)
    short = [i for i, w in enumerate(words_s) if len(w) <= pair_len]
    groups: dict = {}
    clash = []
    for i in short:
        key = (int(lab_s[i]), int(lab_t[i]))
        if key in groups:
            clash.append((words_s[groups[key]], words_s[i]))
        else:
            groups[key] = i
    meet = {"ok": not clash, "words_checked": len(short), "common_pairs": clash[:10]}
    # bounded evidence for non-finite generation: x y^(N+1) x is alone in its class
    cases = []
    for N in range(1, max_i + 1):
        for name, pres, w in (("sigma", sigma, "x" + "y" * (N + 1) + "x"),
                              ("tau", tau, "y" + "x" * (N + 1) + "y")):
            rules = pres.restrict(N).rules(max_len)
            moves = list(_neighbours(w, rules, max_len))
            cases.append({"presentation": name, "N": N, "word": w, "isolated": not moves})
    evidence = {"label": "bounded evidence only", "cases": cases}
    return JoinClaimReport(bounds, related, meet, inv, evidence)


def example_presentations() -> tuple[RewritePresentation, RewritePresentation, RewritePresentation]:
    return (RewritePresentation.parse(SIGMA, "xy"), RewritePresentation.parse(TAU, "xy"),
            RewritePresentation.parse(RHO, "xy"))


# -- submonoids of N_0^k ---------------------------------------------------------------

@dataclass
class VectorFamily:
    """base + i * step for lo <= i (<= hi), e.g. (0,2,n) for n >= 7."""
    base: tuple
    step: tuple
    lo: int
    hi: Optional[int] = None

    def instances(self, box: int):
        i = self.lo
        while self.hi is None or i <= self.hi:
            v = tuple(b + i * s for b, s in zip(self.base, self.step))
            if max(v) > box:
                break
            yield v
            i += 1


def monoid_box(generators: Sequence[tuple], box: int, k: Optional[int] = None) -> np.ndarray:
    """Membership mask of the generated submonoid inside {0..box}^k."""
    gens = [tuple(int(x) for x in g) for g in generators]
    if k is None:
        if not gens:
            raise AlgebraError("need the dimension or at least one generator")
        k = len(gens[0])
    if any(len(g) != k for g in gens) or any(min(g) < 0 for g in gens):
        raise AlgebraError("generators must be non-negative vectors of equal length")
    gens = [g for g in gens if any(g) and max(g) <= box]
    S = np.zeros((box + 1,) * k, dtype=bool)
    S[(0,) * k] = True
    changed = True
    while changed:
        changed = False
        for g in gens:
            src = tuple(slice(0, box + 1 - c) for c in g)
            dst = tuple(slice(c, box + 1) for c in g)
            new = S[dst] | S[src]
            if (new != S[dst]).any():
                S[dst] = new
                changed = True
    return S


def decomposition(S: np.ndarray, e: Sequence[int]) -> Optional[tuple]:
    """(s, e - s) with both in S and neither 0 nor e, or None."""
    e = tuple(int(x) for x in e)
    if any(x >= n for x, n in zip(e, S.shape)):
        raise AlgebraError(f"box {S.shape[0] - 1} too small to certify {e}")
    sub = S[tuple(slice(0, x + 1) for x in e)]
    both = sub & sub[(slice(None, None, -1),) * len(e)]
    both[(0,) * len(e)] = False
    both[e] = False
    hit = np.argwhere(both)
    if not len(hit):
        return None
    s = tuple(int(x) for x in hit[0])
    return s, tuple(a - b for a, b in zip(e, s))


@dataclass
class VectorMonoidReport:
    box: int
    pairs: dict
    elements: dict

    def to_json(self):
        return {"box": self.box, "pairs": self.pairs, "elements": self.elements}


def vector_monoid_analysis(generators: Sequence[tuple], families: Sequence[VectorFamily] = (),
                           box: int = 40, targets: Sequence[tuple] = ()) -> VectorMonoidReport:
    gens = [tuple(int(x) for x in g) for g in generators]
    for f in families:
        gens += list(f.instances(box))
    if not gens:
        raise AlgebraError("no generators")
    k = len(gens[0])
    S = monoid_box(gens, box, k)
    pairs = {}
    for i, j in combinations(range(k), 2):
        e1 = next((g for g in gens if (g[i], g[j]) == (1, 0)), None)
        e2 = next((g for g in gens if (g[i], g[j]) == (0, 1)), None)
        pairs[f"{i + 1},{j + 1}"] = {"surjective": e1 is not None and e2 is not None,
                                     "certificate": [e1, e2] if e1 and e2 else None}
    elements = {}
    for e in targets:
        e = tuple(int(x) for x in e)
        if max(e) > box:
            raise AlgebraError(f"box {box} too small to certify {e}")
        member = bool(S[e])
        dec = decomposition(S, e) if member else None
        elements[str(e)] = {"member": member, "indecomposable": member and dec is None,
                            "decomposition": dec}
    return VectorMonoidReport(box, pairs, elements)


def example_vector_monoid(box: int = 40) -> tuple[list, list]:
    """(1,0,3) with its permutations, and (0,2,n) for n >= 7."""
    from itertools import permutations
    first = sorted(set(permutations((1, 0, 3))))
    return first, [VectorFamily((0, 2, 0), (0, 0, 1), 7)]


def fiber_monogenic_example(box: int = 40) -> dict:
    """{(0,0)} u {(i,j): i,j > 0}: every (i,1) is indecomposable."""
    S = np.zeros((box + 1, box + 1), dtype=bool)
    S[0, 0] = True
    S[1:, 1:] = True
    out = {}
    for i in range(1, box + 1):
        out[i] = decomposition(S, (i, 1)) is None
    return {"box": box, "indecomposable": out, "ok": all(out.values())}
