"""Monomial ideals of free associative rings, decided by pattern matching."""

from __future__ import annotations

import re
from dataclasses import dataclass
from typing import Optional, Sequence

from ..core import AlgebraError
from .words import parse_pattern_line, words_up_to

SIDES = ("two", "left", "right")

EXAMPLE_I = ["x y^i x : i>=1", "x^2 y^2", "y^2 x^2", "y x y"]
EXAMPLE_J = ["y x^i y : i>=1", "y^2 x^2", "x^2 y^2", "x y x"]
EXAMPLE_CANDIDATES = ["x^2 y^2", "y^2 x^2", "x y x", "y x y"]


@dataclass(frozen=True)
class MonomialGenerator:
    text: str
    regex: re.Pattern

    @classmethod
    def parse(cls, line: str) -> "MonomialGenerator":
        w, lo, hi = parse_pattern_line(line)
        if not w.pumped and not w.prefix:
            raise AlgebraError("the empty monomial generates the whole ring")
        return cls(line.strip(), re.compile(w.regex(lo, hi)))


@dataclass
class Membership:
    member: bool
    monomial: str
    generator: Optional[str] = None
    left: str = ""
    factor: str = ""
    right: str = ""

    def __bool__(self):
        return self.member

    def to_json(self):
        out = {"member": self.member, "monomial": self.monomial}
        if self.member:
            out["witness"] = {"generator": self.generator, "left": self.left, "factor": self.factor,
                              "right": self.right}
        return out


def _gens(gens) -> list[MonomialGenerator]:
    return [g if isinstance(g, MonomialGenerator) else MonomialGenerator.parse(g) for g in gens]


def monomial_ideal_member(gens: Sequence, m: str, sided: str = "two") -> Membership:
    """Is ``m`` in the ideal generated by the monomials (two-sided, left or right)?

    A right ideal gR needs a generator as a prefix, a left ideal Rg as a suffix.
    """
    if sided not in SIDES:
        raise AlgebraError(f"sided must be one of {SIDES}")
    if not m:
        raise AlgebraError("monomials are nonempty words")
    for g in _gens(gens):
        if sided == "two":
            hit = g.regex.search(m)
        elif sided == "right":
            hit = g.regex.match(m)
        else:
            hit = re.compile(f"(?:{g.regex.pattern})$").search(m)
        if hit:
            a, b = hit.span()
            return Membership(True, m, g.text, m[:a], m[a:b], m[b:])
    return Membership(False, m)


@dataclass
class IntersectionReport:
    degree: int
    checked: int
    agree: bool
    mismatches: list

    def to_json(self):
        return {"degree": self.degree, "checked": self.checked, "agree": self.agree,
                "mismatches": self.mismatches[:20]}


def verify_intersection_generation(gens_I: Sequence, gens_J: Sequence, candidates: Sequence, d: int,
                                   alphabet: str = "xy", sided: str = "two") -> IntersectionReport:
    """Compare membership in I n J with membership in the ideal of ``candidates``, degree <= d."""
    I, J, K = _gens(gens_I), _gens(gens_J), _gens(candidates)
    mismatches, checked = [], 0
    for m in words_up_to(alphabet, d, min_len=1):
        checked += 1
        both = bool(monomial_ideal_member(I, m, sided)) and bool(monomial_ideal_member(J, m, sided))
        cand = bool(monomial_ideal_member(K, m, sided))
        if both != cand:
            mismatches.append({"monomial": m, "in_intersection": both, "in_candidate_ideal": cand})
    return IntersectionReport(d, checked, not mismatches, mismatches)
