"""Words over single-letter alphabets and families with one pumped block.

Syntax: ``x y^i x``, ``xy^ix``, ``x^2y^2``; a range follows a colon, e.g.
``: i>=1`` or ``: 1<=i<=6``.  Without a range a pumped family means i >= 1.
"""

from __future__ import annotations

import re
from dataclasses import dataclass
from typing import Iterator, Optional

from ..core import AlgebraError

_TOKEN = re.compile(r"\s*([A-Za-z])(?:\^(\d+|[A-Za-z]\w*))?")
_RANGE = re.compile(
    r"^\s*(?:(?P<lo1>\d+)\s*<=\s*)?(?P<var>[A-Za-z]\w*)\s*(?:>=\s*(?P<lo2>\d+))?\s*(?:<=\s*(?P<hi>\d+))?\s*$")


@dataclass(frozen=True)
class WordPattern:
    """prefix + letter^i + suffix, or a plain word when ``letter`` is None."""
    prefix: str
    letter: Optional[str] = None
    suffix: str = ""
    var: Optional[str] = None

    @property
    def pumped(self) -> bool:
        return self.letter is not None

    def instance(self, i: int) -> str:
        if not self.pumped:
            return self.prefix
        return self.prefix + self.letter * i + self.suffix

    def min_length(self, lo: int) -> int:
        return len(self.prefix) + len(self.suffix) + (lo if self.pumped else 0)

    def regex(self, lo: int = 1, hi: Optional[int] = None) -> str:
        if not self.pumped:
            return re.escape(self.prefix)
        hi_s = "" if hi is None else str(hi)
        return f"{re.escape(self.prefix)}(?:{re.escape(self.letter)}){{{lo},{hi_s}}}{re.escape(self.suffix)}"

    def __str__(self):
        if not self.pumped:
            return self.prefix
        return f"{self.prefix}{self.letter}^{self.var}{self.suffix}"


def parse_word(text: str) -> WordPattern:
    text = text.strip()
    if text in ("", "1", "e"):
        return WordPattern("")
    pos = 0
    before, after = [], []
    letter = var = None
    while pos < len(text):
        m = _TOKEN.match(text, pos)
        if not m or m.end() == pos:
            raise AlgebraError(f"cannot parse word {text!r} at position {pos}")
        ch, exp = m.group(1), m.group(2)
        pos = m.end()
        while pos < len(text) and text[pos].isspace():
            pos += 1
        if exp is not None and not exp.isdigit():
            if letter is not None:
                raise AlgebraError(f"{text!r}: only one pumped block is allowed")
            letter, var = ch, exp
            continue
        chunk = ch * (int(exp) if exp is not None else 1)
        (after if letter is not None else before).append(chunk)
    return WordPattern("".join(before), letter, "".join(after), var)


@dataclass(frozen=True)
class Family:
    """A pair of word patterns with a shared parameter range (hi None = unbounded)."""
    lhs: WordPattern
    rhs: WordPattern
    lo: int = 1
    hi: Optional[int] = None

    @property
    def pumped(self) -> bool:
        return self.lhs.pumped or self.rhs.pumped

    def instances(self, max_len: int) -> Iterator[tuple[str, str]]:
        """Instances with both sides of length at most ``max_len``."""
        if not self.pumped:
            if len(self.lhs.prefix) <= max_len and len(self.rhs.prefix) <= max_len:
                yield self.lhs.prefix, self.rhs.prefix
            return
        i = self.lo
        while self.hi is None or i <= self.hi:
            left, right = self.lhs.instance(i), self.rhs.instance(i)
            # neither side gets shorter as i grows
            if len(left) > max_len or len(right) > max_len:
                break
            yield left, right
            i += 1

    def __str__(self):
        s = f"{self.lhs} = {self.rhs}"
        if self.pumped:
            v = self.lhs.var or self.rhs.var
            s += f" : {v}>={self.lo}" if self.hi is None else f" : {self.lo}<={v}<={self.hi}"
        return s


def parse_range(text: str) -> tuple[str, int, Optional[int]]:
    m = _RANGE.match(text)
    if not m:
        raise AlgebraError(f"cannot parse range {text!r}")
    lo = m.group("lo1") or m.group("lo2") or "1"
    hi = m.group("hi")
    return m.group("var"), int(lo), int(hi) if hi is not None else None


def parse_family(line: str) -> Family:
    """``lhs = rhs [: range]``."""
    body, _, rng = line.partition(":")
    if "=" not in body:
        raise AlgebraError(f"expected 'lhs = rhs' in {line!r}")
    left, right = body.split("=", 1)
    lhs, rhs = parse_word(left), parse_word(right)
    vars_ = {p.var for p in (lhs, rhs) if p.pumped}
    if len(vars_) > 1:
        raise AlgebraError(f"{line!r}: both sides must use the same parameter")
    lo, hi = 1, None
    if rng.strip():
        var, lo, hi = parse_range(rng)
        if vars_ and var not in vars_:
            raise AlgebraError(f"{line!r}: range is for {var!r} but the words use {vars_.pop()!r}")
        if not vars_:
            raise AlgebraError(f"{line!r}: range given for a pair without a pumped block")
    if hi is not None and hi < lo:
        raise AlgebraError(f"{line!r}: empty range")
    return Family(lhs, rhs, lo, hi)


def parse_pattern_line(line: str) -> tuple[WordPattern, int, Optional[int]]:
    """A single pattern with an optional range, for ideal generators."""
    body, _, rng = line.partition(":")
    w = parse_word(body)
    lo, hi = 1, None
    if rng.strip():
        if not w.pumped:
            raise AlgebraError(f"{line!r}: range given for a plain word")
        var, lo, hi = parse_range(rng)
        if var != w.var:
            raise AlgebraError(f"{line!r}: range is for {var!r} but the word uses {w.var!r}")
    return w, lo, hi


def words_up_to(alphabet: str, max_len: int, min_len: int = 0) -> Iterator[str]:
    """All words by length, then lexicographically in alphabet order."""
    level = [""]
    for n in range(max_len + 1):
        if n >= min_len:
            yield from level
        if n < max_len:
            level = [w + a for w in level for a in alphabet]
