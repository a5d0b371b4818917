import pytest
from hypothesis import given, strategies as st

from sdw.core import AlgebraError
from sdw.free.ideals import (EXAMPLE_CANDIDATES, EXAMPLE_I, EXAMPLE_J, MonomialGenerator, monomial_ideal_member,
                             verify_intersection_generation)
from sdw.free.words import parse_pattern_line


def instances(gens, max_len):
    out = []
    for g in gens:
        w, lo, hi = parse_pattern_line(g)
        if not w.pumped:
            out.append(w.prefix)
            continue
        i = lo
        while (hi is None or i <= hi) and w.min_length(i) <= max_len:
            out.append(w.instance(i))
            i += 1
    return out


@given(st.text(alphabet="xy", min_size=1, max_size=10), st.sampled_from(["two", "left", "right"]))
def test_membership_matches_substring_search(m, sided):
    for gens in (EXAMPLE_I, EXAMPLE_J, EXAMPLE_CANDIDATES):
        inst = instances(gens, len(m))
        if sided == "two":
            expect = any(g in m for g in inst)
        elif sided == "right":
            expect = any(m.startswith(g) for g in inst)
        else:
            expect = any(m.endswith(g) for g in inst)
        r = monomial_ideal_member(gens, m, sided)
        assert bool(r) == expect
        if r:
            assert r.left + r.factor + r.right == m and r.factor in inst


def test_examples():
    assert not monomial_ideal_member(EXAMPLE_J, "xyyx")
    r = monomial_ideal_member(EXAMPLE_I, "yxyyyxy")
    assert r and r.to_json()["witness"]["factor"] in ("xyyyx", "yxy")


def test_intersection_check_and_mismatch():
    rep = verify_intersection_generation(EXAMPLE_I, EXAMPLE_J, EXAMPLE_CANDIDATES, 6)
    assert rep.agree and rep.checked == 2**7 - 2
    short = [c for c in EXAMPLE_CANDIDATES if c != "x y x"]
    rep = verify_intersection_generation(EXAMPLE_I, EXAMPLE_J, short, 6)
    assert not rep.agree
    assert rep.mismatches[0]["monomial"] == "xyx"


def test_generator_errors():
    with pytest.raises(AlgebraError):
        MonomialGenerator.parse("1")
    with pytest.raises(AlgebraError):
        monomial_ideal_member(EXAMPLE_I, "")
    with pytest.raises(AlgebraError):
        monomial_ideal_member(EXAMPLE_I, "xy", sided="middle")
