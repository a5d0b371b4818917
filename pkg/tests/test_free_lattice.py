import numpy as np
import pytest
from hypothesis import assume, given, settings, strategies as st

from sdw import zoo
from sdw.core import AlgebraError
from sdw.free.lattice import (explain_leq, gen, join, lattice_equal, lattice_eval, meet, parse_lattice_term,
                              whitman_leq, xyz_claims, xyz_sequence)
from sdw.reducts import lattice_reduct

NAMES = ("x", "y", "z")


def terms(depth=3):
    leaf = st.sampled_from(NAMES).map(gen)
    return st.recursive(leaf, lambda ch: st.tuples(ch, ch, st.booleans()).map(
        lambda t: meet(t[0], t[1]) if t[2] else join(t[0], t[1])), max_leaves=2**depth)


LATTICES = [zoo.lattice(n) for n in ("2", "M3", "N5")]


def leq_in(L, a, b):
    red = lattice_reduct(L)
    return int(L.tables[red.meet][a, b]) == a


@given(terms())
def test_reflexive_and_parse_round_trip(p):
    assert whitman_leq(p, p)
    assert parse_lattice_term(str(p)) is p


@settings(max_examples=200)
@given(terms(), terms(), terms())
def test_transitive(p, q, r):
    if whitman_leq(p, q) and whitman_leq(q, r):
        assert whitman_leq(p, r)


@given(terms(), terms())
def test_bounds(p, q):
    assert whitman_leq(p, join(p, q)) and whitman_leq(meet(p, q), p)
    assert whitman_leq(p, q) == lattice_equal(meet(p, q), p) == lattice_equal(join(p, q), q)


@settings(max_examples=200, deadline=None)
@given(terms(), terms(), st.data())
def test_sound_in_finite_lattices(p, q, data):
    """p <= q in the free lattice forces p <= q under every assignment into any lattice."""
    assume(whitman_leq(p, q))
    L = LATTICES[data.draw(st.integers(0, len(LATTICES) - 1))]
    phi = {v: data.draw(st.integers(0, L.size - 1)) for v in NAMES}
    assert leq_in(L, lattice_eval(p, L, phi), lattice_eval(q, L, phi))


def test_refutations_have_countermodels():
    """Whenever the test says no on small terms, some assignment into N5 or M3 agrees."""
    rng = np.random.default_rng(5)
    from sdw.free.lattice import random_term
    refuted = witnessed = 0
    for _ in range(150):
        p, q = random_term(rng, 2), random_term(rng, 2)
        if whitman_leq(p, q):
            continue
        refuted += 1
        for L in LATTICES:
            red = lattice_reduct(L)
            found = False
            for a in range(L.size):
                for b in range(L.size):
                    for c in range(L.size):
                        phi = {"x": a, "y": b, "z": c}
                        if not leq_in(L, lattice_eval(p, L, phi), lattice_eval(q, L, phi)):
                            found = True
                            break
                    if found:
                        break
                if found:
                    break
            if found:
                witnessed += 1
                break
    assert refuted > 20 and witnessed == refuted


@given(terms(), terms(), st.sampled_from(NAMES))
def test_generators_are_meet_and_join_prime(p, q, x):
    g = gen(x)
    if whitman_leq(meet(p, q), g):
        assert whitman_leq(p, g) or whitman_leq(q, g)
    if whitman_leq(g, join(p, q)):
        assert whitman_leq(g, p) or whitman_leq(g, q)


def test_not_distributive():
    x, y, z = (gen(n) for n in NAMES)
    assert not whitman_leq(meet(x, join(y, z)), join(meet(x, y), meet(x, z)))
    assert whitman_leq(join(meet(x, y), meet(x, z)), meet(x, join(y, z)))


def test_parser():
    t = parse_lattice_term("x \\/ y /\\ z")
    assert t is join(gen("x"), meet(gen("y"), gen("z")))
    assert parse_lattice_term("x ∧ (y ∨ z)") is parse_lattice_term("x & (y | z)")
    assert parse_lattice_term("(x /\\ y) /\\ x") is meet(gen("x"), gen("y"))
    for bad in ("", "x /\\", "(x", "x y", "x $ y"):
        with pytest.raises(AlgebraError):
            parse_lattice_term(bad)


def test_explain_trace():
    x, y, z = (gen(n) for n in NAMES)
    c = explain_leq(join(x, meet(y, z)), x)
    assert not c and "joinand" in c.trace[0]
    c = explain_leq(x, join(x, meet(y, z)))
    assert c and c.to_json()["leq"]


def test_eval_errors():
    L = zoo.lattice("M3")
    with pytest.raises(AlgebraError, match="no value"):
        lattice_eval(gen("w"), L, {"x": 0})
    with pytest.raises(AlgebraError):
        lattice_eval(gen("x"), zoo.group("S3"), {"x": 0})


def test_xyz_chains():
    x0, y0, z0 = xyz_sequence(0)
    assert (str(x0), str(y0), str(z0)) == ("x", "y", "z")
    x1 = xyz_sequence(1)[0]
    assert x1 is join(gen("x"), meet(gen("y"), gen("z")))
    rep = xyz_claims(5)
    assert rep.ok and set(rep.claims) == {"a", "b", "c", "d"}
    with pytest.raises(AlgebraError):
        xyz_sequence(-1)


def test_claim_a_fails_under_a_wrong_map():
    rep = xyz_claims(2, atoms={"x": 1, "y": 1, "z": 3})
    assert not rep.claims["a"]["ok"]
