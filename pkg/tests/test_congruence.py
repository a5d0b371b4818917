import numpy as np
import pytest
from hypothesis import given, settings, strategies as st

from oracles import closure_naive, closure_rows_naive, cg_naive, compose, is_congruence_naive, relation
from sdw import zoo
from sdw.closure import BudgetExhausted, close, closure_set, subuniverse_closure
from sdw.congruence import (Congruence, FiniteLattice, Partition, canonical, cg, composite, con_lattice,
                            is_modular, join, meet, permute)
from sdw.core import AlgebraError, FiniteAlgebra, Signature


@st.composite
def small_algebras(draw, max_size=4):
    n = draw(st.integers(2, max_size))
    ops = {"f": draw(st.lists(st.integers(0, n - 1), min_size=n * n, max_size=n * n))}
    sig = [("f", 2)]
    if draw(st.booleans()):
        ops["u"] = draw(st.lists(st.integers(0, n - 1), min_size=n, max_size=n))
        sig.append(("u", 1))
    return FiniteAlgebra("R", n, Signature(tuple(sig)), ops)


def all_partitions(n):
    def go(i, labels, k):
        if i == n:
            yield list(labels)
            return
        for lab in range(k + 1):
            yield from go(i + 1, labels + [lab], max(k, lab + 1))
    yield from go(0, [], 0)


# closure ---------------------------------------------------------------------------

@settings(max_examples=60, deadline=None)
@given(small_algebras(), st.data())
def test_closure_matches_naive(A, data):
    X = data.draw(st.lists(st.integers(0, A.size - 1), min_size=1, max_size=3))
    assert closure_set(A, X) == closure_naive(A, X)


@settings(max_examples=25, deadline=None)
@given(small_algebras(3), st.data())
def test_product_closure_matches_naive(A, data):
    gens = data.draw(st.lists(st.tuples(st.integers(0, A.size - 1), st.integers(0, A.size - 1)),
                              min_size=1, max_size=3))
    res = close([A, A], np.asarray(gens))
    assert {tuple(int(x) for x in r) for r in res.rows} == closure_rows_naive([A, A], gens)


def test_derivations_replay():
    G = zoo.group("D4")
    for d in subuniverse_closure(G, [1, 2]):
        assert d.replay(G, [1, 2]) == d.element


def test_term_extraction_replays():
    G = zoo.group("S3")
    res = close([G], [[1], [2]])
    from sdw.core import eval_term
    for i in range(res.size):
        assert eval_term(G, res.term(i), [1, 2]) == int(res.rows[i, 0])


def test_closure_budget_and_cap():
    G = zoo.group("S3")
    with pytest.raises(BudgetExhausted):
        close([G] * 4, [[1, 2, 3, 4], [2, 1, 4, 3]], budget=5)
    from sdw.core import CapExceeded
    with pytest.raises(CapExceeded):
        close([G] * 4, [[1, 2, 3, 4], [2, 1, 4, 3]], cap=10)


def test_closure_rejects_mixed_signatures():
    with pytest.raises(AlgebraError):
        close([zoo.group("Z2"), zoo.ring("Z4")], [[0, 0]])


# partitions --------------------------------------------------------------------------

@given(st.lists(st.integers(0, 5), min_size=1, max_size=9))
def test_canonical_labels_are_least_elements(labels):
    rep = canonical(labels)
    n = len(labels)
    for i in range(n):
        assert rep[i] == min(j for j in range(n) if labels[j] == labels[i])


@given(st.lists(st.integers(0, 3), min_size=1, max_size=8), st.data())
def test_join_and_meet_are_lattice_operations(l1, data):
    l2 = data.draw(st.lists(st.integers(0, 3), min_size=len(l1), max_size=len(l1)))
    p, q = Partition(canonical(l1)), Partition(canonical(l2))
    j, m = join(p, q), meet(p, q)
    assert p.leq(j) and q.leq(j) and m.leq(p) and m.leq(q)
    assert relation(m) == relation(p) & relation(q)
    # join is the transitive closure of the union
    R = relation(p) | relation(q)
    while True:
        R2 = R | compose(R, R)
        if R2 == R:
            break
        R = R2
    assert relation(j) == R


@given(st.lists(st.integers(0, 3), min_size=1, max_size=7), st.data())
def test_permute_matches_relation_product(l1, data):
    l2 = data.draw(st.lists(st.integers(0, 3), min_size=len(l1), max_size=len(l1)))
    p, q = Partition(canonical(l1)), Partition(canonical(l2))
    a, b = compose(relation(p), relation(q)), compose(relation(q), relation(p))
    res = permute(p, q)
    assert res.ok == (a == b)
    M = composite(p, q)
    assert {(x, z) for x, z in zip(*np.nonzero(M))} == a
    if not res.ok:
        x, z = res.witness
        assert (x, z) in a and (x, z) not in b


def test_from_blocks_validation():
    with pytest.raises(AlgebraError):
        Partition.from_blocks(3, [[0, 1], [1, 2]])
    with pytest.raises(AlgebraError):
        Partition.from_blocks(3, [[0, 5]])
    assert Partition.from_blocks(4, [[3, 1]]).blocks() == [[0], [1, 3], [2]]


# congruence generation ----------------------------------------------------------------

@settings(max_examples=40, deadline=None)
@given(small_algebras(4), st.data())
def test_cg_matches_naive(A, data):
    pairs = data.draw(st.lists(st.tuples(st.integers(0, A.size - 1), st.integers(0, A.size - 1)),
                               max_size=2))
    assert relation(cg(A, pairs)) == cg_naive(A, pairs)


def test_cg_budget():
    with pytest.raises(BudgetExhausted):
        cg(zoo.group("D4"), [(0, 1)], budget=10)


@pytest.mark.parametrize("spec", ["group:S3", "group:D4", "group:Z2^2", "ring:Z4", "ring:UT2",
                                  "lattice:M3", "lattice:N5", "lattice:SL2"])
def test_con_lattice_matches_brute_force(spec):
    A = zoo.named(spec)
    brute = {canonical(p).tobytes() for p in all_partitions(A.size)
             if is_congruence_naive(A, Partition(canonical(p)))}
    L = con_lattice(A)
    assert {c.key() for c in L.congruences} == brute
    assert L.zero.is_identity() and L.one.is_total()
    for i, a in enumerate(L.congruences):
        for j, b in enumerate(L.congruences):
            assert L.congruences[L.join_index(i, j)] == join(a, b)
            assert L.congruences[L.meet_index(i, j)] == meet(a, b)


def test_known_lattice_sizes():
    assert len(con_lattice(zoo.group("S3"))) == 3
    assert len(con_lattice(zoo.group("D4"))) == 6
    assert len(con_lattice(zoo.lattice("M3"))) == 2


def test_group_congruences_permute_and_are_modular():
    for G in zoo.groups():
        L = con_lattice(G)
        assert is_modular(L)
        for a in L.congruences:
            for b in L.congruences:
                assert permute(a, b)


def test_pentagon_is_not_modular():
    # 0 < a < c < 1, 0 < b < 1
    leq = np.zeros((5, 5), bool)
    order = [(0, 1), (0, 2), (0, 3), (0, 4), (1, 2), (1, 4), (2, 4), (3, 4)]
    for i in range(5):
        leq[i, i] = True
    for a, b in order:
        leq[a, b] = True
    res = is_modular(FiniteLattice(leq))
    assert not res and res.witness["b"] == 3


def test_lattice_congruences_need_not_permute():
    # the 3-element chain has congruences that do not permute
    from sdw.zoo import _lattice_from_leq
    C3 = _lattice_from_leq("3", [0, 1, 2], lambda a, b: a <= b)
    L = con_lattice(C3)
    assert not all(permute(a, b) for a in L.congruences for b in L.congruences)


def test_checked_rejects():
    from sdw.core import NotACongruence
    G = zoo.group("S3")
    with pytest.raises(NotACongruence):
        Congruence.checked(G, Partition.from_pairs(6, [(0, 1)]))
