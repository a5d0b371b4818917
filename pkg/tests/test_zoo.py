from itertools import product

import pytest

from sdw import zoo
from sdw.reducts import abelian_group_reducts, group_reduct, lattice_reduct, ring_reduct

ORDERS = {"Z1": 1, "Z2": 2, "Z3": 3, "Z4": 4, "Z2^2": 4, "Z5": 5, "Z6": 6, "S3": 6, "Z7": 7, "Z8": 8,
          "Z4xZ2": 8, "Z2^3": 8, "D4": 8, "Q8": 8}


@pytest.mark.parametrize("name", zoo.GROUP_NAMES)
def test_groups_satisfy_the_axioms(name):
    G = zoo.group(name)
    assert G.size == ORDERS[name]
    m, inv, e = G.tables["mul"], G.tables["inv"], int(G.tables["one"])
    for a, b, c in product(range(G.size), repeat=3):
        assert m[m[a, b], c] == m[a, m[b, c]]
    for a in range(G.size):
        assert m[a, e] == a == m[e, a] and m[a, inv[a]] == e
    red = group_reduct(G)
    assert red is not None and red.identity == e
    abelian = all(m[a, b] == m[b, a] for a in range(G.size) for b in range(G.size))
    assert red.abelian == abelian
    assert bool(abelian_group_reducts(G)) == abelian


@pytest.mark.parametrize("name", zoo.RING_NAMES)
def test_rings_satisfy_the_axioms(name):
    R = zoo.ring(name)
    red = ring_reduct(R)
    assert red is not None
    add, mul = R.tables[red.add], R.tables[red.mul]
    for a, b, c in product(range(R.size), repeat=3):
        assert mul[a, add[b, c]] == add[mul[a, b], mul[a, c]]
        assert mul[add[a, b], c] == add[mul[a, c], mul[b, c]]
        assert mul[mul[a, b], c] == mul[a, mul[b, c]]


@pytest.mark.parametrize("name", ["2", "SL2", "M3", "N5"])
def test_lattice_zoo(name):
    L = zoo.lattice(name)
    red = lattice_reduct(L)
    if name == "SL2":
        assert red is None
        return
    M, J = L.tables[red.meet], L.tables[red.join]
    for a, b in product(range(L.size), repeat=2):
        assert M[a, J[a, b]] == a and J[a, M[a, b]] == a


def test_named_and_corpus():
    assert zoo.named("cyclic:5").size == 5
    with pytest.raises(KeyError):
        zoo.named("monoid:X")
    assert len(zoo.corpus()) == len(zoo.GROUP_NAMES) + len(zoo.RING_NAMES) + 4


def test_ut2_is_noncommutative():
    R = zoo.ring("UT2")
    mul = R.tables[ring_reduct(R).mul]
    assert any(mul[a, b] != mul[b, a] for a in range(8) for b in range(8))
