from itertools import product

import numpy as np
from hypothesis import given, settings, strategies as st

from sdw import zoo
from sdw.linalg import abelian_coordinates, howell, intersect


def span(rows, q, ncols):
    out = {(0,) * ncols}
    frontier = list(out)
    while frontier:
        nxt = []
        for v in frontier:
            for r in rows:
                w = tuple((a + b) % q for a, b in zip(v, r))
                if w not in out:
                    out.add(w)
                    nxt.append(w)
        frontier = nxt
    return out


pq = st.sampled_from([(2, 1), (2, 2), (2, 3), (3, 1), (3, 2), (5, 1)])


@settings(max_examples=60, deadline=None)
@given(pq, st.integers(1, 3), st.data())
def test_howell_membership_and_order(pe, ncols, data):
    p, e = pe
    q = p**e
    rows = data.draw(st.lists(st.lists(st.integers(0, q - 1), min_size=ncols, max_size=ncols), max_size=3))
    H = howell(rows, p, e, ncols)
    S = span([tuple(r) for r in rows], q, ncols)
    assert H.order() == len(S)
    allv = np.asarray(list(product(range(q), repeat=ncols)))
    mask = H.contains(allv)
    assert {tuple(int(x) for x in v) for v in allv[mask]} == S


@settings(max_examples=40, deadline=None)
@given(pq, st.integers(1, 3), st.data())
def test_intersection(pe, ncols, data):
    p, e = pe
    q = p**e
    vec = st.lists(st.integers(0, q - 1), min_size=ncols, max_size=ncols)
    r1 = data.draw(st.lists(vec, max_size=3))
    r2 = data.draw(st.lists(vec, max_size=3))
    H = intersect(howell(r1, p, e, ncols), howell(r2, p, e, ncols))
    both = span([tuple(r) for r in r1], q, ncols) & span([tuple(r) for r in r2], q, ncols)
    assert H.order() == len(both)
    assert all(H.contains(np.asarray([v]))[0] for v in both)


def test_abelian_coordinates_are_injective_homomorphisms():
    for name in ("Z2", "Z4", "Z6", "Z8", "Z2^2", "Z4xZ2", "Z2^3"):
        G = zoo.group(name)
        add = G.tables["mul"]
        C = abelian_coordinates(add, 0)
        enc = C.encode(np.arange(G.size))
        keys = {tuple(int(x) for P in enc for x in P[a]) for a in range(G.size)}
        assert len(keys) == G.size
        for a in range(G.size):
            for b in range(G.size):
                s = int(add[a, b])
                for P, V in zip(C.parts, enc):
                    assert np.array_equal((V[a] + V[b]) % P.p**P.e, V[s])
        assert np.array_equal(C.decode(enc), np.arange(G.size))
