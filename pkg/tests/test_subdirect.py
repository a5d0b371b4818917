import json
import os

import numpy as np
import pytest
from hypothesis import given, settings, strategies as st

from oracles import compose, relation
from sdw import zoo
from sdw.congruence import Congruence, cg
from sdw.core import AlgebraError, is_homomorphism
from sdw.subdirect import (SubproductAlgebra, diagonal, factor_kernels, fiber_product, full_product,
                           is_fiber_product, is_subdirect, load_subproduct, pair_lambda, pair_report,
                           project, lambda_generation_check, kernel_interval_check, random_subdirect, split, union_of_classes)

INPUTS = os.path.join(os.path.dirname(__file__), "..", "paper-examples", "inputs")


def chain_order():
    """{(a, b) : a <= b} in 2 x 2: subdirect, but the kernels do not permute."""
    L = zoo.lattice("2")
    return SubproductAlgebra.from_elements([L, L], [[0, 0], [0, 1], [1, 1]])


def test_subdirect_witness():
    G = zoo.group("Z4")
    C = SubproductAlgebra.from_generators([G, G], [[2, 0]])
    chk = is_subdirect(C)
    assert not chk and chk.witness["coordinate"] == 0


def test_fiber_product_round_trip():
    Z4, Z2 = zoo.cyclic(4), zoo.cyclic(2)
    f = np.arange(4) % 2
    C = fiber_product(Z4, Z4, f, f, Z2)
    assert C.size == 8
    w = is_fiber_product(C).witness
    assert w.D.size == 2
    assert is_homomorphism(Z4, w.D, w.g) and is_homomorphism(Z4, w.D, w.h)
    rebuilt = fiber_product(Z4, Z4, w.g, w.h, w.D)
    assert np.array_equal(rebuilt.codes, C.codes)


def test_fiber_product_rejects_bad_maps():
    Z4, Z2 = zoo.cyclic(4), zoo.cyclic(2)
    with pytest.raises(AlgebraError, match="not a homomorphism"):
        fiber_product(Z4, Z4, [0, 1, 1, 0], [0, 1, 0, 1], Z2)
    with pytest.raises(AlgebraError, match="not surjective"):
        fiber_product(Z4, Z4, [0, 0, 0, 0], [0, 1, 0, 1], Z2)


def test_non_permuting_kernels_are_not_a_fiber_product():
    C = chain_order()
    assert is_subdirect(C)
    chk = is_fiber_product(C)
    assert not chk
    a, b = relation(C.kernel_partition(0)), relation(C.kernel_partition(1))
    assert compose(a, b) != compose(b, a)


@settings(max_examples=25, deadline=None)
@given(st.sampled_from(["Z2", "Z3", "Z4", "S3", "Z2^2", "D4"]),
       st.sampled_from(["Z2", "Z4", "S3", "Z6", "Q8"]), st.integers(0, 2**31))
def test_group_subdirect_products_are_fiber_products(a, b, seed):
    rng = np.random.default_rng(seed)
    C = random_subdirect([zoo.group(a), zoo.group(b)], rng)
    w = is_fiber_product(C).witness
    # C is exactly the equalizer of g and h
    A, B = C.factors
    eq = {(x, y) for x in range(A.size) for y in range(B.size) if w.g[x] == w.h[y]}
    assert eq == set(C.elements())
    K = factor_kernels(C)
    assert K.quotient.size == w.D.size == K.lambda_A.num_blocks()


def test_factor_kernels_of_full_and_diagonal():
    S3 = zoo.group("S3")
    K = factor_kernels(full_product([S3, S3]))
    assert K.lambda_A.is_total() and K.quotient.size == 1
    K = factor_kernels(diagonal(S3))
    assert K.lambda_A.is_identity() and K.quotient.size == 6


def test_sign_triple():
    C = load_subproduct(os.path.join(INPUTS, "sign_triple.json"))
    assert C.size == 108
    rep = pair_report(C)
    assert rep.all_surjective()
    assert all(e.quotient_size == 1 for e in rep.entries)
    assert pair_lambda(C, 0, 1).is_total()
    # A3 x A3 x A3 classes: parity of the sum fixed
    even = {0, 3, 4}
    A3 = Congruence(zoo.group("S3"), [0 if x in even else 1 for x in range(6)])
    assert union_of_classes(C, [A3] * 3)
    bad = union_of_classes(C, [Congruence.zero(zoo.group("S3"))] * 2 + [Congruence.one(zoo.group("S3"))])
    assert not bad and not C.contains([bad.witness["escapes_to"]])[0]


def test_project_and_split():
    C = load_subproduct(os.path.join(INPUTS, "parity_z4_cubed.json"))
    P = project(C, [0, 2])
    assert P.n_factors == 2 and is_subdirect(P)
    S = split(C, [0], [1, 2])
    assert S.size == C.size and is_subdirect(S)
    with pytest.raises(AlgebraError):
        project(C, [5])


def test_lambda_generation_and_kernel_interval():
    rng = np.random.default_rng(7)
    for _ in range(10):
        G = [zoo.group(n) for n in rng.choice(["Z2", "Z4", "S3", "D4"], size=2)]
        C = random_subdirect(G, rng)
        assert lambda_generation_check(C)
        res = kernel_interval_check(C)
        assert res and res.details["bijective"]


def test_from_elements_rejects_non_subuniverse():
    G = zoo.group("Z4")
    with pytest.raises(AlgebraError, match="not closed"):
        SubproductAlgebra.from_elements([G, G], [[0, 0], [1, 1]])


def test_loader_errors(tmp_path):
    p = tmp_path / "c.json"
    p.write_text(json.dumps({"factors": ["group:S3"], "generators": [[1]]}))
    assert load_subproduct(p).size == 2
    p.write_text(json.dumps({"factors": ["group:NOPE"], "elements": [[0]]}))
    with pytest.raises(AlgebraError, match="unknown algebra"):
        load_subproduct(p)
    p.write_text(json.dumps({"factors": ["group:S3"]}))
    with pytest.raises(AlgebraError, match="generators"):
        load_subproduct(p)
    p.write_text("{")
    with pytest.raises(AlgebraError, match="invalid JSON"):
        load_subproduct(p)


def test_mixed_signature_factors_rejected():
    from sdw.core import SignatureMismatch
    with pytest.raises(SignatureMismatch):
        SubproductAlgebra([zoo.group("Z2"), zoo.ring("Z4")], [[0, 0]])


def test_as_algebra_kernels_are_congruences():
    C = load_subproduct(os.path.join(INPUTS, "fiber_z4.json"))
    A = C.as_algebra()
    for i in range(2):
        k = C.kernel(i)
        assert cg(A, k.pairs()) == k
