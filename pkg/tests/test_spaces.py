import random
from math import comb

import pytest

from bivcob.exactalg import ZZ
from bivcob.fgl import additive_fgl, multiplicative_fgl, multiplicative_specialization, universal_fgl
from bivcob.spaces import (
    ProjModel,
    binomial_oracle,
    ch_side,
    conner_floyd_check,
    euler_characteristic,
    grr_check,
    k_side,
    linear_embedding_pullback,
    linear_embedding_pushforward,
    proj_pushforward,
    pushforward_to_point,
)


def test_model_examples():
    P0 = ProjModel((0,), additive_fgl(2))
    assert P0.rank == 1
    P1 = ProjModel((1,), additive_fgl(2))
    assert P1.rank == 2
    x = P1.gen()
    assert x * x == P1.algebra.zero
    U = universal_fgl(2)
    M = ProjModel((2, 1), U)
    assert M.rank == 6
    assert sorted(M.basis()) == [(i, j) for i in range(3) for j in range(2)]


def test_model_needs_enough_precision():
    with pytest.raises(ValueError):
        ProjModel((3,), additive_fgl(3))


@pytest.mark.parametrize("dims", [(1,), (2,), (1, 1), (2, 1), (3, 2), (2, 2, 2), (8,), (4, 4)])
def test_model_is_free_of_expected_rank(dims):
    law = additive_fgl(max(sum(dims), 1) + 1)
    M = ProjModel(dims, law)
    rank = 1
    for n in dims:
        rank *= n + 1
    assert M.rank == rank


def test_pushforward_examples():
    P1 = ProjModel((1,), additive_fgl(2))
    assert pushforward_to_point(P1, P1.algebra.parse("3 + 5*x")) == ZZ(5)
    M = multiplicative_fgl(2)
    Pm = ProjModel((1,), M)
    assert pushforward_to_point(Pm, Pm.algebra.one) == M.ring.gen("beta")
    K = ProjModel((1,), multiplicative_fgl(2, 1))
    assert pushforward_to_point(K, K.algebra.parse("1 + x")) == ZZ(2)


def test_pushforward_order_is_irrelevant():
    law = universal_fgl(3)
    M = ProjModel((2, 1), law)
    rnd = random.Random(3)
    for _ in range(20):
        a = M.element({e: rnd.randint(-3, 3) for e in M.basis()})
        first = M.submodel(0)
        one = pushforward_to_point(first, proj_pushforward(M, 0, a))
        second = M.submodel(1)
        other = pushforward_to_point(second, proj_pushforward(M, 1, a))
        assert one == other


def test_line_bundles_tensor_by_the_law():
    law = universal_fgl(3)
    M = ProjModel((2, 1), law)
    for d, e in [((1, 0), (0, 1)), ((2, -1), (-1, 3)), ((-2, -2), (1, 1))]:
        Ld, Le = M.line_bundle(d), M.line_bundle(e)
        assert (Ld * Le).c1 == law(Ld.c1, Le.c1)


def test_projection_formula():
    rnd = random.Random(11)
    law = universal_fgl(3)
    M = ProjModel((1, 2), law)
    sub = M.submodel(0)
    for _ in range(500):
        alpha = sub.element({e: rnd.randint(-2, 2) for e in sub.basis()})
        gamma = M.element({e: rnd.randint(-2, 2) for e in M.basis()})
        assert proj_pushforward(M, 0, M.pullback(0, alpha) * gamma) == alpha * proj_pushforward(M, 0, gamma)


def test_linear_embeddings():
    law = universal_fgl(3)
    P0, P1, P2 = (ProjModel((n,), law) for n in (0, 1, 2))
    assert linear_embedding_pushforward(P0, P1, P0.algebra.one) == P1.gen()
    assert linear_embedding_pushforward(P2, P2, P2.gen()) == P2.gen()
    assert pushforward_to_point(P2, linear_embedding_pushforward(P0, P2, P0.algebra.one)) == law.ring.one
    with pytest.raises(ValueError):
        linear_embedding_pushforward(P2, P1, P2.algebra.one)
    rnd = random.Random(5)
    for _ in range(500):
        alpha = P2.element({e: rnd.randint(-3, 3) for e in P2.basis()})
        g = P1.element({e: rnd.randint(-3, 3) for e in P1.basis()})
        lhs = linear_embedding_pushforward(P1, P2, linear_embedding_pullback(P1, P2, alpha) * g)
        assert lhs == alpha * linear_embedding_pushforward(P1, P2, g)
        assert pushforward_to_point(P2, linear_embedding_pushforward(P1, P2, g)) == pushforward_to_point(P1, g)


def test_hrr_examples():
    assert euler_characteristic(1, 1) == 2
    assert euler_characteristic(1, 2) == 3
    assert euler_characteristic(0, 0) == 1
    assert grr_check(2, 2) == {"n": 2, "d": 2, "k_side": 6, "ch_side": 6, "binomial": 6, "agree": True}


def test_binomial_oracle():
    for n in range(7):
        for d in range(7):
            assert binomial_oracle(n, d) == comb(n + d, n)
    # negative twists: χ(P^n, O(d)) = (-1)^n χ(P^n, O(-d-n-1))
    for n in range(1, 6):
        for d in range(-8, -n):
            assert binomial_oracle(n, d) == (-1) ** n * comb(-d - 1, n)


@pytest.mark.parametrize("n", range(7))
def test_hrr_grid(n):
    for d in range(7):
        assert k_side(n, d) == ch_side(n, d) == comb(n + d, n)


@pytest.mark.parametrize("d", [-8, -5, -1, 8])
def test_hrr_extremes(d):
    assert k_side(8, d) == ch_side(8, d) == binomial_oracle(8, d)


def test_hrr_range_checked():
    with pytest.raises(ValueError):
        k_side(9, 0)
    with pytest.raises(ValueError):
        ch_side(2, 9)


def test_conner_floyd_consistency():
    law = universal_fgl(3)
    M = ProjModel((2, 1), law)
    hom = multiplicative_specialization(law.ring)
    special = multiplicative_fgl(3, ring=hom.dst)
    rnd = random.Random(2)
    L = law.ring
    # homogeneous classes of total degree 0: the weight of each coefficient
    # matches the degree of its monomial, so pushforwards stay within W = 3
    for _ in range(30):
        terms = {}
        for e in M.basis():
            w = sum(e)
            if w == 0:
                terms[e] = rnd.randint(-3, 3)
            else:
                monos = L._monomials_of_weight(w)
                terms[e] = L.element({rnd.choice(monos): rnd.randint(-3, 3)})
        a = M.element(terms)
        left, right = conner_floyd_check((2, 1), a, M, hom, special)
        assert left == right
