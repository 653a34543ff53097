import random
from itertools import product

import numpy as np
import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

from wittcalc.errors import NotInGhostImage, ParameterError, Unsupported
from wittcalc.ffield import GF, FunctionField
from wittcalc.rings import ZZ, Zmod
from wittcalc.witt import (WittVector, frobenius, from_ghost, gen_witt_polynomials, ghost_map,
                           restrict, teichmuller, verschiebung)

import oracles

F3 = GF(3)


def W(*coords, p=3, ring=F3):
    return WittVector(p, [ring(c) for c in coords], ring)


def test_p2_sum_polynomial():
    assert str(gen_witt_polynomials(2, 2).sum_polys[1]) == "-X0*Y0 + X1 + Y1"


def test_sum_polynomials_satisfy_ghost_equations():
    # w_k(S) = w_k(X) + w_k(Y) as integer polynomials, checked at random integer points
    rng = random.Random(5)
    for p, n in [(2, 3), (3, 3), (5, 2)]:
        for _ in range(20):
            x = WittVector(p, [rng.randrange(-9, 10) for _ in range(n)])
            y = WittVector(p, [rng.randrange(-9, 10) for _ in range(n)])
            gx, gy = ghost_map(x), ghost_map(y)
            assert ghost_map(x + y) == tuple(a + b for a, b in zip(gx, gy))
            assert ghost_map(x * y) == tuple(a * b for a, b in zip(gx, gy))
            assert ghost_map(-x) == tuple(-a for a in gx)


@pytest.mark.parametrize("x, y, expected", [
    ((1, 0), (1, 0), (2, 1)),
    ((1, 1), (1, 1), (2, 0)),
])
def test_addition_examples(x, y, expected):
    assert W(*x) + W(*y) == W(*expected)


def test_repeated_addition():
    assert W(1, 1) + W(1, 1) + W(1, 1) == W(0, 1)


def test_multiplication_examples():
    assert W(2, 0) * W(2, 0) == W(1, 0)
    assert W(0, 1) * W(0, 1) == W(0, 0)


def test_ghost_over_integers():
    assert ghost_map(WittVector(3, [2, 1])) == (2, 11)
    assert from_ghost((2, 11), 3) == WittVector(3, [2, 1])


def test_not_in_ghost_image():
    with pytest.raises(NotInGhostImage):
        from_ghost((0, 1), 3)


@given(st.lists(st.integers(-50, 50), min_size=1, max_size=4), st.sampled_from([2, 3, 5]))
@settings(max_examples=60, deadline=None)
def test_ghost_round_trip(coords, p):
    w = WittVector(p, coords)
    assert from_ghost(ghost_map(w), p) == w


def test_frobenius_and_verschiebung_examples():
    F = FunctionField(3)
    T = F.gen()
    assert frobenius(WittVector(3, [T, F(1), F(0)], F)) == WittVector(3, [T**3, F(1)], F)
    assert verschiebung(WittVector(3, [T], F)) == WittVector(3, [F(0), T], F)
    assert frobenius(verschiebung(W(1, 1))) == W(0, 1)
    assert frobenius(verschiebung(W(1, 1))) == 3 * W(1, 1)


def test_frobenius_errors():
    with pytest.raises(ParameterError):
        frobenius(W(1))
    with pytest.raises(Unsupported):
        frobenius(WittVector(3, [1, 2]))


def test_integer_scaling_matches_repeated_addition():
    x = W(2, 1)
    acc = W(0, 0)
    for k in range(12):
        assert k * x == acc
        assert (-k) * x == -acc
        acc = acc + x


def test_subtraction_uses_negation():
    rng = random.Random(2)
    F9 = GF(3, 2)
    for _ in range(30):
        x = WittVector(3, [oracles.random_finite(F9, rng) for _ in range(3)], F9)
        y = WittVector(3, [oracles.random_finite(F9, rng) for _ in range(3)], F9)
        assert (x - y) + y == x
        assert x + (-x) == WittVector.zero(3, 3, F9)


def test_ring_axioms_exhaustive_w2_f3():
    elems = [W(a, b) for a, b in product(range(3), repeat=2)]
    index = {w.coords: i for i, w in enumerate(elems)}
    add = np.array([[index[(x + y).coords] for y in elems] for x in elems])
    mul = np.array([[index[(x * y).coords] for y in elems] for x in elems])
    k = len(elems)
    assert (add == add.T).all() and (mul == mul.T).all()
    for i in range(k):
        assert (add[add[i]] == add[i][add]).all()  # (i+j)+l = i+(j+l)
        assert (mul[mul[i]] == mul[i][mul]).all()
        # i*(j+l) = i*j + i*l
        assert (mul[i][add] == add[mul[i]][:, mul[i]]).all()
    zero, one = index[W(0, 0).coords], index[W(1, 0).coords]
    assert (add[zero] == np.arange(k)).all() and (mul[one] == np.arange(k)).all()
    assert sorted(add[i].tolist().index(zero) for i in range(k)) == list(range(k))


def test_coefficients_in_zmod():
    R = Zmod(9)
    x = WittVector(3, [R(4), R(2)], R)
    assert ghost_map(x + x) == tuple(R(2 * int(g)) for g in ghost_map(x))


def test_teichmuller_multiplicative_over_function_field():
    F = FunctionField(5, ("t1", "t2"))
    rng = random.Random(11)
    for _ in range(10):
        a, b = oracles.random_rational(F, rng), oracles.random_rational(F, rng)
        assert teichmuller(a * b, 5, 3, F) == teichmuller(a, 5, 3, F) * teichmuller(b, 5, 3, F)


def test_restrict_is_ring_map():
    x, y = W(1, 2, 0), W(2, 2, 1)
    assert restrict(x * y, 2) == restrict(x, 2) * restrict(y, 2)
    assert restrict(x + y, 1) == restrict(x, 1) + restrict(y, 1)


def test_mixed_lengths_rejected():
    with pytest.raises(ParameterError):
        W(1, 0) + W(1)


def test_str_and_ring():
    assert str(W(2, 1)) == "W<3,2>(2, 1)"
    assert WittVector(3, [2, 1]).ring is ZZ
