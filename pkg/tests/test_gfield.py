import numpy as np
import pytest
from hypothesis import given, settings, strategies as st
from sympy import GF, Poly, symbols
from sympy.polys.galoistools import gf_irreducible_p, gf_mul, gf_rem
from sympy.polys.domains import ZZ

from hpgeom.gfield import (FieldError, cubic_is_irreducible, field_from_json, is_irreducible,
                           least_primitive_polynomial, make_field, make_tower, tower_from_json,
                           trace_norm)

ORDERS = [(2, 1), (3, 1), (5, 1), (7, 1), (2, 2), (2, 3), (3, 2), (2, 4), (5, 2), (2, 6), (3, 4)]


def _digits(code, p, e):
    return [(code // p ** i) % p for i in range(e)]


def _code(digits, p):
    return sum(int(c) * p ** i for i, c in enumerate(digits))


def poly_mul_oracle(F, a, b):
    """Multiply codes by schoolbook polynomial arithmetic in sympy."""
    p, e = F.p, F.e
    mod = list(reversed(F.modulus))
    da = list(reversed(_digits(a, p, e)))
    db = list(reversed(_digits(b, p, e)))
    r = gf_rem(gf_mul(da, db, p, ZZ), mod, p, ZZ)
    return _code(list(reversed([int(c) % p for c in r])), p)


@pytest.mark.parametrize("p,e", ORDERS)
def test_multiplication_matches_polynomial_oracle(p, e):
    F = make_field(p, e)
    rng = np.random.default_rng(p * 100 + e)
    for a, b in rng.integers(0, F.order, size=(300, 2)):
        assert F.mul(int(a), int(b)) == poly_mul_oracle(F, int(a), int(b))


@pytest.mark.parametrize("p,e", ORDERS)
def test_modulus_is_irreducible(p, e):
    F = make_field(p, e)
    if e > 1:
        assert gf_irreducible_p(list(reversed(F.modulus)), p, ZZ)
    assert is_irreducible(F.modulus, p)


@pytest.mark.parametrize("p,e", ORDERS)
def test_generator_has_full_order(p, e):
    F = make_field(p, e)
    seen = {F.pow(F.generator, i) for i in range(F.order - 1)}
    assert len(seen) == F.order - 1 and 0 not in seen


@settings(max_examples=200, deadline=None)
@given(st.sampled_from(ORDERS), st.data())
def test_field_axioms(pe, data):
    F = make_field(*pe)
    el = st.integers(0, F.order - 1)
    a, b, c = data.draw(el), data.draw(el), data.draw(el)
    assert F.add(a, F.add(b, c)) == F.add(F.add(a, b), c)
    assert F.mul(a, F.mul(b, c)) == F.mul(F.mul(a, b), c)
    assert F.mul(a, F.add(b, c)) == F.add(F.mul(a, b), F.mul(a, c))
    assert F.add(a, F.neg(a)) == 0
    assert F.sub(F.add(a, b), b) == a
    if a:
        assert F.mul(a, F.inv(a)) == 1
        assert F.div(F.mul(a, b), a) == b
    assert F.pow(a, F.order) == a


@pytest.mark.parametrize("p,e", [(3, 1), (2, 3), (3, 2), (5, 2)])
def test_vector_ops_match_scalar(p, e):
    F = make_field(p, e)
    a = np.arange(F.order)
    b = (a * 7 + 3) % F.order
    assert F.vadd(a, b).tolist() == [F.add(int(x), int(y)) for x, y in zip(a, b)]
    assert F.vmul(a, b).tolist() == [F.mul(int(x), int(y)) for x, y in zip(a, b)]
    nz = a[a > 0]
    assert F.vinv(nz).tolist() == [F.inv(int(x)) for x in nz]


def test_prime_field_is_modular_arithmetic():
    F = make_field(7)
    for a in range(7):
        for b in range(7):
            assert F.add(a, b) == (a + b) % 7
            assert F.mul(a, b) == (a * b) % 7


def test_squares_and_trace():
    F = make_field(7)
    assert sorted(x for x in range(1, 7) if F.is_square(x)) == [1, 2, 4]
    G = make_field(2, 2)
    assert sorted(F_ for F_ in range(4) if G.trace(F_) == 1) == [2, 3]


def test_field_elements():
    F = make_field(3, 2)
    x, y = F.element(4), F.element(7)
    assert (x * y).code == F.mul(4, 7)
    assert (x / y) * y == x
    assert (x - x).code == 0
    assert x ** 8 == F.element(1)
    with pytest.raises(FieldError):
        F.element(9)


def test_least_primitive_polynomial_generates():
    for p, e in [(2, 4), (3, 3), (5, 2)]:
        m = least_primitive_polynomial(p, e)
        F = make_field(p, e, m)
        assert F.generator_flag


def test_json_roundtrip():
    F = make_field(2, 4)
    G = field_from_json(F.to_json())
    assert G.modulus == F.modulus and G.generator == F.generator


@pytest.mark.parametrize("p,e,t", [(2, 1, 3), (3, 1, 3), (2, 2, 3), (5, 1, 3), (3, 1, 4), (2, 1, 6), (3, 2, 3)])
def test_tower_subfield_is_closed_and_fixed(p, e, t):
    tw = make_tower(p, e, t)
    big, q = tw.big, tw.q
    emb = tw.emb
    assert len(set(emb.tolist())) == q
    for a in emb:
        assert big.pow(int(a), q) == int(a)
    # embedding is a ring map
    for a in range(q):
        for b in range(q):
            assert big.add(int(emb[a]), int(emb[b])) == int(emb[tw.sub.add(a, b)])
            assert big.mul(int(emb[a]), int(emb[b])) == int(emb[tw.sub.mul(a, b)])


@pytest.mark.parametrize("p,e,t", [(2, 1, 3), (3, 1, 3), (2, 2, 3), (3, 1, 4)])
def test_tower_vector_roundtrip(p, e, t):
    tw = make_tower(p, e, t)
    codes = np.arange(tw.Q)
    assert np.array_equal(tw.recompose(tw.vec(codes)), codes)
    # vec is GF(q)-linear
    for a, b in [(3, 5), (7, 11)]:
        a, b = a % tw.Q, b % tw.Q
        assert np.array_equal(tw.vec(tw.big.add(a, b)), tw.sub.vadd(tw.vec(a), tw.vec(b)))


@pytest.mark.parametrize("p,e,t", [(2, 1, 3), (3, 1, 3), (2, 2, 3)])
def test_trace_and_norm_against_frobenius_products(p, e, t):
    tw = make_tower(p, e, t)
    big = tw.big
    for a in range(1, tw.Q, 3):
        conj = [big.pow(a, tw.q ** i) for i in range(t)]
        s, n = 0, 1
        for c in conj:
            s, n = big.add(s, c), big.mul(n, c)
        tr, nm = trace_norm(a, tw)
        assert int(tw.emb[tr]) == s and int(tw.emb[nm]) == n


def test_omega_minpoly_choice():
    tw = make_tower(7, 1, 3, omega_minpoly=[3, 0, 0, 1])
    w = tw.omega
    assert tw.big.add(tw.big.pow(w, 3), 3) == 0
    assert tw.minpoly_omega() == [3, 0, 0, 1]
    with pytest.raises(FieldError):
        make_tower(7, 1, 3, omega_minpoly=[1, 0, 0, 1])  # x^3 + 1 has the root -1


def test_tower_json_roundtrip():
    tw = make_tower(2, 2, 3, omega_minpoly=[1, 1, 0, 1])
    tw2 = tower_from_json(tw.to_json())
    assert tw2.omega == tw.omega and np.array_equal(tw2.emb, tw.emb)


def test_cubic_irreducibility_against_sympy():
    x = symbols("x")
    F = make_field(5)
    for c0 in range(5):
        for c1 in range(5):
            coeffs = [c0, c1, 0, 1]
            ref = Poly(x ** 3 + c1 * x + c0, x, domain=GF(5)).is_irreducible
            assert cubic_is_irreducible(coeffs, F) == ref
