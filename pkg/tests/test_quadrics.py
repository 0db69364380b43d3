from collections import Counter

import numpy as np
import pytest
from hypothesis import given, settings, strategies as st
from sympy import Matrix

from hpgeom import projspace as ps
from hpgeom import quadrics as qd
from hpgeom.fieldred import make_spread
from hpgeom.gfield import make_field, make_tower


def _all_forms(n, F):
    return ps.normalized_coefficients(len(qd.monomials(n)), F.order)


@pytest.mark.parametrize("p,e", [(2, 1), (3, 1), (2, 2)])
def test_conic_census_counts(p, e):
    F = make_field(p, e)
    q = F.order
    kinds = Counter(qd.classify_batch(_all_forms(2, F), 2, F))
    # nondegenerate conics of PG(2, q): q^2 (q^3 - 1)
    assert kinds["nondegenerate-conic"] == q * q * (q ** 3 - 1)


@pytest.mark.parametrize("p,e", [(2, 1), (3, 1)])
def test_quadric_census_counts(p, e):
    F = make_field(p, e)
    q = F.order
    kinds = Counter(qd.classify_batch(_all_forms(3, F), 3, F))
    assert kinds["hyperbolic"] == q ** 4 * (q * q + 1) * (q ** 3 - 1) // 2
    assert kinds["elliptic"] == q ** 4 * (q * q - 1) * (q ** 3 - 1) // 2
    assert sum(kinds.values()) == ps.theta(10, q)


def _gram_det(f: qd.QuadraticForm, p: int) -> int:
    M = f.matrix()
    G = Matrix(4, 4, lambda i, j: 2 * M[i, i] if i == j else (M[min(i, j), max(i, j)]))
    return int(G.det()) % p


@settings(max_examples=80, deadline=None)
@given(st.lists(st.integers(0, 4), min_size=10, max_size=10))
def test_odd_classification_matches_discriminant(c):
    """For odd q a nonsingular quadric of PG(3, q) is hyperbolic iff its
    Gram determinant is a nonzero square."""
    F = make_field(5)
    if not any(c):
        return
    f = qd.QuadraticForm(F, 3, tuple(c))
    d = _gram_det(f, 5)
    kind = qd.classify(f).kind
    if d == 0:
        assert kind not in ("hyperbolic", "elliptic")
    else:
        assert kind == ("hyperbolic" if F.is_square(d) else "elliptic")


def test_quadratic_form_helpers():
    F = make_field(3)
    f = qd.QuadraticForm.from_dict(F, 3, {(0, 2): 1, (1, 1): 2, (3, 3): 1})
    assert f.evaluate(np.array([[1, 0, 0, 0]]))[0] == 0
    assert f.evaluate(np.array([[0, 0, 0, 1]]))[0] == 1
    g = qd.QuadraticForm.from_dict(F, 3, {(0, 2): 2, (1, 1): 1, (3, 3): 2})
    assert g.normalized() == f.normalized()
    assert f.restrict_last_zero().n == 2
    assert len(qd.zero_set(f)) in (3 * 3 + 1, 16)


def test_fit_quadrics_through_points():
    F = make_field(5)
    f = qd.QuadraticForm.from_dict(F, 3, {(0, 3): 1, (1, 2): 4})
    Z = qd.zero_set(f)
    sol = qd.fit_quadrics_through(Z, 3, F)
    assert len(sol) == 1
    assert tuple(ps.normalize(sol[0], F)) == f.normalized().coeffs


def test_conic_through_points():
    F = make_field(7)
    pts = np.array([[1, x, x * x % 7] for x in range(7)] + [[0, 0, 1]])
    assert qd.conic_through_points(pts, None, F)
    assert not qd.conic_through_points(pts[:3], None, F)  # five points are needed


@pytest.mark.parametrize("p,e", [(5, 1), (7, 1), (2, 3), (3, 2)])
def test_family_vanishes_at_the_conjugate_point(p, e):
    tw = make_tower(p, e, 3)
    lams = qd.lambdas_of(tw.minpoly_omega())
    big, w = tw.big, tw.omega
    point = np.array([[1, w, big.mul(w, w)]])
    rng = np.random.default_rng(p + e)
    for d, ee, f in rng.integers(0, tw.q, size=(50, 3)):
        g = qd.conic_family_g(int(d), int(ee), int(f), lams, tw.sub)
        assert qd.conjugate_conic_test(g, point[0], tw)
        assert int(qd.evaluate(g.coeffs, point, big, 2, coeff_map=tw.emb)[0]) == 0


def test_family_row_is_linear():
    F = make_field(7)
    lams = (0, 0, 3)
    P = np.array([1, 2, 3, 1])
    row = qd.family_row(P, lams, F)
    d, e, f, u, v, w, t = 1, 2, 0, 4, 5, 6, 1
    Q = qd.quadric_family_Q(d, e, f, u, v, w, t, lams, F)
    assert int(Q.evaluate(P)[0]) == int(np.dot(row, [d, e, f, u, v, w, t])) % 7


@pytest.mark.parametrize("q", [5, 7])
def test_gq_criterion_on_hyperbolic_and_elliptic(q):
    F = make_field(q)
    rng = np.random.default_rng(q)
    found = {"hyperbolic": False, "elliptic": False}
    while not all(found.values()):
        c = tuple(int(x) for x in rng.integers(0, q, size=10))
        f = qd.QuadraticForm(F, 3, c)
        if f.is_zero():
            continue
        kind = qd.classify(f).kind
        trace = f.restrict_last_zero()
        if kind not in found or found[kind] or trace.is_zero() or \
                qd.classify(trace).kind != "nondegenerate-conic":
            continue
        Z = qd.zero_set(f)
        U = Z[Z[:, 3] != 0]
        U = ps.normalize(U, F)
        U = F.vmul(U, F.vinv(U[:, 3])[:, None])
        g = qd.gq_criterion(U, F)
        if kind == "hyperbolic":
            assert g["pass"] and g["quadric"].normalized() == f.normalized()
        else:
            assert not g["pass"] and not g["size_ok"]
        found[kind] = True


@pytest.mark.parametrize("q,expect", [(2, 28), (3, 351), (4, 2016)])
def test_special_hyperbolic_count(q, expect):
    r = qd.count_special_hyperbolics(make_spread(q, 3))
    assert r["count"] == expect == q ** 3 * (q ** 3 - 1) // 2
    assert r["family_dim"] == 3
    assert r["nondegenerate_conics"] == q * q + q + 1


def test_conics_through_conjugate_dimension():
    tw = make_tower(5, 1, 3)
    w = tw.omega
    B = qd.conics_through_conjugate(np.array([[1, w, tw.big.mul(w, w)]]), tw.big, tw)
    assert B.shape == (3, 6)
