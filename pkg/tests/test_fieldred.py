import numpy as np
import pytest

from hpgeom import projspace as ps
from hpgeom.fieldred import (B_of, field_reduce_point, field_reduce_subspace, make_spread, subgeometry_chart,
                             weight_of_count)
from hpgeom.gfield import make_tower


@pytest.mark.parametrize("q,t", [(2, 3), (3, 3), (2, 2), (3, 2), (4, 3), (2, 4)])
def test_elements_partition_the_points(q, t):
    sp = make_spread(q, t)
    F = sp.sub
    seen = np.zeros(q ** (2 * t), dtype=np.int64)
    for E in sp.elements():
        assert E.body.dim == t - 1
        codes = ps.point_code(E.body.points(), q)
        seen[codes] += 1
        assert np.all(sp.lookup_table[codes] == E.label)
    nz = ps.point_code(ps.enumerate_points(2 * t - 1, F), q)
    assert np.all(seen[nz] == 1)
    assert seen.sum() == ps.theta(2 * t, q)
    assert sp.size == q ** t + 1


def test_element_is_closed_under_big_field_scalars():
    sp = make_spread(3, 3)
    tw = sp.tower
    for lab in [0, 1, 5, 17]:
        coords = sp.coords_of(lab)
        E = sp.element(lab)
        for y in [1, 2, 7, 20]:
            v = sp.vector_of([tw.big.mul(y, int(c)) for c in coords])
            assert E.body.contains(v)


def test_labels_roundtrip():
    sp = make_spread(4, 3)
    for lab in range(sp.size):
        assert sp.label_of(sp.coords_of(lab)) == lab
    assert sp.coords_of(0) == (0, 1) and sp.coords_of(1) == (1, 0)


def test_lookup_agrees_with_ratio_of_big_coordinates():
    sp = make_spread(3, 3)
    rng = np.random.default_rng(0)
    for _ in range(200):
        v = rng.integers(0, 3, size=6)
        if not v.any():
            continue
        x0, x1 = (int(c) for c in sp.bigcoords_of(v))
        expect = 0 if x0 == 0 else 1 + sp.big.div(x1, x0)
        assert sp.lookup(v) == expect


def test_field_reduction_of_a_line_is_everything():
    tw = make_tower(2, 1, 3)
    S = field_reduce_subspace([[1, 0], [0, 1]], tw)
    assert S.dim == 5
    P = field_reduce_point([1, 3], tw)
    assert P.dim == 2


def test_weights_of_a_plane_sum_to_its_points():
    sp = make_spread(3, 3)
    rng = np.random.default_rng(3)
    for _ in range(30):
        pi = ps.Subspace(sp.sub, 5, rng.integers(0, 3, size=(3, 6)))
        if pi.dim != 2:
            continue
        bw = B_of(pi, sp)
        assert sum(ps.theta(w, 3) for _, w in bw) == ps.theta(3, 3)
        assert all(1 <= w <= 3 for _, w in bw)


def test_weight_of_count():
    assert [weight_of_count(ps.theta(w, 4), 4) for w in range(1, 5)] == [1, 2, 3, 4]
    with pytest.raises(ValueError):
        weight_of_count(4, 2)


@pytest.mark.parametrize("q,t", [(2, 3), (3, 3), (4, 3), (3, 4)])
def test_transversal_frame_spans_the_extended_element(q, t):
    sp = make_spread(q, t)
    big, tw = sp.big, sp.tower
    M = sp.mult_matrix
    U = sp.eigenvectors()
    for i in range(t):
        # M u_i = w^(q^i) u_i over the big field
        Mu = ps.matmul(tw.emb[M], U[i][:, None], big)[:, 0]
        assert np.array_equal(Mu, big.vmul(int(tw.frob(tw.omega, i)), U[i]))
    for lab in [0, 1, 2, sp.size - 1]:
        fr = sp.transversal_frame(lab)
        body = tw.emb[sp.element(lab).body.basis]
        assert ps.rank(fr.vectors, big) == t
        assert ps.rank(np.vstack([body, fr.vectors]), big) == t
        # conjugate points: Frobenius permutes the frame cyclically
        nxt = ps.normalize(tw.frob(fr.vectors[0], 1), big)
        assert np.array_equal(nxt, fr.conj_points[1 % t])


def test_subgeometry_chart_is_the_conjugate_tuple():
    sp = make_spread(3, 3)
    tw = sp.tower
    chart = subgeometry_chart(1, sp)
    assert len(chart) == ps.theta(3, 3)
    for code, c in chart.items():
        assert int(tw.frob(int(c[0]), 1)) == int(c[1]) and int(tw.frob(int(c[1]), 1)) == int(c[2])
