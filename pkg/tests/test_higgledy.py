import itertools

import numpy as np
import pytest

from hpgeom import higgledy as hg
from hpgeom import projspace as ps
from hpgeom.fieldred import make_spread
from hpgeom.gfield import make_field
from oracles import brute_is_hp


@pytest.mark.parametrize("q,m", [(2, 3), (2, 4), (3, 3), (3, 4)])
def test_solid_verifier_matches_brute_force_lines_in_pg3(q, m):
    F = make_field(q)
    rng = np.random.default_rng(10 * q + m)
    verdicts = set()
    for _ in range(12):
        S = hg.PlaneSet(F, 3, hg.random_planes(rng, 3, 1, m, F))
        cert = hg.strong_blocking_verify(S, chunk=17)
        assert cert.verdict in ("pass", "fail")
        assert cert.passed == brute_is_hp(S)
        verdicts.add(cert.verdict)
    if m == 4:
        assert "pass" in verdicts


def test_solid_verifier_planes_in_pg4_q2():
    F = make_field(2)
    rng = np.random.default_rng(4)
    for _ in range(6):
        S = hg.PlaneSet(F, 4, hg.random_planes(rng, 4, 2, 3, F))
        assert hg.strong_blocking_verify(S).passed == brute_is_hp(S)


def test_inconclusive_on_limit_and_witness_is_real():
    sp = make_spread(3, 3)
    S = hg.hp_from_points([0, 1, 2, 3, 4, 5, 6], sp)
    c = hg.strong_blocking_verify(S, limit=10)
    assert c.verdict in ("inconclusive", "fail")
    full = hg.strong_blocking_verify(S)
    if full.verdict == "fail":
        kappa = ps.Subspace(S.field, 5, np.array(full.witness["space"]))
        assert kappa.dim == 3 and not hg.meets_spanning(S, kappa)


def test_spread_elements_are_disjoint():
    sp = make_spread(4, 3)
    S = hg.hp_from_points(range(7), sp)
    assert hg.pairwise_disjoint(S)
    T = hg.PlaneSet(S.field, 5, [S.planes[0], ps.Subspace(S.field, 5, np.vstack([S.planes[0].basis[:1],
                                                                                  S.planes[1].basis[:2]]))])
    assert not hg.pairwise_disjoint(T)


def test_plane_set_json_roundtrip():
    sp = make_spread(3, 3)
    S = hg.hp_from_points([0, 1, 5], sp)
    T = hg.PlaneSet.from_json(S.to_json())
    assert [P.key() for P in T.planes] == [P.key() for P in S.planes]
    with pytest.raises(ValueError):
        hg.hp_from_points([0, 0, 1], sp)


def test_oracle_finds_covering_planes_for_linear_set_points():
    sp = make_spread(3, 3)
    pi = ps.Subspace(sp.sub, 5, np.array([[1, 0, 0, 0, 0, 0], [0, 0, 0, 1, 0, 0], [0, 1, 0, 0, 1, 0]]))
    labels = sorted({lab for lab, _ in sp.B_of(pi)})[:7]
    o = hg.linear_set_oracle(labels, sp)
    assert o["covered"]
    assert set(labels) <= {lab for lab, _ in sp.B_of(ps.Subspace(sp.sub, 5, np.array(o["plane"])))}


def test_oracle_agrees_with_solids_q4():
    sp = make_spread(4, 3)
    rng = np.random.default_rng(8)
    for _ in range(3):
        labels = rng.choice(sp.size, size=7, replace=False).tolist()
        r = hg.certify_points(labels, sp)
        assert r["agree"]


@pytest.mark.parametrize("variant,q,a", [("even", 4, 2), ("even", 4, 3)])
def test_even_construction_is_certified(variant, q, a):
    c = hg.construct_optimal(q, variant, a)
    assert c.rank == 6 and c.preconditions["ok"]
    assert hg.strong_blocking_verify(c.planes).passed
    tower, _ = hg.construction_tower(q, variant)
    assert not hg.linear_set_oracle(c.labels, make_spread(tower))["covered"]


def test_construction_preconditions_odd_q7():
    c = hg.construct_optimal(7, "odd", 3)
    pre = c.preconditions
    assert pre["elliptic"] and pre["on_quadric"] and pre["non_coplanar"] and pre["trace_is_canonical"]
    assert len(set(c.labels)) == 7 and hg.pairwise_disjoint(c.planes)


def test_alignment_sends_frame_to_conjugate_points():
    tower, _ = hg.construction_tower(7, "odd")
    sp = make_spread(tower)
    T = hg.alignment_matrix(sp)
    U = sp.eigenvectors()
    big = sp.big
    w = tower.omega
    for i in range(3):
        wi = int(tower.frob(w, i))
        img = ps.matvec(tower.emb[T], U[i], big)
        want = np.array([1, wi, big.mul(wi, wi)])
        assert ps.rank(np.vstack([img, want]), big) == 1


def test_parameter_checks():
    F = make_field(7)
    assert hg.check_parameter("odd", 3, F) == []
    assert hg.check_parameter("odd", 2, F)  # a square
    assert hg.check_parameter("odd", 4, F)  # 1/2 = 4 and a square
    with pytest.raises(hg.ConstructionError):
        hg.construct_optimal(7, "odd", 2)
    with pytest.raises(hg.ConstructionError):
        hg.construction_tower(5, "odd")  # q != 1 mod 3
    with pytest.raises(hg.ConstructionError):
        hg.construction_tower(8, "even")  # x^3 + x + 1 splits over GF(8)


def test_least_cubic_lambda():
    F = make_field(7)
    lam = hg.least_cubic_lambda(F)
    assert lam == 2 and all(F.add(F.pow(x, 3), lam) for x in range(7))


def test_counting_table_shape():
    r = hg.counting_existence(9)
    assert r["holds"] and r["in_proof_range"]
    assert r["bound"] == 729 * 728 * 727 * 726 * 725 * 724


def test_randomized_search_is_seeded():
    a = hg.randomized_search(5, 2, 2, 5, seed=3, restarts=200, mode="spread")
    b = hg.randomized_search(5, 2, 2, 5, seed=3, restarts=200, mode="spread")
    assert a.found and a.restarts == b.restarts
    assert [P.key() for P in a.planes.planes] == [P.key() for P in b.planes.planes]
    assert hg.strong_blocking_verify(a.planes).passed


def test_verifier_matches_brute_force_on_line_quadruples_pg3_2():
    F = make_field(2)
    lines = list(ps.enumerate_subspaces(3, 1, F))
    for combo in itertools.islice(itertools.combinations(range(len(lines)), 4), 0, 3000, 97):
        S = hg.PlaneSet(F, 3, [lines[i] for i in combo])
        assert hg.strong_blocking_verify(S).passed == brute_is_hp(S)
