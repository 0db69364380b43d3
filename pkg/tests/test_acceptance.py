"""End-to-end acceptance criteria, one test per criterion, all exact.

The terminal summary (see conftest.py) prints one PASS/FAIL line per
criterion.  Run alone with ``pytest tests/test_acceptance.py -v``."""

import itertools
import os
import subprocess
import sys
import time
from fractions import Fraction

import numpy as np
import pytest

from hpgeom import abbrep, higgledy as hg, linsets, nrcdesign, projspace as ps
from hpgeom import quadrics as qd
from hpgeom.fieldred import make_spread
from hpgeom.gfield import make_tower
from oracles import brute_is_hp

PE = {2: (2, 1), 3: (3, 1), 4: (2, 2), 5: (5, 1), 7: (7, 1), 8: (2, 3), 9: (3, 2), 16: (2, 4)}


def test_criterion_01_spread_partition():
    for q in (2, 3, 4, 5):
        t0 = time.monotonic()
        sp = make_spread(q, 3)
        F = sp.sub
        cover = np.zeros(q ** 6, dtype=np.int64)
        for E in sp.elements():
            cover[ps.point_code(E.body.points(), q)] += 1
        pts = ps.point_code(ps.enumerate_points(5, F), q)
        assert sp.size == q ** 3 + 1, q
        assert np.all(cover[pts] == 1) and cover.sum() == len(pts), q
        assert time.monotonic() - t0 < 5, f"partition at q={q} took too long"


def test_criterion_02_design_and_veblen_young():
    t0 = time.monotonic()
    for q, t in [(3, 3), (4, 3), (5, 3), (3, 4)]:
        r = nrcdesign.verify_design_and_vy(q, t, mode="exhaustive")
        assert r.points == (q ** t - 1) // (q - 1), (q, t)
        assert r.block_sizes == [q + 1] and r.lambda_one, (q, t)
        assert r.vy_ok and r.vy_mode == "exhaustive", (q, t, r.counterexample)
        assert r.blocks == r.expected_blocks, (q, t)
        if t == 4:
            assert sorted(r.s_types) == [2, 4], r.s_types
    assert time.monotonic() - t0 < 60


def test_criterion_03_curve_identities_exhaustive():
    cases = [(q, t) for q in (2, 3, 4, 5, 7, 8, 9) for t in range(2, 7) if q ** t <= 81]
    failures = []
    checked = 0
    for q, t in cases:
        tw = make_tower(*PE[q], t)
        D = nrcdesign.HDesign(tw)
        nz = range(1, tw.Q)
        for a, b in itertools.product(nz, nz):
            if D.hpoint(a) == D.hpoint(b):
                continue
            r = nrcdesign.verify_curve_identities(D, a, b)
            checked += 1
            if not r["ok"]:
                failures.append((q, t, a, b, r))
    assert checked > 0 and not failures, failures[:3]


def test_criterion_04_counting_reconciliation():
    cr = linsets.census(5, 3, 3, workers=min(8, os.cpu_count() or 1))
    assert cr.complete and cr.total_subspaces == 2_558_556
    assert cr.clubs_head_pinf() == 155
    per_head = cr.clubs_per_head()
    assert len(per_head) == 125 and set(per_head.values()) == {31}
    assert cr.clubs_through_pinf_other_head() == 3875
    assert cr.plane_counts["scattered"] == 1_953_000
    assert cr.scattered_through_pinf() == 7750
    for q, expect in [(2, 504), (3, 19_656), (4, 262_080)]:
        c = linsets.census(q, 3, 3)
        assert c.plane_counts["scattered"] == expect == (q ** 3 + 1) * q ** 3 * (q ** 3 - 1)


def test_criterion_05_club_cone_bijection():
    workers = min(8, os.cpu_count() or 1)
    r = abbrep.club_cone_bijection(5, 3, workers=workers)
    assert r["failures"] == 0 and r["bijective"]
    assert r["clubs"] == r["cones"] == r["expected_cones"] == 3875
    r = abbrep.club_cone_bijection(3, 4, workers=workers)
    assert r["failures"] == 0 and r["bijective"]
    assert r["cones"] == 81 * ps.gaussian_binomial(4, 2, 3)


def test_criterion_06_scattered_quadric_bijection():
    r = abbrep.scattered_quadric_bijection(5, workers=min(8, os.cpu_count() or 1))
    assert r["failures"] == 0
    assert r["sets"] == r["images"] == r["special_quadrics"] == 7750
    assert r["bijective"]


def test_criterion_07_conic_family():
    rng = np.random.default_rng(7)
    for q in (5, 7, 8, 9):
        tw = make_tower(*PE[q], 3)
        lams = qd.lambdas_of(tw.minpoly_omega())
        w = tw.omega
        point = np.array([[1, w, tw.big.mul(w, w)]])
        for d, e, f in rng.integers(0, q, size=(1000, 3)):
            g = qd.conic_family_g(int(d), int(e), int(f), lams, tw.sub)
            assert int(qd.evaluate(g.coeffs, point, tw.big, 2, coeff_map=tw.emb)[0]) == 0, (q, d, e, f)
        if q in (5, 7):
            basis = qd.conics_through_conjugate(point, tw.big, tw)
            fam = np.array([qd.conic_family_g(*v, lams, tw.sub).coeffs for v in np.eye(3, dtype=int).tolist()])
            assert len(basis) == 3
            assert ps.rank(fam, tw.sub) == 3 and ps.rank(np.vstack([fam, basis]), tw.sub) == 3


def _displayed_odd(a, lam):
    one = a * 0 + 1
    b = (1 - a) ** 2
    return [[a, lam, a ** 2, one, 0, -a, one],
            [a, lam, a ** 2, -one, 0, a, one],
            [a, lam + 1 - a, b + lam, one, one, 1 - a, one],
            [a, lam + a - 1, b - lam, one, -one, 1 - a, one],
            [a, lam + 1 - a, b + lam, -one, -one, a - 1, one],
            [a, lam + a - 1, b - lam, -one, one, a - 1, one]]


def _displayed_even(a):
    one = a * 0 + 1
    return [[a, one, a + a ** 2, one, 0, a, one],
            [1 + a, a, 1 + a + a ** 2, one, one, a, one],
            [a, a ** 2, a + 1, a, 0, one, one],
            [1 + a, a ** 2 + a + 1, one, a, one, one, one],
            [0, 1 + a + a ** 3, a + a ** 2 + a ** 4, one, a, a ** 2, one],
            [0, a ** 4 + a ** 3 + a, a ** 3 + a ** 2 + 1, a ** 2, a, one, one]]


def _codes(M, F):
    return np.array([[x.code if hasattr(x, "code") else int(x) % F.p for x in row] for row in M], dtype=np.int64)


def test_criterion_08_six_point_matrix_and_rank_locus():
    problems = []
    # odd, q = 7: displayed matrix entrywise and rank 6 at the admissible a
    tower, lams = hg.construction_tower(7, "odd")
    F = tower.sub
    lam = lams[2]
    for a in range(7):
        A, r = hg.six_point_matrix(hg.construction_points("odd", a, F), lams, F)
        D = _codes(_displayed_odd(F.element(a), F.element(lam)), F)
        if not np.array_equal(A, D):
            problems.append(f"odd a={a}: matrix differs from the displayed one")
    for a in (3, 5, 6):
        if hg.six_point_matrix(hg.construction_points("odd", a, F), lams, F)[1] != 6:
            problems.append(f"odd a={a}: rank below 6")
    locus = {a for a, r in hg.rank_locus("odd", 7).items() if r < 6}
    expect = {a for a in range(7) if F.mul(F.mul(a, F.sub(1, a)), F.sub(F.mul(2, a), 1)) == 0}
    if locus != expect:
        problems.append(f"odd rank-failure locus over GF(7) is {sorted(locus)}, expected {sorted(expect)}")
    # even, q = 4, 16
    for q in (4, 16):
        tower, lams = hg.construction_tower(q, "even")
        F = tower.sub
        for a in range(q):
            A, _ = hg.six_point_matrix(hg.construction_points("even", a, F), lams, F)
            if not np.array_equal(A, _codes(_displayed_even(F.element(a)), F)):
                problems.append(f"even q={q} a={a}: matrix differs from the displayed one")
        locus = {a for a, r in hg.rank_locus("even", q).items() if r < 6}
        expect = {a for a in range(q) if F.mul(a, F.add(1, a)) == 0}
        if locus != expect:
            problems.append(f"even rank-failure locus over GF({q}) is {sorted(locus)}, expected {sorted(expect)}")
    assert not problems, "; ".join(problems)


def test_criterion_09_full_certification():
    workers = min(8, os.cpu_count() or 1)
    c = hg.construct_optimal(7, "odd", 3)
    cert = hg.strong_blocking_verify(c.planes, workers=workers)
    assert cert.total == ps.gaussian_binomial(6, 4, 7) == 6_865_251
    assert cert.passed and cert.checked == cert.total
    assert cert.pairwise_disjoint and hg.pairwise_disjoint(c.planes)
    c4 = hg.construct_optimal(4, "even", 2)
    cert4 = hg.strong_blocking_verify(c4.planes, workers=workers)
    assert cert4.passed and cert4.checked == cert4.total == ps.gaussian_binomial(6, 4, 4)
    c16 = hg.construct_optimal(16, "even", 8)
    tower, _ = hg.construction_tower(16, "even")
    o = hg.linear_set_oracle(c16.labels, make_spread(tower), workers=workers)
    assert o["candidates"] == ps.theta(3, 16) ** 3
    assert not o["covered"]


def test_criterion_10_cross_validation():
    disagreements = []
    tally = {}
    for q in (3, 4, 5):
        sp = make_spread(q, 3)
        rng = np.random.default_rng(1000 + q)
        for i in range(50):
            labels = sorted(rng.choice(sp.size, size=7, replace=False).tolist())
            r = hg.certify_points(labels, sp)
            s_pass, covered = r["solids"].passed, r["oracle"]["covered"]
            tally[(q, s_pass, covered)] = tally.get((q, s_pass, covered), 0) + 1
            if not r["agree"]:
                disagreements.append((q, labels, "solids pass" if s_pass else "solids fail",
                                      "covered" if covered else "not covered"))
    print("cross-validation tally (q, solids pass, oracle covered): count", tally)
    assert not disagreements, f"{len(disagreements)} disagreements, first {disagreements[:2]}"


def test_criterion_11_small_field_searches():
    for q, m in [(3, 6), (2, 5)]:
        r = hg.randomized_search(5, q, 2, m, seed=42, restarts=10 ** 6, mode="spread")
        assert r.found, (q, m)
        again = hg.strong_blocking_verify(r.planes)
        assert again.passed and again.checked == again.total
        assert brute_is_hp(r.planes)


def _covering_count(q):
    def falling(x, k):
        out = 1
        for i in range(k):
            out *= x - i
        return out
    c = falling(q * q, 6)
    d = falling(q * q + q, 6)
    S = (q ** 3 + q * q + q) * c + q ** 3 * (q * q + q + 1) * c + Fraction(1, 2) * q ** 3 * (q ** 3 - 1) * d
    return S, falling(q ** 3, 6)


def test_criterion_12_counting_inequality():
    fails = []
    for q in (3, 4, 5, 7, 8, 9):
        S, bound = _covering_count(q)
        row = hg.counting_existence(q)
        assert row["S_times_2"] == 2 * S and row["bound"] == bound
        if not S < bound:
            fails.append(f"q={q}: |S|/bound = {float(S / bound):.4f}")
    assert not fails, "inequality fails at " + ", ".join(fails)


DETERMINISM_COMMANDS = [
    ["counts", "--q", "4"],
    ["abb", "--q", "3", "--which", "club"],
    ["design", "--q", "4", "--mode", "sampled", "--samples", "20000", "--seed", "7"],
    ["hp", "construct", "--q", "4", "--variant", "even", "--a", "2", "--verify", "--method", "both"],
    ["hp", "search", "--q", "3", "--m", "6", "--seed", "42"],
    ["hp", "exists"],
]


def _run_cli(argv, out_dir):
    env = dict(os.environ)
    env.pop("HPGEOM_BUDGET", None)
    subprocess.run([sys.executable, "-m", "hpgeom.cli", *argv, "--out-dir", str(out_dir)],
                   check=False, capture_output=True, env=env)
    return {p: (out_dir / p).read_bytes() for p in sorted(os.listdir(out_dir))}


def test_criterion_13_determinism(tmp_path):
    diffs = []
    for ci, argv in enumerate(DETERMINISM_COMMANDS):
        runs = {}
        for tag, w in [("w1", "1"), ("w1again", "1"), ("w4", "4"), ("w8", "8")]:
            runs[tag] = _run_cli(argv + ["--workers", w], tmp_path / f"{ci}_{tag}")
        ref = runs["w1"]
        assert "report.json" in ref, argv
        for tag, files in runs.items():
            if files != ref:
                diffs.append((" ".join(argv), tag))
    assert not diffs, diffs
