"""Higgledy-piggledy (strong blocking) sets of subspaces.

A set of k-spaces of PG(n, q) is higgledy-piggledy when the points of their
union meet every (n-k)-space in a spanning set of it.  Two verifiers:
enumeration of all (n-k)-spaces through their annihilators, and, for seven
planes of PG(5, q) coming from points of PG(1, q^3), a search for a plane
meeting all seven spread elements (a rank <= 3 linear set through them).
"""

from __future__ import annotations

import math
import time
from dataclasses import dataclass, field
from typing import Sequence

import numpy as np

from . import _kernels as K
from . import projspace as ps
from . import quadrics as qd
from ._parallel import chunk_ranges, run_ordered
from .abbrep import ABBLine
from .fieldred import Spread, make_spread
from .gfield import FiniteField, FieldError, make_field, make_tower
from .linsets import PINF


class ConstructionError(ValueError):
    pass


@dataclass
class PlaneSet:
    field: FiniteField
    n: int
    planes: list[ps.Subspace]
    provenance: dict = field(default_factory=dict)

    def __post_init__(self):
        keys = [P.key() for P in self.planes]
        if len(set(keys)) != len(keys):
            raise ValueError("planes must be distinct")
        if any(P.n != self.n for P in self.planes):
            raise ValueError("ambient dimension mismatch")
        dims = {P.dim for P in self.planes}
        if len(dims) > 1:
            raise ValueError("all subspaces must have one dimension")

    @property
    def k(self) -> int:
        return self.planes[0].dim

    def to_json(self) -> dict:
        return {"field": self.field.to_json(), "n": self.n,
                "planes": [P.basis.tolist() for P in self.planes], "provenance": self.provenance}

    @classmethod
    def from_json(cls, d: dict) -> "PlaneSet":
        from .gfield import field_from_json
        F = field_from_json(d["field"])
        return cls(F, int(d["n"]), [ps.Subspace(F, int(d["n"]), np.array(b)) for b in d["planes"]],
                   d.get("provenance", {}))


@dataclass
class HPCertificate:
    verdict: str  # pass | fail | inconclusive
    method: str
    checked: int
    total: int
    pairwise_disjoint: bool
    witness: dict | None = None
    seconds: float = 0.0

    @property
    def passed(self) -> bool:
        return self.verdict == "pass"

    def to_json(self) -> dict:
        return {"verdict": self.verdict, "method": self.method, "checked": self.checked,
                "total": self.total, "pairwise_disjoint": self.pairwise_disjoint, "witness": self.witness}


def pairwise_disjoint(S: PlaneSet) -> bool:
    F = S.field
    for i, A in enumerate(S.planes):
        for B in S.planes[i + 1:]:
            if ps.rank(np.vstack([A.basis, B.basis]), F) != A.basis.shape[0] + B.basis.shape[0]:
                return False
    return True


def meets_spanning(S: PlaneSet, kappa: ps.Subspace) -> bool:
    """Whether the union of S meets kappa in a set spanning kappa."""
    rows = [ps.meet(P, kappa).basis for P in S.planes]
    rows = [r for r in rows if len(r)]
    if not rows:
        return kappa.dim < 0
    return ps.rank(np.vstack(rows), S.field) == kappa.dim + 1


def _solids_task(start, stop, arrays, q, target):
    combos, offsets, fr, fc, nf, planes, add, mul, neg, inv = arrays
    return K.solids_chunk(start, stop, combos, offsets, fr, fc, nf, q, planes, add, mul, neg, inv, target)


def strong_blocking_verify(S: PlaneSet, workers: int = 1, chunk: int = 250_000,
                           budget: float | None = None, limit: int | None = None) -> HPCertificate:
    """Check every (n-k)-space; short-circuits at the first failure.

    ``budget`` (seconds) or ``limit`` (spaces) cap the run; an unfinished
    run is inconclusive, never a pass."""
    n, k, F = S.n, S.k, S.field
    if not 0 < k < n:
        raise ValueError("need 0 < k < n")
    q = F.order
    t0 = time.monotonic()
    plan = ps.enum_plan(n, k - 1, q)  # annihilators of (n-k)-spaces have vector dimension k
    T = F.small_tables
    planes = np.stack([P.basis for P in S.planes]).astype(np.int64)
    arrays = (plan.combos, plan.offsets, plan.free_rows, plan.free_cols, plan.nfree, planes,
              T.add, T.mul, T.neg, T.inv)
    total = plan.total
    stop_at = total if limit is None else min(total, limit)
    tasks = [(s, e, arrays, q, n - k + 1) for s, e in chunk_ranges(stop_at, chunk)]
    deadline = None if budget is None else t0 + budget
    res, timed_out = run_ordered(_solids_task, tasks, workers, deadline, stop_when=lambda r: r[0] >= 0)
    checked = 0
    fail = -1
    for idx, cnt in res:
        checked += int(cnt)
        if idx >= 0:
            fail = int(idx)
            break
    disjoint = pairwise_disjoint(S)
    secs = time.monotonic() - t0
    if fail >= 0:
        Fm = ps.subspace_matrix_at(plan, fail)
        kappa = ps.Subspace(F, n, ps.nullspace(Fm, F))
        if meets_spanning(S, kappa):
            raise AssertionError("kernel failure not confirmed")
        rows = [ps.meet(P, kappa).basis for P in S.planes]
        rows = [r for r in rows if len(r)]
        rk = ps.rank(np.vstack(rows), F) if rows else 0
        wit = {"index": fail, "space": kappa.basis.tolist(), "union_rank": rk, "needed": n - k + 1}
        return HPCertificate("fail", "solid_enumeration", checked, total, disjoint, wit, secs)
    if timed_out or checked < total:
        return HPCertificate("inconclusive", "solid_enumeration", checked, total, disjoint, None, secs)
    return HPCertificate("pass", "solid_enumeration", checked, total, disjoint, None, secs)


# -- point sets of PG(1, q^3) -------------------------------------------------

def hp_from_points(labels: Sequence[int], spread: Spread, provenance: dict | None = None) -> PlaneSet:
    labels = [int(x) for x in labels]
    if len(set(labels)) != len(labels):
        raise ValueError("points must be distinct")
    planes = [spread.element(lab).body for lab in labels]
    prov = {"points": labels} if provenance is None else provenance
    return PlaneSet(spread.sub, spread.n, planes, prov)


def _oracle_arrays(labels, spread: Spread):
    F = spread.sub
    bodies = [spread.element(int(lab)).body for lab in labels]
    ann = [B.dual() for B in bodies]
    pts = [B.points() for B in bodies]
    m = len(labels)
    npts = len(pts[0])
    AP = np.zeros((m, m, npts, ann[0].shape[0]), dtype=np.int64)
    for i in range(m):
        for j in range(m):
            AP[i, j] = ps.matmul(pts[i], ann[j].T, F)
    return AP, pts


def _oracle_task(lo, hi, AP, add, mul, neg):
    return K.oracle_search(AP, add, mul, neg, lo, hi)


def linear_set_oracle(labels: Sequence[int], spread: Spread, workers: int = 1,
                      chunk: int | None = None) -> dict:
    """Search for a plane meeting the spread elements of all points.

    Exhaustive: such a plane meets the first element in a point v1 and the
    second in v2, and either <v1, v2> meets every element or the plane is
    <v1, v2, x> with x in the first element the line misses."""
    if spread.r != 2 or spread.t != 3:
        raise ValueError("oracle is for points of PG(1, q^3)")
    labels = sorted(int(x) for x in labels)
    if len(set(labels)) != len(labels) or len(labels) < 3:
        raise ValueError("need at least 3 distinct points")
    t0 = time.monotonic()
    AP, pts = _oracle_arrays(labels, spread)
    T = spread.sub.small_tables
    npts = AP.shape[2]
    chunk = chunk or max(1, npts // max(1, 4 * workers))
    tasks = [(lo, hi, AP, T.add, T.mul, T.neg) for lo, hi in chunk_ranges(npts, chunk)]
    res, _ = run_ordered(_oracle_task, tasks, workers, None, stop_when=lambda r: bool(r[0]))
    found = next((r for r in res if r[0]), None)
    out = {"covered": found is not None, "candidates": npts ** 3, "points": labels,
           "seconds": time.monotonic() - t0}
    if found is not None:
        _, a, b, j0, x, rank = (int(v) for v in found)
        rows = [pts[0][a], pts[1][b]] + ([pts[j0][x]] if rank == 3 else [])
        plane = ps.Subspace(spread.sub, spread.n, np.array(rows))
        got = {lab for lab, _ in spread.B_of(plane)}
        if not set(labels) <= got:
            raise AssertionError("oracle witness does not cover the points")
        out["plane"] = plane.basis.tolist()
        out["witness_rank"] = rank
    return out


def certify_points(labels, spread: Spread, method: str = "both", workers: int = 1,
                   budget: float | None = None) -> dict:
    S = hp_from_points(labels, spread)
    out: dict = {"points": sorted(int(x) for x in labels)}
    if method in ("solids", "both"):
        out["solids"] = strong_blocking_verify(S, workers=workers, budget=budget)
    if method in ("oracle", "both"):
        out["oracle"] = linear_set_oracle(labels, spread, workers=workers)
    if method == "both" and out["solids"].verdict != "inconclusive":
        out["agree"] = out["solids"].passed == (not out["oracle"]["covered"])
    return out


# -- the explicit constructions ------------------------------------------------

def _nonsquares(F: FiniteField) -> set[int]:
    sq = {F.mul(x, x) for x in range(1, F.order)}
    return set(range(1, F.order)) - sq


def least_cubic_lambda(F: FiniteField) -> int:
    """Least lambda with x^3 + lambda irreducible over F."""
    for lam in range(1, F.order):
        if all(F.add(F.pow(x, 3), lam) != 0 for x in range(F.order)):
            return lam
    raise FieldError("x^3 + lambda is reducible for every lambda (need q = 1 mod 3)")


def construction_tower(q: int, variant: str):
    from sympy import factorint
    (p, e), = factorint(q).items()
    F = make_field(p, e)
    if variant == "odd":
        if q % 2 == 0:
            raise ConstructionError("odd variant needs q odd")
        if q % 3 != 1:
            raise ConstructionError("odd variant needs q = 1 (mod 3)")
        lam = least_cubic_lambda(F)
        return make_tower(p, e, 3, omega_minpoly=[lam, 0, 0, 1]), (0, 0, lam)
    if variant == "even":
        if p != 2:
            raise ConstructionError("even variant needs q even")
        if e % 3 == 0:
            raise ConstructionError("x^3 + x + 1 is reducible over GF(2^e) when 3 | e")
        return make_tower(p, e, 3, omega_minpoly=[1, 1, 0, 1]), (0, 1, 1)
    raise ValueError("variant is odd or even")


def construction_points(variant: str, a: int, F: FiniteField) -> np.ndarray:
    if variant == "odd":
        na, oma, m1 = F.neg(a), F.sub(1, a), F.neg(1)
        pts = [[1, 0, na, 1], [1, 0, na, m1], [1, 1, oma, 1], [1, m1, oma, 1],
               [1, 1, oma, m1], [1, m1, oma, m1]]
    else:
        a2 = F.mul(a, a)
        pts = [[1, 0, a, 1], [1, 1, a, 1], [a, 0, 1, 1], [a, 1, 1, 1], [1, a, a2, 1], [a2, a, 1, 1]]
    return np.array(pts, dtype=np.int64)


def construction_quadric(variant: str, a: int, F: FiniteField) -> qd.QuadraticForm:
    """The elliptic quadric through the six points."""
    if variant == "odd":
        return qd.QuadraticForm.from_dict(F, 3, {(0, 2): 1, (1, 1): F.neg(1), (3, 3): a})
    return qd.QuadraticForm.from_dict(F, 3, {(0, 2): 1, (1, 1): 1, (1, 3): 1, (3, 3): a})


def check_parameter(variant: str, a: int, F: FiniteField) -> list[str]:
    """Reasons the parameter a is inadmissible (empty if admissible)."""
    bad = []
    if variant == "odd":
        if a not in _nonsquares(F):
            bad.append("a must be a non-square")
        if a == F.inv(F.add(1, 1)):
            bad.append("a must differ from 1/2")
    else:
        if F.trace(a) != 1:
            bad.append("Tr(a) must be 1")
        if a == 1:
            bad.append("a must differ from 1")
    return bad


def six_point_matrix(points, lams, F: FiniteField) -> tuple[np.ndarray, int]:
    """Rows: the linear form (d, e, f, u, v, w, t) -> Q(point) for each point."""
    pts = np.asarray(points, dtype=np.int64)
    A = np.array([qd.family_row(p, lams, F) for p in pts], dtype=np.int64)
    return A, ps.rank(A, F)


def six_point_preconditions(points, F: FiniteField, quadric: qd.QuadraticForm | None = None) -> dict:
    """Non-coplanar, affine and on an elliptic quadric with trace X0X2 - X1^2."""
    pts = np.asarray(points, dtype=np.int64)
    out = {"affine": bool(np.all(pts[:, 3] != 0)), "non_coplanar": ps.rank(pts, F) == 4}
    if not out["affine"]:
        out["ok"] = False
        return out
    pts = F.vmul(pts, F.vinv(pts[:, 3])[:, None])
    if quadric is None:
        # search X0X2 - X1^2 + X3 (u X0 + v X1 + w X2 + t X3)
        rows = [[F.mul(int(p[3]), int(p[i])) for i in range(4)] +
                [F.sub(F.mul(int(p[0]), int(p[2])), F.mul(int(p[1]), int(p[1])))] for p in pts]
        ns = ps.nullspace(np.array(rows, dtype=np.int64), F)
        sol = [v for v in ns if v[-1] != 0]
        if not sol:
            out["on_quadric"] = False
            return out
        v = F.vmul(sol[0], F.inv(int(sol[0][-1])))
        quadric = qd.QuadraticForm.from_dict(F, 3, {(0, 2): 1, (1, 1): F.neg(1), (0, 3): v[0], (1, 3): v[1],
                                                    (2, 3): v[2], (3, 3): v[3]})
    out["quadric"] = quadric
    out["on_quadric"] = bool(np.all(quadric.evaluate(pts) == 0))
    tr = quadric.restrict_last_zero()
    canon = qd.QuadraticForm.from_dict(F, 2, {(0, 2): 1, (1, 1): F.neg(1)})
    out["trace_is_canonical"] = tr.normalized().coeffs == canon.normalized().coeffs
    out["elliptic"] = qd.classify(quadric).kind == "elliptic"
    out["ok"] = out["affine"] and out["non_coplanar"] and out["on_quadric"] and \
        out["trace_is_canonical"] and out["elliptic"]
    return out


def alignment_matrix(spread: Spread) -> np.ndarray:
    """T over GF(q) with T u_i = (1, w^(q^i), w^(2 q^i)) for the eigenvectors u_i
    of the element of P_inf: T = W^T W, T[r, j] = Tr(w^(r + j))."""
    W = spread.W
    big = spread.big
    T = ps.matmul(W.T, W, big)
    if not np.all(spread.tower.in_subfield(T)):
        raise AssertionError("alignment matrix is not rational")
    return spread.tower.sub_of[T]


def lift_points(points, spread: Spread) -> list[int]:
    """Labels on l of the affine points (x0, x1, x2, 1) of Pi in the aligned frame."""
    F = spread.sub
    Tinv = ps.inverse_matrix(alignment_matrix(spread), F)
    L = ABBLine(spread)
    out = []
    for p in np.asarray(points, dtype=np.int64):
        if p[3] == 0:
            raise ValueError("point at infinity")
        p = F.vmul(p, F.inv(int(p[3])))
        vy = ps.matvec(Tinv, p[:3], F)
        out.append(int(L.label_of_y(int(spread.tower.recompose(vy)))))
    return out


@dataclass
class Construction:
    q: int
    variant: str
    a: int
    lams: tuple[int, int, int]
    points: np.ndarray
    matrix: np.ndarray
    rank: int
    preconditions: dict
    labels: list[int]
    planes: PlaneSet


def construct_optimal(q: int, variant: str, a: int) -> Construction:
    tower, lams = construction_tower(q, variant)
    F = tower.sub
    bad = check_parameter(variant, a, F)
    if bad:
        raise ConstructionError("; ".join(bad))
    pts = construction_points(variant, a, F)
    pre = six_point_preconditions(pts, F, construction_quadric(variant, a, F))
    if not pre["ok"]:
        raise ConstructionError(f"six points fail a precondition: {pre}")
    A, r = six_point_matrix(pts, lams, F)
    if r != 6:
        raise ConstructionError("matrix rank below 6")
    sp = make_spread(tower)
    labels = lift_points(pts, sp) + [PINF]
    S = hp_from_points(labels, sp, {"construction": f"cubic-{variant}", "a": int(a), "q": q})
    return Construction(q, variant, int(a), lams, pts, A, r, pre, labels, S)


def rank_locus(variant: str, q: int) -> dict[int, int]:
    """Rank of the six-point matrix for every a in GF(q)."""
    tower, lams = construction_tower(q, variant)
    F = tower.sub
    return {a: six_point_matrix(construction_points(variant, a, F), lams, F)[1] for a in range(F.order)}


def counting_existence(q: int) -> dict:
    def falling(x, k):
        return math.prod(x - i for i in range(k))
    c = falling(q * q, 6)
    d = falling(q * q + q, 6)
    S2 = 2 * (q ** 3 + q * q + q) * c + 2 * q ** 3 * (q * q + q + 1) * c + q ** 3 * (q ** 3 - 1) * d
    bound = falling(q ** 3, 6)
    # the last term of |S| carries a factor 1/2, so work with 2|S|
    return {"q": q, "c": c, "d": d, "S_times_2": S2, "bound": bound,
            "holds": S2 < 2 * bound, "in_proof_range": q >= 3}


# -- randomized search -----------------------------------------------------------

@dataclass
class SearchResult:
    found: bool
    restarts: int
    planes: PlaneSet | None
    certificate: HPCertificate | None
    seed: int
    mode: str


def random_planes(rng, n: int, k: int, m: int, F: FiniteField) -> list[ps.Subspace]:
    q = F.order
    out, keys = [], set()
    while len(out) < m:
        M = rng.integers(0, q, size=(k + 1, n + 1))
        if ps.rank(M, F) != k + 1:
            continue
        P = ps.Subspace(F, n, M)
        if P.key() in keys:
            continue
        keys.add(P.key())
        out.append(P)
    return out


def randomized_search(n: int, q: int, k: int, m: int, seed: int = 0, restarts: int = 1_000_000,
                      budget: float | None = None, mode: str = "arbitrary") -> SearchResult:
    """Seeded random restarts; the first set passing full verification wins."""
    from sympy import factorint
    (p, e), = factorint(q).items()
    F = make_field(p, e)
    rng = np.random.default_rng(seed)
    t0 = time.monotonic()
    if mode == "spread":
        if n != 5 or k != 2:
            raise ValueError("spread mode is for planes of PG(5, q)")
        sp = make_spread(q, 3)
    for it in range(1, restarts + 1):
        if budget is not None and time.monotonic() - t0 > budget:
            return SearchResult(False, it - 1, None, None, seed, mode)
        if mode == "spread":
            labels = rng.choice(sp.size, size=m, replace=False)
            S = hp_from_points(labels.tolist(), sp, {"search": {"seed": seed, "restart": it}})
        else:
            S = PlaneSet(F, n, random_planes(rng, n, k, m, F), {"search": {"seed": seed, "restart": it}})
        cert = strong_blocking_verify(S, chunk=10 ** 9)
        if cert.passed:
            return SearchResult(True, it, S, cert, seed, mode)
    return SearchResult(False, restarts, None, None, seed, mode)
