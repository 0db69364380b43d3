"""Quadratic forms in three or four projective variables over GF(q).

A form is stored by its upper-triangular coefficients c[i, j] (i <= j) of
sum c_ij X_i X_j; nothing divides by 2, so odd and even q share one code
path.  Classification is by point and line census.
"""

from __future__ import annotations

from dataclasses import dataclass
from functools import lru_cache

import numpy as np

from . import projspace as ps
from .gfield import FiniteField

KINDS = ("hyperbolic", "elliptic", "cone", "pair-of-planes", "repeated-plane",
         "nondegenerate-conic", "degenerate-conic", "other")


def monomials(n: int) -> list[tuple[int, int]]:
    return [(i, j) for i in range(n + 1) for j in range(i, n + 1)]


@dataclass(frozen=True)
class QuadraticForm:
    field: FiniteField
    n: int
    coeffs: tuple[int, ...]  # one per monomial, in ``monomials(n)`` order

    @classmethod
    def from_dict(cls, field: FiniteField, n: int, terms: dict) -> "QuadraticForm":
        mons = monomials(n)
        c = [0] * len(mons)
        for (i, j), v in terms.items():
            i, j = min(i, j), max(i, j)
            k = mons.index((i, j))
            c[k] = field.add(c[k], int(v) % field.order if field.e == 1 else int(v))
        return cls(field, n, tuple(c))

    def matrix(self) -> np.ndarray:
        M = np.zeros((self.n + 1, self.n + 1), dtype=np.int64)
        for (i, j), c in zip(monomials(self.n), self.coeffs):
            M[i, j] = c
        return M

    def is_zero(self) -> bool:
        return not any(self.coeffs)

    def normalized(self) -> "QuadraticForm":
        return QuadraticForm(self.field, self.n, tuple(int(x) for x in ps.normalize(self.coeffs, self.field)))

    def evaluate(self, pts) -> np.ndarray:
        return evaluate(self.coeffs, pts, self.field, self.n)

    def restrict_last_zero(self) -> "QuadraticForm":
        """Restriction to the hyperplane X_n = 0."""
        mons = monomials(self.n)
        sub = monomials(self.n - 1)
        return QuadraticForm(self.field, self.n - 1, tuple(self.coeffs[mons.index(m)] for m in sub))

    def __repr__(self):
        terms = [f"{c}*X{i}X{j}" for (i, j), c in zip(monomials(self.n), self.coeffs) if c]
        return "Q(" + " + ".join(terms) + ")"


def monomial_values(pts, field, n: int) -> np.ndarray:
    """(count, nmon) values X_i X_j at the given points (any field)."""
    pts = np.atleast_2d(np.asarray(pts, dtype=np.int64))
    return np.stack([field.vmul(pts[:, i], pts[:, j]) for i, j in monomials(n)], axis=1)


def evaluate(coeffs, pts, field, n: int, coeff_map=None) -> np.ndarray:
    """Form values at points.  ``coeff_map`` embeds coefficients into a
    larger field when ``pts`` live in an extension."""
    c = np.asarray(coeffs, dtype=np.int64)
    if coeff_map is not None:
        c = coeff_map[c]
    mv = monomial_values(pts, field, n)
    return field.vsum(field.vmul(mv, c[None, :]), axis=-1)


@lru_cache(maxsize=None)
def _incidence(n: int, q: int, field_key) -> tuple[np.ndarray, np.ndarray, np.ndarray]:
    field = _FIELDS[field_key]
    pts = ps.enumerate_points(n, field)
    index = {int(c): i for i, c in enumerate(ps.point_code(pts, q))}
    lines = []
    for L in ps.enumerate_subspaces(n, 1, field):
        lines.append([index[int(c)] for c in ps.point_code(L.points(), q)])
    lines = np.array(lines, dtype=np.int64)
    mv = monomial_values(pts, field, n)
    return pts, lines, mv


_FIELDS: dict = {}


def incidence(n: int, field: FiniteField):
    key = (field.p, field.modulus)
    _FIELDS[key] = field
    return _incidence(n, field.order, key)


def zero_set(f: QuadraticForm) -> np.ndarray:
    if f.is_zero():
        raise ValueError("zero form")
    pts, _, mv = incidence(f.n, f.field)
    vals = f.field.vsum(f.field.vmul(mv, np.asarray(f.coeffs)[None, :]), axis=-1)
    return pts[vals == 0]


def _census_batch(coeffs: np.ndarray, n: int, field: FiniteField) -> tuple[np.ndarray, np.ndarray]:
    pts, lines, mv = incidence(n, field)
    T = field.small_tables
    out_p = np.empty(len(coeffs), dtype=np.int64)
    out_l = np.empty(len(coeffs), dtype=np.int64)
    step = max(1, 4_000_000 // (mv.size + 1))
    for s in range(0, len(coeffs), step):
        c = coeffs[s:s + step]
        vals = field.vsum(T.mul[c[:, None, :], mv[None, :, :]], axis=-1)
        zero = vals == 0
        out_p[s:s + step] = zero.sum(axis=1)
        out_l[s:s + step] = np.all(zero[:, lines], axis=2).sum(axis=1)
    return out_p, out_l


def _kind(n: int, q: int, npts: int, nlines: int) -> str:
    if n == 2:
        if npts == q + 1 and nlines == 0:
            return "nondegenerate-conic"
        return "degenerate-conic"
    if n == 3:
        if npts == (q + 1) ** 2 and nlines == 2 * (q + 1):
            return "hyperbolic"
        if npts == q * q + 1 and nlines == 0:
            return "elliptic"
        if npts == q * q + q + 1 and nlines == q + 1:
            return "cone"
        if npts == q * q + q + 1 and nlines == q * q + q + 1:
            return "repeated-plane"
        if npts == 2 * q * q + q + 1:
            return "pair-of-planes"
        return "other"
    raise ValueError("only n in {2, 3}")


@dataclass(frozen=True)
class QuadricClass:
    kind: str
    point_count: int
    line_count: int


def classify(f: QuadraticForm) -> QuadricClass:
    if f.is_zero():
        raise ValueError("zero form")
    p, l = _census_batch(np.array([f.coeffs], dtype=np.int64), f.n, f.field)
    return QuadricClass(_kind(f.n, f.field.order, int(p[0]), int(l[0])), int(p[0]), int(l[0]))


def classify_batch(coeffs, n: int, field: FiniteField) -> list[str]:
    p, l = _census_batch(np.asarray(coeffs, dtype=np.int64), n, field)
    return [_kind(n, field.order, int(a), int(b)) for a, b in zip(p, l)]


def fit_quadrics_through(points, n: int, field: FiniteField) -> np.ndarray:
    """Basis (rows, RREF) of all coefficient vectors vanishing on ``points``."""
    nmon = len(monomials(n))
    pts = np.asarray(points, dtype=np.int64).reshape(-1, n + 1)
    if len(pts) == 0:
        return np.eye(nmon, dtype=np.int64)
    return ps.nullspace(monomial_values(pts, field, n), field)


def coords_in_span(points, field: FiniteField) -> tuple[np.ndarray, np.ndarray]:
    """RREF basis of the span and the coordinates of each point in it."""
    pts = np.atleast_2d(np.asarray(points, dtype=np.int64))
    B, piv = ps.rref(pts, field)
    return B, pts[:, piv]


def conic_through_points(points, plane: ps.Subspace | None, field: FiniteField) -> bool:
    """Whether the points lie on a unique conic of their plane, nondegenerate."""
    _, coords = coords_in_span(points, field)
    if coords.shape[1] != 3:
        return False
    sol = fit_quadrics_through(coords, 2, field)
    if len(sol) != 1:
        return False
    return classify(QuadraticForm(field, 2, tuple(int(x) for x in sol[0]))).kind == "nondegenerate-conic"


# -- the special families ------------------------------------------------------

def conic_family_g(d: int, e: int, f: int, lams: tuple[int, int, int], field: FiniteField) -> QuadraticForm:
    """The conic through (1, w, w^2) and its conjugates, w^3 + l1 w^2 + l2 w + l3 = 0."""
    l1, l2, l3 = lams
    F = field
    a = F.sub(F.mul(l3, e), F.mul(F.mul(l1, l3), f))
    b = F.add(F.mul(l2, e), F.mul(F.sub(l3, F.mul(l1, l2)), f))
    c = F.sub(F.add(F.mul(l1, e), F.mul(F.sub(l2, F.mul(l1, l1)), f)), d)
    return QuadraticForm.from_dict(F, 2, {(0, 0): a, (0, 1): b, (0, 2): c, (1, 1): d, (1, 2): e, (2, 2): f})


def quadric_family_Q(d, e, f, u, v, w, t, lams, field: FiniteField) -> QuadraticForm:
    """g_{d,e,f}(X0, X1, X2) + X3 (u X0 + v X1 + w X2 + t X3)."""
    g = conic_family_g(d, e, f, lams, field)
    terms = {m: c for m, c in zip(monomials(2), g.coeffs)}
    terms.update({(0, 3): u, (1, 3): v, (2, 3): w, (3, 3): t})
    return QuadraticForm.from_dict(field, 3, terms)


def family_row(point, lams, field: FiniteField) -> np.ndarray:
    """Coefficients of (d, e, f, u, v, w, t) in Q(...)(point), a linear form."""
    cols = []
    basis = np.eye(7, dtype=np.int64)
    for k in range(7):
        Q = quadric_family_Q(*[int(x) for x in basis[k]], lams, field)
        cols.append(int(Q.evaluate(point)[0]))
    return np.array(cols, dtype=np.int64)


def lambdas_of(minpoly: list[int]) -> tuple[int, int, int]:
    """(l1, l2, l3) from ascending minimal polynomial coefficients of w."""
    if len(minpoly) != 4 or minpoly[3] != 1:
        raise ValueError("expected a monic cubic")
    return minpoly[2], minpoly[1], minpoly[0]


def conjugate_conic_test(f: QuadraticForm, frame, tower) -> bool:
    """Whether the extension of the conic f passes through the conjugate
    points of a transversal frame (or through one given big-field point).

    One point suffices: f has subfield coefficients, so Frobenius carries
    a zero of f to the next conjugate."""
    if hasattr(frame, "vectors"):
        point = frame.vectors[0][:f.n + 1]
    else:
        point = np.asarray(frame, dtype=np.int64)
    return int(evaluate(f.coeffs, point, tower.big, f.n, coeff_map=tower.emb)[0]) == 0


def conics_through_conjugate(point, big: FiniteField, tower) -> np.ndarray:
    """Basis of conics of PG(2, q) whose extension contains ``point``."""
    mv = monomial_values(point, big, 2)[0]  # big-field values of the 6 monomials
    rows = tower.vec(mv).T  # t equations over GF(q)
    return ps.nullspace(rows, tower.sub)


def gq_criterion(U, field: FiniteField) -> dict:
    """Test the three line-census hypotheses on an affine set of points
    of PG(3, q) (last coordinate 1) and, if they hold, identify the set as
    the affine part of a hyperbolic quadric with nondegenerate trace."""
    q = field.order
    pts, lines, _ = incidence(3, field)
    U = np.atleast_2d(np.asarray(U, dtype=np.int64))
    out = {"size_ok": len(U) == q * q + q}
    codes = ps.point_code(ps.normalize(U, field), q)
    allcodes = ps.point_code(pts, q)
    member = np.isin(allcodes, codes)
    affine = pts[:, 3] != 0
    line_aff = affine[lines]
    cnt = (member[lines] & line_aff).sum(axis=1)
    naff = line_aff.sum(axis=1)
    is_affine_line = naff == q
    bad = is_affine_line & ~np.isin(cnt, [0, 1, 2, q])
    out["lines_ok"] = not bad.any()
    if bad.any():
        out["witness_line"] = pts[lines[np.argmax(bad)]].tolist()
    full = is_affine_line & (cnt == q)
    through = np.zeros(len(pts), dtype=np.int64)
    np.add.at(through, lines[full].ravel(), 1)
    uidx = np.nonzero(member)[0]
    two = through[uidx] == 2
    out["two_lines_ok"] = bool(np.all(two))
    if not np.all(two):
        out["witness_point"] = pts[uidx[np.argmin(two)]].tolist()
    out["hypotheses"] = out["size_ok"] and out["lines_ok"] and out["two_lines_ok"]
    out["q_banner"] = q >= 5
    if out["hypotheses"]:
        sol = fit_quadrics_through(U, 3, field)
        out["fit_dim"] = len(sol)
        if len(sol) == 1:
            Q = QuadraticForm(field, 3, tuple(int(x) for x in sol[0]))
            out["quadric"] = Q
            out["kind"] = classify(Q).kind
            trace = Q.restrict_last_zero()
            out["trace_kind"] = classify(trace).kind if not trace.is_zero() else "zero"
        out["pass"] = out.get("kind") == "hyperbolic" and out.get("trace_kind") == "nondegenerate-conic"
    else:
        out["pass"] = False
    return out


def count_special_hyperbolics(spread, return_forms: bool = False):
    """Hyperbolic quadrics of the solid (vec y, c) whose c = 0 trace is a
    nondegenerate conic through the conjugate points of that plane.

    Works in the native frame of the spread element of P_inf."""
    tower = spread.tower
    F = tower.sub
    q = F.order
    frame = spread.transversal_frame(1)
    u0 = frame.vectors[0][:tower.t]
    basis = conics_through_conjugate(u0[None, :], spread.big, tower)
    combos = ps.normalized_coefficients(len(basis), q)
    conics = ps.matmul(combos, basis, F)
    kinds = classify_batch(conics, 2, F)
    lin = ps.all_vectors(4, q)  # (u, v, w, t) coefficients of X3 * (...)
    mons3 = monomials(3)
    pos = [mons3.index(m) for m in monomials(2)]
    tail = [mons3.index(m) for m in [(0, 3), (1, 3), (2, 3), (3, 3)]]
    total = 0
    forms = []
    for g, kind in zip(conics, kinds):
        if kind != "nondegenerate-conic":
            continue
        Qs = np.zeros((len(lin), 10), dtype=np.int64)
        Qs[:, pos] = g[None, :]
        Qs[:, tail] = lin
        ks = classify_batch(Qs, 3, F)
        hyp = np.array([k == "hyperbolic" for k in ks])
        total += int(hyp.sum())
        if return_forms:
            forms.append(Qs[hyp])
    res = {"count": total, "family_dim": len(basis), "conics": len(conics),
           "nondegenerate_conics": sum(k == "nondegenerate-conic" for k in kinds)}
    if return_forms:
        res["forms"] = np.vstack(forms) if forms else np.zeros((0, 10), dtype=np.int64)
    return res
