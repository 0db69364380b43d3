"""Points, subspaces and exact linear algebra of PG(n, q).

Vectors are numpy integer arrays of field codes.  Subspaces are stored by
their reduced row-echelon basis, so equality and hashing are structural.

Enumeration order for ``d``-subspaces of PG(n, q): pivot column sets in
``itertools.combinations`` order, then the free (non-pivot, right of the
row's pivot) entries read row-major as a big-endian base-q number.
"""

from __future__ import annotations

import itertools
from dataclasses import dataclass
from functools import lru_cache
from typing import Iterable, Iterator, Sequence

import numpy as np

from .gfield import SMALL_TABLE_LIMIT, FiniteField


class GeometryError(ValueError):
    pass


def theta(m: int, q: int) -> int:
    """(q^m - 1)/(q - 1), the number of points of PG(m-1, q)."""
    return (q ** m - 1) // (q - 1)


def gaussian_binomial(n: int, k: int, q: int) -> int:
    """Number of k-dimensional subspaces of GF(q)^n."""
    if k < 0 or k > n:
        return 0
    num, den = 1, 1
    for i in range(k):
        num *= q ** (n - i) - 1
        den *= q ** (i + 1) - 1
    return num // den


class _Op:
    def __init__(self, fn):
        self.fn = fn

    def __getitem__(self, key):
        return self.fn(*key) if isinstance(key, tuple) else self.fn(key)


class _VectorOps:
    """Table-like interface backed by vectorised field ops (large fields)."""

    def __init__(self, F: FiniteField):
        self.add = _Op(F.vadd)
        self.sub = _Op(F.vsub)
        self.mul = _Op(F.vmul)
        self.neg = _Op(F.vneg)
        self.inv = _Op(F.vinv)


_VOPS: dict = {}


def _tables(F: FiniteField):
    if F.order <= SMALL_TABLE_LIMIT:
        return F.small_tables
    if F not in _VOPS:
        _VOPS[F] = _VectorOps(F)
    return _VOPS[F]


# -- core linear algebra over small fields -----------------------------------

def rref(M, F: FiniteField) -> tuple[np.ndarray, list[int]]:
    """Reduced row-echelon form (zero rows dropped) and pivot columns."""
    T = _tables(F)
    A = np.array(M, dtype=np.int64, copy=True)
    if A.ndim == 1:
        A = A[None, :]
    rows, cols = A.shape
    pivots: list[int] = []
    r = 0
    for c in range(cols):
        if r == rows:
            break
        nz = np.nonzero(A[r:, c])[0]
        if len(nz) == 0:
            continue
        i = r + nz[0]
        if i != r:
            A[[r, i]] = A[[i, r]]
        A[r] = T.mul[T.inv[A[r, c]], A[r]]
        factors = A[:, c].copy()
        factors[r] = 0
        hit = np.nonzero(factors)[0]
        if len(hit):
            A[hit] = T.sub[A[hit], T.mul[factors[hit][:, None], A[r][None, :]]]
        pivots.append(c)
        r += 1
    return A[:r], pivots


def rank(M, F: FiniteField) -> int:
    M = np.asarray(M)
    if M.size == 0:
        return 0
    return len(rref(M, F)[1])


def nullspace(M, F: FiniteField) -> np.ndarray:
    """Basis (rows, in RREF) of {x : M x = 0}."""
    M = np.asarray(M, dtype=np.int64)
    if M.ndim == 1:
        M = M[None, :]
    ncols = M.shape[1]
    if M.shape[0] == 0:
        return np.eye(ncols, dtype=np.int64)
    T = _tables(F)
    R, piv = rref(M, F)
    free = [c for c in range(ncols) if c not in piv]
    out = np.zeros((len(free), ncols), dtype=np.int64)
    for i, f in enumerate(free):
        out[i, f] = 1
        for r, pc in enumerate(piv):
            out[i, pc] = T.neg[R[r, f]]
    if len(out):
        out, _ = rref(out, F)
    return out


def matmul(A, B, F: FiniteField) -> np.ndarray:
    """Matrix product over the field (tables; small operands)."""
    T = _tables(F)
    A = np.asarray(A, dtype=np.int64)
    B = np.asarray(B, dtype=np.int64)
    prod = T.mul[A[..., :, :, None], B[..., None, :, :]]
    return F.vsum(prod, axis=-2)


def matvec(A, v, F: FiniteField) -> np.ndarray:
    T = _tables(F)
    A = np.asarray(A, dtype=np.int64)
    v = np.asarray(v, dtype=np.int64)
    return F.vsum(T.mul[A, v[..., None, :]], axis=-1)


def dot(u, v, F: FiniteField):
    T = _tables(F)
    return F.vsum(T.mul[np.asarray(u, dtype=np.int64), np.asarray(v, dtype=np.int64)], axis=-1)


def inverse_matrix(A, F: FiniteField) -> np.ndarray:
    A = np.asarray(A, dtype=np.int64)
    n = A.shape[0]
    R, piv = rref(np.hstack([A, np.eye(n, dtype=np.int64)]), F)
    if piv[:n] != list(range(n)) or len(piv) < n or R.shape[0] < n:
        raise GeometryError("singular matrix")
    return R[:, n:]


def normalize(v, F: FiniteField) -> np.ndarray:
    """Scale so the first nonzero coordinate is 1 (works on stacks of rows)."""
    v = np.asarray(v, dtype=np.int64)
    T = _tables(F)
    flat = v.reshape(-1, v.shape[-1])
    nz = flat != 0
    if not np.all(nz.any(axis=1)):
        raise GeometryError("zero vector is not a projective point")
    lead = flat[np.arange(len(flat)), nz.argmax(axis=1)]
    return T.mul[T.inv[lead][:, None], flat].reshape(v.shape)


def point_code(v, q: int) -> np.ndarray | int:
    """Big-endian base-q integer of a coordinate vector (or stack)."""
    v = np.asarray(v, dtype=np.int64)
    w = q ** np.arange(v.shape[-1] - 1, -1, -1, dtype=np.int64)
    out = v @ w
    return int(out) if np.ndim(out) == 0 else out


def vectors_from_codes(codes, q: int, length: int) -> np.ndarray:
    codes = np.asarray(codes, dtype=np.int64)
    out = np.empty(codes.shape + (length,), dtype=np.int64)
    for i in range(length):
        out[..., i] = (codes // q ** (length - 1 - i)) % q
    return out


@lru_cache(maxsize=None)
def normalized_coefficients(m: int, q: int) -> np.ndarray:
    """All normalized nonzero vectors of GF(q)^m, in increasing code order."""
    if m == 0:
        return np.zeros((0, 0), dtype=np.int64)
    codes = np.arange(1, q ** m, dtype=np.int64)
    vecs = vectors_from_codes(codes, q, m)
    lead = vecs[np.arange(len(vecs)), (vecs != 0).argmax(axis=1)]
    out = vecs[lead == 1]
    out.setflags(write=False)
    return out


@lru_cache(maxsize=None)
def all_vectors(m: int, q: int) -> np.ndarray:
    out = vectors_from_codes(np.arange(q ** m, dtype=np.int64), q, m)
    out.setflags(write=False)
    return out


# -- value types ---------------------------------------------------------------

class ProjectivePoint:
    __slots__ = ("field", "coords")

    def __init__(self, field: FiniteField, coords: Sequence[int]):
        self.field = field
        self.coords = tuple(int(c) for c in normalize(np.asarray(coords, dtype=np.int64), field))

    @property
    def n(self) -> int:
        return len(self.coords) - 1

    def vector(self) -> np.ndarray:
        return np.array(self.coords, dtype=np.int64)

    def code(self) -> int:
        return point_code(self.coords, self.field.order)

    def __eq__(self, other):
        return isinstance(other, ProjectivePoint) and self.field == other.field and self.coords == other.coords

    def __hash__(self):
        return hash(self.coords)

    def __repr__(self):
        return f"Point{self.coords}"


class Subspace:
    """Projective subspace of PG(n, q) given by its RREF basis."""

    __slots__ = ("field", "n", "basis", "pivots", "_key")

    def __init__(self, field: FiniteField, n: int, rows, *, canonical: bool = False):
        self.field = field
        self.n = n
        rows = np.asarray(rows, dtype=np.int64).reshape(-1, n + 1)
        if canonical:
            R = rows
            piv = [int(np.nonzero(r)[0][0]) for r in R]
        elif len(rows):
            R, piv = rref(rows, field)
        else:
            R, piv = rows, []
        R = np.ascontiguousarray(R)
        R.setflags(write=False)
        self.basis = R
        self.pivots = tuple(piv)
        self._key = R.tobytes()

    @property
    def dim(self) -> int:
        return self.basis.shape[0] - 1

    proj_dim = dim

    @property
    def ambient_dim(self) -> int:
        return self.n

    def __eq__(self, other):
        return isinstance(other, Subspace) and self.n == other.n and self.dim == other.dim and self._key == other._key

    def __hash__(self):
        return hash((self.n, self.dim, self._key))

    def __repr__(self):
        return f"Subspace(dim={self.dim}, n={self.n}, basis={self.basis.tolist()})"

    def key(self) -> tuple:
        return tuple(map(tuple, self.basis.tolist()))

    def points(self) -> np.ndarray:
        """All normalized points, as an array (count, n+1), in code order."""
        k = self.basis.shape[0]
        if k == 0:
            return np.zeros((0, self.n + 1), dtype=np.int64)
        coeffs = normalized_coefficients(k, self.field.order)
        pts = matmul(coeffs, self.basis, self.field)
        # RREF basis and normalized coefficients give normalized points
        order = np.argsort(point_code(pts, self.field.order), kind="stable")
        return pts[order]

    def contains(self, P) -> bool:
        v = P.vector() if isinstance(P, ProjectivePoint) else np.asarray(P, dtype=np.int64)
        return rank(np.vstack([self.basis, v[None, :]]), self.field) == self.basis.shape[0]

    def dual(self) -> np.ndarray:
        """Rows spanning the annihilator (dual forms of hyperplanes through it)."""
        if self.basis.shape[0] == 0:
            return np.eye(self.n + 1, dtype=np.int64)
        return nullspace(self.basis, self.field)

    def to_json(self) -> list[list[int]]:
        return self.basis.tolist()


@dataclass(frozen=True)
class DualForm:
    field: FiniteField
    coeffs: tuple[int, ...]

    @classmethod
    def make(cls, field: FiniteField, coeffs) -> "DualForm":
        return cls(field, tuple(int(c) for c in normalize(coeffs, field)))

    def annihilates(self, P) -> bool:
        v = P.vector() if isinstance(P, ProjectivePoint) else P
        return int(dot(self.coeffs, v, self.field)) == 0

    def hyperplane(self, n: int) -> Subspace:
        return Subspace(self.field, n, nullspace(np.array([self.coeffs]), self.field))


def _rows_of(item, n: int | None):
    if isinstance(item, Subspace):
        return item.field, item.n, item.basis
    if isinstance(item, ProjectivePoint):
        return item.field, item.n, np.array([item.coords], dtype=np.int64)
    raise TypeError(f"cannot span {type(item).__name__}")


def span(items: Iterable, field: FiniteField | None = None, n: int | None = None) -> Subspace:
    rows, F, amb = [], field, n
    for it in items:
        f, m, b = _rows_of(it, n)
        if F is not None and f != F:
            raise GeometryError("field mismatch")
        if amb is not None and m != amb:
            raise GeometryError("dimension mismatch")
        F, amb = f, m
        rows.append(b)
    if F is None:
        raise GeometryError("span of nothing needs field and n")
    M = np.vstack(rows) if rows else np.zeros((0, amb + 1), dtype=np.int64)
    return Subspace(F, amb, M)


def meet(A: Subspace, B: Subspace) -> Subspace:
    if A.n != B.n or A.field != B.field:
        raise GeometryError("dimension/field mismatch")
    F = A.field
    dual = np.vstack([A.dual(), B.dual()])
    if len(dual) == 0:
        return A
    return Subspace(F, A.n, nullspace(dual, F))


def contains(A: Subspace, P) -> bool:
    return A.contains(P)


def rank_of_points(points, field: FiniteField) -> int:
    pts = [p.vector() if isinstance(p, ProjectivePoint) else np.asarray(p) for p in points]
    if not pts:
        return 0
    return rank(np.vstack(pts), field)


def project_from_point(P: ProjectivePoint, target: Subspace, X: ProjectivePoint) -> ProjectivePoint:
    """<P, X> intersected with ``target``."""
    if P == X:
        raise GeometryError("cannot project the centre from itself")
    if target.contains(P):
        raise GeometryError("centre lies in the target")
    M = meet(span([P, X]), target)
    if M.dim != 0:
        raise GeometryError("line does not meet the target in a single point")
    return ProjectivePoint(P.field, M.basis[0])


# -- enumeration ---------------------------------------------------------------

@dataclass(frozen=True)
class EnumPlan:
    """Index arithmetic for the deterministic enumeration of (k-1)-spaces."""

    n1: int  # vector dimension n+1
    k: int  # subspace vector dimension d+1
    q: int
    combos: np.ndarray  # (C, k) pivot columns
    offsets: np.ndarray  # (C+1,) cumulative counts
    free_rows: np.ndarray  # (C, maxfree) row of each free slot (-1 pad)
    free_cols: np.ndarray  # (C, maxfree)
    nfree: np.ndarray  # (C,)

    @property
    def total(self) -> int:
        return int(self.offsets[-1])


@lru_cache(maxsize=None)
def enum_plan(n: int, d: int, q: int) -> EnumPlan:
    n1, k = n + 1, d + 1
    if not 0 <= d <= n:
        raise GeometryError("need 0 <= d <= n")
    combos = list(itertools.combinations(range(n1), k))
    maxfree = k * (n1 - k)
    fr = np.full((len(combos), max(maxfree, 1)), -1, dtype=np.int64)
    fc = np.full((len(combos), max(maxfree, 1)), -1, dtype=np.int64)
    nf = np.zeros(len(combos), dtype=np.int64)
    offs = [0]
    for ci, c in enumerate(combos):
        slots = [(i, j) for i in range(k) for j in range(c[i] + 1, n1) if j not in c]
        nf[ci] = len(slots)
        for s, (i, j) in enumerate(slots):
            fr[ci, s] = i
            fc[ci, s] = j
        offs.append(offs[-1] + q ** len(slots))
    return EnumPlan(n1, k, q, np.array(combos, dtype=np.int64).reshape(len(combos), k),
                    np.array(offs, dtype=np.int64), fr, fc, nf)


def subspace_matrix_at(plan: EnumPlan, idx: int) -> np.ndarray:
    if not 0 <= idx < plan.total:
        raise IndexError(idx)
    ci = int(np.searchsorted(plan.offsets, idx, side="right") - 1)
    r = idx - int(plan.offsets[ci])
    M = np.zeros((plan.k, plan.n1), dtype=np.int64)
    for i, c in enumerate(plan.combos[ci]):
        M[i, c] = 1
    nf = int(plan.nfree[ci])
    for s in range(nf - 1, -1, -1):
        M[plan.free_rows[ci, s], plan.free_cols[ci, s]] = r % plan.q
        r //= plan.q
    return M


def subspace_index(S: Subspace) -> int:
    """Inverse of :func:`subspace_matrix_at`."""
    q = S.field.order
    plan = enum_plan(S.n, S.dim, q)
    combo = tuple(S.pivots)
    ci = list(map(tuple, plan.combos.tolist())).index(combo)
    r = 0
    for s in range(int(plan.nfree[ci])):
        r = r * q + int(S.basis[plan.free_rows[ci, s], plan.free_cols[ci, s]])
    return int(plan.offsets[ci]) + r


def enumerate_subspaces(n: int, d: int, field: FiniteField, start: int = 0,
                        stop: int | None = None) -> Iterator[Subspace]:
    """Each d-subspace of PG(n, q) exactly once, in the fixed order.

    ``start``/``stop`` select a contiguous index range, for partitioning."""
    plan = enum_plan(n, d, field.order)
    stop = plan.total if stop is None else min(stop, plan.total)
    for idx in range(start, stop):
        yield Subspace(field, n, subspace_matrix_at(plan, idx), canonical=True)


def enumerate_points(n: int, field: FiniteField) -> np.ndarray:
    """All points of PG(n, q) as normalized vectors, in code order."""
    return normalized_coefficients(n + 1, field.order).copy()


def count_subspaces(n: int, d: int, q: int) -> int:
    return gaussian_binomial(n + 1, d + 1, q)


def subspace_from_json(field: FiniteField, n: int, rows) -> Subspace:
    return Subspace(field, n, np.asarray(rows, dtype=np.int64))
