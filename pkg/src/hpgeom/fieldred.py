"""Field reduction, Desarguesian spreads and their transversal frames.

A point with coordinates (x_0, ..., x_{r-1}) over GF(q^t) becomes the
(t-1)-space of PG(rt-1, q) spanned by the block vectors
(vec(l x_0), ..., vec(l x_{r-1})), l in GF(q^t)*, where vec is taken with
respect to the basis 1, w, ..., w^(t-1).

Points of PG(r-1, q^t) are labelled by their index in the code-sorted list
of normalized vectors.  For r = 2 this gives (0:1) -> 0 and (1:m) -> 1 + m.
"""

from __future__ import annotations

from dataclasses import dataclass
from functools import cached_property
from typing import Sequence

import numpy as np

from . import projspace as ps
from .gfield import Tower, make_tower


@dataclass(frozen=True)
class SpreadElement:
    label: int
    coords: tuple[int, ...]  # normalized, big-field codes
    body: ps.Subspace


@dataclass(frozen=True)
class TransversalFrame:
    element: SpreadElement
    vectors: np.ndarray  # (t, r t) big-field codes, unnormalized: x^(q^i) u_i
    conj_points: np.ndarray  # normalized versions of ``vectors``


class Spread:
    """The Desarguesian (t-1)-spread of PG(rt-1, q) for a tower."""

    def __init__(self, tower: Tower, r: int = 2):
        self.tower = tower
        self.r = r
        self.q = tower.q
        self.t = tower.t
        self.n = r * tower.t - 1
        self.sub = tower.sub
        self.big = tower.big
        self.size = ps.theta(r, tower.Q)

    # labels <-> coordinates
    def coords_of(self, label: int) -> tuple[int, ...]:
        Q, r = self.tower.Q, self.r
        if not 0 <= label < self.size:
            raise IndexError(label)
        for j in range(r - 1, -1, -1):
            block = ps.theta(r - 1 - j + 1, Q)
            start = ps.theta(r - 1 - j, Q)
            if label < block:
                rest = label - start
                tail = [(rest // Q ** (r - 2 - j - i)) % Q for i in range(r - 1 - j)]
                return tuple([0] * j + [1] + tail)
        raise AssertionError

    def label_of(self, coords: Sequence[int]) -> int:
        big = self.big
        c = [int(x) for x in coords]
        j = next(i for i, x in enumerate(c) if x)
        inv = big.inv(c[j])
        tail = [big.mul(inv, x) for x in c[j + 1:]]
        code = 0
        for x in tail:
            code = code * self.tower.Q + x
        return ps.theta(self.r - 1 - j, self.tower.Q) + code

    def vector_of(self, bigcoords: Sequence[int]) -> np.ndarray:
        """GF(q)-vector (length r t) of a GF(q^t)-vector (length r)."""
        return np.concatenate([self.tower.vec(int(x)) for x in bigcoords])

    def bigcoords_of(self, v) -> np.ndarray:
        v = np.asarray(v, dtype=np.int64)
        t = self.t
        return np.array([self.tower.recompose(v[..., i * t:(i + 1) * t]) for i in range(self.r)]).T

    # elements
    def body_rows(self, coords: Sequence[int]) -> np.ndarray:
        rows = []
        for j in range(self.t):
            wj = int(self.tower.basis[j])
            rows.append(self.vector_of([self.big.mul(wj, int(x)) for x in coords]))
        return np.array(rows, dtype=np.int64)

    def element(self, label: int) -> SpreadElement:
        coords = self.coords_of(label)
        body = ps.Subspace(self.sub, self.n, self.body_rows(coords))
        return SpreadElement(label, coords, body)

    def elements(self) -> list[SpreadElement]:
        return [self.element(i) for i in range(self.size)]

    @cached_property
    def lookup_table(self) -> np.ndarray:
        """Label of every nonzero GF(q)-vector code (-1 at the zero vector)."""
        q, t, r = self.q, self.t, self.r
        Q = self.tower.Q
        codes = np.arange(q ** (r * t), dtype=np.int64)
        blocks = [(codes // q ** ((r - 1 - i) * t)) % q ** t for i in range(r)]
        xs = [self.tower.code_of_vecidx[b] for b in blocks]
        big = self.big
        label = np.full(codes.shape, -1, dtype=np.int64)
        done = np.zeros(codes.shape, dtype=bool)
        for j in range(r):
            here = (~done) & (xs[j] != 0)
            if not here.any():
                continue
            inv = big.vinv(xs[j][here])
            code = np.zeros(int(here.sum()), dtype=np.int64)
            for i in range(j + 1, r):
                code = code * Q + big.vmul(inv, xs[i][here])
            label[here] = ps.theta(r - 1 - j, Q) + code
            done |= here
        return label.astype(np.int32)

    def lookup(self, X) -> int:
        """Label of the spread element containing the point X."""
        return int(self.lookup_table[ps.point_code(np.asarray(X), self.q)])

    def labels_of_points(self, pts) -> np.ndarray:
        return self.lookup_table[ps.point_code(np.asarray(pts), self.q)].astype(np.int64)

    def B_of(self, pi: ps.Subspace) -> list[tuple[int, int]]:
        """Spread elements meeting ``pi`` with weights, sorted by label."""
        labels = self.labels_of_points(pi.points())
        uniq, counts = np.unique(labels, return_counts=True)
        out = []
        for lab, c in zip(uniq.tolist(), counts.tolist()):
            out.append((lab, weight_of_count(c, self.q)))
        return out

    # frames
    @cached_property
    def W(self) -> np.ndarray:
        """W[i, j] = w^(j q^i); W vec(y) = (y, y^q, ..., y^(q^(t-1)))."""
        tw = self.tower
        return np.array([[int(tw.frob(int(tw.basis[j]), i)) for j in range(self.t)] for i in range(self.t)],
                        dtype=np.int64)

    @cached_property
    def W_inv(self) -> np.ndarray:
        return ps.inverse_matrix(self.W, self.big)

    @cached_property
    def mult_matrix(self) -> np.ndarray:
        """Matrix over GF(q) (subfield codes) of y -> w y: vec(w y) = M vec(y)."""
        tw = self.tower
        cols = [tw.vec(self.big.mul(tw.omega, int(b))) for b in tw.basis]
        return np.array(cols, dtype=np.int64).T

    def eigenvectors(self) -> np.ndarray:
        """Rows u_i (big-field codes) with M u_i = w^(q^i) u_i."""
        return self.W_inv.T.copy()

    def transversal_frame(self, label: int) -> TransversalFrame:
        tw = self.tower
        big = self.big
        coords = self.coords_of(label)
        U = self.eigenvectors()
        vecs = []
        for i in range(self.t):
            parts = [big.vmul(int(tw.frob(int(x), i)), U[i]) for x in coords]
            vecs.append(np.concatenate(parts))
        vecs = np.array(vecs, dtype=np.int64)
        return TransversalFrame(self.element(label), vecs, ps.normalize(vecs, big))

    # chart on one element
    def y_of_body_point(self, label: int, X) -> int:
        """The y in GF(q^t)* with X = vec(y * coords(label))."""
        coords = self.coords_of(label)
        j = next(i for i, x in enumerate(coords) if x)
        X = np.asarray(X, dtype=np.int64)
        yx = self.tower.recompose(X[j * self.t:(j + 1) * self.t])
        return self.big.div(int(yx), int(coords[j]))

    def chart(self, y) -> np.ndarray:
        """Frame coordinates (y, y^q, ..., y^(q^(t-1))) of the body point y."""
        return np.stack([self.tower.frob(y, i) for i in range(self.t)], axis=-1)


def weight_of_count(count: int, q: int) -> int:
    w, size = 0, 0
    while size < count:
        w += 1
        size = ps.theta(w, q)
    if size != count:
        raise ValueError(f"{count} points is not a subspace of PG(*, {q})")
    return w


_SPREADS: dict = {}


def make_spread(q: int | Tower, t: int | None = None, r: int = 2) -> Spread:
    if isinstance(q, Tower):
        tower = q
    else:
        from sympy import factorint
        (p, e), = factorint(q).items()
        tower = make_tower(p, e, t)
    key = (id(tower), r)
    if key not in _SPREADS:
        _SPREADS[key] = Spread(tower, r)
    return _SPREADS[key]


def field_reduce_point(P: Sequence[int], tower: Tower) -> ps.Subspace:
    sp = make_spread(tower, r=len(P))
    return ps.Subspace(tower.sub, sp.n, sp.body_rows(P))


def field_reduce_subspace(rows, tower: Tower) -> ps.Subspace:
    """F of the subspace spanned by ``rows`` (big-field codes)."""
    rows = np.atleast_2d(np.asarray(rows, dtype=np.int64))
    sp = make_spread(tower, r=rows.shape[1])
    return ps.Subspace(tower.sub, sp.n, np.vstack([sp.body_rows(r) for r in rows]))


def spread_lookup(X, spread: Spread) -> SpreadElement:
    return spread.element(spread.lookup(X))


def B_of(pi: ps.Subspace, spread: Spread) -> list[tuple[int, int]]:
    return spread.B_of(pi)


def transversal_frame(label: int, spread: Spread) -> TransversalFrame:
    return spread.transversal_frame(label)


def subgeometry_chart(label: int, spread: Spread) -> dict[int, np.ndarray]:
    """Map each point code of the element's body to its frame coordinates."""
    E = spread.element(label)
    out = {}
    for X in E.body.points():
        y = spread.y_of_body_point(label, X)
        out[ps.point_code(X, spread.q)] = spread.chart(y)
    return out


def ds_class(y, tower: Tower, s: int):
    """Index of the D_s class of y: x ~ y iff x/y in GF(q^s)."""
    if tower.t % s:
        raise ValueError("s must divide t")
    m = (tower.Q - 1) // (tower.q ** s - 1)
    return tower.big.log[np.asarray(y, dtype=np.int64)] % m
