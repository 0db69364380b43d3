"""The design H on PG(t-1, q) whose blocks are subgeometry traces of
normal rational curves through conjugate frame points.

Coordinates follow the cyclic model: the subgeometry is the fixed set of
sigma: (x_0, ..., x_{t-1}) -> (x_{t-1}^q, x_0^q, ..., x_{t-2}^q) inside
PG(t-1, q^t), and P_x = (1/x, 1/x^q, ..., 1/x^(q^(t-1))).

H-points are classes of GF(q^t)* modulo GF(q)*, indexed by log(x) mod
(q^t - 1)/(q - 1).  The block through P_a, P_b is {P_(au - bv)}.
"""

from __future__ import annotations

import itertools
from dataclasses import dataclass
from functools import cached_property

import numpy as np

from . import projspace as ps
from .gfield import Tower, make_tower


@dataclass(frozen=True)
class HBlock:
    points: frozenset[int]
    s: int


@dataclass
class ExtendedNRC:
    a: int
    b: int
    s: int
    frame: np.ndarray  # (s, t) big-field codes, w_0 .. w_{s-1}

    @property
    def degree(self) -> int:
        return self.s - 1


class HDesign:
    def __init__(self, tower: Tower):
        self.tower = tower
        self.big = tower.big
        self.q = tower.q
        self.t = tower.t
        self.theta = (tower.Q - 1) // (tower.q - 1)
        self._pg1q = ps.normalized_coefficients(2, tower.q)

    # labels
    def hpoint(self, x) -> np.ndarray | int:
        """Class index of x in GF(q^t)*."""
        x = np.asarray(x, dtype=np.int64)
        if np.any(x == 0):
            raise ValueError("0 is not an H-point label")
        out = self.big.log[x] % self.theta
        return int(out) if out.ndim == 0 else out

    def representative(self, h: int) -> int:
        """Least field code in the class of index h."""
        logs = h + self.theta * np.arange(self.q - 1)
        return int(self.big.exp[logs].min())

    def element(self, h: int) -> int:
        """The element g^h of the class (canonical for computation)."""
        return int(self.big.exp[h])

    def s_of(self, a: int, b: int) -> int:
        r = self.big.div(a, b)
        for s in range(1, self.t + 1):
            if self.t % s == 0 and int(self.tower.frob(r, s)) == r:
                return s
        raise AssertionError

    # blocks
    def block_elements(self, a: int, b: int) -> np.ndarray:
        """au - bv for (u:v) in PG(1, q), as field codes."""
        emb = self.tower.emb
        u = emb[self._pg1q[:, 0]]
        v = emb[self._pg1q[:, 1]]
        return self.big.vsub(self.big.vmul(a, u), self.big.vmul(b, v))

    def h_block(self, a: int, b: int) -> HBlock:
        if a == 0 or b == 0 or self.hpoint(a) == self.hpoint(b):
            raise ValueError("h_block needs two distinct H-points")
        pts = frozenset(self.hpoint(self.block_elements(a, b)).tolist())
        return HBlock(pts, self.s_of(a, b))

    @cached_property
    def blockid(self) -> np.ndarray:
        """blockid[i, j] for distinct class indices (-1 on the diagonal)."""
        th = self.theta
        bid = np.full((th, th), -1, dtype=np.int64)
        blocks: list[HBlock] = []
        for i in range(th):
            for j in range(i + 1, th):
                if bid[i, j] >= 0:
                    continue
                B = self.h_block(self.element(i), self.element(j))
                pts = sorted(B.points)
                idx = len(blocks)
                blocks.append(B)
                for x in pts:
                    for y in pts:
                        if x != y:
                            if bid[x, y] >= 0 and bid[x, y] != idx:
                                raise AssertionError("two blocks through a pair")
                            bid[x, y] = idx
        self._blocks = blocks
        return bid

    @property
    def blocks(self) -> list[HBlock]:
        self.blockid
        return self._blocks

    @cached_property
    def meets(self) -> np.ndarray:
        nb = len(self.blocks)
        inc = np.zeros((nb, self.theta), dtype=np.int64)
        for i, B in enumerate(self.blocks):
            inc[i, list(B.points)] = 1
        return (inc @ inc.T) > 0

    # subspaces
    def h_closure(self, seed) -> frozenset[int]:
        S = set(int(x) for x in seed)
        if not S:
            raise ValueError("empty seed")
        bid = self.blockid
        blocks = self.blocks
        while True:
            cur = sorted(S)
            new = set()
            for x in cur:
                for y in cur:
                    if x < y:
                        new |= blocks[bid[x, y]].points
            if new <= S:
                return frozenset(S)
            S |= new

    def is_h_subspace(self, S) -> bool:
        S = frozenset(int(x) for x in S)
        return bool(S) and self.h_closure(S) == S

    def h_dim(self, S) -> int:
        S = frozenset(int(x) for x in S)
        if not self.is_h_subspace(S):
            raise ValueError("not an H-subspace")
        for m in range(self.t):
            if ps.theta(m + 1, self.q) == len(S):
                return m
        raise ValueError("closed set of non-projective size")

    # the curves of the cyclic model
    def frame_vectors(self, a: int, s: int) -> np.ndarray:
        """w_0, ..., w_{s-1}: w_i = a^(q^i) * sum_j e_{i+js} / a^(q^(i+js))."""
        big = self.big
        out = np.zeros((s, self.t), dtype=np.int64)
        for i in range(s):
            ai = int(self.tower.frob(a, i))
            for j in range(self.t // s):
                pos = i + j * s
                out[i, pos] = big.mul(ai, big.inv(int(self.tower.frob(a, pos))))
        return out

    def extended_nrc(self, a: int, b: int) -> ExtendedNRC:
        s = self.s_of(a, b)
        if s == 1:
            raise ValueError("a/b in GF(q): same point")
        return ExtendedNRC(a, b, s, self.frame_vectors(a, s))

    def curve_points(self, C: ExtendedNRC, u, v) -> np.ndarray:
        """Coordinate vectors K^{a,b}_{u,v} (vectorised in u, v)."""
        big = self.big
        u = np.atleast_1d(np.asarray(u, dtype=np.int64))
        v = np.atleast_1d(np.asarray(v, dtype=np.int64))
        lin = [big.vsub(big.vmul(int(self.tower.frob(C.a, j)), u), big.vmul(int(self.tower.frob(C.b, j)), v))
               for j in range(C.s)]
        out = np.zeros(u.shape + (self.t,), dtype=np.int64)
        for i in range(C.s):
            coef = np.ones(u.shape, dtype=np.int64)
            for j in range(C.s):
                if j != i:
                    coef = big.vmul(coef, lin[j])
            out = big.vadd(out, big.vmul(coef[:, None], C.frame[i][None, :]))
        return out

    def P(self, x) -> np.ndarray:
        """Coordinates of P_x."""
        inv = self.big.vinv(np.asarray(x, dtype=np.int64))
        return np.stack([self.tower.frob(inv, i) for i in range(self.t)], axis=-1)

    def sigma(self, z) -> np.ndarray:
        z = np.asarray(z, dtype=np.int64)
        return self.tower.frob(np.roll(z, 1, axis=-1), 1)

    def in_subgeometry(self, z) -> np.ndarray:
        """Whether <z> is fixed by sigma (vectorised over rows)."""
        z = np.atleast_2d(np.asarray(z, dtype=np.int64))
        nz = ps.normalize(z, self.big)
        return np.all(ps.normalize(self.sigma(nz), self.big) == nz, axis=1)

    def subgeometry_label(self, z) -> np.ndarray:
        """For <z> = P_x in the subgeometry, the class index of x."""
        z = np.atleast_2d(np.asarray(z, dtype=np.int64))
        j = (z != 0).argmax(axis=1)
        first = z[np.arange(len(z)), j]
        # z = c (y, y^q, ...) with y = 1/x;  z_j / z_0 = y^(q^j - 1); use j = 0 when possible
        if np.any(j != 0):
            raise ValueError("subgeometry points have all coordinates nonzero")
        # y^(q-1) = z_1/z_0 determines y modulo GF(q)*
        r = self.big.vmul(z[:, 1], self.big.vinv(first)) if self.t > 1 else np.ones(len(z), dtype=np.int64)
        lr = self.big.log[r]
        # log y * (q-1) = lr mod (Q-1)  => log y = lr/(q-1) mod theta
        ly = (lr // (self.q - 1)) % self.theta
        return (-ly) % self.theta


def verify_curve_identities(design: HDesign, a: int, b: int) -> dict:
    """Check the identities of the extended curve through P_a, P_b."""
    big = design.big
    tw = design.tower
    C = design.extended_nrc(a, b)
    out = {}
    K10 = design.curve_points(C, 1, 0)[0]
    K01 = design.curve_points(C, 0, 1)[0]
    out["K10_is_Pa"] = bool(np.array_equal(ps.normalize(K10, big), ps.normalize(design.P(a), big)))
    out["K01_is_Pb"] = bool(np.array_equal(ps.normalize(K01, big), ps.normalize(design.P(b), big)))
    # K_{b^(q^i), a^(q^i)} = <w_i>, and w_i lies in both the indicator space and D-bar
    ok_frame = True
    D = [a] + [int(big.mul(a, int(x))) for x in _subfield_elements(tw, C.s)]
    Dbar = design.P(np.array(D))
    rD = ps.rank(Dbar, big)
    for i in range(C.s):
        Kw = design.curve_points(C, int(tw.frob(b, i)), int(tw.frob(a, i)))[0]
        if not np.array_equal(ps.normalize(Kw, big), ps.normalize(C.frame[i], big)):
            ok_frame = False
        support = set(np.nonzero(C.frame[i])[0].tolist())
        if support != set(range(i, design.t, C.s)):
            ok_frame = False
        if ps.rank(np.vstack([Dbar, C.frame[i]]), big) != rD:
            ok_frame = False
    out["frame_membership"] = ok_frame and rD == C.s
    # intersection with the subgeometry
    uv = ps.normalized_coefficients(2, tw.Q)
    pts = design.curve_points(C, uv[:, 0], uv[:, 1])
    nonzero = np.any(pts != 0, axis=1)
    inside = np.zeros(len(pts), dtype=bool)
    inside[nonzero] = design.in_subgeometry(pts[nonzero])
    sub = pts[inside]
    labels = set(design.subgeometry_label(sub).tolist()) if len(sub) else set()
    out["trace_size"] = int(inside.sum())
    out["trace_is_block"] = labels == set(design.h_block(a, b).points)
    out["ok"] = all(out[k] for k in ("K10_is_Pa", "K01_is_Pb", "frame_membership", "trace_is_block")) \
        and out["trace_size"] == design.q + 1
    return out


def _subfield_elements(tw: Tower, s: int) -> np.ndarray:
    """Nonzero elements of GF(q^s) inside GF(q^t), excluding 1."""
    m = (tw.Q - 1) // (tw.q ** s - 1)
    el = tw.big.exp[np.arange(0, tw.Q - 1, m)]
    return el[el != 1]


@dataclass
class DesignReport:
    q: int
    t: int
    points: int
    blocks: int
    block_sizes: list[int]
    lambda_one: bool
    expected_blocks: int
    vy_mode: str
    vy_checked: int
    vy_ok: bool
    counterexample: tuple | None
    s_types: dict[int, int]

    @property
    def ok(self) -> bool:
        return (self.lambda_one and self.vy_ok and self.blocks == self.expected_blocks
                and self.block_sizes == [self.q + 1]
                and self.points == ps.theta(self.t, self.q))


def verify_design_and_vy(q: int, t: int, mode: str = "auto", samples: int = 100_000,
                         seed: int = 0) -> DesignReport:
    from sympy import factorint
    (p, e), = factorint(q).items()
    D = HDesign(make_tower(p, e, t))
    th = D.theta
    bid = D.blockid
    blocks = D.blocks
    cover = np.zeros((th, th), dtype=np.int64)
    for B in blocks:
        pts = np.array(sorted(B.points))
        cover[np.ix_(pts, pts)] += 1
    np.fill_diagonal(cover, 1)
    lam = bool(np.all(cover == 1))
    meets = D.meets
    if mode == "auto":
        mode = "exhaustive" if q ** t <= 5 ** 4 else "sampled"
    bad = None
    checked = 0
    if mode == "exhaustive":
        idx = np.arange(th)
        for A in range(th):
            ab = bid[A]  # (B,)
            cd = bid  # (C, D)
            # AB meets CD  =>  AD meets BC, arrays indexed (B, C, D)
            lhs = meets[ab[:, None, None], cd[None, :, :]]
            rhs = meets[ab[None, None, :], bid[:, :, None]]
            Bc = idx[:, None, None]
            Cc = idx[None, :, None]
            Dc = idx[None, None, :]
            distinct = (Bc != A) & (Cc != A) & (Dc != A) & (Bc != Cc) & (Bc != Dc) & (Cc != Dc)
            viol = lhs & ~rhs & distinct
            checked += int(distinct.sum())
            if viol.any():
                b_, c_, d_ = map(int, np.argwhere(viol)[0])
                bad = (A, b_, c_, d_)
                break
    else:
        rng = np.random.default_rng(seed)
        quads = rng.integers(0, th, size=(samples, 4))
        quads = quads[(quads[:, 0] != quads[:, 1]) & (quads[:, 0] != quads[:, 2]) & (quads[:, 0] != quads[:, 3])
                      & (quads[:, 1] != quads[:, 2]) & (quads[:, 1] != quads[:, 3]) & (quads[:, 2] != quads[:, 3])]
        A, B, C, Dd = quads.T
        lhs = meets[bid[A, B], bid[C, Dd]]
        rhs = meets[bid[A, Dd], bid[B, C]]
        viol = lhs & ~rhs
        checked = len(quads)
        if viol.any():
            bad = tuple(int(x) for x in quads[np.argmax(viol)])
    s_types: dict[int, int] = {}
    for B in blocks:
        s_types[B.s] = s_types.get(B.s, 0) + 1
    return DesignReport(q, t, th, len(blocks), sorted({len(B.points) for B in blocks}), lam,
                        ps.gaussian_binomial(t, 2, q), mode, checked, bad is None, bad,
                        dict(sorted(s_types.items())))


# -- projection of normal rational curves -------------------------------------

def moment_curve(k: int, field) -> np.ndarray:
    """The q+1 points (1, x, ..., x^k) and (0, ..., 0, 1) of PG(k, q)."""
    q = field.order
    pts = [[field.pow(x, i) if i else 1 for i in range(k + 1)] for x in range(q)]
    pts.append([0] * k + [1])
    return np.array(pts, dtype=np.int64)


def project_nrc(curve: np.ndarray, P, target: ps.Subspace, field) -> dict:
    """Project ``curve`` minus P from P onto ``target`` and test the image.

    Returns the q image points and whether they lie on a normal rational
    curve of one degree less (conic fit for degree 3 curves, line for
    degree 2, arc + span rank in general)."""
    P = np.asarray(P, dtype=np.int64)
    Pp = ps.ProjectivePoint(field, P)
    rest = [c for c in curve if not np.array_equal(ps.normalize(c, field), np.array(Pp.coords))]
    if len(rest) == len(curve):
        raise ValueError("P is not on the curve")
    imgs = np.array([ps.project_from_point(Pp, target, ps.ProjectivePoint(field, c)).coords for c in rest])
    k = ps.rank(curve, field) - 1
    out = {"points": imgs, "count": len(imgs)}
    span_rank = ps.rank(imgs, field)
    out["span_rank"] = span_rank
    if k == 2:
        out["lower_degree_ok"] = span_rank == 2
    else:
        # arc property in the span, plus (for k = 3) a nondegenerate conic through all points
        arc = all(ps.rank(imgs[list(c)], field) == span_rank
                  for c in itertools.combinations(range(len(imgs)), span_rank))
        ok = arc and span_rank == k
        if k == 3:
            from .quadrics import conic_through_points
            ok = ok and conic_through_points(imgs, target, field)
        out["lower_degree_ok"] = ok
    return out
