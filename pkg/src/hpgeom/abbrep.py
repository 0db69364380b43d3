"""The ABB (André/Bruck-Bose) representation of PG(2, q^t) restricted to a line.

PG(2, q^t) has coordinates (X:Y:Z) with line at infinity Z = 0.  An affine
point (x:y:1) goes to (vec x, vec y, 1) in PG(2t, q).  We study the line
l: X = 0 with P_inf = (0:1:0).  Its affine points (0:y:1) land in the
t-space Pi = {(0, vec y, c)}; we use the local coordinates (vec y, c) on Pi.
The plane at infinity pi_inf of Pi (c = 0) is the spread element of P_inf.

On l itself we use the (Y:Z) labels of :mod:`linsets`, so (y:1) is the
point with label 0 (y = 0) or 1 + code(1/y), and P_inf has label 1.
"""

from __future__ import annotations

import itertools
from dataclasses import dataclass
from functools import cached_property

import numpy as np

from . import projspace as ps
from .fieldred import Spread, make_spread
from .linsets import PINF, LinearSetProfile, profile_of, subline_basis, subline_through
from .nrcdesign import HDesign


def abb_point(P, tower) -> np.ndarray:
    """(vec x, vec y, 1) for an affine point (x:y:z) of PG(2, q^t)."""
    big = tower.big
    x, y, z = (int(c) for c in P)
    if z == 0:
        raise ValueError("point at infinity has no ABB point")
    x, y = big.div(x, z), big.div(y, z)
    return np.concatenate([tower.vec(x), tower.vec(y), [1]]).astype(np.int64)


def abb_inverse(X, tower) -> tuple[int, int, int]:
    X = np.asarray(X, dtype=np.int64)
    t = tower.t
    if X[-1] == 0:
        raise ValueError("point of the hyperplane at infinity")
    X = ps.normalize(X, tower.sub) if X[-1] != 1 else X
    c = int(X[-1])
    inv = tower.sub.inv(c)
    X = tower.sub.vmul(X, inv)
    return (int(tower.recompose(X[:t])), int(tower.recompose(X[t:2 * t])), 1)


def abb_infinity_element(P, tower) -> ps.Subspace:
    """Spread element of H_inf for a point (x:y:0) at infinity."""
    sp = make_spread(tower)
    rows = sp.body_rows((int(P[0]), int(P[1])))
    rows = np.hstack([rows, np.zeros((len(rows), 1), dtype=np.int64)])
    return ps.Subspace(tower.sub, 2 * tower.t, rows)


@dataclass
class ConeCheck:
    is_cone: bool
    vertex: np.ndarray | None
    base: np.ndarray | None  # points of pi_inf (vec y coordinates)
    base_hpoints: frozenset[int] | None
    base_h_dim: int | None
    vertices: np.ndarray | None = None


class ABBLine:
    """The pieces of the ABB picture attached to l: X = 0."""

    def __init__(self, spread: Spread):
        if spread.r != 2:
            raise ValueError("needs the line spread")
        self.spread = spread
        self.tower = spread.tower
        self.q = spread.q
        self.t = spread.t
        self.sub = spread.sub
        self.big = spread.big

    @cached_property
    def design(self) -> HDesign:
        return HDesign(self.tower)

    # labels <-> Pi
    def y_of_label(self, label: int) -> int:
        if label == PINF:
            raise ValueError("P_inf is not affine")
        if label == 0:
            return 0
        return self.big.inv(label - 1)

    def label_of_y(self, y) -> np.ndarray | int:
        y = np.asarray(y, dtype=np.int64)
        out = np.where(y == 0, 0, 1 + self.big.vinv(np.where(y == 0, 1, y)))
        return int(out) if out.ndim == 0 else out

    def pi_point(self, label: int) -> np.ndarray:
        """Pi-local coordinates (vec y, 1) of an affine point of l."""
        return np.concatenate([self.tower.vec(self.y_of_label(label)), [1]]).astype(np.int64)

    def affine_rep(self, X) -> np.ndarray:
        """The representative with last coordinate 1."""
        X = np.asarray(X, dtype=np.int64)
        if X[-1] == 0:
            raise ValueError("point of pi_inf")
        return self.sub.vmul(X, self.sub.inv(int(X[-1])))

    def label_of_pi_point(self, X) -> int:
        X = self.affine_rep(X)
        return self.label_of_y(int(self.tower.recompose(X[:self.t])))

    def to_ambient(self, X) -> np.ndarray:
        """Pi-local coordinates -> PG(2t, q) coordinates (0, vec y, c)."""
        X = np.atleast_2d(np.asarray(X, dtype=np.int64))
        return np.hstack([np.zeros((len(X), self.t), dtype=np.int64), X])

    @cached_property
    def pi_inf_points(self) -> np.ndarray:
        pts = ps.enumerate_points(self.t - 1, self.sub)
        return np.hstack([pts, np.zeros((len(pts), 1), dtype=np.int64)])

    def hpoint_of_pi_inf(self, X) -> np.ndarray:
        """H-point of points X = (vec y, 0) of pi_inf: the chart sends y to P_{1/y}."""
        X = np.atleast_2d(np.asarray(X, dtype=np.int64))
        ys = np.array([int(self.tower.recompose(x[:self.t])) for x in X])
        return self.design.hpoint(self.big.vinv(ys))

    def pi_inf_of_hpoint(self, h: int) -> np.ndarray:
        y = self.big.inv(self.design.element(h))
        return ps.normalize(np.concatenate([self.tower.vec(y), [0]]), self.sub)

    def abb_linear_set(self, labels) -> np.ndarray:
        """Affine part of the ABB image of a point set of l."""
        pts = [self.pi_point(lab) for lab in sorted(labels) if lab != PINF]
        return np.array(pts, dtype=np.int64).reshape(-1, self.t + 1)

    # cones
    def cone_check(self, A) -> ConeCheck:
        """Whether the affine point set A of Pi is the affine part of a cone
        with a point vertex and base in pi_inf; identifies the base in H.

        All vertices are reported: when the base spans a line of pi_inf the
        cone is an affine plane and every point is a vertex."""
        F = self.sub
        q = self.q
        A = np.array([self.affine_rep(x) for x in np.atleast_2d(A)], dtype=np.int64)
        codes = set(ps.point_code(A, q).tolist())
        scal = np.arange(q)[:, None]
        vertices = []
        base = None
        for v in A:
            dirs = F.vsub(A, v[None, :])
            dirs = dirs[np.any(dirs != 0, axis=1)]
            if not all(set(ps.point_code(F.vadd(v[None, :], F.vmul(scal, d[None, :])), q).tolist()) <= codes
                       for d in dirs):
                continue
            b = np.unique(ps.normalize(dirs, F), axis=0) if len(dirs) else dirs
            # a cone with vertex v over b points at infinity has 1 + (q - 1) b affine points
            if len(A) != 1 + (q - 1) * len(b):
                continue
            vertices.append(v)
            base = b
        if not vertices:
            return ConeCheck(False, None, None, None, None)
        hp = frozenset(self.hpoint_of_pi_inf(base).tolist())
        hdim = self.design.h_dim(hp) if self.design.is_h_subspace(hp) else None
        return ConeCheck(True, vertices[0], base, hp, hdim, np.array(vertices))

    def cone_points(self, vertex, hpoints) -> np.ndarray:
        """Affine points of the cone with the given vertex and H-point base."""
        F = self.sub
        vertex = self.affine_rep(vertex)
        pts = [vertex]
        for h in sorted(hpoints):
            d = self.pi_inf_of_hpoint(h)
            for lam in range(1, self.q):
                pts.append(F.vadd(vertex, F.vmul(lam, d)))
        return np.array(pts, dtype=np.int64)

    def cone_to_club(self, vertex, hpoints) -> LinearSetProfile:
        """A defining subspace and profile for the point set whose affine
        image is the cone, together with P_inf.  Raises if none exists."""
        A = self.cone_points(vertex, hpoints)
        labels = frozenset(self.label_of_pi_point(x) for x in A) | {PINF}
        head = self.label_of_pi_point(vertex)
        k = self.design.h_dim(frozenset(hpoints)) + 2
        sp = self.spread
        F = self.sub
        # a defining space is <g, P> with g in the head's element and P in pi_inf
        P = np.zeros(2 * self.t, dtype=np.int64)
        P[0] = 1
        head_el = sp.element(head).body
        for g in ps.enumerate_subspaces(self.t - 1, k - 2, F):
            rows = ps.matmul(g.basis, head_el.basis, F)
            pi = ps.Subspace(F, sp.n, np.vstack([rows, P[None, :]]))
            if pi.dim != k - 1:
                continue
            prof = profile_of(pi, sp)
            if prof.labels == labels and prof.head == head and prof.kind == "club":
                return prof
        raise ValueError("no club with this ABB image")

    # sublines of l
    def subline_image(self, points) -> dict:
        """ABB image of a GF(q)-subline of l.

        Tangent sublines (through P_inf) give the affine part of a line of Pi.
        External sublines give a normal rational curve of degree k, where
        GF(q^k) is the least extension subline through P_inf containing it;
        its span meets pi_inf in a D_k element and its extension meets
        pi_inf in k conjugate poles supported on the D_k index classes."""
        pts = sorted(set(points))
        F = self.sub
        q, t = self.q, self.t
        if len(pts) != q + 1:
            raise ValueError("a subline has q + 1 points")
        out: dict = {}
        if PINF in pts:
            A = self.abb_linear_set(pts)
            out["kind"] = "tangent"
            out["span_rank"] = ps.rank(A, F)
            B, _ = ps.rref(A, F)
            line_aff = ps.Subspace(F, t, B).points()
            line_aff = line_aff[line_aff[:, -1] != 0]
            out["is_affine_line"] = out["span_rank"] == 2 and len(line_aff) == q and \
                set(ps.point_code(line_aff, q).tolist()) == set(ps.point_code(ps.normalize(A, F), q).tolist())
            return out
        out["kind"] = "external"
        a, b, c = pts[:3]
        k = next(s for s in range(1, t + 1) if t % s == 0 and
                 set(pts) <= subline_through(PINF, a, b, self.spread, s=s).points)
        out["k"] = k
        out["degree_defined"] = k <= q  # q + 1 points cannot span more than PG(q, q)
        A = self.abb_linear_set(pts)
        out["span_rank"] = ps.rank(A, F)
        out["is_nrc"] = is_normal_rational_curve(A, F) and out["span_rank"] == k + 1
        # span meets pi_inf in a D_k element: its y values are y0 GF(q^k)*
        S = ps.Subspace(F, t, A)
        inf = ps.meet(S, ps.Subspace(F, t, ps.nullspace(np.eye(t + 1, dtype=np.int64)[-1:], F)))
        ys = np.array([int(self.tower.recompose(x[:t])) for x in inf.points()]) if inf.dim >= 0 else np.array([])
        m = (self.tower.Q - 1) // (q ** k - 1)
        out["meets_pi_inf_dim"] = inf.dim
        out["pi_inf_part_is_Dk_element"] = len(ys) == ps.theta(k, q) and \
            len(np.unique(self.big.log[ys] % m)) == 1
        out.update(self._poles(pts, k))
        return out

    def _poles(self, pts, k: int) -> dict:
        """Poles of the extension of the curve u -> (y(u)^{q^i})_i."""
        big, tw, t = self.big, self.tower, self.t
        a, b = subline_basis(pts[0], pts[1], pts[2], self.spread)
        # y(u) = (a_Y u + b_Y) / (a_Z u + b_Z); conjugate coordinates twist the coefficients
        num = [(int(tw.frob(int(a[0]), i)), int(tw.frob(int(b[0]), i))) for i in range(t)]
        den = [(int(tw.frob(int(a[1]), i)), int(tw.frob(int(b[1]), i))) for i in range(t)]
        roots, cls = [], []
        for g, d in den:
            r = big.neg(big.div(d, g))
            if r not in roots:
                roots.append(r)
            cls.append(roots.index(r))
        rep = [cls.index(j) for j in range(len(roots))]
        out = {"distinct_denominators": len(roots)}

        def z(i, u):
            return big.add(big.mul(den[i][0], u), den[i][1])

        poles = []
        for j, u in enumerate(roots):
            # multiply by prod_l z_rep(l): coordinate i keeps n_i * prod_{l != cls i} z_rep(l) / scale_i
            vec = np.zeros(t + 1, dtype=np.int64)
            for i in range(t):
                if cls[i] != j:
                    continue
                val = big.div(big.add(big.mul(num[i][0], u), num[i][1]), big.div(den[i][0], den[rep[j]][0]))
                for l in range(len(roots)):
                    if l != j:
                        val = big.mul(val, z(rep[l], u))
                vec[i] = val
            poles.append(vec)
        poles = np.array(poles, dtype=np.int64)
        out["pole_supports"] = [tuple(np.nonzero(p[:t])[0].tolist()) for p in poles]
        out["poles_at_infinity"] = bool(np.all(poles[:, t] == 0))
        expect = [tuple(range(j, t, k)) for j in range(k)]
        out["supports_are_Dk_classes"] = sorted(out["pole_supports"]) == sorted(expect)
        # poles of consecutive classes are sigma-conjugate (cyclic shift + Frobenius)
        norm = ps.normalize(poles[:, :t], big)
        sig = ps.normalize(tw.frob(np.roll(norm, 1, axis=-1), 1), big)
        keyset = {tuple(x) for x in norm.tolist()}
        out["poles_conjugate"] = all(tuple(x) in keyset for x in sig.tolist())
        # the poles lie in the extension of the curve's span (chart coordinates)
        Aff = self.abb_linear_set(pts)
        chart = np.array([[*self.spread.chart(int(tw.recompose(x[:t]))), 1] for x in Aff], dtype=np.int64)
        r0 = ps.rank(chart, big)
        out["poles_in_span"] = ps.rank(np.vstack([chart, poles]), big) == r0
        return out

    # block-intersection checks on bases
    def base_meets_blocks_ok(self, hpoints) -> bool:
        """Every H-block meets the set in 0, 1, q or q + 1 points."""
        S = set(int(x) for x in hpoints)
        q = self.q
        for B in self.design.blocks:
            if len(B.points) != q + 1:
                continue
            if len(B.points & S) not in (0, 1, q, q + 1):
                return False
        return True


def is_normal_rational_curve(points, field) -> bool:
    """Whether the points form a normal rational curve of their span.

    The NRC through a frame e_0..e_k, (1..1) and p is
    {(1/(s + 1/p_i))_i} together with the frame points; compare sets."""
    from .quadrics import coords_in_span
    _, X = coords_in_span(points, field)
    k = X.shape[1] - 1
    q = field.order
    F = field
    if len(X) != q + 1 or k < 1:
        return False
    if len(X) < k + 3:
        # at most k + 2 points: an NRC iff they are in general position
        return all(ps.rank(X[list(c)], F) == k + 1 for c in itertools.combinations(range(len(X)), k + 1))
    base, unit, p = X[:k + 1], X[k + 1], X[k + 2]
    try:
        alpha = solve_row(base, unit, F)
    except ValueError:
        return False
    if np.any(alpha == 0):
        return False
    newb = F.vmul(base, alpha[:, None])
    try:
        P = solve_row(newb, p, F)
        Y = np.array([solve_row(newb, x, F) for x in X])
    except ValueError:
        return False
    if np.any(P == 0) or len(set(P.tolist())) != k + 1:
        return False
    c = F.vneg(F.vinv(P))
    curve = [np.eye(k + 1, dtype=np.int64)[i] for i in range(k + 1)] + [np.ones(k + 1, dtype=np.int64)]
    for s in range(q):
        if s in set(c.tolist()):
            continue
        curve.append(F.vinv(F.vsub(np.full(k + 1, s), c)))
    want = set(ps.point_code(ps.normalize(np.array(curve), F), q).tolist())
    have = set(ps.point_code(ps.normalize(Y, F), q).tolist())
    return want == have


def solve_row(B, x, F) -> np.ndarray:
    """Coefficients a with a B = x, for B of full row rank."""
    B = np.asarray(B, dtype=np.int64)
    M = np.vstack([B, x]).T  # columns b_i and x
    ns = ps.nullspace(M, F)
    ns = [v for v in ns if v[-1] != 0]
    if len(ns) != 1:
        raise ValueError("not uniquely expressible")
    v = ns[0]
    return F.vmul(F.vneg(v[:-1]), F.inv(int(v[-1])))


def make_abb_line(q: int, t: int) -> ABBLine:
    return ABBLine(make_spread(q, t))


# -- bijection suites -------------------------------------------------------------

def _first_members(cr, sel: np.ndarray, by_head: bool) -> list[int]:
    idx = np.nonzero(sel)[0]
    keys = np.stack([cr.group[idx], cr.kept_meta[idx, 2] if by_head else np.zeros(len(idx), dtype=np.int64)],
                    axis=1)
    _, first = np.unique(keys, axis=0, return_index=True)
    return sorted(idx[first].tolist())


def _labels_row(cr, i: int) -> list[int]:
    row = cr.kept_rows[i]
    return row[row >= 0].tolist()


def club_cone_bijection(q: int, t: int, workers: int = 1) -> dict:
    """Clubs of rank 3 through P_inf with another head against cones of Pi
    with an affine vertex and an H-block base."""
    from . import _kernels as K
    from .linsets import census
    cr = census(q, t, 3, through_pinf_only=True, workers=workers)
    L = make_abb_line(q, t)
    sel = (cr.kept_meta[:, 0] == K.KIND_CLUB) & (cr.kept_meta[:, 3] == 1) & (cr.kept_meta[:, 2] != PINF)
    members = _first_members(cr, sel, by_head=True)
    pairs = set()
    failures = []
    multi = 0
    for i in members:
        labels = _labels_row(cr, i)
        c = L.cone_check(L.abb_linear_set(labels))
        head = int(cr.kept_meta[i, 2])
        head_pt = L.pi_point(head)
        ok = c.is_cone and c.base_h_dim == 1 and L.base_meets_blocks_ok(c.base_hpoints) and \
            any(np.array_equal(head_pt, L.affine_rep(v)) for v in c.vertices)
        if not ok:
            failures.append(labels)
            continue
        if len(c.vertices) > 1:
            multi += 1
        pairs.add((tuple(head_pt.tolist()), c.base_hpoints))
    blocks = {B.points for B in L.design.blocks}
    bases = {b for _, b in pairs}
    vertices = {v for v, _ in pairs}
    expected = q ** t * len(blocks)
    return {"q": q, "t": t, "clubs": len(members), "cones": len(pairs), "expected_cones": expected,
            "distinct_vertices": len(vertices), "bases_are_blocks": bases <= blocks,
            "failures": len(failures), "planar_cones": multi,
            "bijective": not failures and len(pairs) == len(members) == expected and bases <= blocks
            and len(vertices) == q ** t}


def scattered_quadric_bijection(q: int, workers: int = 1) -> dict:
    """Scattered rank-3 sets through P_inf of PG(1, q^3) against hyperbolic
    quadrics of Pi whose trace on pi_inf is a conic through the conjugate
    points of the element of P_inf."""
    from . import _kernels as K
    from . import quadrics as qd
    from .linsets import census
    cr = census(q, 3, 3, through_pinf_only=True, workers=workers)
    L = make_abb_line(q, 3)
    sp = L.spread
    frame = sp.transversal_frame(PINF)
    sel = (cr.kept_meta[:, 0] == K.KIND_SCATTERED) & (cr.kept_meta[:, 3] == 1)
    members = _first_members(cr, sel, by_head=False)
    images = set()
    failures = 0
    for i in members:
        g = qd.gq_criterion(L.abb_linear_set(_labels_row(cr, i)), sp.sub)
        if not g["pass"]:
            failures += 1
            continue
        Q = g["quadric"].normalized()
        if not qd.conjugate_conic_test(Q.restrict_last_zero(), frame, sp.tower):
            failures += 1
            continue
        images.add(Q.coeffs)
    special = qd.count_special_hyperbolics(sp, return_forms=True)
    targets = {tuple(int(x) for x in ps.normalize(f, sp.sub)) for f in special["forms"]}
    return {"q": q, "sets": len(members), "images": len(images), "special_quadrics": special["count"],
            "failures": failures, "expected": q ** 3 * (q ** 3 - 1) // 2,
            "bijective": failures == 0 and len(images) == len(members) and images == targets}


def iclub_cone_outcomes(q: int, t: int, k: int, workers: int = 1) -> dict:
    """Exploratory: cone_check outcomes for i-clubs (1 < i < k - 1) through
    P_inf with another head.  No theorem is asserted here."""
    from . import _kernels as K
    from .linsets import census
    cr = census(q, t, k, through_pinf_only=True, workers=workers)
    L = make_abb_line(q, t)
    sel = (cr.kept_meta[:, 0] == K.KIND_ICLUB) & (cr.kept_meta[:, 3] == 1) & (cr.kept_meta[:, 2] != PINF)
    members = _first_members(cr, sel, by_head=True)
    outcomes: dict[str, int] = {}
    for i in members:
        c = L.cone_check(L.abb_linear_set(_labels_row(cr, i)))
        head_pt = L.pi_point(int(cr.kept_meta[i, 2]))
        if not c.is_cone:
            key = "not_a_cone"
        else:
            at_head = any(np.array_equal(head_pt, L.affine_rep(v)) for v in c.vertices)
            key = f"cone(vertex_at_head={at_head}, base_h_dim={c.base_h_dim}, weight={int(cr.kept_meta[i, 1])})"
        outcomes[key] = outcomes.get(key, 0) + 1
    return {"q": q, "t": t, "k": k, "i_club_set_heads": len(members), "outcomes": dict(sorted(outcomes.items()))}
