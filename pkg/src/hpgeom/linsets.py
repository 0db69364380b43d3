"""Linear sets on PG(1, q^t): profiles, sublines and enumeration census.

Points of PG(1, q^t) are handled by spread label (see :mod:`fieldred`).
The distinguished point P_inf is (1:0), label 1; its spread element is the
space of vectors (vec(y), 0).
"""

from __future__ import annotations

import itertools
import time
from dataclasses import dataclass, field
from typing import Sequence

import numpy as np

from . import _kernels as K
from . import projspace as ps
from ._parallel import chunk_ranges, run_ordered
from .fieldred import Spread, make_spread, weight_of_count

PINF = 1
KIND_NAMES = {K.KIND_SCATTERED: "scattered", K.KIND_CLUB: "club", K.KIND_ICLUB: "i_club", K.KIND_OTHER: "other"}


@dataclass
class LinearSetProfile:
    defining_subspace: ps.Subspace
    points: list[tuple[int, int]]  # (label, weight), sorted by label
    rank: int
    kind: str
    head: int | None = None
    i: int | None = None

    @property
    def size(self) -> int:
        return len(self.points)

    @property
    def labels(self) -> frozenset[int]:
        return frozenset(lab for lab, _ in self.points)

    def weight(self, label: int) -> int:
        return dict(self.points).get(label, 0)


def classify_weights(weights: Sequence[int], k: int) -> tuple[str, int | None]:
    """Kind name and the weight of the unique heavy point (if any)."""
    heavy = [w for w in weights if w > 1]
    if not heavy:
        return "scattered", None
    if len(heavy) == 1 and heavy[0] == k - 1:
        return "club", heavy[0]
    if len(heavy) == 1 and heavy[0] < k - 1:
        return "i_club", heavy[0]
    return "other", None


def profile_of(pi: ps.Subspace, spread: Spread) -> LinearSetProfile:
    pts = spread.B_of(pi)
    k = pi.dim + 1
    q = spread.q
    if sum(ps.theta(w, q) for _, w in pts) != ps.theta(k, q):
        raise AssertionError("weight sum identity violated")
    kind, hw = classify_weights([w for _, w in pts], k)
    head = next((lab for lab, w in pts if w > 1), None) if kind in ("club", "i_club") else None
    return LinearSetProfile(pi, pts, k, kind, head, hw if kind == "i_club" else None)


# -- sublines ----------------------------------------------------------------

@dataclass(frozen=True)
class Subline:
    defining: tuple[int, int, int]
    points: frozenset[int]


def _coords(spread: Spread, label: int) -> np.ndarray:
    return np.array(spread.coords_of(label), dtype=np.int64)


def subline_basis(P1: int, P2: int, P3: int, spread: Spread) -> tuple[np.ndarray, np.ndarray]:
    """Vectors a, b over GF(q^t) with <a> = P1, <b> = P2 and <a + b> = P3."""
    big = spread.big
    A, B, C = (_coords(spread, x) for x in (P1, P2, P3))
    det = big.sub(big.mul(int(A[0]), int(B[1])), big.mul(int(A[1]), int(B[0])))
    alpha = big.div(big.sub(big.mul(int(C[0]), int(B[1])), big.mul(int(C[1]), int(B[0]))), det)
    beta = big.div(big.sub(big.mul(int(A[0]), int(C[1])), big.mul(int(A[1]), int(C[0]))), det)
    return big.vmul(alpha, A), big.vmul(beta, B)


def subline_through(P1: int, P2: int, P3: int, spread: Spread, s: int = 1) -> Subline:
    """The GF(q^s)-subline through three distinct points of PG(1, q^t).

    (1:0) of PG(1, q^s) goes to P1, (0:1) to P2 and (1:1) to P3."""
    if len({P1, P2, P3}) < 3:
        raise ValueError("points must be pairwise distinct")
    big = spread.big
    tw = spread.tower
    a, b = subline_basis(P1, P2, P3, spread)
    if s == 1:
        scalars = tw.emb
    else:
        Q = tw.Q
        m = (Q - 1) // (tw.q ** s - 1)
        scalars = np.concatenate([[0], big.exp[np.arange(0, Q - 1, m)]])
    pts = {spread.label_of(a)}
    for u in scalars:
        v = big.vadd(big.vmul(int(u), a), b)
        pts.add(spread.label_of(v))
    return Subline((P1, P2, P3), frozenset(pts))


def sublines_inside(points: Sequence[int] | frozenset, spread: Spread) -> list[Subline]:
    """All GF(q)-sublines whose points all lie in ``points``."""
    S = sorted(set(points))
    Sset = set(S)
    found: dict[frozenset, Subline] = {}
    for i, a in enumerate(S):
        for b in S[i + 1:]:
            for c in S:
                if c == a or c == b:
                    continue
                sl = subline_through(a, b, c, spread)
                if sl.points <= Sset and sl.points not in found:
                    found[sl.points] = sl
    return sorted(found.values(), key=lambda sl: sorted(sl.points))


def sublines_through_pair(points, a: int, b: int, spread: Spread) -> list[frozenset]:
    Sset = set(points)
    out = set()
    for c in Sset - {a, b}:
        sl = subline_through(a, b, c, spread)
        if sl.points <= Sset:
            out.add(sl.points)
    return sorted(out, key=sorted)


def is_extension_subline(points, spread: Spread, s: int) -> bool:
    """Whether ``points`` is exactly a GF(q^s)-subline (s | t)."""
    pts = sorted(set(points))
    if spread.t % s or len(pts) != spread.tower.q ** s + 1:
        return False
    sl = subline_through(pts[0], pts[1], pts[2], spread, s=s)
    return sl.points == frozenset(pts)


# -- census -------------------------------------------------------------------

@dataclass
class CensusResult:
    q: int
    t: int
    k: int
    total_subspaces: int
    enumerated: int
    complete: bool
    plane_counts: dict[str, int]
    # kept subspaces (those meeting the element of P_inf)
    kept_index: np.ndarray = field(repr=False)
    kept_meta: np.ndarray = field(repr=False)  # kind, heavy weight, head, has_pinf, npoints
    kept_rows: np.ndarray = field(repr=False)
    group: np.ndarray = field(repr=False)  # group id (linear-set identity) per kept subspace
    n_groups: int = 0
    collisions: int = 0
    seconds: float = 0.0

    def subspace(self, i: int, field_) -> ps.Subspace:
        plan = ps.enum_plan(2 * self.t - 1, self.k - 1, self.q)
        return ps.Subspace(field_, 2 * self.t - 1, ps.subspace_matrix_at(plan, int(self.kept_index[i])),
                           canonical=True)

    def _sel(self, kind: int, head=None, exclude_head=None, through=True):
        m = self.kept_meta
        sel = m[:, 0] == kind
        if through:
            sel &= m[:, 3] == 1
        if head is not None:
            sel &= m[:, 2] == head
        if exclude_head is not None:
            sel &= m[:, 2] != exclude_head
        return sel

    def count_sets(self, kind: int, **kw) -> int:
        return len(np.unique(self.group[self._sel(kind, **kw)]))

    def count_set_heads(self, kind: int, **kw) -> int:
        sel = self._sel(kind, **kw)
        pairs = np.stack([self.group[sel], self.kept_meta[sel, 2]], axis=1)
        return len(np.unique(pairs, axis=0)) if len(pairs) else 0

    def clubs_head_pinf(self) -> int:
        return self.count_set_heads(K.KIND_CLUB, head=PINF)

    def clubs_through_pinf_other_head(self) -> int:
        return self.count_set_heads(K.KIND_CLUB, exclude_head=PINF)

    def clubs_per_head(self) -> dict[int, int]:
        sel = self._sel(K.KIND_CLUB, exclude_head=PINF)
        pairs = np.unique(np.stack([self.group[sel], self.kept_meta[sel, 2]], axis=1), axis=0)
        heads, counts = np.unique(pairs[:, 1], return_counts=True) if len(pairs) else ([], [])
        return dict(zip(np.asarray(heads).tolist(), np.asarray(counts).tolist()))

    def scattered_through_pinf(self) -> int:
        return self.count_sets(K.KIND_SCATTERED)

    def members(self, g: int) -> np.ndarray:
        return np.nonzero(self.group == g)[0]


def _census_task(start, stop, arrays, q, n1, k, t, prefilter):
    (combos, offsets, fr, fc, nf, add, mul, neg, inv, lookup, coeffs, thetas) = arrays
    return K.census_chunk(start, stop, combos, offsets, fr, fc, nf, q, n1, k, add, mul, neg, inv,
                          lookup, coeffs, thetas, PINF, t, prefilter, False)


def _census_arrays(spread: Spread, k: int):
    q, t = spread.q, spread.t
    plan = ps.enum_plan(2 * t - 1, k - 1, q)
    T = spread.sub.small_tables
    coeffs = ps.normalized_coefficients(k, q).astype(np.int64)
    thetas = np.array([ps.theta(w, q) for w in range(k + 1)], dtype=np.int64)
    return plan, (plan.combos, plan.offsets, plan.free_rows, plan.free_cols, plan.nfree,
                  T.add, T.mul, T.neg, T.inv, spread.lookup_table, coeffs, thetas)


_CENSUS_CACHE: dict = {}


def census(q: int, t: int, k: int, *, through_pinf_only: bool = False, workers: int = 1,
           chunk: int = 200_000, limit: int | None = None, budget: float | None = None,
           spread: Spread | None = None) -> CensusResult:
    """Exhaustive classification of the rank-k linear sets L_pi, pi a
    (k-1)-space of PG(2t-1, q).

    Plane counts by kind cover every enumerated subspace unless
    ``through_pinf_only``, which skips subspaces disjoint from the element
    of P_inf.  Subspaces meeting that element are kept and grouped by
    linear-set identity (sorted label list)."""
    key = (q, t, k, through_pinf_only)
    if key in _CENSUS_CACHE and spread is None:
        return _CENSUS_CACHE[key]
    sp = spread or make_spread(q, t)
    plan, arrays = _census_arrays(sp, k)
    total = plan.total
    stop_at = total if limit is None else min(total, limit)
    tasks = [(a, b, arrays, q, 2 * t, k, t, through_pinf_only) for a, b in chunk_ranges(stop_at, chunk)]
    t0 = time.monotonic()
    deadline = t0 + budget if budget else None
    results, timed_out = run_ordered(_census_task, tasks, workers, deadline)
    done = tasks[len(results) - 1][1] if results else 0
    counts = np.zeros(4, dtype=np.int64)
    for r in results:
        counts += r[0]
    npts = arrays[10].shape[0]
    if results:
        idx = np.concatenate([r[1] for r in results])
        meta = np.concatenate([r[2] for r in results])
        hashes = np.concatenate([r[3] for r in results])
        rows = np.concatenate([r[4] for r in results])
    else:
        idx = np.zeros(0, dtype=np.int64)
        meta = np.zeros((0, 5), dtype=np.int64)
        hashes = np.zeros((0, 2), dtype=np.uint64)
        rows = np.zeros((0, npts), dtype=np.int32)
    group, ngroups, collisions = _group(hashes, rows)
    res = CensusResult(q, t, k, total, done, done == total and not timed_out,
                       {KIND_NAMES[i]: int(counts[i]) for i in range(4)},
                       idx, meta, rows, group, ngroups, collisions, time.monotonic() - t0)
    if spread is None and res.complete:
        _CENSUS_CACHE[key] = res
    return res


def _group(hashes: np.ndarray, rows: np.ndarray) -> tuple[np.ndarray, int, int]:
    """Group ids from 128-bit digests, confirmed exactly against the rows."""
    if len(hashes) == 0:
        return np.zeros(0, dtype=np.int64), 0, 0
    _, first, inv = np.unique(hashes, axis=0, return_index=True, return_inverse=True)
    inv = inv.reshape(-1)
    same = np.all(rows == rows[first[inv]], axis=1)
    collisions = 0
    group = inv.astype(np.int64)
    if not same.all():
        # digest collision: fall back to exact row grouping for the affected digests
        bad = np.unique(inv[~same])
        collisions = len(bad)
        nxt = len(first)
        for g in bad:
            members = np.nonzero(inv == g)[0]
            _, sub_inv = np.unique(rows[members], axis=0, return_inverse=True)
            sub_inv = sub_inv.reshape(-1)
            for s in range(1, sub_inv.max() + 1):
                group[members[sub_inv == s]] = nxt
                nxt += 1
    # renumber groups by first occurrence so ids are order-stable
    _, first_pos, dense = np.unique(group, return_index=True, return_inverse=True)
    order = np.argsort(np.argsort(first_pos))
    group = order[dense.reshape(-1)]
    return group, int(group.max()) + 1, collisions


def equivalent_subspaces(pi: ps.Subspace, spread: Spread, same_head: bool = True,
                         workers: int = 1) -> list[ps.Subspace]:
    """Every pi' with B(pi') = B(pi) (and, for clubs, the same head)."""
    prof = profile_of(pi, spread)
    q, t, k = spread.q, spread.t, pi.dim + 1
    labels = sorted(prof.labels)
    if PINF in prof.labels:
        res = census(q, t, k, workers=workers, spread=spread if spread is not make_spread(q, t) else None)
        target = np.full(res.kept_rows.shape[1], -1, dtype=np.int32)
        target[:len(labels)] = labels
        hits = np.nonzero(np.all(res.kept_rows == target, axis=1))[0]
        out = []
        for i in hits:
            if same_head and prof.kind == "club" and res.kept_meta[i, 2] != prof.head:
                continue
            out.append(res.subspace(int(i), spread.sub))
        return out
    raise ValueError("only linear sets through P_inf are supported")
