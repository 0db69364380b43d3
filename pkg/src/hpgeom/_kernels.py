"""Compiled inner loops for the exhaustive enumerations.

All field arithmetic here goes through dense q x q tables (``add``, ``mul``)
and the inverse/negation vectors, so the kernels work for any small q.
"""

from __future__ import annotations

import numpy as np
from numba import njit

KIND_SCATTERED = 0
KIND_CLUB = 1
KIND_ICLUB = 2
KIND_OTHER = 3


@njit(cache=True)
def decode(idx, combos, offsets, free_rows, free_cols, nfree, q, M):
    """Write the RREF matrix of subspace number ``idx`` into M."""
    lo, hi = 0, len(offsets) - 1
    while hi - lo > 1:
        mid = (lo + hi) // 2
        if offsets[mid] <= idx:
            lo = mid
        else:
            hi = mid
    ci = lo
    r = idx - offsets[ci]
    M[:, :] = 0
    for i in range(combos.shape[1]):
        M[i, combos[ci, i]] = 1
    for s in range(nfree[ci] - 1, -1, -1):
        M[free_rows[ci, s], free_cols[ci, s]] = r % q
        r //= q


@njit(cache=True)
def _rank_cols(M, c0, c1, add, mul, neg, inv, work):
    """Rank of the column block M[:, c0:c1]."""
    k = M.shape[0]
    w = c1 - c0
    for i in range(k):
        for j in range(w):
            work[i, j] = M[i, c0 + j]
    r = 0
    for c in range(w):
        piv = -1
        for i in range(r, k):
            if work[i, c] != 0:
                piv = i
                break
        if piv < 0:
            continue
        if piv != r:
            for j in range(w):
                tmp = work[r, j]
                work[r, j] = work[piv, j]
                work[piv, j] = tmp
        iv = inv[work[r, c]]
        for j in range(w):
            work[r, j] = mul[iv, work[r, j]]
        for i in range(k):
            if i != r and work[i, c] != 0:
                f = neg[work[i, c]]
                for j in range(w):
                    work[i, j] = add[work[i, j], mul[f, work[r, j]]]
        r += 1
        if r == k:
            break
    return r


@njit(cache=True)
def _labels(M, coeffs, add, mul, lookup, q, out):
    k, n1 = M.shape
    for m in range(coeffs.shape[0]):
        code = 0
        for j in range(n1):
            v = 0
            for i in range(k):
                c = coeffs[m, i]
                if c != 0 and M[i, j] != 0:
                    v = add[v, mul[c, M[i, j]]]
            code = code * q + v
        out[m] = lookup[code]


@njit(cache=True)
def census_chunk(start, stop, combos, offsets, free_rows, free_cols, nfree, q, n1, k,
                 add, mul, neg, inv, lookup, coeffs, theta_q, pinf, t, prefilter, keep_all):
    """Classify the linear sets of subspaces ``start <= idx < stop``.

    Returns per-kind counts (planes) plus, for kept subspaces, arrays of
    (index, kind, aux, head, has_pinf, h1, h2, npoints) and the padded
    sorted label rows.  A subspace is kept when it meets the element of
    ``pinf`` (or always with ``keep_all``)."""
    npts = coeffs.shape[0]
    M = np.zeros((k, n1), dtype=np.int64)
    work = np.zeros((k, n1), dtype=np.int64)
    labs = np.zeros(npts, dtype=np.int64)
    counts = np.zeros(4, dtype=np.int64)
    cap = 1024
    kept_idx = np.empty(cap, dtype=np.int64)
    kept_meta = np.empty((cap, 5), dtype=np.int64)
    kept_hash = np.empty((cap, 2), dtype=np.uint64)
    kept_rows = np.empty((cap, npts), dtype=np.int32)
    nk = 0
    for idx in range(start, stop):
        decode(idx, combos, offsets, free_rows, free_cols, nfree, q, M)
        meets = _rank_cols(M, t, 2 * t, add, mul, neg, inv, work) < k
        if prefilter and not meets:
            continue
        _labels(M, coeffs, add, mul, lookup, q, labs)
        labs.sort()
        # run lengths
        nlab = 0
        n_heavy = 0
        heavy_w = 0
        head = -1
        has_pinf = 0
        bad = False
        i = 0
        while i < npts:
            j = i
            while j < npts and labs[j] == labs[i]:
                j += 1
            run = j - i
            w = 0
            while w < len(theta_q) and theta_q[w] < run:
                w += 1
            if w >= len(theta_q) or theta_q[w] != run:
                bad = True
            if labs[i] == pinf:
                has_pinf = 1
            if w > 1:
                n_heavy += 1
                heavy_w = w
                head = labs[i]
            nlab += 1
            i = j
        if bad:
            kind = -1
        elif n_heavy == 0:
            kind = KIND_SCATTERED
        elif n_heavy == 1 and heavy_w == k - 1:
            kind = KIND_CLUB
        elif n_heavy == 1 and heavy_w < k - 1:
            kind = KIND_ICLUB
        else:
            kind = KIND_OTHER
        if kind < 0:
            raise ValueError("weight sum identity violated")
        counts[kind] += 1
        if not (meets or keep_all):
            continue
        if nk == cap:
            cap *= 2
            ki = np.empty(cap, dtype=np.int64)
            km = np.empty((cap, 5), dtype=np.int64)
            kh = np.empty((cap, 2), dtype=np.uint64)
            kr = np.empty((cap, npts), dtype=np.int32)
            ki[:nk] = kept_idx[:nk]
            km[:nk] = kept_meta[:nk]
            kh[:nk] = kept_hash[:nk]
            kr[:nk] = kept_rows[:nk]
            kept_idx, kept_meta, kept_hash, kept_rows = ki, km, kh, kr
        h1 = np.uint64(1469598103934665603)
        h2 = np.uint64(7809847782465536322)
        p1 = np.uint64(1099511628211)
        p2 = np.uint64(6364136223846793005)
        r = 0
        prev = -1
        for i in range(npts):
            if labs[i] != prev:
                x = np.uint64(labs[i] + 1)
                h1 = (h1 ^ x) * p1
                h2 = (h2 + x) * p2 + np.uint64(1442695040888963407)
                kept_rows[nk, r] = labs[i]
                r += 1
                prev = labs[i]
        for i in range(r, npts):
            kept_rows[nk, i] = -1
        kept_idx[nk] = idx
        kept_meta[nk, 0] = kind
        kept_meta[nk, 1] = heavy_w
        kept_meta[nk, 2] = head
        kept_meta[nk, 3] = has_pinf
        kept_meta[nk, 4] = nlab
        kept_hash[nk, 0] = h1
        kept_hash[nk, 1] = h2
        nk += 1
    return counts, kept_idx[:nk], kept_meta[:nk], kept_hash[:nk], kept_rows[:nk]


@njit(cache=True)
def _insert(B, piv, r, v, add, mul, neg, inv):
    """Insert v into the fully reduced echelon rows B[:r]; return new rank."""
    n = v.shape[0]
    for j in range(r):
        c = v[piv[j]]
        if c != 0:
            f = neg[c]
            for x in range(n):
                v[x] = add[v[x], mul[f, B[j, x]]]
    p = -1
    for x in range(n):
        if v[x] != 0:
            p = x
            break
    if p < 0:
        return r
    iv = inv[v[p]]
    for x in range(n):
        B[r, x] = mul[iv, v[x]]
    for j in range(r):
        c = B[j, p]
        if c != 0:
            f = neg[c]
            for x in range(n):
                B[j, x] = add[B[j, x], mul[f, B[r, x]]]
    piv[r] = p
    return r + 1


@njit(cache=True)
def _kernel_rows(A, add, mul, neg, inv, work, out):
    """Basis of the right kernel of A (rows x cols); returns its size."""
    rows, cols = A.shape
    for i in range(rows):
        for j in range(cols):
            work[i, j] = A[i, j]
    pivc = np.full(rows, -1, dtype=np.int64)
    r = 0
    for c in range(cols):
        piv = -1
        for i in range(r, rows):
            if work[i, c] != 0:
                piv = i
                break
        if piv < 0:
            continue
        if piv != r:
            for j in range(cols):
                tmp = work[r, j]
                work[r, j] = work[piv, j]
                work[piv, j] = tmp
        iv = inv[work[r, c]]
        for j in range(cols):
            work[r, j] = mul[iv, work[r, j]]
        for i in range(rows):
            if i != r and work[i, c] != 0:
                f = neg[work[i, c]]
                for j in range(cols):
                    work[i, j] = add[work[i, j], mul[f, work[r, j]]]
        pivc[r] = c
        r += 1
        if r == rows:
            break
    nk = 0
    for f in range(cols):
        is_piv = False
        for i in range(r):
            if pivc[i] == f:
                is_piv = True
        if is_piv:
            continue
        for j in range(cols):
            out[nk, j] = 0
        out[nk, f] = 1
        for i in range(r):
            out[nk, pivc[i]] = neg[work[i, f]]
        nk += 1
    return nk


@njit(cache=True)
def solids_chunk(start, stop, combos, offsets, free_rows, free_cols, nfree, q,
                 planes, add, mul, neg, inv, target):
    """Check dual spaces ``start <= idx < stop``.

    Each index decodes to a (n+1-s) x (n+1) matrix F whose kernel is an
    (s-1)-space kappa; kappa passes when the union of the subspaces in
    ``planes`` (m x kk x (n+1)) meets it in a set of rank ``target``.
    Returns (index of first failure or -1, number checked)."""
    m, kk, n1 = planes.shape
    d = combos.shape[1]
    F = np.zeros((d, n1), dtype=np.int64)
    A = np.zeros((d, kk), dtype=np.int64)
    work = np.zeros((d, kk), dtype=np.int64)
    ker = np.zeros((kk, kk), dtype=np.int64)
    B = np.zeros((n1, n1), dtype=np.int64)
    piv = np.zeros(n1, dtype=np.int64)
    v = np.zeros(n1, dtype=np.int64)
    for idx in range(start, stop):
        decode(idx, combos, offsets, free_rows, free_cols, nfree, q, F)
        r = 0
        for g in range(m):
            for a in range(d):
                for b in range(kk):
                    s = 0
                    for x in range(n1):
                        if F[a, x] != 0 and planes[g, b, x] != 0:
                            s = add[s, mul[F[a, x], planes[g, b, x]]]
                    A[a, b] = s
            nk = _kernel_rows(A, add, mul, neg, inv, work, ker)
            for z in range(nk):
                for x in range(n1):
                    s = 0
                    for b in range(kk):
                        if ker[z, b] != 0 and planes[g, b, x] != 0:
                            s = add[s, mul[ker[z, b], planes[g, b, x]]]
                    v[x] = s
                r = _insert(B, piv, r, v, add, mul, neg, inv)
                if r >= target:
                    break
            if r >= target:
                break
        if r < target:
            return idx, idx - start + 1
    return -1, stop - start


@njit(cache=True)
def _cross(u, w, add, mul, neg, out):
    out[0] = add[mul[u[1], w[2]], neg[mul[u[2], w[1]]]]
    out[1] = add[mul[u[2], w[0]], neg[mul[u[0], w[2]]]]
    out[2] = add[mul[u[0], w[1]], neg[mul[u[1], w[0]]]]


@njit(cache=True)
def oracle_search(AP, add, mul, neg, m1_start, m1_stop):
    """Look for a plane meeting all m elements of a plane spread.

    ``AP[i, j, a]`` is the image under the annihilator of element j (3 x 6)
    of point a of element i.  A plane through points v1 of element 0,
    v2 of element 1 meets element j iff det(A_j v1, A_j v2, A_j x) = 0 for
    some third point x.  Returns (found, m1, m2, j0, m3, rank) where
    m3 = -1 means the line <v1, v2> already meets every element."""
    m, _, npts, _ = AP.shape
    c = np.zeros((m, 3), dtype=np.int64)
    unmet = np.zeros(m, dtype=np.int64)
    for a in range(m1_start, m1_stop):
        for b in range(npts):
            nu = 0
            for j in range(m):
                _cross(AP[0, j, a], AP[1, j, b], add, mul, neg, c[j])
                if c[j, 0] != 0 or c[j, 1] != 0 or c[j, 2] != 0:
                    unmet[nu] = j
                    nu += 1
            if nu == 0:
                return True, a, b, -1, -1, 2
            j0 = unmet[0]
            for x in range(npts):
                ok = True
                for z in range(nu):
                    j = unmet[z]
                    u = AP[j0, j, x]
                    s = add[add[mul[c[j, 0], u[0]], mul[c[j, 1], u[1]]], mul[c[j, 2], u[2]]]
                    if s != 0:
                        ok = False
                        break
                if ok:
                    return True, a, b, j0, x, 3
    return False, -1, -1, -1, -1, 0


@njit(cache=True)
def points_labels(pts, lookup, q):
    out = np.empty(pts.shape[0], dtype=np.int64)
    for i in range(pts.shape[0]):
        code = 0
        for j in range(pts.shape[1]):
            code = code * q + pts[i, j]
        out[i] = lookup[code]
    return out
