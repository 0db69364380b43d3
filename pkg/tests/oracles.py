"""Independent reference checks shared by the test modules."""

import numpy as np

from hpgeom import projspace as ps


def brute_is_hp(S) -> bool:
    """Direct definition: the union meets every (n-k)-space in a spanning set."""
    F, n, k = S.field, S.n, S.k
    union = np.vstack([P.points() for P in S.planes])
    for kappa in ps.enumerate_subspaces(n, n - k, F):
        inside = union[ps.matmul(union, kappa.dual().T, F).any(axis=1) == 0]
        if len(inside) == 0 or ps.rank(inside, F) != kappa.dim + 1:
            return False
    return True
