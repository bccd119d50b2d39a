"""JIT-compiled inner loops.

Kept in one private module so the public modules stay free of compilation
plumbing.  Both kernels destroy or allocate their own scratch storage and
return plain scalars, which keeps them safe to call from worker threads.
"""

import numba
import numpy as np


@numba.njit(cache=True, nogil=True)
def lu_logabsdet(m):
    """LU-factorize ``m`` in place and return ``(is_zero, log|det m|)``.

    Partial (row) pivoting by maximum modulus; ties keep the lowest row
    index, so the factorization order is deterministic.  A pivot column
    whose remaining entries are all exactly 0.0 short-circuits to
    ``(True, 0.0)`` with no epsilon involved.
    """
    n = m.shape[0]
    acc = 0.0
    for k in range(n):
        p = k
        best = abs(m[k, k])
        for i in range(k + 1, n):
            v = abs(m[i, k])
            if v > best:
                best = v
                p = i
        if best == 0.0:
            return True, 0.0
        if p != k:
            for j in range(n):
                tmp = m[k, j]
                m[k, j] = m[p, j]
                m[p, j] = tmp
        piv = m[k, k]
        acc += np.log(abs(piv))
        for i in range(k + 1, n):
            f = m[i, k] / piv
            m[i, k] = f
            for j in range(k + 1, n):
                m[i, j] -= f * m[k, j]
    return False, acc


@numba.njit(cache=True, nogil=True)
def shifted_logabsdet(g, lam):
    """Return ``(is_zero, log|det(lam*I - g)|)`` for a square array ``g``.

    The shifted matrix is formed fresh on every call; ``g`` is never
    written to.
    """
    n = g.shape[0]
    m = np.empty((n, n), dtype=np.complex128)
    for i in range(n):
        for j in range(n):
            m[i, j] = -g[i, j]
        m[i, i] += lam
    return lu_logabsdet(m)
