"""Numpy implementations of the F_p elimination kernels.

Same contract as the compiled ``_kernels`` module: int64 arrays with
entries in ``[0, p)``, ``p < 2**31``, modified in place.
"""

from __future__ import annotations

import numpy as np


def _eliminate(A: np.ndarray, p: int, full: bool) -> list:
    m, n = A.shape
    pivots = []
    r = 0
    for c in range(n):
        if r >= m:
            break
        nz = np.flatnonzero(A[r:, c])
        if nz.size == 0:
            continue
        piv = r + int(nz[0])
        if piv != r:
            A[[r, piv]] = A[[piv, r]]
        inv = pow(int(A[r, c]), -1, p)
        A[r] = A[r] * inv % p
        col = A[:, c] if full else A[r + 1:, c]
        rows = np.flatnonzero(col)
        if not full:
            rows = rows + r + 1
        else:
            rows = rows[rows != r]
        if rows.size:
            A[rows] = (A[rows] - np.outer(A[rows, c], A[r]) % p) % p
        pivots.append(c)
        r += 1
    return pivots


def rank_mod_p(A: np.ndarray, p: int) -> int:
    return len(_eliminate(A, p, False))


def rref_mod_p(A: np.ndarray, p: int) -> list:
    return _eliminate(A, p, True)
