# cython: language_level=3, boundscheck=False, wraparound=False, cdivision=True
"""Compiled elimination kernels over F_p for p < 2^31.

Entries are int64 residues in [0, p); products stay below 2^62.
"""

cimport cython
from libc.stdlib cimport malloc, free

ctypedef long long i64


cdef inline i64 _inv_mod(i64 a, i64 p) nogil:
    cdef i64 t = 0, newt = 1, r = p, newr = a, q, tmp
    while newr != 0:
        q = r // newr
        tmp = t - q * newt
        t = newt
        newt = tmp
        tmp = r - q * newr
        r = newr
        newr = tmp
    if t < 0:
        t += p
    return t


cdef Py_ssize_t _eliminate(i64[:, ::1] A, i64 p, bint full, list pivots):
    cdef Py_ssize_t m = A.shape[0], n = A.shape[1]
    cdef Py_ssize_t r = 0, c, i, j, k, piv, nnz
    cdef i64 inv, f, t
    cdef Py_ssize_t *cols = <Py_ssize_t *> malloc(n * sizeof(Py_ssize_t))
    if cols == NULL:
        raise MemoryError()
    try:
        with nogil:
            for c in range(n):
                if r >= m:
                    break
                piv = -1
                for i in range(r, m):
                    if A[i, c] != 0:
                        piv = i
                        break
                if piv < 0:
                    continue
                if piv != r:
                    for j in range(c, n):
                        t = A[r, j]
                        A[r, j] = A[piv, j]
                        A[piv, j] = t
                inv = _inv_mod(A[r, c], p)
                nnz = 0
                for j in range(c, n):
                    if A[r, j] != 0:
                        A[r, j] = A[r, j] * inv % p
                        cols[nnz] = j
                        nnz += 1
                for i in range(0 if full else r + 1, m):
                    if i == r:
                        continue
                    f = A[i, c]
                    if f == 0:
                        continue
                    for k in range(nnz):
                        j = cols[k]
                        t = A[i, j] - f * A[r, j] % p
                        if t < 0:
                            t += p
                        A[i, j] = t
                with gil:
                    pivots.append(c)
                r += 1
    finally:
        free(cols)
    return r


def rank_mod_p(i64[:, ::1] A, i64 p):
    """Rank of ``A`` over F_p; ``A`` is overwritten."""
    cdef list pivots = []
    return _eliminate(A, p, False, pivots)


def rref_mod_p(i64[:, ::1] A, i64 p):
    """Reduce ``A`` in place to reduced row echelon form; return pivot columns."""
    cdef list pivots = []
    _eliminate(A, p, True, pivots)
    return pivots
