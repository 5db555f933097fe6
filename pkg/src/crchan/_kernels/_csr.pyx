# cython: boundscheck=False, wraparound=False, initializedcheck=False
"""Compiled CSR kernels: matrix-vector and matrix-block application."""

import numpy as np

cimport numpy as cnp

cnp.import_array()


def csr_matvec(const cnp.int64_t[::1] indptr, const cnp.int64_t[::1] indices,
               const double complex[::1] data, const double complex[::1] x):
    """y = A @ x for a CSR matrix A with ``len(indptr) - 1`` rows."""
    cdef Py_ssize_t nrows = indptr.shape[0] - 1
    out_arr = np.zeros(nrows, dtype=np.complex128)
    cdef double complex[::1] out = out_arr
    cdef Py_ssize_t i, k
    cdef double complex acc
    for i in range(nrows):
        acc = 0
        for k in range(indptr[i], indptr[i + 1]):
            acc = acc + data[k] * x[indices[k]]
        out[i] = acc
    return out_arr


def csr_matmat(const cnp.int64_t[::1] indptr, const cnp.int64_t[::1] indices,
               const double complex[::1] data, const double complex[:, ::1] x):
    """Y = A @ X for CSR A and dense X of shape (ncols, k)."""
    cdef Py_ssize_t nrows = indptr.shape[0] - 1
    cdef Py_ssize_t nvec = x.shape[1]
    out_arr = np.zeros((nrows, nvec), dtype=np.complex128)
    cdef double complex[:, ::1] out = out_arr
    cdef Py_ssize_t i, k, v, col
    cdef double complex coeff
    for i in range(nrows):
        for k in range(indptr[i], indptr[i + 1]):
            coeff = data[k]
            col = indices[k]
            for v in range(nvec):
                out[i, v] = out[i, v] + coeff * x[col, v]
    return out_arr
