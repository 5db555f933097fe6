"""Numpy implementations of the CSR kernels (fallback backend).

Same call signatures as the compiled module: CSR arrays are int64
``indptr``/``indices`` plus complex128 ``data``.
"""

import numpy as np


def csr_matvec(indptr, indices, data, x):
    """y = A @ x for a CSR matrix A with ``len(indptr) - 1`` rows."""
    nrows = indptr.shape[0] - 1
    out = np.zeros(nrows, dtype=np.complex128)
    if data.shape[0] == 0:
        return out
    prod = data * x[indices]
    nonempty = np.diff(indptr) > 0
    # reduceat segments between consecutive non-empty row starts cover
    # exactly one row each, because empty rows contribute no entries.
    out[nonempty] = np.add.reduceat(prod, indptr[:-1][nonempty])
    return out


def csr_matmat(indptr, indices, data, x):
    """Y = A @ X for CSR A and dense X of shape (ncols, k)."""
    nrows = indptr.shape[0] - 1
    out = np.zeros((nrows, x.shape[1]), dtype=np.complex128)
    if data.shape[0] == 0:
        return out
    prod = data[:, None] * x[indices, :]
    nonempty = np.diff(indptr) > 0
    out[nonempty] = np.add.reduceat(prod, indptr[:-1][nonempty], axis=0)
    return out
