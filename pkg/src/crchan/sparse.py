"""Minimal CSR container for the collective operators.

Operators are built once per system from exact combinatorial data and are
immutable afterwards.  The hot path, repeated application to vectors and
dense blocks, is routed through the compiled kernel when it is available
(see :mod:`crchan._kernels`).  Everything else (sums, products, conversion)
is one-shot construction work done with vectorized numpy.
"""

from __future__ import annotations

from dataclasses import dataclass

import numpy as np

from . import _kernels
from .errors import ShapeMismatch


def _freeze(a: np.ndarray) -> np.ndarray:
    a.flags.writeable = False
    return a


@dataclass(frozen=True)
class SparseOperator:
    """Complex sparse matrix in CSR form (square in all public uses)."""

    nrows: int
    ncols: int
    indptr: np.ndarray
    indices: np.ndarray
    data: np.ndarray

    @classmethod
    def from_coo(cls, nrows, ncols, rows, cols, vals, drop_tol: float = 0.0):
        """Build from triplets; duplicate positions are summed, near-zero
        values (magnitude <= drop_tol, or exact zeros) are dropped."""
        rows = np.asarray(rows, dtype=np.int64)
        cols = np.asarray(cols, dtype=np.int64)
        vals = np.asarray(vals, dtype=np.complex128)
        if rows.size:
            order = np.lexsort((cols, rows))
            rows, cols, vals = rows[order], cols[order], vals[order]
            fresh = np.empty(rows.size, dtype=bool)
            fresh[0] = True
            fresh[1:] = (rows[1:] != rows[:-1]) | (cols[1:] != cols[:-1])
            starts = np.flatnonzero(fresh)
            vals = np.add.reduceat(vals, starts)
            rows, cols = rows[starts], cols[starts]
            keep = np.abs(vals) > drop_tol
            rows, cols, vals = rows[keep], cols[keep], vals[keep]
        indptr = np.zeros(nrows + 1, dtype=np.int64)
        np.cumsum(np.bincount(rows, minlength=nrows), out=indptr[1:])
        return cls(nrows, ncols, _freeze(indptr), _freeze(cols), _freeze(vals))

    @classmethod
    def from_dense(cls, a, drop_tol: float = 0.0):
        a = np.asarray(a, dtype=np.complex128)
        rows, cols = np.nonzero(np.abs(a) > drop_tol)
        return cls.from_coo(a.shape[0], a.shape[1], rows, cols, a[rows, cols], drop_tol)

    @classmethod
    def identity(cls, dim: int):
        idx = np.arange(dim)
        return cls.from_coo(dim, dim, idx, idx, np.ones(dim, dtype=np.complex128))

    @classmethod
    def diagonal(cls, diag):
        diag = np.asarray(diag, dtype=np.complex128)
        idx = np.arange(diag.size)
        return cls.from_coo(diag.size, diag.size, idx, idx, diag)

    @property
    def dim(self) -> int:
        if self.nrows != self.ncols:
            raise ShapeMismatch(f"operator is not square: {self.shape}")
        return self.nrows

    @property
    def shape(self):
        return (self.nrows, self.ncols)

    @property
    def nnz(self) -> int:
        return int(self.data.size)

    def coo(self):
        """(rows, cols, vals) triplet arrays."""
        rows = np.repeat(np.arange(self.nrows, dtype=np.int64), np.diff(self.indptr))
        return rows, self.indices.copy(), self.data.copy()

    def nonzeros(self):
        """Iterate stored entries as (row, col, value)."""
        rows, cols, vals = self.coo()
        for r, c, v in zip(rows, cols, vals):
            yield int(r), int(c), complex(v)

    def to_dense(self) -> np.ndarray:
        out = np.zeros(self.shape, dtype=np.complex128)
        rows, cols, vals = self.coo()
        out[rows, cols] = vals
        return out

    def dagger(self) -> "SparseOperator":
        rows, cols, vals = self.coo()
        return SparseOperator.from_coo(self.ncols, self.nrows, cols, rows, vals.conj())

    def matvec(self, v) -> np.ndarray:
        v = np.ascontiguousarray(v, dtype=np.complex128)
        if v.shape != (self.ncols,):
            raise ShapeMismatch(f"vector of length {v.shape} against {self.shape}")
        return _kernels.csr_matvec(self.indptr, self.indices, self.data, v)

    def matmat(self, x) -> np.ndarray:
        x = np.ascontiguousarray(x, dtype=np.complex128)
        if x.ndim != 2 or x.shape[0] != self.ncols:
            raise ShapeMismatch(f"block of shape {x.shape} against {self.shape}")
        return _kernels.csr_matmat(self.indptr, self.indices, self.data, x)

    def scaled(self, factor: complex) -> "SparseOperator":
        rows, cols, vals = self.coo()
        return SparseOperator.from_coo(self.nrows, self.ncols, rows, cols, vals * factor)

    def __add__(self, other: "SparseOperator") -> "SparseOperator":
        if self.shape != other.shape:
            raise ShapeMismatch(f"shape mismatch: {self.shape} vs {other.shape}")
        r1, c1, v1 = self.coo()
        r2, c2, v2 = other.coo()
        return SparseOperator.from_coo(
            self.nrows,
            self.ncols,
            np.concatenate([r1, r2]),
            np.concatenate([c1, c2]),
            np.concatenate([v1, v2]),
        )

    def __sub__(self, other: "SparseOperator") -> "SparseOperator":
        return self + other.scaled(-1.0)

    def __mul__(self, factor: complex) -> "SparseOperator":
        return self.scaled(factor)

    __rmul__ = __mul__

    def __matmul__(self, other):
        if isinstance(other, SparseOperator):
            return self._spmatmul(other)
        other = np.asarray(other)
        if other.ndim == 1:
            return self.matvec(other)
        return self.matmat(other)

    def _spmatmul(self, other: "SparseOperator") -> "SparseOperator":
        if self.ncols != other.nrows:
            raise ShapeMismatch(f"shape mismatch: {self.shape} @ {other.shape}")
        ra, ca, va = self.coo()
        # Every entry (i, k, a) of self contributes a * row_k(other) to row i.
        lens = np.diff(other.indptr)[ca]
        total = int(lens.sum())
        if total == 0:
            return SparseOperator.from_coo(self.nrows, other.ncols, [], [], [])
        starts = other.indptr[ca]
        offsets = np.arange(total) - np.repeat(np.cumsum(lens) - lens, lens)
        flat = np.repeat(starts, lens) + offsets
        out_rows = np.repeat(ra, lens)
        out_cols = other.indices[flat]
        out_vals = np.repeat(va, lens) * other.data[flat]
        return SparseOperator.from_coo(self.nrows, other.ncols, out_rows, out_cols, out_vals)
