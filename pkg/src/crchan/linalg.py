"""Dense complex linear algebra shared by all higher modules.

Rank and null-space decisions compare singular values against
``rank_tol * largest singular value`` (scale invariant).  Every orthonormal
basis produced here is phase-fixed so that the first significant coordinate
of each vector is real and positive, which makes outputs deterministic.
"""

from __future__ import annotations

from dataclasses import dataclass

import numpy as np

from .errors import InconsistentSpan, NotHermitian, ShapeMismatch


@dataclass(frozen=True)
class Tolerances:
    """Numerical thresholds used across the package.

    ``rank_tol`` governs rank and null-space decisions (relative to the
    largest singular value), ``verify_tol`` governs residual checks, and
    ``drop_tol`` is the magnitude below which sparse entries are discarded.
    """

    rank_tol: float = 1e-10
    verify_tol: float = 1e-9
    drop_tol: float = 0.0

    def __post_init__(self):
        if min(self.rank_tol, self.verify_tol, self.drop_tol) < 0:
            raise ValueError("tolerances must be nonnegative")
        if self.rank_tol >= 1:
            raise ValueError("rank_tol must be < 1")


DEFAULT_TOL = Tolerances()


def as_complex_matrix(a) -> np.ndarray:
    m = np.asarray(a, dtype=np.complex128)
    if m.ndim != 2:
        raise ShapeMismatch(f"expected a 2-D matrix, got shape {m.shape}")
    return m


def kron(a, b) -> np.ndarray:
    """Tensor product with the first factor most significant."""
    return np.kron(as_complex_matrix(a), as_complex_matrix(b))


def dagger(a) -> np.ndarray:
    """Conjugate transpose."""
    return as_complex_matrix(a).conj().T.copy()


def frobenius_dist(a, b) -> float:
    """Frobenius distance between two same-shaped matrices."""
    a = as_complex_matrix(a)
    b = as_complex_matrix(b)
    if a.shape != b.shape:
        raise ShapeMismatch(f"shape mismatch: {a.shape} vs {b.shape}")
    return float(np.linalg.norm(a - b))


def herm_expm(h, theta: float, tol: Tolerances = DEFAULT_TOL) -> np.ndarray:
    """exp(i * theta * H) for Hermitian H, via eigendecomposition."""
    h = as_complex_matrix(h)
    if h.shape[0] != h.shape[1]:
        raise ShapeMismatch(f"expected a square matrix, got shape {h.shape}")
    deviation = np.linalg.norm(h - h.conj().T)
    if deviation > tol.verify_tol * np.linalg.norm(h):
        raise NotHermitian(
            f"matrix is not Hermitian: ||H - H^dag|| = {deviation:.3e}"
        )
    w, v = np.linalg.eigh((h + h.conj().T) / 2)
    return (v * np.exp(1j * theta * w)) @ v.conj().T


def fix_phase(v: np.ndarray, tol: Tolerances = DEFAULT_TOL) -> np.ndarray:
    """Rotate a global phase so the first significant coordinate is real > 0."""
    v = np.asarray(v, dtype=np.complex128)
    mags = np.abs(v)
    peak = mags.max(initial=0.0)
    if peak == 0.0:
        return v.copy()
    k = int(np.argmax(mags > tol.rank_tol * peak))
    return v * (v[k].conjugate() / mags[k])


def null_space(m, tol: Tolerances = DEFAULT_TOL) -> np.ndarray:
    """Orthonormal kernel basis of ``m`` (columns), phase-fixed.

    Keeps right singular vectors whose singular value is at most
    ``rank_tol`` times the largest one.  Returns a ``(cols, k)`` array;
    ``k`` may be zero.
    """
    m = as_complex_matrix(m)
    if m.shape[0] == 0:
        basis = np.eye(m.shape[1], dtype=np.complex128)
    else:
        _, s, vh = np.linalg.svd(m, full_matrices=True)
        smax = s[0] if s.size else 0.0
        rank = int(np.sum(s > tol.rank_tol * smax)) if smax > 0 else 0
        basis = vh[rank:].conj().T
    out = np.empty_like(basis)
    for i in range(basis.shape[1]):
        out[:, i] = fix_phase(basis[:, i], tol)
    return out


def _as_column_block(vectors, dim: int) -> np.ndarray:
    if isinstance(vectors, np.ndarray) and vectors.ndim == 2:
        return np.asarray(vectors, dtype=np.complex128)
    vectors = list(vectors)
    if not vectors:
        return np.zeros((dim, 0), dtype=np.complex128)
    return np.column_stack([np.asarray(v, dtype=np.complex128) for v in vectors])


def orthocomplement_basis(vectors, ambient, tol: Tolerances = DEFAULT_TOL) -> np.ndarray:
    """Orthonormal basis of span(ambient) minus span(vectors).

    ``ambient`` has orthonormal columns; ``vectors`` (columns, or a list of
    vectors, possibly empty) must lie in the ambient span.  Raises
    :class:`InconsistentSpan` when a vector has a component outside the
    ambient span above ``rank_tol`` (relative).
    """
    amb = as_complex_matrix(ambient)
    vecs = _as_column_block(vectors, amb.shape[0])
    if vecs.shape[0] != amb.shape[0]:
        raise ShapeMismatch(
            f"vectors live in dim {vecs.shape[0]}, ambient in dim {amb.shape[0]}"
        )
    coeff = amb.conj().T @ vecs
    residual = vecs - amb @ coeff
    for i in range(vecs.shape[1]):
        vnorm = np.linalg.norm(vecs[:, i])
        if np.linalg.norm(residual[:, i]) > tol.rank_tol * max(vnorm, 1.0):
            raise InconsistentSpan(
                f"vector {i} has a component outside the ambient span"
            )
    comp_coeff = null_space(coeff.conj().T, tol)
    out = amb @ comp_coeff
    for i in range(out.shape[1]):
        out[:, i] = fix_phase(out[:, i], tol)
    return out
