"""Brute-force, representation-free commutant and algebra-dimension oracles.

These never look at the ladder construction: the commutant is the joint
kernel of the vectorized commutator maps X -> [X, G_k], and the algebra
dimension grows a Krylov-style layer of monomials until the span stabilizes.
They exist to cross-check the structural predictions.
"""

from __future__ import annotations

from dataclasses import dataclass
from typing import NamedTuple

import numpy as np

from .errors import DimensionBudgetExceeded, ShapeMismatch
from .linalg import DEFAULT_TOL, Tolerances, null_space
from .structure import StructureDecomposition

DEFAULT_ORACLE_BUDGET = 128


@dataclass(frozen=True)
class CommutantBasis:
    """Orthonormal (Frobenius) basis of a commutant, with provenance id."""

    elements: list[np.ndarray]
    generator_id: str

    def __len__(self) -> int:
        return len(self.elements)


def _as_generators(generators) -> list[np.ndarray]:
    gens = [np.asarray(g, dtype=np.complex128) for g in generators]
    if not gens:
        raise ValueError("need at least one generator")
    dim = gens[0].shape[0]
    for g in gens:
        if g.shape != (dim, dim):
            raise ShapeMismatch("generators must be square and same-dimensional")
    return gens


def brute_force_commutant(
    generators,
    tol: Tolerances = DEFAULT_TOL,
    budget: int = DEFAULT_ORACLE_BUDGET,
    generator_id: str = "generators",
) -> CommutantBasis:
    """Joint commutant of the given matrices via one stacked kernel problem.

    For column-stacking vectorization, vec(XG - GX) = (G^T kron I - I kron G)
    vec(X); the rows for every generator are stacked and the kernel is an
    orthonormal basis of the commutant.
    """
    gens = _as_generators(generators)
    dim = gens[0].shape[0]
    if dim > budget:
        raise DimensionBudgetExceeded(f"commutant oracle needs dim <= {budget}, got {dim}")
    eye = np.eye(dim)
    stacked = np.vstack([np.kron(g.T, eye) - np.kron(eye, g) for g in gens])
    kernel = null_space(stacked, tol)
    elements = [
        kernel[:, i].reshape((dim, dim), order="F") for i in range(kernel.shape[1])
    ]
    return CommutantBasis(elements, generator_id)


class AlgebraDimension(NamedTuple):
    dimension: int
    stabilized: bool


def algebra_dimension(
    generators,
    tol: Tolerances = DEFAULT_TOL,
    max_degree: int | None = None,
    budget: int = DEFAULT_ORACLE_BUDGET,
) -> AlgebraDimension:
    """Dimension of the unital algebra generated by the given matrices.

    Grows the span layer by layer (identity at degree 0, then G_k times the
    newest layer) and stops after two consecutive degrees with no rank
    growth.  If the cap is hit first the count is a lower bound and
    ``stabilized`` is False.
    """
    gens = _as_generators(generators)
    dim = gens[0].shape[0]
    if dim > budget:
        raise DimensionBudgetExceeded(f"algebra oracle needs dim <= {budget}, got {dim}")
    if max_degree is None:
        max_degree = 2 * dim

    basis: list[np.ndarray] = []  # orthonormal vectorized span
    newest: list[np.ndarray] = []  # matrices added in the last layer

    def absorb(mat: np.ndarray) -> bool:
        vec = mat.reshape(-1)
        for b in basis:
            vec = vec - (b.conj() @ vec) * b
        for b in basis:  # second pass for numerical safety
            vec = vec - (b.conj() @ vec) * b
        norm = np.linalg.norm(vec)
        if norm <= tol.rank_tol * max(np.linalg.norm(mat), 1.0):
            return False
        basis.append(vec / norm)
        return True

    absorb(np.eye(dim, dtype=np.complex128))
    newest = [np.eye(dim, dtype=np.complex128)]
    quiet_degrees = 0
    degree = 0
    while degree < max_degree and quiet_degrees < 2:
        degree += 1
        added: list[np.ndarray] = []
        for g in gens:
            for w in newest:
                candidate = g @ w
                if absorb(candidate):
                    added.append(candidate)
        newest = added if added else newest
        quiet_degrees = quiet_degrees + 1 if not added else 0
    return AlgebraDimension(len(basis), quiet_degrees >= 2)


class SpanComparison(NamedTuple):
    equal: bool
    gap: float


def span_equal(basis_a, basis_b, tol: Tolerances = DEFAULT_TOL) -> SpanComparison:
    """Compare two matrix spans via their Frobenius-orthogonal projectors.

    gap = ||P_A - P_B||_F; equal iff gap <= verify_tol * sqrt(rank).
    """
    mats_a = [np.asarray(m, dtype=np.complex128) for m in basis_a]
    mats_b = [np.asarray(m, dtype=np.complex128) for m in basis_b]
    if mats_a and mats_b and mats_a[0].shape != mats_b[0].shape:
        raise ShapeMismatch("bases live on different spaces")

    def projector(mats):
        if not mats:
            return None, 0
        cols = np.column_stack([m.reshape(-1) for m in mats])
        q, r = np.linalg.qr(cols)
        keep = np.abs(np.diag(r)) > tol.rank_tol * max(np.abs(np.diag(r)).max(), 1e-300)
        q = q[:, keep]
        return q @ q.conj().T, q.shape[1]

    pa, rank_a = projector(mats_a)
    pb, rank_b = projector(mats_b)
    if pa is None and pb is None:
        return SpanComparison(True, 0.0)
    if pa is None or pb is None:
        return SpanComparison(False, float(max(rank_a, rank_b)) ** 0.5)
    gap = float(np.linalg.norm(pa - pb))
    rank = max(rank_a, rank_b, 1)
    return SpanComparison(gap <= tol.verify_tol * rank**0.5, gap)


def structural_commutant_basis(decomp: StructureDecomposition) -> CommutantBasis:
    """The predicted commutant basis, built from the |j, m, mu> vectors.

    For each block j and each ordered pair (mu, nu) the element is the
    matrix unit sum_m v[mu][m] v[nu][m]^dag, normalized to unit Frobenius
    norm; there are sum_j p_j^2 of them and they commute with the collective
    generators by construction.
    """
    elements = []
    for b in decomp.blocks:
        w = b.isometry()  # columns (mu, m), mu outer
        for mu in range(b.p):
            left = w[:, mu * b.q : (mu + 1) * b.q]
            for nu in range(b.p):
                right = w[:, nu * b.q : (nu + 1) * b.q]
                elements.append((left @ right.conj().T) / np.sqrt(b.q))
    return CommutantBasis(elements, "structural")
