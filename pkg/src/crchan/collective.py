"""Collective generators J_x, J_y, J_z, J_+/-, J^2 on n qudits.

Index convention: site 1 is the most significant digit, so the product state
|i_1 ... i_n> sits at integer index sum_k (i_k + s) * d^(n-k).  The doubled
weight 2m of every index is precomputed; J_z is diagonal with entry m, and
each stored entry of J_+ (J_-) connects weight m to m+1 (m-1) exactly.

Ladder identity used for the Casimir, verified against the dense definition
in the test suite: J_- J_+ = Jx^2 + Jy^2 - Jz, hence

    J^2 = J_- J_+ + Jz^2 + Jz.
"""

from __future__ import annotations

import os
from dataclasses import dataclass, field

import numpy as np

from .errors import BadDimension, DimensionBudgetExceeded, ShapeMismatch
from .halves import half
from .sparse import SparseOperator
from .spin import SpinRep, make_spin_rep

DEFAULT_BUDGET_DIM = 4096
BUDGET_ENV_VAR = "CRC_BUDGET_DIM"


def budget_dim(override: int | None = None) -> int:
    """Effective dimension budget: explicit override, else env var, else 4096."""
    if override is not None:
        return int(override)
    env = os.environ.get(BUDGET_ENV_VAR)
    return int(env) if env else DEFAULT_BUDGET_DIM


@dataclass(frozen=True)
class BasisLabel:
    """Occupancies i_1..i_n of one product basis state, as doubled integers."""

    twice_occupancies: tuple[int, ...]

    @property
    def occupancies(self) -> tuple[float, ...]:
        return tuple(t / 2.0 for t in self.twice_occupancies)

    @property
    def twice_weight(self) -> int:
        return sum(self.twice_occupancies)

    @property
    def weight(self) -> float:
        return self.twice_weight / 2.0

    @classmethod
    def from_index(cls, index: int, n: int, d: int) -> "BasisLabel":
        digits = []
        for k in range(n):
            digits.append(index // d ** (n - 1 - k) % d)
        return cls(tuple(2 * dig - (d - 1) for dig in digits))

    def to_index(self, d: int) -> int:
        index = 0
        for t in self.twice_occupancies:
            index = index * d + (t + d - 1) // 2
        return index


def weight_of(label: BasisLabel) -> float:
    """Total weight m = sum of site occupancies."""
    return label.weight


@dataclass(frozen=True)
class CollectiveSystem:
    """The collective generators of n spin-s sites on the d^n space."""

    n: int
    d: int
    dim: int
    rep: SpinRep
    Jx: SparseOperator
    Jy: SparseOperator
    Jz: SparseOperator
    Jplus: SparseOperator
    Jminus: SparseOperator
    Jsq: SparseOperator
    twice_weights: np.ndarray = field(repr=False)

    @property
    def twice_ns(self) -> int:
        return self.n * self.rep.twice_s

    @property
    def ns(self) -> float:
        return half(self.twice_ns)

    def twice_weight_values(self) -> list[int]:
        """All doubled weights, ascending: -2ns, -2ns+2, ..., 2ns."""
        return list(range(-self.twice_ns, self.twice_ns + 1, 2))

    def weight_indices(self, twice_m: int) -> np.ndarray:
        """Sorted basis indices of the weight space with doubled weight 2m."""
        return np.flatnonzero(self.twice_weights == twice_m)


def _site_digits(dim: int, n: int, d: int) -> np.ndarray:
    """(dim, n) table of digits, site 1 most significant."""
    idx = np.arange(dim)
    digits = np.empty((dim, n), dtype=np.int64)
    for k in range(n):
        digits[:, k] = idx // d ** (n - 1 - k) % d
    return digits


def build_collective_system(n: int, d: int, budget: int | None = None) -> CollectiveSystem:
    """Build J_x, J_y, J_z, J_+/- and J^2 as sparse operators on d^n space."""
    if n < 1:
        raise BadDimension(f"need at least one site, got n={n}")
    if d < 2:
        raise BadDimension(f"site dimension must be >= 2, got d={d}")
    dim = d**n
    limit = budget_dim(budget)
    if dim > limit:
        raise DimensionBudgetExceeded(f"dim {dim} = {d}^{n} exceeds budget {limit}")

    rep = make_spin_rep(d)
    s = rep.s
    digits = _site_digits(dim, n, d)
    twice_weights = (2 * digits - (d - 1)).sum(axis=1)

    # J_+ = sum over sites of the single-site raising embedding: raising site
    # k adds d^(n-k) to the index, with the standard ladder coefficient.
    m_of_digit = np.arange(d) - s
    coeff = np.sqrt(s * (s + 1) - m_of_digit * (m_of_digit + 1))
    rows_all, cols_all, vals_all = [], [], []
    idx = np.arange(dim)
    for k in range(n):
        stride = d ** (n - 1 - k)
        raisable = digits[:, k] < d - 1
        cols = idx[raisable]
        rows_all.append(cols + stride)
        cols_all.append(cols)
        vals_all.append(coeff[digits[raisable, k]].astype(np.complex128))
    jplus = SparseOperator.from_coo(
        dim,
        dim,
        np.concatenate(rows_all),
        np.concatenate(cols_all),
        np.concatenate(vals_all),
    )
    jminus = jplus.dagger()
    jx = (jplus + jminus) * 0.5
    jy = (jplus - jminus) * (-0.5j)
    jz = SparseOperator.diagonal(twice_weights / 2.0)
    jz_sq = SparseOperator.diagonal((twice_weights / 2.0) ** 2)
    jsq = (jminus @ jplus) + jz_sq + jz

    twice_weights = twice_weights.astype(np.int64)
    twice_weights.flags.writeable = False
    return CollectiveSystem(n, d, dim, rep, jx, jy, jz, jplus, jminus, jsq, twice_weights)


def apply_sparse(op: SparseOperator, v: np.ndarray) -> np.ndarray:
    """Sparse matrix-vector product with a shape check."""
    v = np.asarray(v)
    if v.ndim != 1 or v.shape[0] != op.ncols:
        raise ShapeMismatch(f"vector of shape {v.shape} against operator {op.shape}")
    return op.matvec(v)
