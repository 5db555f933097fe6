"""Block decomposition of the collective-rotation noise commutant.

Combinatorial layer: weight-space dimensions by exact integer convolution,
and the multiplicity table

    p_j = dim V_j - dim V_{j+1}   (p_ns = 1),   q_j = 2j + 1,

over j in {ns, ns-1, ...} down to 0 or 1/2.  For d = 2 this reproduces the
binomial differences C(n, j+n/2) - C(n, j+n/2+1).

Numerical layer: the raising-ladder sweep.  Weights are visited from -ns
upward; every open block is lifted by J_+ and normalized, and the
orthocomplement of the lifted vectors inside the weight space seeds the p_j
new lowest-weight copies with j = -m.  Vectors are stored compactly on
weight-space coordinates, so the sweep only ever touches one weight block of
J_+ at a time.
"""

from __future__ import annotations

from dataclasses import dataclass, field

import numpy as np

from .collective import CollectiveSystem, budget_dim
from .errors import (
    DimensionBudgetExceeded,
    LiftCollapse,
    OutOfRange,
    RankMismatch,
    ShapeMismatch,
    UnknownBlock,
)
from .halves import format_half, half, twice
from .linalg import DEFAULT_TOL, Tolerances, null_space
from .sparse import SparseOperator

# ---------------------------------------------------------------------------
# combinatorics (exact integers throughout)


def _weight_dim_list(n: int, d: int) -> list[int]:
    """Weight-space dimensions ordered by ascending weight.

    Entry t corresponds to doubled weight 2m = 2t - n(d-1); values are the
    number of length-n digit strings over {0..d-1} with digit sum t.
    """
    dims = [1]
    for _ in range(n):
        new = [0] * (len(dims) + d - 1)
        for i, c in enumerate(dims):
            for k in range(d):
                new[i + k] += c
        dims = new
    return dims


def _twice_weight_values(n: int, d: int) -> list[int]:
    tns = n * (d - 1)
    return list(range(-tns, tns + 1, 2))


def weight_dim(n: int, d: int, m: float) -> int:
    """Dimension of the weight space V_m (exact integer count)."""
    tm = twice(m)
    tns = n * (d - 1)
    if abs(tm) > tns or (tm - tns) % 2 != 0:
        raise OutOfRange(f"no weight space at m={m!r} for n={n}, d={d}")
    return _weight_dim_list(n, d)[(tm + tns) // 2]


def _predicted_twice(n: int, d: int) -> list[tuple[int, int, int]]:
    """(twice_j, p_j, q_j) rows with p_j > 0, ascending j."""
    dims = _weight_dim_list(n, d)
    tns = n * (d - 1)

    def wdim(tj: int) -> int:
        return dims[(tj + tns) // 2] if tj <= tns else 0

    rows = []
    for tj in range(tns % 2, tns + 1, 2):
        p = wdim(tj) - wdim(tj + 2)
        if p > 0:
            rows.append((tj, p, tj + 1))
    return rows


def predicted_multiplicities(n: int, d: int) -> list[tuple[float, int, int]]:
    """(j, p_j, q_j) rows with p_j > 0, ascending j; pure combinatorics."""
    return [(half(tj), p, q) for tj, p, q in _predicted_twice(n, d)]


@dataclass(frozen=True)
class WeightSpace:
    """Computational basis indices sharing one J_z weight."""

    twice_m: int
    indices: np.ndarray

    @property
    def m(self) -> float:
        return half(self.twice_m)

    @property
    def dim(self) -> int:
        return int(self.indices.size)


def weight_decomposition(n: int, d: int, budget: int | None = None) -> list[WeightSpace]:
    """All weight spaces, ascending m; index lists partition 0..d^n - 1."""
    dim = d**n
    limit = budget_dim(budget)
    if dim > limit:
        raise DimensionBudgetExceeded(f"dim {dim} exceeds budget {limit}")
    digits_weight = np.zeros(dim, dtype=np.int64)
    idx = np.arange(dim)
    for k in range(n):
        digits_weight += 2 * (idx // d ** (n - 1 - k) % d) - (d - 1)
    spaces = []
    for tm in _twice_weight_values(n, d):
        indices = np.flatnonzero(digits_weight == tm)
        indices.flags.writeable = False
        spaces.append(WeightSpace(tm, indices))
    return spaces


# ---------------------------------------------------------------------------
# report


@dataclass(frozen=True)
class StructureReport:
    """Multiplicity table plus weight dimensions and totals for one (n, d)."""

    n: int
    d: int
    rows: tuple[tuple[int, int, int], ...]  # (twice_j, p, q)
    weight_dims: tuple[tuple[int, int], ...]  # (twice_m, dim)

    @property
    def total_dim(self) -> int:
        return sum(p * q for _, p, q in self.rows)

    @property
    def fix_dim(self) -> int:
        return sum(p * p for _, p, _ in self.rows)

    def to_dict(self) -> dict:
        return {
            "n": self.n,
            "d": self.d,
            "rows": [
                {"twice_j": tj, "p": p, "q": q, "pq": p * q, "p_squared": p * p}
                for tj, p, q in self.rows
            ],
            "weight_dims": [
                {"twice_m": tm, "dim": dim} for tm, dim in self.weight_dims
            ],
            "totals": {"dim": self.total_dim, "fix_dim": self.fix_dim},
        }

    def render_text(self) -> str:
        lines = [f"structure of the n={self.n}, d={self.d} collective rotation system"]
        header = f"{'j':>6} {'p_j':>8} {'q_j':>6} {'p*q':>8} {'p^2':>8}"
        lines.append(header)
        lines.append("-" * len(header))
        for tj, p, q in self.rows:
            lines.append(
                f"{format_half(tj):>6} {p:>8} {q:>6} {p * q:>8} {p * p:>8}"
            )
        lines.append("-" * len(header))
        lines.append(
            f"totals: dim = {self.total_dim} = {self.d}^{self.n},"
            f" fixed-point dim = {self.fix_dim}"
        )
        dims = " ".join(str(dim) for _, dim in self.weight_dims)
        lines.append(f"weight dims (m = {format_half(self.weight_dims[0][0])}"
                     f"..{format_half(self.weight_dims[-1][0])}): {dims}")
        return "\n".join(lines)


def structure_report(n: int, d: int = 2) -> StructureReport:
    """Combinatorial structure table; no matrices are built."""
    dims = _weight_dim_list(n, d)
    tms = _twice_weight_values(n, d)
    return StructureReport(
        n,
        d,
        tuple(_predicted_twice(n, d)),
        tuple(zip(tms, dims)),
    )


# ---------------------------------------------------------------------------
# the constructed basis


@dataclass
class IrrepBlock:
    """The p_j copies of the spin-j irreducible piece.

    ``levels[k]`` holds the p unit vectors of weight m = -j + k as columns,
    on the coordinates of that weight space.  ``vector(mu, m)`` materializes
    a full-length vector; mu is 0-based.
    """

    twice_j: int
    levels: list[np.ndarray]
    weight_indices: dict[int, np.ndarray] = field(repr=False)
    dim: int = 0

    @property
    def j(self) -> float:
        return half(self.twice_j)

    @property
    def q(self) -> int:
        return self.twice_j + 1

    @property
    def p(self) -> int:
        return int(self.levels[0].shape[1])

    def twice_m_values(self) -> list[int]:
        return list(range(-self.twice_j, self.twice_j + 1, 2))

    def compact_vector(self, mu: int, twice_m: int) -> np.ndarray:
        k = (twice_m + self.twice_j) // 2
        return self.levels[k][:, mu]

    def vector(self, mu: int, m: float) -> np.ndarray:
        tm = twice(m)
        out = np.zeros(self.dim, dtype=np.complex128)
        out[self.weight_indices[tm]] = self.compact_vector(mu, tm)
        return out

    @property
    def vectors(self) -> list[list[np.ndarray]]:
        return [
            [self.vector(mu, half(tm)) for tm in self.twice_m_values()]
            for mu in range(self.p)
        ]

    def isometry(self) -> np.ndarray:
        """(dim, p*q) matrix of the block vectors, mu outer, m inner."""
        w = np.zeros((self.dim, self.p * self.q), dtype=np.complex128)
        for mu in range(self.p):
            for k, tm in enumerate(self.twice_m_values()):
                w[self.weight_indices[tm], mu * self.q + k] = self.levels[k][:, mu]
        return w


@dataclass
class StructureDecomposition:
    """All irreducible blocks of one system, ascending j."""

    system: CollectiveSystem
    blocks: list[IrrepBlock]
    corrections: list[str]

    @property
    def dim(self) -> int:
        return self.system.dim

    def census(self) -> list[tuple[float, int, int]]:
        return [(b.j, b.p, b.q) for b in self.blocks]

    def block(self, j: float) -> IrrepBlock:
        tj = twice(j)
        for b in self.blocks:
            if b.twice_j == tj:
                return b
        raise UnknownBlock(f"no block with j={format_half(tj)}")

    def column_labels(self) -> list[tuple[int, int, int]]:
        """(twice_j, mu, twice_m) per unitary column; mu is 1-based here."""
        labels = []
        for b in self.blocks:
            for mu in range(b.p):
                for tm in b.twice_m_values():
                    labels.append((b.twice_j, mu + 1, tm))
        return labels

    def unitary(self) -> np.ndarray:
        """Columns are all basis vectors, ordered (j asc, mu asc, m asc)."""
        return np.hstack([b.isometry() for b in self.blocks])

    def central_projection(self, j: float) -> np.ndarray:
        w = self.block(j).isometry()
        return w @ w.conj().T

    def report(self) -> StructureReport:
        return structure_report(self.system.n, self.system.d)


def _raising_blocks(system: CollectiveSystem) -> dict[int, SparseOperator]:
    """Doubled weight 2m -> compact J_+ block from V_m into V_{m+1}."""
    rows, cols, vals = system.Jplus.coo()
    col_weight = system.twice_weights[cols]
    blocks = {}
    for tm in system.twice_weight_values()[:-1]:
        src = system.weight_indices(tm)
        dst = system.weight_indices(tm + 2)
        mask = col_weight == tm
        blocks[tm] = SparseOperator.from_coo(
            dst.size,
            src.size,
            np.searchsorted(dst, rows[mask]),
            np.searchsorted(src, cols[mask]),
            vals[mask],
        )
    return blocks


def construct_irrep_basis(
    system: CollectiveSystem, tol: Tolerances = DEFAULT_TOL
) -> StructureDecomposition:
    """Construct the full |j, m, mu> basis by the raising-ladder sweep.

    The block census is checked against the combinatorial prediction at every
    weight: a mismatch raises :class:`RankMismatch` (numerical failure), a
    vanishing lift raises :class:`LiftCollapse`.
    """
    predicted = {tj: p for tj, p, _ in _predicted_twice(system.n, system.d)}
    raising = _raising_blocks(system)
    weight_idx = {tm: system.weight_indices(tm) for tm in system.twice_weight_values()}
    corrections: list[str] = []
    open_groups: list[tuple[int, list[np.ndarray]]] = []  # (twice_j, levels)

    for tm in system.twice_weight_values():
        space_dim = weight_idx[tm].size
        lifting = [g for g in open_groups if g[0] >= tm]
        if lifting:
            block = raising[tm - 2]
            stacked = block.matmat(np.hstack([levels[-1] for _, levels in lifting]))
            norms = np.linalg.norm(stacked, axis=0)
            if np.any(norms <= tol.rank_tol):
                bad = int(np.argmin(norms))
                raise LiftCollapse(
                    f"lift collapsed at m={format_half(tm)} (column {bad})"
                )
            stacked /= norms
            col = 0
            pieces = []
            for tj, levels in lifting:
                p = levels[-1].shape[1]
                lifted = stacked[:, col : col + p]
                gram = lifted.conj().T @ lifted
                if np.abs(gram - np.eye(p)).max() > tol.rank_tol:
                    # Exact arithmetic keeps lifts orthonormal; correct the
                    # accumulated floating error and record the event.
                    w, v = np.linalg.eigh(gram)
                    lifted = lifted @ (v * w**-0.5) @ v.conj().T
                    corrections.append(
                        f"reorthonormalized j={format_half(tj)} at m={format_half(tm)}"
                    )
                levels.append(lifted)
                pieces.append(lifted)
                col += p
            all_lifted = np.hstack(pieces)
        else:
            all_lifted = np.zeros((space_dim, 0), dtype=np.complex128)

        expected_new = predicted.get(-tm, 0) if tm <= 0 else 0
        complement = null_space(all_lifted.conj().T, tol)
        if complement.shape[1] != expected_new:
            raise RankMismatch(
                f"complement at m={format_half(tm)} has dimension"
                f" {complement.shape[1]}, predicted {expected_new}"
            )
        if space_dim - complement.shape[1] != all_lifted.shape[1]:
            raise RankMismatch(
                f"lifted vectors at m={format_half(tm)} are rank deficient"
            )
        if expected_new:
            open_groups.append((-tm, [complement]))

    blocks = [
        IrrepBlock(tj, levels, weight_idx, system.dim)
        for tj, levels in sorted(open_groups, key=lambda g: g[0])
    ]
    return StructureDecomposition(system, blocks, corrections)


def central_projections(decomp: StructureDecomposition) -> list[tuple[float, np.ndarray]]:
    """Minimal central projections (j, P_j), ascending j."""
    return [(b.j, decomp.central_projection(b.j)) for b in decomp.blocks]


def conjugate_to_blocks(
    decomp: StructureDecomposition, a: np.ndarray
) -> tuple[list[tuple[float, np.ndarray]], float]:
    """U^dag A U sliced into the per-j diagonal blocks, plus the Frobenius
    norm of everything outside the block diagonal."""
    a = np.asarray(a, dtype=np.complex128)
    if a.shape != (decomp.dim, decomp.dim):
        raise ShapeMismatch(f"operator of shape {a.shape} against dim {decomp.dim}")
    u = decomp.unitary()
    rotated = u.conj().T @ a @ u
    blocks = []
    offset = 0
    off_block = rotated.copy()
    for b in decomp.blocks:
        size = b.p * b.q
        blocks.append((b.j, rotated[offset : offset + size, offset : offset + size]))
        off_block[offset : offset + size, offset : offset + size] = 0.0
        offset += size
    return blocks, float(np.linalg.norm(off_block))


def mu_subblock_deviation(block_matrix: np.ndarray, p: int, q: int) -> float:
    """Deviation of a conjugated algebra block from the 1_p (x) B pattern.

    Measures how far the p diagonal q x q sub-blocks are from equal and the
    off-diagonal sub-blocks from zero (max Frobenius norm).
    """
    ref = block_matrix[:q, :q]
    worst = 0.0
    for mu in range(p):
        for nu in range(p):
            sub = block_matrix[mu * q : (mu + 1) * q, nu * q : (nu + 1) * q]
            target = ref if mu == nu else 0.0
            worst = max(worst, float(np.linalg.norm(sub - target)))
    return worst
