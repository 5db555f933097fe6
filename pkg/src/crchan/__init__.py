"""Collective rotation channels on n spin-s qudits.

Builds the collective generators and the 3-Kraus rotation channel neutrally
in the computational basis, predicts the exact block structure (j, p_j, q_j)
of the noise commutant combinatorially, constructs the block-diagonalizing
|j, m, mu> basis by a raising-ladder sweep, cross-checks everything against
brute-force oracles, and encodes logical states into noiseless subsystems.
"""

from ._kernels import BACKEND as KERNEL_BACKEND
from .channel import RotationChannel, build_channel, default_thetas, fixed_point_basis, superoperator
from .codec import (
    DecodeResult,
    NoiselessCode,
    NoiseReport,
    decode,
    encode,
    fidelity,
    make_code,
    partial_trace,
    simulate_noise,
)
from .collective import (
    BasisLabel,
    CollectiveSystem,
    apply_sparse,
    build_collective_system,
    weight_of,
)
from .commutant import (
    AlgebraDimension,
    CommutantBasis,
    SpanComparison,
    algebra_dimension,
    brute_force_commutant,
    span_equal,
    structural_commutant_basis,
)
from .errors import (
    BadDimension,
    BlockLeakage,
    CrchanError,
    DegenerateAngle,
    DimensionBudgetExceeded,
    InconsistentSpan,
    LiftCollapse,
    NotDensity,
    NotHermitian,
    OutOfRange,
    RankMismatch,
    ShapeMismatch,
    UnknownBlock,
)
from .linalg import (
    DEFAULT_TOL,
    Tolerances,
    dagger,
    frobenius_dist,
    herm_expm,
    kron,
    null_space,
    orthocomplement_basis,
)
from .sparse import SparseOperator
from .spin import SpinRep, check_su2_relations, make_spin_rep
from .structure import (
    IrrepBlock,
    StructureDecomposition,
    StructureReport,
    WeightSpace,
    central_projections,
    conjugate_to_blocks,
    construct_irrep_basis,
    predicted_multiplicities,
    structure_report,
    weight_decomposition,
    weight_dim,
)

__version__ = "0.1.0"
