"""The 3-Kraus collective rotation channel and its fixed-point set.

The channel is E(T) = sum_k E_k T E_k^dag with E_k = exp(i theta_k J_k) / sqrt(3)
for k in {x, y, z}.  Any nonzero angles work as long as e^(i theta m) stays
injective on the weight spectrum {-ns..ns}; the guard |theta| * 2ns < 2pi
enforces that, and the defaults (0.9, 1.0, 1.1) * pi / (2ns + 1) satisfy it
for every system size.
"""

from __future__ import annotations

import math
from dataclasses import dataclass

import numpy as np

from .collective import CollectiveSystem
from .errors import DegenerateAngle, DimensionBudgetExceeded, ShapeMismatch
from .linalg import DEFAULT_TOL, Tolerances, herm_expm, null_space

DEFAULT_SUPEROP_BUDGET = 64


def default_thetas(twice_ns: int) -> tuple[float, float, float]:
    base = math.pi / (twice_ns + 1)
    return (0.9 * base, 1.0 * base, 1.1 * base)


@dataclass(frozen=True)
class RotationChannel:
    """Collective rotation channel on one system, with fixed Kraus triple."""

    system: CollectiveSystem
    thetas: tuple[float, float, float]
    kraus: tuple[np.ndarray, np.ndarray, np.ndarray]

    @property
    def dim(self) -> int:
        return self.system.dim

    def apply(self, t: np.ndarray) -> np.ndarray:
        """E(T) = sum_k E_k T E_k^dag."""
        t = np.asarray(t, dtype=np.complex128)
        if t.shape != (self.dim, self.dim):
            raise ShapeMismatch(f"operator of shape {t.shape} against dim {self.dim}")
        out = np.zeros_like(t)
        for e in self.kraus:
            out += e @ t @ e.conj().T
        return out

    def superoperator(self, budget: int = DEFAULT_SUPEROP_BUDGET) -> np.ndarray:
        """Matrix S with S vec(T) = vec(E(T)), column-stacking vectorization."""
        if self.dim > budget:
            raise DimensionBudgetExceeded(
                f"superoperator needs dim <= {budget}, got {self.dim}"
            )
        s = np.zeros((self.dim**2, self.dim**2), dtype=np.complex128)
        for e in self.kraus:
            # vec(E T E^dag) = (conj(E) kron E) vec(T) for column stacking.
            s += np.kron(e.conj(), e)
        return s


def build_channel(
    system: CollectiveSystem, thetas: tuple[float, float, float] | None = None
) -> RotationChannel:
    """Build the channel; angles must be nonzero and |theta| * 2ns < 2pi."""
    if thetas is None:
        thetas = default_thetas(system.twice_ns)
    thetas = tuple(float(t) for t in thetas)
    if len(thetas) != 3:
        raise DegenerateAngle(f"expected three angles, got {len(thetas)}")
    for theta in thetas:
        if theta == 0.0 or abs(theta) * system.twice_ns >= 2 * math.pi:
            raise DegenerateAngle(
                f"angle {theta} is zero or aliases the weight spectrum"
            )
    gens = (system.Jx, system.Jy, system.Jz)
    kraus = tuple(
        herm_expm(g.to_dense(), theta) / math.sqrt(3.0)
        for g, theta in zip(gens, thetas)
    )
    return RotationChannel(system, thetas, kraus)


def superoperator(channel: RotationChannel, budget: int = DEFAULT_SUPEROP_BUDGET) -> np.ndarray:
    return channel.superoperator(budget)


def fixed_point_basis(
    channel: RotationChannel,
    tol: Tolerances = DEFAULT_TOL,
    budget: int = DEFAULT_SUPEROP_BUDGET,
) -> list[np.ndarray]:
    """Orthonormal (Frobenius) basis of Fix(E) = {T : E(T) = T}.

    Computed as the kernel of S - I on vectorized operators; devectorized
    with the same column-stacking convention.
    """
    s = channel.superoperator(budget)
    kernel = null_space(s - np.eye(s.shape[0]), tol)
    dim = channel.dim
    return [kernel[:, i].reshape((dim, dim), order="F") for i in range(kernel.shape[1])]
