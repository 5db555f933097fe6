"""Noiseless-subsystem encoding into one multiplicity factor.

A block j of the decomposition factorizes as (logical p_j) x (gauge q_j);
collective rotations act only on the gauge factor, so states encoded as
logical (x) gauge survive any collective noise.  Decoding compresses with the
encoder isometry and traces out the gauge factor.
"""

from __future__ import annotations

from dataclasses import dataclass
from typing import NamedTuple

import numpy as np

from .channel import build_channel
from .collective import CollectiveSystem
from .errors import BlockLeakage, NotDensity, ShapeMismatch
from .linalg import herm_expm
from .structure import StructureDecomposition

_MASK64 = (1 << 64) - 1


def _splitmix64(state: int) -> tuple[int, int]:
    """One splitmix64 step: (output, advanced state)."""
    state = (state + 0x9E3779B97F4A7C15) & _MASK64
    z = state
    z = ((z ^ (z >> 30)) * 0xBF58476D1CE4E5B9) & _MASK64
    z = ((z ^ (z >> 27)) * 0x94D049BB133111EB) & _MASK64
    return z ^ (z >> 31), state


def trial_seed(master: int, trial: int) -> int:
    """Seed of one trial: the master state advanced trial+1 splitmix steps."""
    state = master & _MASK64
    out = 0
    for _ in range(trial + 1):
        out, state = _splitmix64(state)
    return out


def ensure_density(rho: np.ndarray, name: str = "state") -> np.ndarray:
    """Validate Hermiticity, unit trace and positivity of a density matrix."""
    rho = np.asarray(rho, dtype=np.complex128)
    if rho.ndim != 2 or rho.shape[0] != rho.shape[1]:
        raise NotDensity(f"{name} must be a square matrix, got shape {rho.shape}")
    if np.linalg.norm(rho - rho.conj().T) > 1e-12 * max(np.linalg.norm(rho), 1.0):
        raise NotDensity(f"{name} is not Hermitian")
    if abs(np.trace(rho).real - 1.0) > 1e-12 or abs(np.trace(rho).imag) > 1e-12:
        raise NotDensity(f"{name} has trace {np.trace(rho)}, expected 1")
    if np.linalg.eigvalsh((rho + rho.conj().T) / 2).min() < -1e-10:
        raise NotDensity(f"{name} has a negative eigenvalue")
    return rho


# Relative eigenvalue floor inside the fidelity: the square roots amplify
# 1e-16-level eigenvalue noise of (near-)pure states to 1e-8, which would
# swamp the 1e-12 agreement with the pure-state overlap shortcut.
_FIDELITY_EIG_FLOOR = 1e-13


def _clip_spectrum(w: np.ndarray) -> np.ndarray:
    w = np.clip(w, 0.0, None)
    top = w.max(initial=0.0)
    w[w < _FIDELITY_EIG_FLOOR * top] = 0.0
    return w


def _psd_sqrt(rho: np.ndarray) -> np.ndarray:
    w, v = np.linalg.eigh((rho + rho.conj().T) / 2)
    return (v * np.sqrt(_clip_spectrum(w))) @ v.conj().T


def fidelity(a: np.ndarray, b: np.ndarray) -> float:
    """Uhlmann fidelity (tr sqrt(sqrt(a) b sqrt(a)))^2."""
    a = np.asarray(a, dtype=np.complex128)
    b = np.asarray(b, dtype=np.complex128)
    if a.shape != b.shape:
        raise ShapeMismatch(f"shape mismatch: {a.shape} vs {b.shape}")
    root = _psd_sqrt(a)
    w = _clip_spectrum(np.linalg.eigvalsh(root @ b @ root))
    return float(np.sum(np.sqrt(w)) ** 2)


def partial_trace(rho: np.ndarray, dims: tuple[int, ...], keep: tuple[int, ...]) -> np.ndarray:
    """Partial trace over all factors not in ``keep`` (dims in tensor order)."""
    nsys = len(dims)
    rho = np.asarray(rho, dtype=np.complex128).reshape(dims + dims)
    keep = tuple(sorted(keep))
    traced = [k for k in range(nsys) if k not in keep]
    for offset, k in enumerate(traced):
        axis = k - offset
        rho = np.trace(rho, axis1=axis, axis2=axis + rho.ndim // 2)
    size = int(np.prod([dims[k] for k in keep])) if keep else 1
    return rho.reshape(size, size)


@dataclass(frozen=True)
class NoiselessCode:
    """Encoder isometry into the (logical x gauge) factorization of block j."""

    decomp: StructureDecomposition
    twice_j: int
    logical_dim: int
    gauge_dim: int
    encoder: np.ndarray  # (d^n, p*q), columns (mu outer, m inner)

    @property
    def j(self) -> float:
        return self.twice_j / 2.0

    @property
    def trivial(self) -> bool:
        return self.logical_dim == 1


def make_code(decomp: StructureDecomposition, j: float) -> NoiselessCode:
    """Code for block j; raises UnknownBlock for labels outside the census."""
    block = decomp.block(j)
    return NoiselessCode(decomp, block.twice_j, block.p, block.q, block.isometry())


def encode(code: NoiselessCode, logical: np.ndarray, gauge: np.ndarray | None = None) -> np.ndarray:
    """rho = W (logical x gauge) W^dag; gauge defaults to maximally mixed."""
    logical = ensure_density(logical, "logical state")
    if logical.shape != (code.logical_dim, code.logical_dim):
        raise ShapeMismatch(
            f"logical state of shape {logical.shape}, expected"
            f" ({code.logical_dim}, {code.logical_dim})"
        )
    if gauge is None:
        gauge = np.eye(code.gauge_dim, dtype=np.complex128) / code.gauge_dim
    gauge = ensure_density(gauge, "gauge state")
    if gauge.shape != (code.gauge_dim, code.gauge_dim):
        raise ShapeMismatch(
            f"gauge state of shape {gauge.shape}, expected"
            f" ({code.gauge_dim}, {code.gauge_dim})"
        )
    w = code.encoder
    return w @ np.kron(logical, gauge) @ w.conj().T


class DecodeResult(NamedTuple):
    logical: np.ndarray
    leakage: float


def decode(code: NoiselessCode, rho: np.ndarray) -> DecodeResult:
    """Compress with the encoder and trace out the gauge factor.

    The logical state is renormalized by the block weight tr(P_j rho);
    leakage = 1 - tr(P_j rho).  Raises BlockLeakage above 0.5.
    """
    rho = ensure_density(rho, "channel output")
    if rho.shape != (code.decomp.dim, code.decomp.dim):
        raise ShapeMismatch(f"state of shape {rho.shape} against dim {code.decomp.dim}")
    w = code.encoder
    compressed = w.conj().T @ rho @ w
    block_weight = float(np.trace(compressed).real)
    leakage = 1.0 - block_weight
    if leakage > 0.5:
        raise BlockLeakage(f"leakage {leakage:.3f} > 0.5: state is outside the block")
    p, q = code.logical_dim, code.gauge_dim
    logical = partial_trace(compressed, (p, q), (0,)) / block_weight
    return DecodeResult(logical, leakage)


# ---------------------------------------------------------------------------
# noise simulation


class NoiseReport(NamedTuple):
    mode: str
    trials: int
    min_fidelity: float
    mean_fidelity: float
    max_leakage: float
    control_min_fidelity: float | None


def random_ball_point(rng: np.random.Generator) -> np.ndarray:
    """Uniform draw from the closed unit ball (rejection from the cube)."""
    while True:
        r = rng.uniform(-1.0, 1.0, size=3)
        if np.dot(r, r) <= 1.0:
            return r


def _random_pure_density(rng: np.random.Generator, dim: int) -> np.ndarray:
    psi = rng.normal(size=dim) + 1j * rng.normal(size=dim)
    psi /= np.linalg.norm(psi)
    return np.outer(psi, psi.conj())


def collective_rotation(system: CollectiveSystem, r: np.ndarray) -> np.ndarray:
    """exp(-i 2 pi r . J) as a dense unitary."""
    h = (
        r[0] * system.Jx.to_dense()
        + r[1] * system.Jy.to_dense()
        + r[2] * system.Jz.to_dense()
    )
    return herm_expm(h, -2.0 * np.pi)


def _control_embed(system: CollectiveSystem, logical: np.ndarray) -> np.ndarray:
    """Unprotected reference: the logical state on raw site 1 (zero-padded
    to the site dimension), remaining sites in the bottom weight state."""
    d, n = system.d, system.n
    site = np.zeros((d, d), dtype=np.complex128)
    p = logical.shape[0]
    site[:p, :p] = logical
    rest = np.zeros((d ** (n - 1), d ** (n - 1)), dtype=np.complex128)
    rest[0, 0] = 1.0
    return np.kron(site, rest)


def _control_extract(system: CollectiveSystem, rho: np.ndarray, p: int) -> np.ndarray:
    reduced = partial_trace(rho, (system.d, system.d ** (system.n - 1)), (0,))
    corner = reduced[:p, :p]
    weight = float(np.trace(corner).real)
    if weight <= 0.0:
        return np.eye(p, dtype=np.complex128) / p
    return corner / weight


def simulate_noise(
    code: NoiselessCode,
    mode: str = "random-rotations",
    trials: int = 100,
    seed: int = 0,
    thetas: tuple[float, float, float] | None = None,
    negative_control: bool = False,
) -> NoiseReport:
    """Subject encoded random pure logical states to collective noise.

    ``random-rotations`` draws one rotation axis per trial from the unit
    ball and conjugates by exp(-i 2 pi r . J); ``channel`` composes the
    3-Kraus channel, one application per trial step.  Per-trial randomness
    is derived from the master seed by splitmix64 advancement, so results
    are identical regardless of execution order.
    """
    if trials < 1:
        raise ValueError(f"need at least one trial, got {trials}")
    if mode not in ("random-rotations", "channel"):
        raise ValueError(f"unknown noise mode: {mode!r}")
    system = code.decomp.system
    # The raw-site control state only exists when the logical state fits on
    # one site.
    if negative_control and code.logical_dim > system.d:
        negative_control = False
    fidelities: list[float] = []
    leakages: list[float] = []
    control_fidelities: list[float] = []

    if mode == "random-rotations":
        for trial in range(trials):
            rng = np.random.default_rng(trial_seed(seed, trial))
            logical = _random_pure_density(rng, code.logical_dim)
            rotation = collective_rotation(system, random_ball_point(rng))
            noisy = rotation @ encode(code, logical) @ rotation.conj().T
            decoded = decode(code, noisy)
            fidelities.append(fidelity(logical, decoded.logical))
            leakages.append(decoded.leakage)
            if negative_control:
                raw = rotation @ _control_embed(system, logical) @ rotation.conj().T
                control_fidelities.append(
                    fidelity(logical, _control_extract(system, raw, code.logical_dim))
                )
    else:
        channel = build_channel(system, thetas)
        rng = np.random.default_rng(trial_seed(seed, 0))
        logical = _random_pure_density(rng, code.logical_dim)
        rho = encode(code, logical)
        control = _control_embed(system, logical) if negative_control else None
        for _ in range(trials):
            rho = channel.apply(rho)
            decoded = decode(code, rho)
            fidelities.append(fidelity(logical, decoded.logical))
            leakages.append(decoded.leakage)
            if negative_control:
                control = channel.apply(control)
                control_fidelities.append(
                    fidelity(logical, _control_extract(system, control, code.logical_dim))
                )

    return NoiseReport(
        mode,
        trials,
        min(fidelities),
        float(np.mean(fidelities)),
        max(leakages),
        min(control_fidelities) if control_fidelities else None,
    )
