"""Spin-s generator triple for a single qudit of dimension d = 2s + 1.

Basis ordering is ascending weight: index 0 holds m = -s, index d-1 holds
m = +s, so sigma_z = diag(-s, ..., s) and the all-minus product state of a
chain sits at tensor index 0.
"""

from __future__ import annotations

from dataclasses import dataclass

import numpy as np

from .errors import BadDimension


@dataclass(frozen=True)
class SpinRep:
    """Single-site generators; all matrices are d x d complex."""

    d: int
    sigma_x: np.ndarray
    sigma_y: np.ndarray
    sigma_z: np.ndarray
    sigma_plus: np.ndarray
    sigma_minus: np.ndarray

    @property
    def s(self) -> float:
        return (self.d - 1) / 2

    @property
    def twice_s(self) -> int:
        return self.d - 1


def make_spin_rep(d: int) -> SpinRep:
    """Ladder construction: <m+1|S+|m> = sqrt(s(s+1) - m(m+1)).

    Reproduces the spin-1/2 matrices at d = 2 (up to the ascending-weight
    basis order) and satisfies the su(2) commutation relations exactly up to
    floating error for every d.
    """
    if d < 2:
        raise BadDimension(f"site dimension must be >= 2, got {d}")
    s = (d - 1) / 2
    m = np.arange(d) - s
    sp = np.zeros((d, d), dtype=np.complex128)
    sp[np.arange(1, d), np.arange(d - 1)] = np.sqrt(s * (s + 1) - m[:-1] * (m[:-1] + 1))
    sm = sp.conj().T.copy()
    sx = (sp + sm) / 2
    sy = (sp - sm) / 2j
    sz = np.diag(m.astype(np.complex128))
    for a in (sx, sy, sz, sp, sm):
        a.flags.writeable = False
    return SpinRep(d, sx, sy, sz, sp, sm)


def check_su2_relations(rep: SpinRep) -> float:
    """Max Frobenius deviation over the three su(2) commutation relations."""

    def comm(a, b):
        return a @ b - b @ a

    return float(
        max(
            np.linalg.norm(comm(rep.sigma_x, rep.sigma_y) - 1j * rep.sigma_z),
            np.linalg.norm(comm(rep.sigma_z, rep.sigma_x) - 1j * rep.sigma_y),
            np.linalg.norm(comm(rep.sigma_y, rep.sigma_z) - 1j * rep.sigma_x),
        )
    )
