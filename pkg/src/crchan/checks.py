"""Verification suite behind the ``verify`` command.

Each check returns a :class:`CheckResult`; oracle checks (anything that
densifies the superoperator or stacks commutator maps) are skipped, never
passed, when the dimension exceeds the oracle budget.
"""

from __future__ import annotations

import itertools
from dataclasses import dataclass

import numpy as np

from .channel import build_channel, fixed_point_basis
from .collective import CollectiveSystem, build_collective_system
from .commutant import (
    algebra_dimension,
    brute_force_commutant,
    span_equal,
    structural_commutant_basis,
)
from .linalg import DEFAULT_TOL, Tolerances
from .spin import check_su2_relations
from .structure import (
    StructureDecomposition,
    conjugate_to_blocks,
    construct_irrep_basis,
    mu_subblock_deviation,
    predicted_multiplicities,
)

DEFAULT_ORACLE_BUDGET = 64


@dataclass(frozen=True)
class CheckResult:
    name: str
    status: str  # PASS / FAIL / SKIP
    residual: float | None = None
    note: str = ""

    @property
    def failed(self) -> bool:
        return self.status == "FAIL"

    def render(self) -> str:
        parts = [f"{self.status:<4} {self.name}"]
        if self.residual is not None:
            parts.append(f"residual={self.residual:.3e}")
        if self.note:
            parts.append(f"({self.note})")
        return "  ".join(parts)


def _result(name: str, residual: float, bound: float, note: str = "") -> CheckResult:
    status = "PASS" if residual <= bound else "FAIL"
    return CheckResult(name, status, residual, note or f"bound {bound:.1e}")


def _sparse_norm(op) -> float:
    return float(np.linalg.norm(op.data))


def check_su2(system: CollectiveSystem) -> CheckResult:
    dev = check_su2_relations(system.rep)
    return _result("su2_relations", dev, 1e-12 * system.d)


def check_collective_commutation(system: CollectiveSystem) -> CheckResult:
    pairs = (
        (system.Jx, system.Jy, system.Jz),
        (system.Jz, system.Jx, system.Jy),
        (system.Jy, system.Jz, system.Jx),
    )
    dev = max(
        _sparse_norm((a @ b) - (b @ a) - c * 1j) for a, b, c in pairs
    )
    return _result("collective_commutation", dev, 1e-10 * system.dim)


def check_casimir_identity(system: CollectiveSystem) -> CheckResult:
    direct = (
        (system.Jx @ system.Jx) + (system.Jy @ system.Jy) + (system.Jz @ system.Jz)
    )
    dev = _sparse_norm(system.Jsq - direct)
    return _result("casimir_identity", dev, 1e-10 * system.dim)


def check_casimir_central(system: CollectiveSystem) -> CheckResult:
    dev = max(
        _sparse_norm((system.Jsq @ g) - (g @ system.Jsq))
        for g in (system.Jx, system.Jy, system.Jz)
    )
    return _result("casimir_central", dev, 1e-10 * system.dim)


def check_channel(system: CollectiveSystem, thetas=None) -> list[CheckResult]:
    channel = build_channel(system, thetas)
    eye = np.eye(system.dim)
    tp = np.linalg.norm(sum(e.conj().T @ e for e in channel.kraus) - eye)
    unital = np.linalg.norm(sum(e @ e.conj().T for e in channel.kraus) - eye)
    return [
        _result("channel_trace_preserving", float(tp), 1e-12 * system.dim),
        _result("channel_unital", float(unital), 1e-12 * system.dim),
    ]


def check_basis_unitary(decomp: StructureDecomposition, tol: Tolerances) -> CheckResult:
    u = decomp.unitary()
    dev = float(np.linalg.norm(u.conj().T @ u - np.eye(u.shape[1])))
    return _result("basis_unitary", dev, tol.rank_tol * decomp.dim)


def check_eigenrelations(decomp: StructureDecomposition, tol: Tolerances) -> CheckResult:
    """J_z v = m v and J^2 v = j(j+1) v on every constructed vector."""
    system = decomp.system
    worst = 0.0
    for block in decomp.blocks:
        jj = block.j * (block.j + 1)
        for tm in block.twice_m_values():
            vecs = np.column_stack(
                [block.vector(mu, tm / 2.0) for mu in range(block.p)]
            )
            worst = max(
                worst,
                float(np.abs(system.Jz.matmat(vecs) - (tm / 2.0) * vecs).max()),
                float(np.abs(system.Jsq.matmat(vecs) - jj * vecs).max()),
            )
    return _result("basis_eigenrelations", worst, tol.verify_tol)


def check_weighted_shift(decomp: StructureDecomposition, tol: Tolerances) -> CheckResult:
    """J_+ maps v[mu][m] to a nonnegative multiple of v[mu][m+1]; both
    ladder ends are annihilated."""
    system = decomp.system
    worst = 0.0
    for block in decomp.blocks:
        tms = block.twice_m_values()
        for mu in range(block.p):
            top = block.vector(mu, tms[-1] / 2.0)
            bottom = block.vector(mu, tms[0] / 2.0)
            worst = max(
                worst,
                float(np.linalg.norm(system.Jplus.matvec(top))),
                float(np.linalg.norm(system.Jminus.matvec(bottom))),
            )
            for k in range(len(tms) - 1):
                lifted = system.Jplus.matvec(block.vector(mu, tms[k] / 2.0))
                target = block.vector(mu, tms[k + 1] / 2.0)
                coeff = np.vdot(target, lifted)
                worst = max(
                    worst,
                    float(np.linalg.norm(lifted - coeff * target)),
                    float(abs(coeff.imag)),
                    float(max(0.0, -coeff.real)),
                )
    return _result("weighted_shift", worst, tol.verify_tol)


def check_casimir_constancy(decomp: StructureDecomposition, tol: Tolerances) -> CheckResult:
    system = decomp.system
    worst = 0.0
    constants = []
    for block in decomp.blocks:
        values = []
        for mu in range(block.p):
            for tm in block.twice_m_values():
                v = block.vector(mu, tm / 2.0)
                values.append(float(np.vdot(v, system.Jsq.matvec(v)).real))
        constants.append(np.mean(values))
        worst = max(worst, float(np.var(values)))
    distinct = all(
        abs(a - b) > 0.5 for a, b in itertools.combinations(constants, 2)
    )
    result = _result("casimir_constancy", worst, tol.verify_tol)
    if not distinct:
        return CheckResult("casimir_constancy", "FAIL", worst, "block constants collide")
    return result


def check_census(decomp: StructureDecomposition) -> CheckResult:
    predicted = predicted_multiplicities(decomp.system.n, decomp.system.d)
    actual = decomp.census()
    status = "PASS" if actual == predicted else "FAIL"
    return CheckResult("block_census", status, None, f"{len(actual)} blocks")


def check_block_pattern(decomp: StructureDecomposition, tol: Tolerances) -> CheckResult:
    """Conjugated generators are block diagonal with the 1_p (x) B pattern."""
    system = decomp.system
    worst = 0.0
    for gen in (system.Jx, system.Jy, system.Jz):
        blocks, residual = conjugate_to_blocks(decomp, gen.to_dense())
        worst = max(worst, residual)
        for (j, mat), block in zip(blocks, decomp.blocks):
            worst = max(worst, mu_subblock_deviation(mat, block.p, block.q))
    return _result("block_pattern", worst, tol.verify_tol * max(decomp.dim, 1))


def linked_block_deviation(
    decomp: StructureDecomposition, max_len: int = 3, max_power: int = 2
) -> float:
    """Max mu-spread of <j,m,mu| J_-^p1 A J_+^p2 |j,m,mu> over all monomials
    A of length <= max_len in {J_+, J_-, J_z} and powers p1, p2 <= max_power."""
    system = decomp.system
    ops = {"+": system.Jplus, "-": system.Jminus, "z": system.Jz}
    words = [
        word
        for length in range(max_len + 1)
        for word in itertools.product("+-z", repeat=length)
    ]
    worst = 0.0
    for block in decomp.blocks:
        if block.p < 2:
            continue
        for tm in block.twice_m_values():
            admissible = [
                p for p in range(max_power + 1) if tm + 2 * p <= block.twice_j
            ]
            if not admissible:
                continue
            # raised[p] holds J_+^p v[mu][m] for all mu, as columns.
            base = np.column_stack(
                [block.vector(mu, tm / 2.0) for mu in range(block.p)]
            )
            raised = {0: base}
            for p in range(1, max(admissible) + 1):
                raised[p] = system.Jplus.matmat(raised[p - 1])
            for word in words:
                for p2 in admissible:
                    image = raised[p2]
                    for symbol in reversed(word):
                        image = ops[symbol].matmat(image)
                    for p1 in admissible:
                        values = np.einsum(
                            "im,im->m", raised[p1].conj(), image
                        )
                        spread = float(np.abs(values - values[0]).max())
                        worst = max(worst, spread)
    return worst


def check_linked_blocks(decomp: StructureDecomposition, tol: Tolerances) -> CheckResult:
    dev = linked_block_deviation(decomp)
    return _result("linked_block_identity", dev, tol.verify_tol)


def run_verification(
    n: int,
    d: int = 2,
    thetas: tuple[float, float, float] | None = None,
    tol: Tolerances = DEFAULT_TOL,
    budget: int | None = None,
    oracle_budget: int = DEFAULT_ORACLE_BUDGET,
) -> list[CheckResult]:
    """Run the full verification suite for one (n, d) system."""
    system = build_collective_system(n, d, budget)
    decomp = construct_irrep_basis(system, tol)
    results = [
        check_su2(system),
        check_collective_commutation(system),
        check_casimir_identity(system),
        check_casimir_central(system),
        check_basis_unitary(decomp, tol),
        check_eigenrelations(decomp, tol),
        check_weighted_shift(decomp, tol),
        check_casimir_constancy(decomp, tol),
        check_census(decomp),
        check_block_pattern(decomp, tol),
        check_linked_blocks(decomp, tol),
    ]

    if system.dim > oracle_budget:
        skip_note = f"dim {system.dim} > oracle budget {oracle_budget}"
        for name in (
            "channel_trace_preserving",
            "channel_unital",
            "fixed_point_dimension",
            "span_fixed_vs_brute",
            "span_fixed_vs_structural",
            "span_brute_vs_structural",
            "pair_sufficiency",
            "algebra_dimension",
        ):
            results.append(CheckResult(name, "SKIP", None, skip_note))
        return results

    results.extend(check_channel(system, thetas))
    channel = build_channel(system, thetas)
    fixed = fixed_point_basis(channel, tol, budget=oracle_budget)
    gens = [system.Jx.to_dense(), system.Jy.to_dense(), system.Jz.to_dense()]
    brute = brute_force_commutant(gens, tol, budget=oracle_budget)
    structural = structural_commutant_basis(decomp)
    expected_dim = sum(p * p for _, p, _ in predicted_multiplicities(n, d))

    dims_ok = len(fixed) == len(brute) == len(structural) == expected_dim
    results.append(
        CheckResult(
            "fixed_point_dimension",
            "PASS" if dims_ok else "FAIL",
            None,
            f"commutant dim {len(brute)} (predicted {expected_dim})",
        )
    )
    for name, pair in (
        ("span_fixed_vs_brute", (fixed, brute.elements)),
        ("span_fixed_vs_structural", (fixed, structural.elements)),
        ("span_brute_vs_structural", (brute.elements, structural.elements)),
    ):
        equal, gap = span_equal(pair[0], pair[1], tol)
        results.append(CheckResult(name, "PASS" if equal else "FAIL", gap))

    pair_basis = brute_force_commutant(
        [gens[0], gens[2]], tol, budget=oracle_budget, generator_id="Jx,Jz"
    )
    equal, gap = span_equal(pair_basis.elements, brute.elements, tol)
    results.append(CheckResult("pair_sufficiency", "PASS" if equal else "FAIL", gap))

    alg = algebra_dimension(gens, tol, budget=oracle_budget)
    expected_alg = sum(q * q for _, _, q in predicted_multiplicities(n, d))
    alg_ok = alg.stabilized and alg.dimension == expected_alg
    results.append(
        CheckResult(
            "algebra_dimension",
            "PASS" if alg_ok else "FAIL",
            None,
            f"dim {alg.dimension} (predicted {expected_alg})",
        )
    )
    return results
