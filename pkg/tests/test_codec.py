import numpy as np
import pytest
from numpy.testing import assert_allclose

from crchan.codec import (
    collective_rotation,
    decode,
    encode,
    ensure_density,
    fidelity,
    make_code,
    partial_trace,
    simulate_noise,
    trial_seed,
)
from crchan.errors import BlockLeakage, NotDensity, ShapeMismatch, UnknownBlock


def random_density(rng, dim):
    a = rng.normal(size=(dim, dim)) + 1j * rng.normal(size=(dim, dim))
    rho = a @ a.conj().T
    return rho / np.trace(rho).real


def random_pure(rng, dim):
    psi = rng.normal(size=dim) + 1j * rng.normal(size=dim)
    psi /= np.linalg.norm(psi)
    return psi, np.outer(psi, psi.conj())


class TestMakeCode:
    def test_three_qubit_block(self, get_decomp):
        code = make_code(get_decomp(3, 2), 0.5)
        assert (code.logical_dim, code.gauge_dim) == (2, 2)
        assert not code.trivial

    def test_four_qubit_qutrit_block(self, get_decomp):
        code = make_code(get_decomp(4, 2), 1.0)
        assert code.logical_dim == 3

    def test_trivial_block(self, get_decomp):
        code = make_code(get_decomp(2, 2), 0.0)
        assert code.logical_dim == 1
        assert code.trivial

    def test_unknown_block(self, get_decomp):
        with pytest.raises(UnknownBlock):
            make_code(get_decomp(2, 2), 0.5)

    def test_encoder_is_isometry_onto_block(self, get_decomp):
        decomp = get_decomp(3, 2)
        code = make_code(decomp, 0.5)
        w = code.encoder
        assert_allclose(w.conj().T @ w, np.eye(4), atol=1e-12)
        assert_allclose(w @ w.conj().T, decomp.central_projection(0.5), atol=1e-12)


class TestEncodeDecode:
    def test_pure_basis_states(self, get_decomp):
        decomp = get_decomp(3, 2)
        code = make_code(decomp, 0.5)
        logical = np.diag([1.0, 0.0]).astype(complex)
        gauge = np.diag([1.0, 0.0]).astype(complex)
        rho = encode(code, logical, gauge)
        v = decomp.block(0.5).vector(0, -0.5)
        assert_allclose(rho, np.outer(v, v.conj()), atol=1e-12)

    def test_trace_one_and_block_support(self, get_decomp):
        decomp = get_decomp(3, 2)
        code = make_code(decomp, 0.5)
        rng = np.random.default_rng(0)
        proj = decomp.central_projection(0.5)
        for _ in range(5):
            rho = encode(code, random_density(rng, 2), random_density(rng, 2))
            assert np.trace(rho).real == pytest.approx(1.0, abs=1e-12)
            assert_allclose(proj @ rho @ proj, rho, atol=1e-11)

    def test_round_trip(self, get_decomp):
        code = make_code(get_decomp(3, 2), 0.5)
        rng = np.random.default_rng(1)
        for _ in range(5):
            logical = random_density(rng, 2)
            result = decode(code, encode(code, logical, random_density(rng, 2)))
            assert np.abs(result.logical - logical).max() <= 1e-12
            assert abs(result.leakage) <= 1e-12

    def test_gauge_independence(self, get_decomp):
        code = make_code(get_decomp(3, 2), 0.5)
        rng = np.random.default_rng(2)
        logical = random_density(rng, 2)
        gauges = [
            None,
            np.diag([1.0, 0.0]).astype(complex),
            np.diag([0.0, 1.0]).astype(complex),
            random_density(rng, 2),
        ]
        decoded = [decode(code, encode(code, logical, g)).logical for g in gauges]
        for other in decoded[1:]:
            assert np.abs(decoded[0] - other).max() <= 1e-9

    def test_rejects_bad_density(self, get_decomp):
        code = make_code(get_decomp(3, 2), 0.5)
        with pytest.raises(NotDensity):
            encode(code, np.array([[1.0, 1.0], [0.0, 0.0]]))
        with pytest.raises(NotDensity):
            encode(code, np.diag([0.7, 0.7]).astype(complex))
        with pytest.raises(NotDensity):
            encode(code, np.diag([1.5, -0.5]).astype(complex))

    def test_rejects_bad_shapes(self, get_decomp):
        code = make_code(get_decomp(3, 2), 0.5)
        with pytest.raises(ShapeMismatch):
            encode(code, np.eye(3) / 3)
        with pytest.raises(ShapeMismatch):
            decode(code, np.eye(4) / 4)

    def test_block_leakage(self, get_decomp):
        decomp = get_decomp(3, 2)
        code = make_code(decomp, 0.5)
        stray = decomp.block(1.5).vector(0, 0.5)
        with pytest.raises(BlockLeakage):
            decode(code, np.outer(stray, stray.conj()))


class TestFidelity:
    def test_self_fidelity(self):
        rng = np.random.default_rng(3)
        rho = random_density(rng, 3)
        assert fidelity(rho, rho) == pytest.approx(1.0, abs=1e-10)

    def test_orthogonal_pure_states(self):
        a = np.diag([1.0, 0.0]).astype(complex)
        b = np.diag([0.0, 1.0]).astype(complex)
        assert fidelity(a, b) == pytest.approx(0.0, abs=1e-12)

    def test_pure_state_shortcut_agreement(self):
        rng = np.random.default_rng(4)
        psi, pure = random_pure(rng, 4)
        mixed = random_density(rng, 4)
        shortcut = float(np.vdot(psi, mixed @ psi).real)
        assert abs(fidelity(pure, mixed) - shortcut) <= 1e-12

    def test_known_value(self):
        # F between maximally mixed and a pure qubit state is 1/2
        pure = np.diag([1.0, 0.0]).astype(complex)
        assert fidelity(np.eye(2) / 2, pure) == pytest.approx(0.5, abs=1e-12)

    def test_shape_mismatch(self):
        with pytest.raises(ShapeMismatch):
            fidelity(np.eye(2) / 2, np.eye(3) / 3)


class TestPartialTrace:
    def test_product_state_factors(self):
        rng = np.random.default_rng(5)
        a = random_density(rng, 2)
        b = random_density(rng, 3)
        rho = np.kron(a, b)
        assert_allclose(partial_trace(rho, (2, 3), (0,)), a, atol=1e-12)
        assert_allclose(partial_trace(rho, (2, 3), (1,)), b, atol=1e-12)

    def test_trace_everything(self):
        rng = np.random.default_rng(6)
        rho = random_density(rng, 4)
        assert partial_trace(rho, (2, 2), ())[0, 0] == pytest.approx(1.0, abs=1e-12)


class TestEnsureDensity:
    def test_accepts_valid(self):
        ensure_density(np.eye(3) / 3)

    def test_rejects_nonhermitian(self):
        with pytest.raises(NotDensity):
            ensure_density(np.array([[0.5, 0.5], [0.0, 0.5]]))


class TestSimulation:
    def test_zero_rotation_is_exact(self, get_system, get_decomp):
        system = get_system(3, 2)
        code = make_code(get_decomp(3, 2), 0.5)
        rotation = collective_rotation(system, np.zeros(3))
        assert_allclose(rotation, np.eye(8), atol=1e-12)
        rng = np.random.default_rng(7)
        _, logical = random_pure(rng, 2)
        rho = rotation @ encode(code, logical) @ rotation.conj().T
        assert fidelity(logical, decode(code, rho).logical) == pytest.approx(1.0, abs=1e-12)

    def test_rotation_immunity(self, get_decomp):
        code = make_code(get_decomp(3, 2), 0.5)
        report = simulate_noise(code, "random-rotations", trials=25, seed=11)
        assert report.min_fidelity >= 1 - 1e-9
        assert report.max_leakage <= 1e-9

    def test_channel_immunity(self, get_decomp):
        code = make_code(get_decomp(3, 2), 0.5)
        report = simulate_noise(code, "channel", trials=10, seed=11)
        assert report.min_fidelity >= 1 - 1e-9
        assert report.max_leakage <= 1e-9

    def test_qutrit_block_immunity(self, get_decomp):
        code = make_code(get_decomp(4, 2), 1.0)
        report = simulate_noise(code, "random-rotations", trials=10, seed=3)
        assert report.min_fidelity >= 1 - 1e-9

    def test_qutrit_sites_immunity(self, get_decomp):
        # p_1 = 3 on three spin-1 sites: a protected qutrit on qutrits
        code = make_code(get_decomp(3, 3), 1.0)
        assert code.logical_dim == 3
        report = simulate_noise(code, "random-rotations", trials=5, seed=1)
        assert report.min_fidelity >= 1 - 1e-9
        assert report.max_leakage <= 1e-9

    @pytest.mark.parametrize("n,d", [(4, 2), (3, 3)])
    def test_round_trip_on_every_block(self, get_decomp, n, d):
        decomp = get_decomp(n, d)
        rng = np.random.default_rng(8)
        for j, p, _ in decomp.census():
            code = make_code(decomp, j)
            logical = random_density(rng, p)
            result = decode(code, encode(code, logical))
            assert np.abs(result.logical - logical).max() <= 1e-12

    def test_negative_control_degrades(self, get_decomp):
        code = make_code(get_decomp(3, 2), 0.5)
        report = simulate_noise(
            code, "random-rotations", trials=25, seed=11, negative_control=True
        )
        assert report.control_min_fidelity < 0.99

    def test_control_skipped_when_logical_exceeds_site(self, get_decomp):
        code = make_code(get_decomp(4, 2), 1.0)  # qutrit logical on qubit sites
        report = simulate_noise(
            code, "random-rotations", trials=3, seed=0, negative_control=True
        )
        assert report.control_min_fidelity is None

    def test_deterministic_given_seed(self, get_decomp):
        code = make_code(get_decomp(3, 2), 0.5)
        a = simulate_noise(code, "random-rotations", trials=10, seed=5)
        b = simulate_noise(code, "random-rotations", trials=10, seed=5)
        c = simulate_noise(code, "random-rotations", trials=10, seed=6)
        assert a == b
        assert a != c

    def test_rejects_bad_arguments(self, get_decomp):
        code = make_code(get_decomp(3, 2), 0.5)
        with pytest.raises(ValueError):
            simulate_noise(code, "random-rotations", trials=0)
        with pytest.raises(ValueError):
            simulate_noise(code, "thermal", trials=1)


class TestTrialSeeds:
    def test_deterministic_and_distinct(self):
        seeds = [trial_seed(42, i) for i in range(50)]
        assert seeds == [trial_seed(42, i) for i in range(50)]
        assert len(set(seeds)) == 50

    def test_prefix_stability(self):
        # trial i's seed does not depend on how many trials run
        assert trial_seed(7, 3) == trial_seed(7, 3)
        assert trial_seed(7, 0) != trial_seed(8, 0)
