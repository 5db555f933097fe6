import numpy as np
import pytest
from numpy.testing import assert_allclose

from crchan._kernels import fallback
from crchan.errors import ShapeMismatch
from crchan.sparse import SparseOperator

try:
    from crchan._kernels import _csr as compiled
except ImportError:
    compiled = None

BACKENDS = [fallback] if compiled is None else [fallback, compiled]


def random_sparse(rng, nrows, ncols, density=0.2):
    mask = rng.random((nrows, ncols)) < density
    dense = np.where(mask, rng.normal(size=(nrows, ncols)) + 1j * rng.normal(size=(nrows, ncols)), 0)
    return SparseOperator.from_dense(dense), dense


class TestConstruction:
    def test_from_coo_sums_duplicates(self):
        op = SparseOperator.from_coo(2, 2, [0, 0, 1], [1, 1, 0], [1.0, 2.0, 5.0])
        assert op.nnz == 2
        assert_allclose(op.to_dense(), [[0, 3.0], [5.0, 0]])

    def test_from_coo_drops_zeros(self):
        op = SparseOperator.from_coo(2, 2, [0, 1], [0, 1], [1.0, 0.0])
        assert op.nnz == 1

    def test_drop_tol(self):
        op = SparseOperator.from_coo(2, 2, [0, 1], [0, 1], [1.0, 1e-14], drop_tol=1e-12)
        assert op.nnz == 1

    def test_dense_round_trip_exact(self):
        rng = np.random.default_rng(0)
        _, dense = random_sparse(rng, 7, 7)
        assert np.array_equal(SparseOperator.from_dense(dense).to_dense(), dense)

    def test_identity_and_diagonal(self):
        assert_allclose(SparseOperator.identity(3).to_dense(), np.eye(3))
        assert_allclose(SparseOperator.diagonal([1, 2j]).to_dense(), np.diag([1, 2j]))

    def test_nonzeros_iterator(self):
        op = SparseOperator.from_coo(2, 3, [1, 0], [2, 0], [3.0, 1.0])
        assert list(op.nonzeros()) == [(0, 0, 1.0 + 0j), (1, 2, 3.0 + 0j)]

    def test_unique_positions(self):
        op = SparseOperator.from_coo(3, 3, [2, 2, 0], [1, 1, 0], [1.0, 1.0, 1.0])
        positions = [(r, c) for r, c, _ in op.nonzeros()]
        assert len(positions) == len(set(positions))


class TestArithmetic:
    def test_matvec_matches_dense(self):
        rng = np.random.default_rng(1)
        op, dense = random_sparse(rng, 9, 6)
        x = rng.normal(size=6) + 1j * rng.normal(size=6)
        assert_allclose(op.matvec(x), dense @ x, atol=1e-13)

    def test_matmat_matches_dense(self):
        rng = np.random.default_rng(2)
        op, dense = random_sparse(rng, 5, 8)
        x = rng.normal(size=(8, 3)) + 1j * rng.normal(size=(8, 3))
        assert_allclose(op.matmat(x), dense @ x, atol=1e-13)

    def test_dagger(self):
        rng = np.random.default_rng(3)
        op, dense = random_sparse(rng, 4, 6)
        assert_allclose(op.dagger().to_dense(), dense.conj().T)

    def test_add_scale(self):
        rng = np.random.default_rng(4)
        a, da = random_sparse(rng, 5, 5)
        b, db = random_sparse(rng, 5, 5)
        assert_allclose((a + b).to_dense(), da + db)
        assert_allclose((a - b).to_dense(), da - db)
        assert_allclose((2j * a).to_dense(), 2j * da)

    def test_sparse_product_matches_dense(self):
        rng = np.random.default_rng(5)
        a, da = random_sparse(rng, 6, 4)
        b, db = random_sparse(rng, 4, 7)
        assert_allclose((a @ b).to_dense(), da @ db, atol=1e-13)

    def test_matmul_dispatch(self):
        rng = np.random.default_rng(6)
        a, da = random_sparse(rng, 4, 4)
        x = rng.normal(size=4)
        assert_allclose(a @ x, da @ x, atol=1e-13)

    def test_shape_errors(self):
        op = SparseOperator.identity(3)
        with pytest.raises(ShapeMismatch):
            op.matvec(np.zeros(4))
        with pytest.raises(ShapeMismatch):
            op + SparseOperator.identity(2)
        with pytest.raises(ShapeMismatch):
            op @ SparseOperator.identity(2)


@pytest.mark.parametrize("backend", BACKENDS, ids=lambda b: b.__name__.rsplit(".", 1)[-1])
class TestKernelBackends:
    def test_matvec(self, backend):
        rng = np.random.default_rng(7)
        op, dense = random_sparse(rng, 30, 30, density=0.1)
        x = rng.normal(size=30) + 1j * rng.normal(size=30)
        out = backend.csr_matvec(op.indptr, op.indices, op.data, np.ascontiguousarray(x))
        assert_allclose(out, dense @ x, atol=1e-13)

    def test_matmat(self, backend):
        rng = np.random.default_rng(8)
        op, dense = random_sparse(rng, 20, 25, density=0.15)
        x = rng.normal(size=(25, 4)) + 1j * rng.normal(size=(25, 4))
        out = backend.csr_matmat(op.indptr, op.indices, op.data, np.ascontiguousarray(x))
        assert_allclose(out, dense @ x, atol=1e-13)

    def test_empty_rows(self, backend):
        op = SparseOperator.from_coo(4, 4, [2], [1], [2.0])
        x = np.arange(4, dtype=np.complex128)
        out = backend.csr_matvec(op.indptr, op.indices, op.data, x)
        assert_allclose(out, [0, 0, 2.0, 0])

    def test_empty_matrix(self, backend):
        op = SparseOperator.from_coo(3, 3, [], [], [])
        x = np.ones(3, dtype=np.complex128)
        assert_allclose(backend.csr_matvec(op.indptr, op.indices, op.data, x), np.zeros(3))


def test_backends_agree_when_compiled_available():
    if compiled is None:
        pytest.skip("compiled kernel not built")
    rng = np.random.default_rng(9)
    op, _ = random_sparse(rng, 40, 40, density=0.05)
    x = rng.normal(size=(40, 6)) + 1j * rng.normal(size=(40, 6))
    x = np.ascontiguousarray(x)
    a = compiled.csr_matmat(op.indptr, op.indices, op.data, x)
    b = fallback.csr_matmat(op.indptr, op.indices, op.data, x)
    assert_allclose(a, b, atol=1e-15)
