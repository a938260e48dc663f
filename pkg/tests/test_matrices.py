import numpy as np
import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

from opschur.blocks import BlockVector, inner
from opschur.errors import (
    CoefficientSupportError,
    DiagonalRangeError,
    DimensionMismatchError,
)
from opschur.matrices import (
    BANDED,
    DENSE,
    TOEPLITZ,
    BlockMatrix,
    adjoint,
    allclose,
    apply,
    diagonal,
    random_banded,
    random_dense,
    random_toeplitz,
    random_vector,
    rank_one,
    schur_product,
    tensor_scalar,
    truncate,
)

from oracles import (
    apply_reference,
    flatten_reference,
    gaussian,
    schur_reference,
    spectral_norm,
)

seeds = st.integers(min_value=0, max_value=10**6)


def _sample(kind: str, rng, size=6, dim=2) -> BlockMatrix:
    if kind == DENSE:
        return random_dense(size, dim, rng)
    if kind == TOEPLITZ:
        return random_toeplitz(size, dim, rng, range(-2, 3), decay=0.8)
    return random_banded(size, dim, rng, (-1, 2), decay=0.8)


class TestConstruction:
    def test_dense_entries(self):
        rng = np.random.default_rng(0)
        blocks = gaussian(rng, (4, 4, 2, 2))
        a = BlockMatrix.dense(blocks)
        assert a.structure == DENSE
        assert (a.size, a.dim, a.flat_size) == (4, 2, 8)
        np.testing.assert_array_equal(a.entry(1, 3).matrix, blocks[1, 3])

    def test_toeplitz_entries_depend_on_offset_only(self):
        rng = np.random.default_rng(1)
        coeffs = {l: gaussian(rng, (2, 2)) for l in (-1, 0, 2)}
        a = BlockMatrix.toeplitz(coeffs, 5)
        assert a.structure == TOEPLITZ
        assert a.diagonal_support() == (-1, 0, 2)
        for k in range(5):
            for j in range(5):
                expected = coeffs.get(j - k, np.zeros((2, 2)))
                np.testing.assert_array_equal(a.entry(k, j).matrix, expected)

    def test_toeplitz_rejects_out_of_window_offsets(self):
        with pytest.raises(CoefficientSupportError) as err:
            BlockMatrix.toeplitz({5: np.eye(2)}, 4)
        assert err.value.offset == 5

    def test_banded_runs(self):
        rng = np.random.default_rng(2)
        runs = {0: gaussian(rng, (4, 2, 2)), 1: gaussian(rng, (3, 2, 2))}
        a = BlockMatrix.banded(runs, 4)
        assert a.structure == BANDED
        assert a.band_bounds() == (0, 1)
        np.testing.assert_array_equal(a.entry(1, 2).matrix, runs[1][1])
        assert a.entry(2, 0).norm() == 0.0

    def test_identity(self):
        a = BlockMatrix.identity(3, 2)
        np.testing.assert_array_equal(a.flatten(), np.eye(6))

    def test_entry_bounds(self):
        a = BlockMatrix.identity(3, 2)
        with pytest.raises(IndexError):
            a.entry(3, 0)

    def test_diagonal_run_errors(self):
        a = BlockMatrix.identity(3, 2)
        with pytest.raises(DiagonalRangeError):
            a.diagonal_run(3)

    def test_diagonal_run_unstored_is_zero(self):
        a = BlockMatrix.toeplitz({0: np.eye(2)}, 4)
        np.testing.assert_array_equal(a.diagonal_run(2), np.zeros((2, 2, 2)))


class TestFlatten:
    @given(seeds)
    @settings(max_examples=25, deadline=None)
    def test_matches_reference_layout(self, seed):
        rng = np.random.default_rng(seed)
        a = _sample((DENSE, TOEPLITZ, BANDED)[seed % 3], rng)
        np.testing.assert_allclose(
            a.flatten(), flatten_reference(a.blocks()), atol=0
        )

    def test_flatten_of_diagonal(self):
        a = BlockMatrix.toeplitz({0: np.diag([2.0, 3.0])}, 2)
        np.testing.assert_array_equal(a.flatten(), np.diag([2.0, 3.0, 2.0, 3.0]))


class TestSchurProduct:
    @pytest.mark.parametrize("kind_a", [DENSE, TOEPLITZ, BANDED])
    @pytest.mark.parametrize("kind_b", [DENSE, TOEPLITZ, BANDED])
    def test_matches_reference(self, kind_a, kind_b):
        rng = np.random.default_rng(3)
        a, b = _sample(kind_a, rng), _sample(kind_b, rng)
        got = schur_product(a, b)
        np.testing.assert_allclose(
            got.blocks(), schur_reference(a.blocks(), b.blocks()), atol=1e-13
        )

    def test_result_structure(self):
        rng = np.random.default_rng(4)
        t = _sample(TOEPLITZ, rng)
        b = _sample(BANDED, rng)
        d = _sample(DENSE, rng)
        assert schur_product(t, t).structure == TOEPLITZ
        assert schur_product(t, b).structure == BANDED
        assert schur_product(b, d).structure == BANDED
        assert schur_product(d, d).structure == DENSE

    def test_support_intersects(self):
        x = BlockMatrix.toeplitz({0: np.eye(2), 1: np.eye(2)}, 5)
        y = BlockMatrix.toeplitz({1: np.eye(2), 2: np.eye(2)}, 5)
        assert schur_product(x, y).diagonal_support() == (1,)

    def test_not_commutative(self):
        p = np.array([[0, 1], [0, 0]], dtype=complex)
        q = np.array([[0, 0], [1, 0]], dtype=complex)
        x = BlockMatrix.toeplitz({0: p}, 3)
        y = BlockMatrix.toeplitz({0: q}, 3)
        xy = schur_product(x, y)
        yx = schur_product(y, x)
        assert not allclose(xy, yx)
        np.testing.assert_array_equal(xy.entry(0, 0).matrix, p @ q)

    def test_all_ones_matrix_is_schur_unit(self):
        rng = np.random.default_rng(5)
        a = _sample(DENSE, rng)
        unit = tensor_scalar(np.ones((a.size, a.size)), np.eye(a.dim))
        assert allclose(schur_product(unit, a), a, tol=1e-13)
        assert allclose(schur_product(a, unit), a, tol=1e-13)

    def test_dimension_mismatch(self):
        rng = np.random.default_rng(6)
        with pytest.raises(DimensionMismatchError):
            schur_product(random_dense(4, 2, rng), random_dense(5, 2, rng))


class TestArithmetic:
    def test_add_matches_blocks(self):
        rng = np.random.default_rng(7)
        a, b = _sample(TOEPLITZ, rng), _sample(BANDED, rng)
        np.testing.assert_allclose((a + b).blocks(), a.blocks() + b.blocks(),
                                   atol=1e-14)
        np.testing.assert_allclose((a - b).blocks(), a.blocks() - b.blocks(),
                                   atol=1e-14)

    def test_structure_union_rules(self):
        rng = np.random.default_rng(8)
        t, b, d = (_sample(k, rng) for k in (TOEPLITZ, BANDED, DENSE))
        assert (t + t).structure == TOEPLITZ
        assert (t + b).structure == BANDED
        assert (t + d).structure == DENSE

    def test_scalar_multiple(self):
        rng = np.random.default_rng(9)
        a = _sample(TOEPLITZ, rng)
        np.testing.assert_allclose((2j * a).blocks(), 2j * a.blocks())
        assert (2j * a).structure == TOEPLITZ


class TestAdjoint:
    @pytest.mark.parametrize("kind", [DENSE, TOEPLITZ, BANDED])
    def test_flat_conjugate_transpose(self, kind):
        rng = np.random.default_rng(10)
        a = _sample(kind, rng)
        np.testing.assert_allclose(
            adjoint(a).flatten(), a.flatten().conj().T, atol=0
        )
        assert adjoint(a).structure == kind

    def test_involution(self):
        rng = np.random.default_rng(11)
        a = _sample(BANDED, rng)
        assert allclose(adjoint(adjoint(a)), a, tol=0)


class TestApply:
    @pytest.mark.parametrize("kind", [DENSE, TOEPLITZ, BANDED])
    def test_matches_reference(self, kind):
        rng = np.random.default_rng(12)
        a = _sample(kind, rng)
        x = random_vector(a.size, a.dim, rng)
        np.testing.assert_allclose(
            apply(a, x).parts, apply_reference(a.blocks(), x.parts), atol=1e-12
        )

    def test_matches_flat_action(self):
        rng = np.random.default_rng(13)
        a = _sample(TOEPLITZ, rng)
        x = random_vector(a.size, a.dim, rng)
        np.testing.assert_allclose(
            apply(a, x).flatten(), a.flatten() @ x.flatten(), atol=1e-12
        )

    def test_size_mismatch(self):
        rng = np.random.default_rng(14)
        a = _sample(DENSE, rng)
        with pytest.raises(DimensionMismatchError):
            apply(a, random_vector(a.size + 1, a.dim, rng))


class TestRankOneAndTensor:
    def test_rank_one_entries(self):
        rng = np.random.default_rng(15)
        x = random_vector(4, 2, rng)
        y = random_vector(4, 2, rng)
        z = gaussian(rng, 2)
        a = rank_one(x, y)
        for k in range(4):
            for j in range(4):
                np.testing.assert_allclose(
                    a.entry(k, j).apply(z),
                    inner(z, x.block(j)) * y.block(k),
                    atol=1e-13,
                )

    def test_rank_one_applies_as_projection(self):
        rng = np.random.default_rng(16)
        x = random_vector(5, 2, rng)
        y = random_vector(5, 2, rng)
        z = random_vector(5, 2, rng)
        got = apply(rank_one(x, y), z)
        np.testing.assert_allclose(got.parts, z.inner(x) * y.parts, atol=1e-12)

    def test_rank_one_flat_norm(self):
        rng = np.random.default_rng(17)
        x = random_vector(6, 3, rng)
        y = random_vector(6, 3, rng)
        got = spectral_norm(rank_one(x, y).flatten())
        assert got == pytest.approx(x.norm() * y.norm(), abs=1e-10)

    def test_tensor_scalar_entries(self):
        rng = np.random.default_rng(18)
        scalar = gaussian(rng, (3, 3))
        block = gaussian(rng, (2, 2))
        a = tensor_scalar(scalar, block)
        np.testing.assert_allclose(a.entry(1, 2).matrix, scalar[1, 2] * block)

    def test_tensor_scalar_is_kronecker(self):
        rng = np.random.default_rng(19)
        scalar = gaussian(rng, (3, 3))
        block = gaussian(rng, (2, 2))
        np.testing.assert_allclose(
            tensor_scalar(scalar, block).flatten(), np.kron(scalar, block),
            atol=0,
        )


class TestTruncate:
    def test_preserves_structure_and_entries(self):
        rng = np.random.default_rng(20)
        for kind in (DENSE, TOEPLITZ, BANDED):
            a = _sample(kind, rng, size=8)
            cut = truncate(a, 5)
            assert cut.structure == kind and cut.size == 5
            np.testing.assert_allclose(cut.blocks(), a.blocks()[:5, :5],
                                       atol=0)

    @given(seeds)
    @settings(max_examples=25, deadline=None)
    def test_norm_never_grows(self, seed):
        rng = np.random.default_rng(seed)
        a = random_dense(8, 2, rng)
        for size in (7, 4, 2, 1):
            assert (spectral_norm(truncate(a, size).flatten())
                    <= spectral_norm(a.flatten()) + 1e-12)

    def test_bad_size(self):
        with pytest.raises(ValueError):
            truncate(BlockMatrix.identity(4, 2), 0)


class TestStructureFlags:
    def test_upper_triangular_from_content(self):
        rng = np.random.default_rng(21)
        upper = random_banded(6, 2, rng, (0, 2))
        assert upper.upper_triangular
        two_sided = random_banded(6, 2, rng, (-1, 2))
        assert not two_sided.upper_triangular

    def test_upper_triangular_sees_through_zero_runs(self):
        runs = {-1: np.zeros((5, 2, 2)), 0: np.ones((6, 2, 2))}
        assert BlockMatrix.banded(runs, 6).upper_triangular

    def test_dense_upper_triangular(self):
        blocks = np.zeros((4, 4, 2, 2), dtype=complex)
        blocks[0, 2] = np.eye(2)
        assert BlockMatrix.dense(blocks).upper_triangular
        blocks[3, 1] = np.eye(2)
        assert not BlockMatrix.dense(blocks).upper_triangular

    def test_diagonal_extraction(self):
        rng = np.random.default_rng(22)
        a = _sample(DENSE, rng)
        blocks = diagonal(a, 1)
        assert len(blocks) == a.size - 1
        np.testing.assert_array_equal(blocks[2].matrix, a.entry(2, 3).matrix)

    def test_max_block_norm(self):
        a = BlockMatrix.toeplitz({0: np.diag([1.0, 4.0]), 1: np.eye(2)}, 3)
        assert a.max_block_norm() == pytest.approx(4.0)

    def test_allclose_ignores_storage(self):
        rng = np.random.default_rng(23)
        t = _sample(TOEPLITZ, rng)
        assert allclose(t, BlockMatrix.dense(t.blocks()), tol=0)
