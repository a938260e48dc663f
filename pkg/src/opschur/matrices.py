"""Truncated matrices with operator entries and their Schur calculus.

A :class:`BlockMatrix` is an N x N array of operators on C^d.  Entry
``(k, j)`` acts on the j-th slot of a :class:`BlockVector` and
contributes to the k-th slot, so diagonal offset ``l = j - k`` indexes
the upper-right diagonals for ``l > 0``.  Indices are 0-based
throughout.

Storage comes in three forms.  ``dense`` keeps the full (N, N, d, d)
array; ``toeplitz`` keeps one block per stored offset, constant along
each diagonal; ``banded`` keeps a run of blocks per stored offset.
Structure tags are advisory, for storage and speed only: semantic
equality is entry-wise and is tested with :func:`allclose`, which
erases structure before comparing.  Whether a matrix is upper
triangular is derived from its content, never trusted from a flag.

All values are immutable and all operations are pure, so instances can
be shared freely across threads.
"""

from __future__ import annotations

from typing import Iterable, Mapping

import numpy as np

from .blocks import BlockVector, OperatorBlock
from .errors import (
    CoefficientSupportError,
    DiagonalRangeError,
    DimensionMismatchError,
    StructureError,
)

__all__ = [
    "DENSE",
    "TOEPLITZ",
    "BANDED",
    "BlockMatrix",
    "schur_product",
    "apply",
    "adjoint",
    "diagonal",
    "rank_one",
    "tensor_scalar",
    "truncate",
    "allclose",
    "random_dense",
    "random_toeplitz",
    "random_banded",
    "random_vector",
]

DENSE = "dense"
TOEPLITZ = "toeplitz"
BANDED = "banded"

_STRUCTURES = (DENSE, TOEPLITZ, BANDED)


def _diag_rows(size: int, offset: int) -> np.ndarray:
    """Row indices of the entries on a diagonal; columns are rows + offset."""
    return np.arange(max(0, -offset), size - max(0, offset))


def _frozen(arr: np.ndarray) -> np.ndarray:
    out = np.array(arr, dtype=complex)
    out.flags.writeable = False
    return out


class BlockMatrix:
    """Immutable N x N matrix of d x d operator blocks."""

    __slots__ = ("_size", "_dim", "_structure", "_dense", "_diagonals", "_cache")

    def __init__(self, *, size, dim, structure, dense=None, diagonals=None):
        if structure not in _STRUCTURES:
            raise StructureError(f"unknown structure tag {structure!r}")
        self._size = int(size)
        self._dim = int(dim)
        self._structure = structure
        self._dense = dense
        self._diagonals = diagonals
        self._cache = {}

    # -- constructors -------------------------------------------------

    @classmethod
    def dense(cls, blocks) -> "BlockMatrix":
        """Build from a full (N, N, d, d) complex array."""
        arr = _frozen(blocks)
        if arr.ndim != 4 or arr.shape[0] != arr.shape[1] or arr.shape[2] != arr.shape[3]:
            raise DimensionMismatchError(arr.shape, ("N", "N", "d", "d"), "dense blocks")
        return cls(size=arr.shape[0], dim=arr.shape[2], structure=DENSE, dense=arr)

    @classmethod
    def toeplitz(cls, coefficients: Mapping[int, np.ndarray], size: int) -> "BlockMatrix":
        """Build from a map ``offset -> d x d block``.

        Entry ``(k, j)`` is the block stored for offset ``j - k``;
        offsets that are not stored read as zero.  Offsets outside
        ``[-(N-1), N-1]`` are rejected rather than silently dropped.
        """
        if not coefficients:
            raise ValueError("toeplitz matrix needs at least one stored offset")
        stored = {}
        dim = None
        for offset, block in coefficients.items():
            offset = int(offset)
            if abs(offset) > size - 1:
                raise CoefficientSupportError(
                    offset, (-(size - 1), size - 1), "toeplitz coefficients"
                )
            arr = _frozen(np.asarray(block, dtype=complex))
            if arr.ndim != 2 or arr.shape[0] != arr.shape[1]:
                raise DimensionMismatchError(arr.shape, ("d", "d"), "toeplitz block")
            if dim is None:
                dim = arr.shape[0]
            elif arr.shape[0] != dim:
                raise DimensionMismatchError(arr.shape, (dim, dim), "toeplitz block")
            stored[offset] = arr
        return cls(size=size, dim=dim, structure=TOEPLITZ, diagonals=stored)

    @classmethod
    def banded(cls, diagonals: Mapping[int, np.ndarray], size: int) -> "BlockMatrix":
        """Build from a map ``offset -> (N - |offset|, d, d) run of blocks``."""
        if not diagonals:
            raise ValueError("banded matrix needs at least one stored diagonal")
        stored = {}
        dim = None
        for offset, run in diagonals.items():
            offset = int(offset)
            if abs(offset) > size - 1:
                raise DiagonalRangeError(offset, size)
            arr = _frozen(np.asarray(run, dtype=complex))
            want = size - abs(offset)
            if arr.ndim != 3 or arr.shape[0] != want or arr.shape[1] != arr.shape[2]:
                raise DimensionMismatchError(
                    arr.shape, (want, "d", "d"), f"banded diagonal {offset}"
                )
            if dim is None:
                dim = arr.shape[1]
            elif arr.shape[1] != dim:
                raise DimensionMismatchError(arr.shape, (want, dim, dim), "banded block")
            stored[offset] = arr
        return cls(size=size, dim=dim, structure=BANDED, diagonals=stored)

    @classmethod
    def identity(cls, size: int, dim: int) -> "BlockMatrix":
        return cls.toeplitz({0: np.eye(dim)}, size)

    # -- basic queries ------------------------------------------------

    @property
    def size(self) -> int:
        """Truncation size N."""
        return self._size

    @property
    def dim(self) -> int:
        """Dimension d of the coefficient space."""
        return self._dim

    @property
    def structure(self) -> str:
        return self._structure

    @property
    def flat_size(self) -> int:
        return self._size * self._dim

    def diagonal_support(self) -> tuple[int, ...]:
        """Offsets that may hold nonzero blocks, ascending."""
        if self._structure == DENSE:
            return tuple(range(-(self._size - 1), self._size))
        return tuple(sorted(self._diagonals))

    def band_bounds(self) -> tuple[int, int]:
        support = self.diagonal_support()
        return support[0], support[-1]

    @property
    def upper_triangular(self) -> bool:
        """True when every block strictly below the main diagonal is zero.

        Derived from content, so the answer cannot disagree with the
        stored entries.
        """
        cached = self._cache.get("upper")
        if cached is None:
            if self._structure == DENSE:
                k, j = np.tril_indices(self._size, k=-1)
                cached = not np.any(self._dense[k, j])
            else:
                cached = all(
                    offset >= 0 or not np.any(run)
                    for offset, run in self._diagonals.items()
                )
            self._cache["upper"] = cached
        return cached

    def entry(self, k: int, j: int) -> OperatorBlock:
        """Block at row ``k``, column ``j`` (0-based)."""
        if not (0 <= k < self._size and 0 <= j < self._size):
            raise IndexError(f"entry ({k}, {j}) outside {self._size} x {self._size}")
        if self._structure == DENSE:
            return OperatorBlock(self._dense[k, j])
        offset = j - k
        run = self._diagonals.get(offset)
        if run is None:
            return OperatorBlock.zero(self._dim)
        if self._structure == TOEPLITZ:
            return OperatorBlock(run)
        return OperatorBlock(run[k - max(0, -offset)])

    def diagonal_run(self, offset: int) -> np.ndarray:
        """All blocks on a diagonal as an (N - |offset|, d, d) array."""
        if abs(offset) > self._size - 1:
            raise DiagonalRangeError(offset, self._size)
        count = self._size - abs(offset)
        if self._structure == DENSE:
            rows = _diag_rows(self._size, offset)
            return self._dense[rows, rows + offset]
        run = self._diagonals.get(offset)
        if run is None:
            return np.zeros((count, self._dim, self._dim), dtype=complex)
        if self._structure == TOEPLITZ:
            return np.broadcast_to(run, (count,) + run.shape)
        return run

    def blocks(self) -> np.ndarray:
        """Dense (N, N, d, d) materialization; cached, read-only."""
        if self._structure == DENSE:
            return self._dense
        cached = self._cache.get("dense")
        if cached is None:
            out = np.zeros((self._size, self._size, self._dim, self._dim), dtype=complex)
            for offset, run in self._diagonals.items():
                rows = _diag_rows(self._size, offset)
                out[rows, rows + offset] = run
            cached = _frozen(out)
            self._cache["dense"] = cached
        return cached

    def flatten(self) -> np.ndarray:
        """The (N d) x (N d) scalar matrix acting on flattened vectors."""
        n, d = self._size, self._dim
        return self.blocks().transpose(0, 2, 1, 3).reshape(n * d, n * d)

    def max_block_norm(self) -> float:
        """Largest operator norm over all entries."""
        flat = self.blocks().reshape(-1, self._dim, self._dim)
        return float(np.max(np.linalg.norm(flat, ord=2, axis=(1, 2))))

    # -- arithmetic sugar --------------------------------------------

    def _check_same_shape(self, other: "BlockMatrix", context: str) -> None:
        if self._size != other._size or self._dim != other._dim:
            raise DimensionMismatchError(
                (self._size, self._dim), (other._size, other._dim), context
            )

    def __add__(self, other: "BlockMatrix") -> "BlockMatrix":
        return _combine(self, other, np.add)

    def __sub__(self, other: "BlockMatrix") -> "BlockMatrix":
        return _combine(self, other, np.subtract)

    def __mul__(self, scalar: complex) -> "BlockMatrix":
        if self._structure == DENSE:
            return BlockMatrix.dense(self._dense * scalar)
        scaled = {l: run * scalar for l, run in self._diagonals.items()}
        if self._structure == TOEPLITZ:
            return BlockMatrix.toeplitz(scaled, self._size)
        return BlockMatrix.banded(scaled, self._size)

    __rmul__ = __mul__

    def __repr__(self) -> str:
        return (
            f"BlockMatrix(size={self._size}, dim={self._dim}, "
            f"structure={self._structure!r})"
        )


def _combine(a: BlockMatrix, b: BlockMatrix, op) -> BlockMatrix:
    """Entrywise binary combination with the usual structure promotion."""
    a._check_same_shape(b, "entrywise combination")
    if a.structure == TOEPLITZ and b.structure == TOEPLITZ:
        support = sorted(set(a.diagonal_support()) | set(b.diagonal_support()))
        zero = np.zeros((a.dim, a.dim), dtype=complex)
        out = {
            l: op(a._diagonals.get(l, zero), b._diagonals.get(l, zero))
            for l in support
        }
        return BlockMatrix.toeplitz(out, a.size)
    if DENSE not in (a.structure, b.structure):
        support = sorted(set(a.diagonal_support()) | set(b.diagonal_support()))
        out = {l: op(a.diagonal_run(l), b.diagonal_run(l)) for l in support}
        return BlockMatrix.banded(out, a.size)
    return BlockMatrix.dense(op(a.blocks(), b.blocks()))


def schur_product(a: BlockMatrix, b: BlockMatrix) -> BlockMatrix:
    """Entrywise composition: entry ``(k, j)`` is ``a(k,j) after b(k,j)``.

    Operator composition does not commute, so neither does this
    product.  The result carries the tightest structure tag implied by
    the operands: two toeplitz matrices give a toeplitz result, and any
    operand with a limited diagonal support forces the result onto the
    intersected support.
    """
    a._check_same_shape(b, "schur product")
    if a.structure == TOEPLITZ and b.structure == TOEPLITZ:
        support = sorted(set(a.diagonal_support()) & set(b.diagonal_support()))
        if not support:
            return BlockMatrix.toeplitz({0: np.zeros((a.dim, a.dim))}, a.size)
        out = {l: a._diagonals[l] @ b._diagonals[l] for l in support}
        return BlockMatrix.toeplitz(out, a.size)
    full = 2 * a.size - 1
    support = sorted(set(a.diagonal_support()) & set(b.diagonal_support()))
    if len(support) < full:
        if not support:
            return BlockMatrix.banded(
                {0: np.zeros((a.size, a.dim, a.dim))}, a.size
            )
        out = {
            l: np.einsum("kab,kbc->kac", a.diagonal_run(l), b.diagonal_run(l))
            for l in support
        }
        return BlockMatrix.banded(out, a.size)
    return BlockMatrix.dense(np.einsum("kjab,kjbc->kjac", a.blocks(), b.blocks()))


def apply(a: BlockMatrix, x: BlockVector) -> BlockVector:
    """Matrix action ``y_k = sum_j a(k, j) x_j``.

    Structured storage is applied diagonal by diagonal, so banded and
    toeplitz matrices never materialize their dense form here.
    """
    if x.size != a.size or x.dim != a.dim:
        raise DimensionMismatchError((a.size, a.dim), (x.size, x.dim), "apply")
    if a.structure == DENSE:
        return BlockVector(np.einsum("kjab,jb->ka", a._dense, x.parts))
    out = np.zeros((a.size, a.dim), dtype=complex)
    for offset, run in a._diagonals.items():
        rows = _diag_rows(a.size, offset)
        if a.structure == TOEPLITZ:
            out[rows] += x.parts[rows + offset] @ run.T
        else:
            out[rows] += np.einsum("kab,kb->ka", run, x.parts[rows + offset])
    return BlockVector(out)


def adjoint(a: BlockMatrix) -> BlockMatrix:
    """Entrywise adjoint with transposed indices: entry ``(k, j)`` of the
    result is ``a(j, k)*``.  Preserves the operator norm and maps the
    diagonal at offset ``l`` to the adjoints of the one at ``-l``.
    """
    if a.structure == DENSE:
        return BlockMatrix.dense(a._dense.transpose(1, 0, 3, 2).conj())
    flipped = {}
    for offset, run in a._diagonals.items():
        if a.structure == TOEPLITZ:
            flipped[-offset] = run.conj().T
        else:
            flipped[-offset] = run.conj().transpose(0, 2, 1)
    if a.structure == TOEPLITZ:
        return BlockMatrix.toeplitz(flipped, a.size)
    return BlockMatrix.banded(flipped, a.size)


def diagonal(a: BlockMatrix, offset: int) -> list[OperatorBlock]:
    """Blocks on diagonal ``offset`` as a list, row index ascending.

    Raises :class:`DiagonalRangeError` when the diagonal is empty at
    this truncation size.
    """
    return [OperatorBlock(m) for m in a.diagonal_run(offset)]


def rank_one(x: BlockVector, y: BlockVector) -> BlockMatrix:
    """Matrix with entry ``(k, j)`` the rank-one operator ``z -> <z, x_j> y_k``.

    Its operator norm factors exactly as ``|x| * |y|``.
    """
    if x.dim != y.dim or x.size != y.size:
        raise DimensionMismatchError((x.size, x.dim), (y.size, y.dim), "rank one")
    return BlockMatrix.dense(np.einsum("ka,jb->kjab", y.parts, x.parts.conj()))


def tensor_scalar(scalar_matrix: np.ndarray, t) -> BlockMatrix:
    """Matrix with entries ``a_kj * t`` for a scalar matrix ``a``.

    The flattening is the Kronecker product of ``a`` with ``t``, so the
    operator norm factors exactly as ``|a| * |t|``.  ``t`` may be an
    OperatorBlock or a plain square array.
    """
    arr = np.asarray(scalar_matrix, dtype=complex)
    if arr.ndim != 2 or arr.shape[0] != arr.shape[1]:
        raise DimensionMismatchError(arr.shape, ("N", "N"), "tensor scalar")
    block = t.matrix if isinstance(t, OperatorBlock) else np.asarray(t, complex)
    return BlockMatrix.dense(np.einsum("kj,ab->kjab", arr, block))


def truncate(a: BlockMatrix, size: int) -> BlockMatrix:
    """Leading principal ``size`` x ``size`` submatrix, structure kept."""
    if not 1 <= size <= a.size:
        raise ValueError(f"truncation size {size} outside [1, {a.size}]")
    if size == a.size:
        return a
    if a.structure == DENSE:
        return BlockMatrix.dense(a._dense[:size, :size])
    kept = {
        l: (run if a.structure == TOEPLITZ else run[: size - abs(l)])
        for l, run in a._diagonals.items()
        if abs(l) <= size - 1
    }
    if not kept:
        kept = {0: np.zeros((a.dim, a.dim))}
        if a.structure == BANDED:
            kept = {0: np.zeros((size, a.dim, a.dim))}
    if a.structure == TOEPLITZ:
        return BlockMatrix.toeplitz(kept, size)
    return BlockMatrix.banded(kept, size)


def allclose(a: BlockMatrix, b: BlockMatrix, tol: float = 1e-12) -> bool:
    """Entrywise comparison that ignores storage structure."""
    if a.size != b.size or a.dim != b.dim:
        return False
    return bool(np.max(np.abs(a.blocks() - b.blocks())) <= tol)


# -- seeded random instances -----------------------------------------


def _as_rng(rng) -> np.random.Generator:
    if isinstance(rng, np.random.Generator):
        return rng
    return np.random.default_rng(rng)


def _gaussian(rng: np.random.Generator, shape) -> np.ndarray:
    return (rng.standard_normal(shape) + 1j * rng.standard_normal(shape)) / np.sqrt(2)


def random_dense(size: int, dim: int, rng, scale: float = 1.0) -> BlockMatrix:
    """Dense matrix with independent complex Gaussian entries."""
    rng = _as_rng(rng)
    return BlockMatrix.dense(scale * _gaussian(rng, (size, size, dim, dim)))


def random_toeplitz(
    size: int, dim: int, rng, offsets: Iterable[int], decay: float = 1.0
) -> BlockMatrix:
    """Toeplitz matrix with Gaussian coefficient blocks on ``offsets``.

    Each stored block is scaled by ``decay ** |offset|``.
    """
    rng = _as_rng(rng)
    coeffs = {
        int(l): decay ** abs(l) * _gaussian(rng, (dim, dim)) for l in offsets
    }
    return BlockMatrix.toeplitz(coeffs, size)


def random_banded(
    size: int, dim: int, rng, bounds: tuple[int, int], decay: float = 1.0
) -> BlockMatrix:
    """Banded matrix with Gaussian blocks on offsets ``bounds[0]..bounds[1]``.

    Each diagonal is scaled by ``decay ** |offset|``; ``decay < 1``
    concentrates mass near the main diagonal.
    """
    rng = _as_rng(rng)
    lo, hi = bounds
    if lo > hi:
        raise ValueError(f"empty band {bounds}")
    diags = {
        l: decay ** abs(l) * _gaussian(rng, (size - abs(l), dim, dim))
        for l in range(lo, hi + 1)
    }
    return BlockMatrix.banded(diags, size)


def random_vector(size: int, dim: int, rng, unit: bool = False) -> BlockVector:
    rng = _as_rng(rng)
    v = _gaussian(rng, (size, dim))
    if unit:
        v = v / np.linalg.norm(v)
    return BlockVector(v)
