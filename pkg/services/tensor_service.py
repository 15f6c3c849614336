"""
Tensor Service Module - third-order tensors and the M-product

Complex tensors are stored as numpy arrays of shape (n1, n2, n3) in Fortran
order, so frontal slice k is the contiguous block data[:, :, k] and the flat
layout is slice-major, column-major inside each slice.
"""

import logging
import warnings
from dataclasses import dataclass
from typing import List, Sequence, Tuple

import numpy as np
from scipy import linalg
from scipy.fft import dct

from services.errors import ConditioningWarning, ShapeError, SingularityError, SliceIndexError

logger = logging.getLogger(__name__)

# Transform construction settings
CONDITION_WARN_THRESHOLD = 1e8
SINGULAR_PIVOT_RTOL = 1e-14
TRANSFORM_CHECK_RTOL = 1e-10


class DenseTensor3:
    """A complex n1 x n2 x n3 tensor. The stored array is read-only."""

    __slots__ = ("data",)

    def __init__(self, data):
        array = np.array(data, dtype=np.complex128, order="F", copy=True)
        if array.ndim != 3:
            raise ShapeError(f"A third-order tensor needs 3 dimensions, got {array.ndim}.")
        if min(array.shape) < 1:
            raise ShapeError(f"Tensor dimensions must be positive, got {array.shape}.")
        array.flags.writeable = False
        self.data = array

    @classmethod
    def from_slices(cls, slices: Sequence) -> "DenseTensor3":
        """Build a tensor from its frontal slices, given in order."""
        matrices = [np.atleast_2d(np.asarray(s, dtype=np.complex128)) for s in slices]
        if not matrices:
            raise ShapeError("At least one frontal slice is required.")
        first = matrices[0].shape
        for k, matrix in enumerate(matrices):
            if matrix.ndim != 2 or matrix.shape != first:
                raise ShapeError(f"Frontal slice {k} has shape {matrix.shape}, expected {first}.")
        return cls(np.stack(matrices, axis=2))

    @classmethod
    def zeros(cls, n1: int, n2: int, n3: int) -> "DenseTensor3":
        return cls(np.zeros((n1, n2, n3), dtype=np.complex128))

    @property
    def n1(self) -> int:
        return self.data.shape[0]

    @property
    def n2(self) -> int:
        return self.data.shape[1]

    @property
    def n3(self) -> int:
        return self.data.shape[2]

    @property
    def shape(self) -> Tuple[int, int, int]:
        return self.data.shape

    def is_square(self) -> bool:
        return self.n1 == self.n2

    def slices(self) -> List[np.ndarray]:
        return [frontal_slice(self, k) for k in range(self.n3)]

    def __add__(self, other: "DenseTensor3") -> "DenseTensor3":
        return tensor_add(self, other)

    def __sub__(self, other: "DenseTensor3") -> "DenseTensor3":
        return tensor_sub(self, other)

    def __neg__(self) -> "DenseTensor3":
        return tensor_scale(self, -1.0)

    def __repr__(self) -> str:
        return f"DenseTensor3(shape={self.shape})"


@dataclass(frozen=True, eq=False)
class TransformSpec:
    """
    An invertible n3 x n3 matrix M defining the M-product.

    Build instances with from_matrix() or one of the named constructors so
    that m_inv and condition_estimate are consistent with m.
    """

    n3: int
    m: np.ndarray
    m_inv: np.ndarray
    condition_estimate: float

    @classmethod
    def from_matrix(cls, m) -> "TransformSpec":
        """
        Factor M once and keep its inverse.

        Raises:
            ShapeError: M is not a non-empty square matrix.
            SingularityError: an LU pivot falls below SINGULAR_PIVOT_RTOL * ||M||.
        """
        matrix = np.array(m, dtype=np.complex128)
        if matrix.ndim != 2 or matrix.shape[0] != matrix.shape[1] or matrix.shape[0] == 0:
            raise ShapeError(f"Transform matrix must be square and non-empty, got shape {matrix.shape}.")
        n3 = matrix.shape[0]
        norm = linalg.norm(matrix)

        with warnings.catch_warnings():
            warnings.simplefilter("ignore", linalg.LinAlgWarning)
            lu, piv = linalg.lu_factor(matrix)
        smallest_pivot = np.min(np.abs(np.diag(lu)))
        if smallest_pivot <= SINGULAR_PIVOT_RTOL * norm:
            raise SingularityError(
                f"Transform matrix is singular (smallest pivot {smallest_pivot:.3e}, norm {norm:.3e})."
            )
        m_inv = linalg.lu_solve((lu, piv), np.eye(n3, dtype=np.complex128))
        condition = float(np.linalg.cond(matrix))

        identity = np.eye(n3)
        residual = max(np.max(np.abs(matrix @ m_inv - identity)), np.max(np.abs(m_inv @ matrix - identity)))
        if condition > CONDITION_WARN_THRESHOLD or residual > TRANSFORM_CHECK_RTOL * norm:
            message = (
                f"Transform matrix is ill-conditioned (condition estimate {condition:.3e}, "
                f"inverse residual {residual:.3e})."
            )
            logger.warning(message)
            warnings.warn(message, ConditioningWarning, stacklevel=2)

        matrix.flags.writeable = False
        m_inv.flags.writeable = False
        return cls(n3=n3, m=matrix, m_inv=m_inv, condition_estimate=condition)

    @classmethod
    def identity(cls, n3: int) -> "TransformSpec":
        return cls.from_matrix(np.eye(n3))

    @classmethod
    def dft(cls, n3: int, normalized: bool = True) -> "TransformSpec":
        """DFT matrix; the unnormalized one turns the M-product into the T-product."""
        return cls.from_matrix(linalg.dft(n3, scale="sqrtn" if normalized else None))

    @classmethod
    def cosine(cls, n3: int) -> "TransformSpec":
        """Orthonormal DCT-II matrix."""
        return cls.from_matrix(dct(np.eye(n3), type=2, norm="ortho", axis=0))

    @classmethod
    def example(cls) -> "TransformSpec":
        """The 3 x 3 matrix used by every worked example."""
        return cls.from_matrix([[1, 0, 1], [0, 1, 0], [0, 1, 1]])


def _check_transform(a: DenseTensor3, t: TransformSpec) -> None:
    if a.n3 != t.n3:
        raise ShapeError(f"Tensor has {a.n3} frontal slices but the transform is {t.n3} x {t.n3}.")


def _require_square(a: DenseTensor3, operation: str) -> None:
    if not a.is_square():
        raise ShapeError(f"{operation} needs a square tensor (n1 = n2), got shape {a.shape}.")


def frontal_slice(a: DenseTensor3, k: int) -> np.ndarray:
    """Return a copy of frontal slice k (0-based)."""
    if not 0 <= k < a.n3:
        raise SliceIndexError(f"Frontal slice {k} out of range for a tensor with {a.n3} slices.")
    return np.array(a.data[:, :, k])


def mode3_unfold(a: DenseTensor3) -> np.ndarray:
    """Mode-3 unfolding: result[k, j * n1 + i] = a[i, j, k]."""
    return np.array(a.data.reshape((a.n1 * a.n2, a.n3), order="F").T)


def mode3_fold(u, n1: int, n2: int) -> DenseTensor3:
    """Inverse of mode3_unfold."""
    matrix = np.asarray(u, dtype=np.complex128)
    if matrix.ndim != 2 or matrix.shape[1] != n1 * n2:
        raise ShapeError(f"Cannot fold a matrix of shape {matrix.shape} into {n1} x {n2} slices.")
    return DenseTensor3(matrix.T.reshape((n1, n2, matrix.shape[0]), order="F"))


def transform(a: DenseTensor3, t: TransformSpec) -> DenseTensor3:
    """L(A) = A x_3 M, computed as fold(M @ unfold(A))."""
    _check_transform(a, t)
    return mode3_fold(t.m @ mode3_unfold(a), a.n1, a.n2)


def inverse_transform(a: DenseTensor3, t: TransformSpec) -> DenseTensor3:
    """L^-1(A) = A x_3 M^-1."""
    _check_transform(a, t)
    return mode3_fold(t.m_inv @ mode3_unfold(a), a.n1, a.n2)


def to_slice_stack(a: DenseTensor3) -> np.ndarray:
    """Frontal slices stacked batch-first, shape (n3, n1, n2)."""
    return np.moveaxis(a.data, 2, 0).copy()


def from_slice_stack(stack: np.ndarray) -> DenseTensor3:
    return DenseTensor3(np.moveaxis(np.asarray(stack), 0, 2))


def transformed_slices(a: DenseTensor3, t: TransformSpec) -> np.ndarray:
    """Slices of L(A), batch-first."""
    return to_slice_stack(transform(a, t))


def from_transformed_slices(stack: np.ndarray, t: TransformSpec) -> DenseTensor3:
    """Inverse-transform a batch-first stack of transform-domain slices."""
    return inverse_transform(from_slice_stack(stack), t)


def facewise_product(c: DenseTensor3, d: DenseTensor3) -> DenseTensor3:
    """Slice k of the result is slice k of c times slice k of d."""
    if c.n2 != d.n1:
        raise ShapeError(f"Inner dimensions differ: {c.shape} and {d.shape}.")
    if c.n3 != d.n3:
        raise ShapeError(f"Slice counts differ: {c.n3} and {d.n3}.")
    return from_slice_stack(np.matmul(to_slice_stack(c), to_slice_stack(d)))


def m_product(c: DenseTensor3, d: DenseTensor3, t: TransformSpec) -> DenseTensor3:
    """C *_M D = L^-1(L(C) face-wise L(D))."""
    _check_transform(c, t)
    _check_transform(d, t)
    return inverse_transform(facewise_product(transform(c, t), transform(d, t)), t)


def m_product_chain(tensors: Sequence[DenseTensor3], t: TransformSpec) -> DenseTensor3:
    """
    Product of several tensors left to right.

    Each factor is transformed once and the result is inverse-transformed
    once, instead of round-tripping after every pairwise product.
    """
    if not tensors:
        raise ShapeError("m_product_chain needs at least one tensor.")
    for tensor in tensors:
        _check_transform(tensor, t)
    result = transformed_slices(tensors[0], t)
    for position, tensor in enumerate(tensors[1:], start=1):
        if result.shape[2] != tensor.n1:
            raise ShapeError(
                f"Factor {position} has shape {tensor.shape}, incompatible with running product "
                f"of {result.shape[1]} x {result.shape[2]} slices."
            )
        result = np.matmul(result, transformed_slices(tensor, t))
    return from_transformed_slices(result, t)


def to_block_diagonal(a: DenseTensor3, t: TransformSpec) -> np.ndarray:
    """mat(A): the transformed slices placed along a block diagonal."""
    return linalg.block_diag(*transformed_slices(a, t))


def from_block_diagonal(blocks, n1: int, n2: int, t: TransformSpec) -> DenseTensor3:
    """Inverse of to_block_diagonal; off-diagonal blocks are ignored."""
    matrix = np.asarray(blocks, dtype=np.complex128)
    if matrix.shape != (n1 * t.n3, n2 * t.n3):
        raise ShapeError(
            f"Block-diagonal matrix has shape {matrix.shape}, expected {(n1 * t.n3, n2 * t.n3)}."
        )
    stack = np.stack([matrix[k * n1:(k + 1) * n1, k * n2:(k + 1) * n2] for k in range(t.n3)])
    return from_transformed_slices(stack, t)


def m_product_block(c: DenseTensor3, d: DenseTensor3, t: TransformSpec) -> DenseTensor3:
    """C *_M D through the block-diagonal route: mat^-1(mat(C) mat(D))."""
    if c.n2 != d.n1:
        raise ShapeError(f"Inner dimensions differ: {c.shape} and {d.shape}.")
    return from_block_diagonal(to_block_diagonal(c, t) @ to_block_diagonal(d, t), c.n1, d.n2, t)


def conj_transpose(a: DenseTensor3, t: TransformSpec) -> DenseTensor3:
    """A*: every transformed slice is conjugate-transposed."""
    _check_transform(a, t)
    hat = transformed_slices(a, t)
    return from_transformed_slices(np.conj(np.swapaxes(hat, 1, 2)), t)


def identity_tensor(n: int, t: TransformSpec) -> DenseTensor3:
    """The n x n x n3 tensor whose transformed slices are all I_n."""
    stack = np.broadcast_to(np.eye(n, dtype=np.complex128), (t.n3, n, n))
    return from_transformed_slices(stack, t)


def tensor_add(a: DenseTensor3, b: DenseTensor3) -> DenseTensor3:
    if a.shape != b.shape:
        raise ShapeError(f"Cannot add tensors of shapes {a.shape} and {b.shape}.")
    return DenseTensor3(a.data + b.data)


def tensor_sub(a: DenseTensor3, b: DenseTensor3) -> DenseTensor3:
    if a.shape != b.shape:
        raise ShapeError(f"Cannot subtract tensors of shapes {a.shape} and {b.shape}.")
    return DenseTensor3(a.data - b.data)


def tensor_scale(a: DenseTensor3, alpha: complex) -> DenseTensor3:
    return DenseTensor3(alpha * a.data)


def tensor_power(a: DenseTensor3, k: int, t: TransformSpec) -> DenseTensor3:
    """A^k under the M-product, with A^0 the identity tensor."""
    _require_square(a, "tensor_power")
    _check_transform(a, t)
    if k < 0:
        raise ValueError(f"Power must be nonnegative, got {k}.")
    hat = transformed_slices(a, t)
    return from_transformed_slices(np.linalg.matrix_power(hat, k), t)


def frobenius_norm(a: DenseTensor3) -> float:
    return float(np.linalg.norm(a.data.ravel()))
