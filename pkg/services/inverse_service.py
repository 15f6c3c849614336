"""
Inverse Service Module - generalized inverses under the M-product

Every operation works slice by slice in the transform domain: the input is
transformed once, each frontal slice gets the matrix formula, and the
result is inverse-transformed once.
"""

import logging
from dataclasses import dataclass
from typing import List, Optional, Tuple

import numpy as np
from scipy import linalg

from services.errors import InvalidInverseError, NumericalError, ShapeError, SingularityError
from services.tensor_service import (
    DenseTensor3,
    TransformSpec,
    frobenius_norm,
    from_transformed_slices,
    transformed_slices,
)

logger = logging.getLogger(__name__)

# Rank cutoff for R(A^p), relative to ||A||_2 at every power p
INDEX_RANK_RTOL = 1e-10
# Relative residual accepted when checking that a tensor is a {1}-inverse
ONE_INVERSE_RTOL = 1e-8

PROVENANCE_ZERO = "zero"
PROVENANCE_SEEDED = "seeded"
PROVENANCE_USER = "user"


@dataclass(frozen=True, eq=False)
class SliceSVD:
    """
    Full SVD of every transformed slice: slice k equals
    u[k] @ diag(singulars[k]) @ v[k]^H, with ranks[k] singular values kept.
    """

    u: List[np.ndarray]
    singulars: List[np.ndarray]
    v: List[np.ndarray]
    ranks: List[int]

    @property
    def n1(self) -> int:
        return self.u[0].shape[0]

    @property
    def n2(self) -> int:
        return self.v[0].shape[0]

    @property
    def n3(self) -> int:
        return len(self.u)


@dataclass(frozen=True, eq=False)
class OneInverseParams:
    """
    Free blocks of a {1}-inverse, one triple per transformed slice.

    For a slice of rank r: w12 is r x (n1 - r), w21 is (n2 - r) x r and
    w22 is (n2 - r) x (n1 - r). Full-rank slices carry empty blocks.
    """

    w12: List[np.ndarray]
    w21: List[np.ndarray]
    w22: List[np.ndarray]
    provenance: str = PROVENANCE_ZERO
    seed: Optional[int] = None

    @classmethod
    def zeros(cls, svd: SliceSVD) -> "OneInverseParams":
        shapes = [_block_shapes(svd.n1, svd.n2, r) for r in svd.ranks]
        return cls(
            w12=[np.zeros(s12, dtype=np.complex128) for s12, _, _ in shapes],
            w21=[np.zeros(s21, dtype=np.complex128) for _, s21, _ in shapes],
            w22=[np.zeros(s22, dtype=np.complex128) for _, _, s22 in shapes],
            provenance=PROVENANCE_ZERO,
        )

    def check_conforms(self, svd: SliceSVD) -> None:
        """Raise ShapeError unless the blocks match the slice ranks of svd."""
        if not len(self.w12) == len(self.w21) == len(self.w22) == svd.n3:
            raise ShapeError(f"Parameters cover {len(self.w12)} slices, the tensor has {svd.n3}.")
        for k, rank in enumerate(svd.ranks):
            expected = _block_shapes(svd.n1, svd.n2, rank)
            actual = (np.shape(self.w12[k]), np.shape(self.w21[k]), np.shape(self.w22[k]))
            if actual != expected:
                raise ShapeError(
                    f"Parameter blocks for slice {k} have shapes {actual}, "
                    f"expected {expected} for rank {rank}."
                )


@dataclass(frozen=True, eq=False)
class IndexResult:
    per_slice: Tuple[int, ...]
    overall: int
    stable_ranks: Tuple[int, ...]


def _block_shapes(n1: int, n2: int, rank: int) -> Tuple[Tuple[int, int], Tuple[int, int], Tuple[int, int]]:
    return (rank, n1 - rank), (n2 - rank, rank), (n2 - rank, n1 - rank)


def _svd_of_stack(stack: np.ndarray, tol: Optional[float]) -> SliceSVD:
    n1, n2 = stack.shape[1], stack.shape[2]
    eps = np.finfo(np.float64).eps
    us, singulars, vs, ranks = [], [], [], []
    for k, matrix in enumerate(stack):
        try:
            u, s, vh = linalg.svd(matrix, full_matrices=True)
        except linalg.LinAlgError:
            try:
                u, s, vh = linalg.svd(matrix, full_matrices=True, lapack_driver="gesvd")
            except linalg.LinAlgError as exc:
                raise NumericalError(f"SVD did not converge on transformed slice {k}.", slice_index=k) from exc
        sigma_max = s[0] if s.size else 0.0
        cutoff = (max(n1, n2) * eps if tol is None else tol) * sigma_max
        rank = int(np.count_nonzero(s > cutoff)) if sigma_max > 0 else 0
        us.append(u)
        singulars.append(s)
        vs.append(vh.conj().T)
        ranks.append(rank)
    logger.debug("Slice ranks %s for %d x %d slices", ranks, n1, n2)
    return SliceSVD(u=us, singulars=singulars, v=vs, ranks=ranks)


def slice_svd(a: DenseTensor3, t: TransformSpec, tol: Optional[float] = None) -> SliceSVD:
    """
    SVD of each transformed slice.

    Args:
        a: the tensor
        t: the transform
        tol: relative rank tolerance; singular values above tol * sigma_max
            count toward the rank. Defaults to max(n1, n2) * machine epsilon.

    Raises:
        NumericalError: the SVD of a slice did not converge.
    """
    return _svd_of_stack(transformed_slices(a, t), tol)


def _mp_stack(svd: SliceSVD) -> np.ndarray:
    stack = np.zeros((svd.n3, svd.n2, svd.n1), dtype=np.complex128)
    for k in range(svd.n3):
        r = svd.ranks[k]
        v_r = svd.v[k][:, :r]
        u_r = svd.u[k][:, :r]
        stack[k] = (v_r / svd.singulars[k][:r]) @ u_r.conj().T
    return stack


def _one_inverse_stack(svd: SliceSVD, params: OneInverseParams) -> np.ndarray:
    params.check_conforms(svd)
    stack = np.zeros((svd.n3, svd.n2, svd.n1), dtype=np.complex128)
    for k in range(svd.n3):
        r = svd.ranks[k]
        middle = np.zeros((svd.n2, svd.n1), dtype=np.complex128)
        middle[:r, :r] = np.diag(1.0 / svd.singulars[k][:r])
        middle[:r, r:] = params.w12[k]
        middle[r:, :r] = params.w21[k]
        middle[r:, r:] = params.w22[k]
        stack[k] = svd.v[k] @ middle @ svd.u[k].conj().T
    return stack


def _complex_gaussian(rng: np.random.Generator, shape: Tuple[int, int]) -> np.ndarray:
    return (rng.standard_normal(shape) + 1j * rng.standard_normal(shape)) / np.sqrt(2.0)


def random_params(svd: SliceSVD, seed: int) -> OneInverseParams:
    """Standard complex Gaussian blocks; slice k draws from the stream (seed, k)."""
    w12, w21, w22 = [], [], []
    for k, rank in enumerate(svd.ranks):
        rng = np.random.default_rng([seed, k])
        s12, s21, s22 = _block_shapes(svd.n1, svd.n2, rank)
        w12.append(_complex_gaussian(rng, s12))
        w21.append(_complex_gaussian(rng, s21))
        w22.append(_complex_gaussian(rng, s22))
    return OneInverseParams(w12=w12, w21=w21, w22=w22, provenance=PROVENANCE_SEEDED, seed=seed)


def mp_inverse(a: DenseTensor3, t: TransformSpec) -> DenseTensor3:
    """Moore-Penrose inverse A^+, the n2 x n1 x n3 tensor satisfying all four Penrose equations."""
    return from_transformed_slices(_mp_stack(slice_svd(a, t)), t)


def one_inverse(a: DenseTensor3, t: TransformSpec, params: Optional[OneInverseParams] = None) -> DenseTensor3:
    """
    The {1}-inverse V [[D^-1, W12], [W21, W22]] U^H, slice by slice.

    Zero parameters (the default) give the Moore-Penrose inverse.

    Raises:
        ShapeError: the parameter blocks do not match the slice ranks.
    """
    svd = slice_svd(a, t)
    if params is None:
        params = OneInverseParams.zeros(svd)
    return from_transformed_slices(_one_inverse_stack(svd, params), t)


def one_inverse_random(a: DenseTensor3, t: TransformSpec, seed: int) -> Tuple[DenseTensor3, OneInverseParams]:
    """Seeded {1}-inverse; the returned params reproduce it exactly."""
    svd = slice_svd(a, t)
    params = random_params(svd, seed)
    return from_transformed_slices(_one_inverse_stack(svd, params), t), params


def _one_equation_residual(hat_a: np.ndarray, hat_x: np.ndarray, t: TransformSpec) -> float:
    return frobenius_norm(from_transformed_slices(hat_a @ hat_x @ hat_a - hat_a, t))


def require_one_inverse(a: DenseTensor3, a_minus: DenseTensor3, t: TransformSpec) -> None:
    """
    Raise InvalidInverseError unless A * a_minus * A = A within
    ONE_INVERSE_RTOL * max(||A||_F, 1).
    """
    _check_inverse_shape(a, a_minus, "a_minus")
    residual = _one_equation_residual(transformed_slices(a, t), transformed_slices(a_minus, t), t)
    scale = max(frobenius_norm(a), 1.0)
    if residual > ONE_INVERSE_RTOL * scale:
        raise InvalidInverseError(
            f"Tensor is not a {{1}}-inverse: ||A*X*A - A|| = {residual:.3e} exceeds {ONE_INVERSE_RTOL * scale:.3e}."
        )


def params_from_one_inverse(a: DenseTensor3, t: TransformSpec, a_minus: DenseTensor3) -> OneInverseParams:
    """
    Recover the W blocks of a given {1}-inverse.

    Raises:
        InvalidInverseError: a_minus is not a {1}-inverse of a.
    """
    require_one_inverse(a, a_minus, t)
    svd = slice_svd(a, t)
    hat_minus = transformed_slices(a_minus, t)
    w12, w21, w22 = [], [], []
    for k, r in enumerate(svd.ranks):
        block = svd.v[k].conj().T @ hat_minus[k] @ svd.u[k]
        w12.append(block[:r, r:].copy())
        w21.append(block[r:, :r].copy())
        w22.append(block[r:, r:].copy())
    return OneInverseParams(w12=w12, w21=w21, w22=w22, provenance=PROVENANCE_USER)


def _check_inverse_shape(a: DenseTensor3, x: DenseTensor3, name: str) -> None:
    expected = (a.n2, a.n1, a.n3)
    if x.shape != expected:
        raise ShapeError(f"{name} has shape {x.shape}, expected {expected}.")


def _one_inverse_for(
    a: DenseTensor3,
    t: TransformSpec,
    svd: SliceSVD,
    params: Optional[OneInverseParams],
    a_minus: Optional[DenseTensor3],
) -> np.ndarray:
    """Transform-domain slices of the {1}-inverse named by params or a_minus."""
    if params is not None and a_minus is not None:
        raise ValueError("Pass either params or a_minus, not both.")
    if a_minus is not None:
        _check_inverse_shape(a, a_minus, "a_minus")
        return transformed_slices(a_minus, t)
    if params is None:
        params = OneInverseParams.zeros(svd)
    return _one_inverse_stack(svd, params)


def one_mp_inverse(
    a: DenseTensor3,
    t: TransformSpec,
    params: Optional[OneInverseParams] = None,
    *,
    a_minus: Optional[DenseTensor3] = None,
) -> DenseTensor3:
    """
    1-MP inverse A^- * A * A^+.

    A^- comes from params (zero when omitted) or is given directly as
    a_minus, which is used as is.
    """
    hat_a = transformed_slices(a, t)
    svd = _svd_of_stack(hat_a, None)
    hat_minus = _one_inverse_for(a, t, svd, params, a_minus)
    return from_transformed_slices(hat_minus @ hat_a @ _mp_stack(svd), t)


def _core_basis(matrix: np.ndarray, slice_index: int) -> Tuple[int, np.ndarray]:
    """
    Index p of a square matrix and an orthonormal basis of R(A^p).

    R(A^(p+1)) is the range of A applied to the current basis, so the basis
    is deflated one multiplication at a time. The rank cutoff is relative to
    ||A||_2 and does not shrink with the power.
    """
    n = matrix.shape[0]
    cutoff = INDEX_RANK_RTOL * linalg.norm(matrix, 2)
    basis = np.eye(n, dtype=np.complex128)
    for p in range(n + 1):
        if basis.shape[1] == 0:
            return p, basis
        try:
            u, s, _ = linalg.svd(matrix @ basis, full_matrices=False)
        except linalg.LinAlgError as exc:
            raise NumericalError(
                f"SVD of a power of slice {slice_index} did not converge.", slice_index=slice_index
            ) from exc
        rank = int(np.count_nonzero(s > cutoff))
        if rank == basis.shape[1]:
            return p, basis
        basis = u[:, :rank]
    return n, basis


def _core_bases(hat_a: np.ndarray) -> List[Tuple[int, np.ndarray]]:
    return [_core_basis(matrix, k) for k, matrix in enumerate(hat_a)]


def _index_result(found: List[Tuple[int, np.ndarray]]) -> IndexResult:
    per_slice = tuple(p for p, _ in found)
    result = IndexResult(
        per_slice=per_slice, overall=max(per_slice), stable_ranks=tuple(basis.shape[1] for _, basis in found)
    )
    logger.debug("Per-slice indices %s, overall %d", result.per_slice, result.overall)
    return result


def _require_square(a: DenseTensor3, operation: str) -> None:
    if not a.is_square():
        raise ShapeError(f"{operation} needs a square tensor (n1 = n2), got shape {a.shape}.")


def tensor_index(a: DenseTensor3, t: TransformSpec) -> IndexResult:
    """
    Index of A: the largest index of its transformed slices.

    Nonsingular slices have index 0. stable_ranks holds rank(A^k) per slice.
    """
    _require_square(a, "tensor_index")
    return _index_result(_core_bases(transformed_slices(a, t)))


def _drazin_stack(hat_a: np.ndarray, index: Optional[int]) -> np.ndarray:
    """
    Per slice W (Y^H A W)^-1 Y^H, with W spanning R(A^k) and Y spanning
    R((A^H)^k). This equals A^k (A^(2k+1))^+ A^k for every k >= ind(A).
    """
    found = _core_bases(hat_a)
    overall = _index_result(found).overall
    if index is not None and index < overall:
        raise ValueError(f"Drazin exponent {index} is below the index {overall}.")
    logger.debug("Drazin exponent k = %d", max(overall, 1) if index is None else max(index, 1))
    stack = np.zeros_like(hat_a)
    for i, matrix in enumerate(hat_a):
        w = found[i][1]
        _, y = _core_basis(matrix.conj().T, i)
        if w.shape[1] != y.shape[1]:
            raise NumericalError(
                f"Slice {i}: rank of A^k is {w.shape[1]} but rank of (A^H)^k is {y.shape[1]}.", slice_index=i
            )
        if w.shape[1] == 0:
            continue
        try:
            stack[i] = w @ linalg.solve(y.conj().T @ matrix @ w, y.conj().T)
        except linalg.LinAlgError as exc:
            raise NumericalError(f"Core part of slice {i} is singular.", slice_index=i) from exc
    return stack



def drazin_inverse(a: DenseTensor3, t: TransformSpec, index: Optional[int] = None) -> DenseTensor3:
    """
    Drazin inverse A^k (A^(2k+1))^+ A^k, slice by slice.

    Computed from orthonormal bases of R(A^k) and R((A^H)^k), so
    eigenvalues far below ||A|| keep their reciprocals.

    Args:
        a: square tensor
        t: the transform
        index: exponent k; must not be below ind(A). Defaults to max(ind(A), 1).

    Raises:
        ValueError: index is below ind(A).
        NumericalError: the ranks of A^k and (A^H)^k disagree on a slice.
    """
    _require_square(a, "drazin_inverse")
    return from_transformed_slices(_drazin_stack(transformed_slices(a, t), index), t)


def one_d_inverse(
    a: DenseTensor3,
    t: TransformSpec,
    params: Optional[OneInverseParams] = None,
    *,
    a_minus: Optional[DenseTensor3] = None,
    index: Optional[int] = None,
) -> DenseTensor3:
    """1-D inverse A^- * A * A^D."""
    _require_square(a, "one_d_inverse")
    hat_a = transformed_slices(a, t)
    hat_minus = _one_inverse_for(a, t, _svd_of_stack(hat_a, None), params, a_minus)
    return from_transformed_slices(hat_minus @ hat_a @ _drazin_stack(hat_a, index), t)


def one_star_inverse(
    a: DenseTensor3,
    t: TransformSpec,
    params: Optional[OneInverseParams] = None,
    *,
    a_minus: Optional[DenseTensor3] = None,
) -> DenseTensor3:
    """1-Star inverse A^- * A * A^*."""
    hat_a = transformed_slices(a, t)
    hat_minus = _one_inverse_for(a, t, _svd_of_stack(hat_a, None), params, a_minus)
    return from_transformed_slices(hat_minus @ hat_a @ np.conj(np.swapaxes(hat_a, 1, 2)), t)


def exact_inverse(a: DenseTensor3, t: TransformSpec) -> DenseTensor3:
    """
    A^-1 with A * A^-1 = A^-1 * A = I.

    Raises:
        ShapeError: A is not square.
        SingularityError: a transformed slice is numerically singular;
            slice_index names the first such slice.
    """
    _require_square(a, "exact_inverse")
    hat_a = transformed_slices(a, t)
    eps = np.finfo(np.float64).eps
    stack = np.zeros_like(hat_a)
    for k, matrix in enumerate(hat_a):
        s = linalg.svdvals(matrix)
        if s[0] == 0 or s[-1] <= a.n1 * eps * s[0]:
            raise SingularityError(
                f"Transformed slice {k} is singular (smallest singular value {s[-1]:.3e}).", slice_index=k
            )
        stack[k] = linalg.inv(matrix)
    return from_transformed_slices(stack, t)


def one_inverse_family_member(
    a: DenseTensor3, t: TransformSpec, g: DenseTensor3, u: DenseTensor3
) -> DenseTensor3:
    """G + U - G * A * U * A * G; a {1}-inverse for every U when G is one."""
    _check_inverse_shape(a, g, "g")
    _check_inverse_shape(a, u, "u")
    hat_a, hat_g, hat_u = (transformed_slices(x, t) for x in (a, g, u))
    return from_transformed_slices(hat_g + hat_u - hat_g @ hat_a @ hat_u @ hat_a @ hat_g, t)


def one_mp_family_member(
    a: DenseTensor3, t: TransformSpec, x: DenseTensor3, w: DenseTensor3
) -> DenseTensor3:
    """X + (I - X * A) * W * A * X; ranges over all 1-MP inverses when X is one."""
    _check_inverse_shape(a, x, "x")
    _check_inverse_shape(a, w, "w")
    hat_a, hat_x, hat_w = (transformed_slices(y, t) for y in (a, x, w))
    identity = np.eye(a.n2, dtype=np.complex128)
    return from_transformed_slices(hat_x + (identity - hat_x @ hat_a) @ hat_w @ hat_a @ hat_x, t)
