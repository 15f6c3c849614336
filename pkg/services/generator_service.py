"""
Generator Service Module - seeded random tensors, transforms and parameters

All randomness in the package goes through TensorGenerator so that a seed
fully determines every tensor a command or a test produces. Callers that
need different behaviour inject their own generator (or a mock).
"""

import logging
from typing import Sequence, Tuple

import numpy as np
from scipy import linalg

from services.errors import ShapeError
from services.inverse_service import OneInverseParams, SliceSVD, random_params
from services.tensor_service import DenseTensor3, TransformSpec, from_transformed_slices

logger = logging.getLogger(__name__)

# Singular values of generated well-conditioned slices and transforms lie in this range
SINGULAR_RANGE = (1.0, 2.0)


class TensorGenerator:
    """
    Seeded source of random tensors.

    Two generators built with the same seed return identical sequences.
    """

    def __init__(self, seed: int = 0):
        self.seed = seed
        self._rng = np.random.default_rng(seed)

    def _gaussian(self, shape: Tuple[int, ...]) -> np.ndarray:
        return (self._rng.standard_normal(shape) + 1j * self._rng.standard_normal(shape)) / np.sqrt(2.0)

    def _unitary(self, n: int) -> np.ndarray:
        q, r = linalg.qr(self._gaussian((n, n)))
        phases = np.diag(r) / np.abs(np.diag(r))
        return q * phases

    def _well_conditioned_matrix(self, n1: int, n2: int) -> np.ndarray:
        singulars = self._rng.uniform(*SINGULAR_RANGE, size=min(n1, n2))
        middle = np.zeros((n1, n2), dtype=np.complex128)
        middle[: singulars.size, : singulars.size] = np.diag(singulars)
        return self._unitary(n1) @ middle @ self._unitary(n2).conj().T

    def tensor(self, shape: Sequence[int]) -> DenseTensor3:
        """Entries are independent standard complex Gaussians."""
        return DenseTensor3(self._gaussian(_checked_shape(shape)))

    def well_conditioned(self, shape: Sequence[int], t: TransformSpec) -> DenseTensor3:
        """Every transformed slice has full rank with singular values in SINGULAR_RANGE."""
        n1, n2, n3 = _checked_shape(shape)
        stack = np.stack([self._well_conditioned_matrix(n1, n2) for _ in range(n3)])
        return from_transformed_slices(stack, t)

    def with_index(self, n: int, n3: int, index: int, t: TransformSpec) -> DenseTensor3:
        """
        Square tensor whose index is exactly `index`.

        Each transformed slice is Q (N + J) Q^H with Q unitary, N a nilpotent
        Jordan block and J an invertible diagonal with eigenvalue moduli in
        SINGULAR_RANGE. Slice 0 gets a nilpotent block of size `index`; the
        others get random sizes up to `index`.

        Raises:
            ShapeError: index is negative or exceeds n.
        """
        if not 0 <= index <= n:
            raise ShapeError(f"Index {index} is impossible for {n} x {n} slices.")
        stack = np.zeros((n3, n, n), dtype=np.complex128)
        for k in range(n3):
            size = index if k == 0 else int(self._rng.integers(0, index + 1))
            core = np.zeros((n, n), dtype=np.complex128)
            core[:size, :size] = np.eye(size, k=1)
            moduli = self._rng.uniform(*SINGULAR_RANGE, size=n - size)
            angles = self._rng.uniform(0.0, 2.0 * np.pi, size=n - size)
            core[size:, size:] = np.diag(moduli * np.exp(1j * angles))
            q = self._unitary(n)
            stack[k] = q @ core @ q.conj().T
        logger.debug("Generated %d x %d x %d tensor of index %d", n, n, n3, index)
        return from_transformed_slices(stack, t)

    def transform(self, n3: int) -> TransformSpec:
        """Random complex transform with condition number at most 2."""
        return TransformSpec.from_matrix(self._well_conditioned_matrix(n3, n3))

    def params(self, svd: SliceSVD) -> OneInverseParams:
        """Seeded free blocks for a {1}-inverse conforming to svd."""
        return random_params(svd, int(self._rng.integers(2**31)))


def _checked_shape(shape: Sequence[int]) -> Tuple[int, int, int]:
    dims = tuple(int(d) for d in shape)
    if len(dims) != 3 or min(dims) < 1:
        raise ShapeError(f"Shape must be three positive integers, got {tuple(shape)}.")
    return dims


def random_tensor(shape: Sequence[int], seed: int) -> DenseTensor3:
    """Seeded complex Gaussian tensor."""
    return TensorGenerator(seed).tensor(shape)
