"""
Shared fixtures for the tensor service tests
"""

import os
import sys

import numpy as np
import pytest
from scipy import linalg

# Add parent directory to path to import modules
sys.path.insert(0, os.path.abspath(os.path.join(os.path.dirname(__file__), '..')))

from services.generator_service import TensorGenerator
from services.tensor_service import (
    DenseTensor3,
    TransformSpec,
    frobenius_norm,
    from_transformed_slices,
    m_product,
)
from tensor_store import example_fixtures


def assert_tensor_close(actual: DenseTensor3, expected: DenseTensor3, rtol: float = 1e-10):
    """Entrywise comparison relative to the size of the expected tensor."""
    assert actual.shape == expected.shape
    scale = max(np.max(np.abs(expected.data)), 1.0)
    np.testing.assert_allclose(actual.data, expected.data, rtol=0, atol=rtol * scale)


def relative_residual(difference: DenseTensor3, reference: DenseTensor3) -> float:
    return frobenius_norm(difference) / max(frobenius_norm(reference), 1.0)


def low_rank_tensor(generator: TensorGenerator, n1: int, n2: int, rank: int, n3: int,
                    t: TransformSpec) -> DenseTensor3:
    """Product of two well-conditioned factors: every transformed slice has the given rank."""
    left = generator.well_conditioned((n1, rank, n3), t)
    right = generator.well_conditioned((rank, n2, n3), t)
    return m_product(left, right, t)


def random_case(seed: int):
    """A seeded generator, a random well-conditioned transform and a shape up to 4 x 4 x 4."""
    generator = TensorGenerator(seed)
    n1, n2, n3 = (int(d) for d in np.random.default_rng(seed).integers(1, 5, size=3))
    return generator, generator.transform(n3), (n1, n2, n3)


def small_eigenvalue_tensor() -> DenseTensor3:
    """One frontal slice: eigenvalue 1e-4 beside a 2 x 2 nilpotent Jordan block."""
    return DenseTensor3.from_slices([linalg.block_diag([[1e-4]], [[0, 1], [0, 0]])])


def spread_spectrum_case(seed: int, eigenvalues, jordan_size: int, n3: int):
    """
    Tensor whose transformed slices are Q (diag(eigenvalues) + J) Q^H with a
    random unitary Q per slice and a nilpotent Jordan block J, together with
    its Drazin inverse Q (diag(1 / eigenvalues) + 0) Q^H and the transform.
    """
    generator = TensorGenerator(seed)
    t = generator.transform(n3)
    eigenvalues = np.asarray(eigenvalues, dtype=np.complex128)
    core = linalg.block_diag(np.diag(eigenvalues), np.eye(jordan_size, k=1))
    reciprocal = linalg.block_diag(np.diag(1 / eigenvalues), np.zeros((jordan_size, jordan_size)))
    n = core.shape[0]
    unitaries = [linalg.qr(generator.tensor((n, n, 1)).data[:, :, 0])[0] for _ in range(n3)]
    a = from_transformed_slices(np.stack([q @ core @ q.conj().T for q in unitaries]), t)
    drazin = from_transformed_slices(np.stack([q @ reciprocal @ q.conj().T for q in unitaries]), t)
    return a, drazin, t


@pytest.fixture
def example_transform():
    return TransformSpec.example()


@pytest.fixture
def fixtures():
    return example_fixtures()
