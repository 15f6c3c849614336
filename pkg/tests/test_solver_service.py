"""
Unit tests for the solver service
Solution families of the five multilinear systems.
"""

import logging

import pytest

from services.errors import ShapeError
from services.generator_service import TensorGenerator
from services.inverse_service import (
    drazin_inverse,
    mp_inverse,
    one_inverse_random,
)
from services.solver_service import (
    LEFT_FREE,
    PROJECTED_SYSTEMS,
    RIGHT_FREE,
    SYSTEM_DRAZIN_PROJECTED,
    SYSTEM_DRAZIN_RIGHT,
    SYSTEM_MP_PROJECTED,
    SYSTEM_MP_RIGHT,
    SYSTEMS,
    solve,
    solve_drazin_projected,
    solve_mp_projected,
    solve_mp_right,
    solve_star_projected,
)
from services.tensor_service import DenseTensor3, conj_transpose, frobenius_norm, m_product
from services.verify_service import check_system
from tests.conftest import assert_tensor_close, low_rank_tensor, random_case

SEEDS = range(50)


def rectangular_case(seed: int):
    """A, B with p right-hand columns and a seeded {1}-inverse."""
    generator, t, (n1, n2, n3) = random_case(seed)
    a = low_rank_tensor(generator, n1, n2, 1 + seed % min(n1, n2), n3, t)
    b = generator.tensor((n1, 1 + seed % 3, n3))
    a_minus, _ = one_inverse_random(a, t, seed)
    return a, b, a_minus, t


def square_case(seed: int):
    generator = TensorGenerator(seed)
    t = generator.transform(1 + seed % 4)
    n = 3 + seed % 2
    a = generator.with_index(n, t.n3, seed % 3, t)
    b = generator.tensor((n, 1 + seed % 3, t.n3))
    a_minus, _ = one_inverse_random(a, t, seed)
    return a, b, a_minus, t


def case_for(system: str, seed: int):
    if system in (SYSTEM_DRAZIN_PROJECTED, SYSTEM_DRAZIN_RIGHT):
        return square_case(seed)
    return rectangular_case(seed)


class TestSolutionFamilies:
    """Every member of every family solves its system."""

    @pytest.mark.parametrize("seed", SEEDS)
    @pytest.mark.parametrize("system", SYSTEMS)
    def test_particular_and_random_members(self, system, seed):
        a, b, a_minus, t = case_for(system, seed)
        family = solve(system, a, t, b=b if system in PROJECTED_SYSTEMS else None, a_minus=a_minus)
        assert family.system == system
        for x in (family.particular, family.random_instance(seed, t)):
            assert check_system(system, a, x, t, b=b, a_minus=a_minus).passed

    @pytest.mark.parametrize("seed", range(20))
    @pytest.mark.parametrize("system", SYSTEMS)
    def test_projector_is_idempotent(self, system, seed):
        a, b, a_minus, t = case_for(system, seed)
        family = solve(system, a, t, b=b if system in PROJECTED_SYSTEMS else None, a_minus=a_minus)
        projector = family.projector
        assert_tensor_close(m_product(projector, projector, t), projector, rtol=1e-9)

    def test_sides(self):
        a, b, a_minus, t = rectangular_case(3)
        assert solve_mp_projected(a, b, t, a_minus=a_minus).side == LEFT_FREE
        assert solve_mp_right(a, t, a_minus=a_minus).side == RIGHT_FREE

    def test_z_shapes(self):
        generator = TensorGenerator(4)
        t = generator.transform(2)
        a = low_rank_tensor(generator, 3, 4, 2, 2, t)
        b = generator.tensor((3, 2, 2))
        assert solve_mp_projected(a, b, t).z_shape == (4, 2, 2)
        assert solve_mp_right(a, t).z_shape == (4, 3, 2)

    def test_instantiate_rejects_wrong_z(self):
        a, b, _, t = rectangular_case(5)
        family = solve_mp_projected(a, b, t)
        with pytest.raises(ShapeError):
            family.instantiate(DenseTensor3.zeros(7, 7, t.n3), t)

    def test_random_instance_is_reproducible(self):
        a, b, _, t = rectangular_case(6)
        family = solve_star_projected(a, b, t)
        assert_tensor_close(family.random_instance(9, t), family.random_instance(9, t), rtol=0)


class TestReconstruction:
    """A known solution X0 is recovered with Z = X0."""

    @pytest.mark.parametrize("seed", range(20))
    def test_mp_projected(self, seed):
        a, b, a_minus, t = rectangular_case(seed)
        x0 = m_product(mp_inverse(a, t), b, t)
        family = solve_mp_projected(a, b, t, a_minus=a_minus)
        assert_tensor_close(family.instantiate(x0, t), x0, rtol=1e-9)

    @pytest.mark.parametrize("seed", range(20))
    def test_drazin_projected(self, seed):
        a, b, a_minus, t = square_case(seed)
        x0 = m_product(drazin_inverse(a, t), b, t)
        family = solve_drazin_projected(a, b, t, a_minus=a_minus)
        assert_tensor_close(family.instantiate(x0, t), x0, rtol=1e-9)

    @pytest.mark.parametrize("seed", range(20))
    def test_star_projected(self, seed):
        a, b, a_minus, t = rectangular_case(seed)
        x0 = m_product(conj_transpose(a, t), b, t)
        family = solve_star_projected(a, b, t, a_minus=a_minus)
        assert_tensor_close(family.instantiate(x0, t), x0, rtol=1e-9)


class TestDegenerateFamilies:
    """Projectors vanish when A is invertible or has full row rank."""

    @pytest.mark.parametrize("system", [SYSTEM_MP_PROJECTED, SYSTEM_DRAZIN_PROJECTED, SYSTEM_DRAZIN_RIGHT])
    def test_invertible(self, system):
        generator = TensorGenerator(7)
        t = generator.transform(3)
        a = generator.well_conditioned((3, 3, 3), t)
        b = generator.tensor((3, 1, 3))
        family = solve(system, a, t, b=b if system != SYSTEM_DRAZIN_RIGHT else None)
        assert frobenius_norm(family.projector) < 1e-10

    def test_full_row_rank_right_system(self):
        generator = TensorGenerator(8)
        t = generator.transform(2)
        a = generator.well_conditioned((2, 4, 2), t)
        family = solve_mp_right(a, t)
        assert frobenius_norm(family.projector) < 1e-10
        assert_tensor_close(family.particular, mp_inverse(a, t))


class TestSolverErrors:
    """Error handling of the solver entry points."""

    def test_unknown_system(self, example_transform):
        with pytest.raises(ValueError):
            solve("nope", DenseTensor3.zeros(2, 2, 3), example_transform)

    def test_projected_system_needs_b(self, example_transform):
        with pytest.raises(ShapeError):
            solve(SYSTEM_MP_PROJECTED, DenseTensor3.zeros(2, 2, 3), example_transform)

    def test_b_rows_must_match(self, example_transform):
        with pytest.raises(ShapeError):
            solve_mp_projected(DenseTensor3.zeros(2, 2, 3), DenseTensor3.zeros(3, 1, 3), example_transform)

    def test_drazin_systems_need_square(self, example_transform):
        with pytest.raises(ShapeError):
            solve(SYSTEM_DRAZIN_RIGHT, DenseTensor3.zeros(2, 3, 3), example_transform)

    def test_params_and_a_minus_are_exclusive(self):
        a, b, a_minus, t = rectangular_case(9)
        _, params = one_inverse_random(a, t, 9)
        with pytest.raises(ValueError):
            solve_mp_projected(a, b, t, params, a_minus=a_minus)

    def test_right_system_ignores_b_with_warning(self, caplog):
        a, b, _, t = rectangular_case(10)
        with caplog.at_level(logging.WARNING, logger="services.solver_service"):
            family = solve(SYSTEM_MP_RIGHT, a, t, b=b)
        assert family.side == RIGHT_FREE
        assert "ignoring B" in caplog.text
