"""
Identity battery for the 1-MP, 1-D and 1-Star inverses
Each identity is checked on seeded random tensors at 1e-8 relative.
"""

import pytest

from services.generator_service import TensorGenerator
from services.inverse_service import (
    drazin_inverse,
    mp_inverse,
    one_d_inverse,
    one_inverse_random,
    one_mp_inverse,
    one_star_inverse,
    tensor_index,
)
from services.tensor_service import (
    conj_transpose,
    frobenius_norm,
    m_product,
    m_product_chain,
    tensor_power,
    tensor_sub,
)
from services.verify_service import check_one_mp_system, check_one_star, check_penrose
from tests.conftest import assert_tensor_close, low_rank_tensor, random_case

RTOL = 1e-8
SEEDS = range(50)


def rectangular_case(seed: int):
    """Random tensor of random rank with a seeded {1}-inverse."""
    generator, t, (n1, n2, n3) = random_case(seed)
    a = low_rank_tensor(generator, n1, n2, 1 + seed % min(n1, n2), n3, t)
    a_minus, _ = one_inverse_random(a, t, seed)
    return a, a_minus, t


def indexed_case(seed: int):
    """Square tensor with index 1 to 3 and a seeded {1}-inverse."""
    generator = TensorGenerator(seed)
    t = generator.transform(1 + seed % 3)
    a = generator.with_index(3 + seed % 2, t.n3, 1 + seed % 3, t)
    a_minus, _ = one_inverse_random(a, t, seed)
    return a, a_minus, t


class TestOneMPIdentities:
    """A^(-,+) = A^- * A * A^+ and its equivalent characterizations."""

    @pytest.mark.parametrize("seed", SEEDS)
    def test_products_with_a(self, seed):
        a, a_minus, t = rectangular_case(seed)
        x = one_mp_inverse(a, t, a_minus=a_minus)
        assert check_penrose(a, x, t, subset=(1, 2, 3), tol=RTOL).passed
        assert_tensor_close(m_product(x, a, t), m_product(a_minus, a, t), rtol=RTOL)
        assert_tensor_close(m_product(a, x, t), m_product(a, mp_inverse(a, t), t), rtol=RTOL)

    @pytest.mark.parametrize("seed", SEEDS)
    def test_equivalent_statements(self, seed):
        a, a_minus, t = rectangular_case(seed)
        x = one_mp_inverse(a, t, a_minus=a_minus)
        a_mp = mp_inverse(a, t)
        a_star = conj_transpose(a, t)
        assert_tensor_close(m_product_chain([x, a, a_mp], t), x, rtol=RTOL)
        assert_tensor_close(m_product_chain([x, a, a_mp], t), m_product_chain([a_minus, a, a_mp], t), rtol=RTOL)
        assert_tensor_close(m_product_chain([x, a, a_star], t), m_product_chain([a_minus, a, a_star], t), rtol=RTOL)

    @pytest.mark.parametrize("seed", range(20))
    def test_one_two_three_inverse_is_one_mp(self, seed):
        generator, t, (n1, n2, n3) = random_case(seed)
        a = low_rank_tensor(generator, n1, n2, 1, n3, t)
        a_mp = mp_inverse(a, t)
        y = generator.tensor((n2, n1, n3))
        # A^+ + (I - A^+ A) Y A A^+ satisfies equations 1, 2 and 3
        x = a_mp + m_product_chain([tensor_sub(y, m_product_chain([a_mp, a, y], t)), a, a_mp], t)
        assert check_penrose(a, x, t, subset=(1, 2, 3), tol=1e-10).passed
        assert check_one_mp_system(a, x, t, tol=RTOL).passed


class TestDrazinCrossProduct:
    """(G * H)^D = G * ((H * G)^D)^2 * H."""

    @pytest.mark.parametrize("seed", SEEDS)
    def test_tall_factor_and_its_adjoint(self, seed):
        generator, t, (n1, n2, n3) = random_case(seed)
        g = generator.well_conditioned((max(n1, n2), min(n1, n2), n3), t)
        h = conj_transpose(g, t)
        inner = drazin_inverse(m_product(h, g, t), t)
        expected = m_product_chain([g, inner, inner, h], t)
        assert_tensor_close(drazin_inverse(m_product(g, h, t), t), expected, rtol=RTOL)

    @pytest.mark.parametrize("seed", range(20))
    def test_square_invertible_factors(self, seed):
        generator, t, (n, _, n3) = random_case(seed)
        g = generator.well_conditioned((n, n, n3), t)
        h = generator.well_conditioned((n, n, n3), t)
        inner = drazin_inverse(m_product(h, g, t), t)
        expected = m_product_chain([g, inner, inner, h], t)
        assert_tensor_close(drazin_inverse(m_product(g, h, t), t), expected, rtol=RTOL)


class TestOneDIdentities:
    """A^(-,D) = A^- * A * A^D on tensors of index 1 to 3."""

    @pytest.mark.parametrize("seed", SEEDS)
    def test_square_formula(self, seed):
        a, a_minus, t = indexed_case(seed)
        x = one_d_inverse(a, t, a_minus=a_minus)
        assert_tensor_close(tensor_power(x, 2, t), m_product(a_minus, drazin_inverse(a, t), t), rtol=RTOL)

    @pytest.mark.parametrize("seed", SEEDS)
    @pytest.mark.parametrize("m", [2, 3, 4, 5, 6])
    def test_power_formula(self, seed, m):
        a, a_minus, t = indexed_case(seed)
        x = one_d_inverse(a, t, a_minus=a_minus)
        a_d = drazin_inverse(a, t)
        if m % 2 == 0:
            expected = tensor_power(m_product(a_minus, a_d, t), m // 2, t)
        else:
            expected = m_product(a_minus, tensor_power(a_d, (m + 1) // 2, t), t)
        assert_tensor_close(tensor_power(x, m, t), expected, rtol=RTOL)

    @pytest.mark.parametrize("seed", SEEDS)
    def test_equivalent_statements(self, seed):
        a, a_minus, t = indexed_case(seed)
        x = one_d_inverse(a, t, a_minus=a_minus)
        a_d = drazin_inverse(a, t)
        k = tensor_index(a, t).overall
        a_k = tensor_power(a, k, t)

        # X*A*X = X, X*A^k = A^-*A^k, A*X*A = A*A^D*A, A*X = A*A^D
        assert_tensor_close(m_product_chain([x, a, x], t), x, rtol=RTOL)
        assert_tensor_close(m_product(x, a_k, t), m_product(a_minus, a_k, t), rtol=RTOL)
        assert_tensor_close(m_product_chain([a, x, a], t), m_product_chain([a, a_d, a], t), rtol=RTOL)
        assert_tensor_close(m_product(a, x, t), m_product(a, a_d, t), rtol=RTOL)

        # A^-*A*X = X and X = X*A*A^D
        assert_tensor_close(m_product_chain([a_minus, a, x], t), x, rtol=RTOL)
        assert_tensor_close(m_product_chain([x, a, a_d], t), x, rtol=RTOL)

        # A*X*A^k = A^k and A^k*X = A^k*A^D
        assert_tensor_close(m_product_chain([a, x, a_k], t), a_k, rtol=RTOL)
        assert_tensor_close(m_product(a_k, x, t), m_product(a_k, a_d, t), rtol=RTOL)

        # A^-*A*A^D*A = X*A
        assert_tensor_close(m_product_chain([a_minus, a, a_d, a], t), m_product(x, a, t), rtol=RTOL)

    @pytest.mark.parametrize("seed", range(20))
    def test_drazin_of_a_minus_times_a_squared(self, seed):
        a, a_minus, t = indexed_case(seed)
        x = one_d_inverse(a, t, a_minus=a_minus)
        assert_tensor_close(drazin_inverse(m_product_chain([a_minus, a, a], t), t), x, rtol=1e-6)


class TestIdempotentOneD:
    """Consequences of an idempotent 1-D inverse."""

    @staticmethod
    def assert_consequences(a, x, t):
        k = max(tensor_index(a, t).overall, 1)
        a_k = tensor_power(a, k, t)
        assert_tensor_close(tensor_power(a, k + 1, t), a_k, rtol=RTOL)
        assert_tensor_close(m_product(a_k, x, t), a_k, rtol=RTOL)
        assert_tensor_close(m_product(drazin_inverse(a, t), a_k, t), a_k, rtol=RTOL)
        for m in (1, 2, 3):
            x_m = tensor_power(x, m, t)
            assert_tensor_close(m_product(x_m, a, t), x_m, rtol=RTOL)
            assert_tensor_close(m_product(x_m, tensor_power(a, m, t), t), x, rtol=RTOL)

    @pytest.mark.parametrize("seed", range(20))
    def test_projector(self, seed):
        generator = TensorGenerator(seed)
        t = generator.transform(1 + seed % 4)
        tall = generator.well_conditioned((4, 2, t.n3), t)
        projector = m_product(tall, mp_inverse(tall, t), t)
        p_minus, _ = one_inverse_random(projector, t, seed)
        x = one_d_inverse(projector, t, a_minus=p_minus)
        assert frobenius_norm(tensor_power(x, 2, t) - x) <= 1e-10 * max(frobenius_norm(x), 1.0)
        self.assert_consequences(projector, x, t)

    @pytest.mark.parametrize("seed", SEEDS)
    def test_random_instances_when_idempotent(self, seed):
        a, a_minus, t = indexed_case(seed)
        x = one_d_inverse(a, t, a_minus=a_minus)
        if frobenius_norm(tensor_power(x, 2, t) - x) <= 1e-10 * frobenius_norm(x):
            self.assert_consequences(a, x, t)


class TestOneStarIdentities:
    """A^(-,*) = A^- * A * A^* and its equivalent characterizations."""

    @pytest.mark.parametrize("seed", SEEDS)
    def test_equivalent_statements(self, seed):
        a, a_minus, t = rectangular_case(seed)
        x = one_star_inverse(a, t, a_minus=a_minus)
        a_star = conj_transpose(a, t)
        a_mp = mp_inverse(a, t)
        mp_star = conj_transpose(a_mp, t)

        assert_tensor_close(m_product_chain([a_minus, a, x], t), x, rtol=RTOL)
        assert_tensor_close(m_product(a, x, t), m_product(a, a_star, t), rtol=RTOL)
        assert_tensor_close(m_product_chain([x, mp_star, x], t), x, rtol=RTOL)
        assert_tensor_close(m_product_chain([mp_star, x, mp_star], t), mp_star, rtol=RTOL)
        assert_tensor_close(m_product(x, mp_star, t), m_product(a_minus, a, t), rtol=RTOL)
        assert_tensor_close(m_product(mp_star, x, t), m_product(a, a_mp, t), rtol=RTOL)
        assert_tensor_close(m_product_chain([a_mp, a, x], t), a_star, rtol=RTOL)

    @pytest.mark.parametrize("seed", SEEDS)
    def test_closure_under_adjoint_pseudoinverse_product(self, seed):
        a, g1, t = rectangular_case(seed)
        g2, _ = one_inverse_random(a, t, seed + 1000)
        u = one_star_inverse(a, t, a_minus=g1)
        v = one_star_inverse(a, t, a_minus=g2)
        product = m_product_chain([u, conj_transpose(mp_inverse(a, t), t), v], t)
        assert_tensor_close(product, u, rtol=RTOL)
        assert check_one_star(a, product, g1, t, tol=RTOL).passed
