"""
Solver Service Module - solution families of multilinear systems

Each solver returns a SolutionFamily: a particular solution plus a projector
that carries the free tensor Z, so the general solution is
particular + P * Z (left-free) or particular + Z * P (right-free).
"""

import logging
from dataclasses import dataclass
from typing import Callable, Dict, Optional, Tuple

from services.errors import ShapeError
from services.generator_service import TensorGenerator
from services.inverse_service import (
    OneInverseParams,
    drazin_inverse,
    mp_inverse,
    one_d_inverse,
    one_inverse,
    one_mp_inverse,
    one_star_inverse,
)
from services.tensor_service import (
    DenseTensor3,
    TransformSpec,
    identity_tensor,
    m_product,
    tensor_add,
    tensor_sub,
)

logger = logging.getLogger(__name__)

LEFT_FREE = "left-free"
RIGHT_FREE = "right-free"

SYSTEM_MP_PROJECTED = "mp-proj"
SYSTEM_MP_RIGHT = "mp-right"
SYSTEM_DRAZIN_PROJECTED = "drazin-proj"
SYSTEM_DRAZIN_RIGHT = "drazin-right"
SYSTEM_STAR_PROJECTED = "star-proj"

PROJECTED_SYSTEMS = (SYSTEM_MP_PROJECTED, SYSTEM_DRAZIN_PROJECTED, SYSTEM_STAR_PROJECTED)


@dataclass(frozen=True, eq=False)
class SolutionFamily:
    """General solution of one system, with the free tensor left open."""

    particular: DenseTensor3
    projector: DenseTensor3
    side: str
    system: str

    @property
    def z_shape(self) -> Tuple[int, int, int]:
        """Shape the free tensor must have."""
        if self.side == LEFT_FREE:
            return self.projector.n2, self.particular.n2, self.particular.n3
        return self.particular.n1, self.projector.n1, self.particular.n3

    def instantiate(self, z: DenseTensor3, t: TransformSpec) -> DenseTensor3:
        """The member of the family selected by z."""
        if z.shape != self.z_shape:
            raise ShapeError(f"Free tensor has shape {z.shape}, expected {self.z_shape}.")
        if self.side == LEFT_FREE:
            return tensor_add(self.particular, m_product(self.projector, z, t))
        return tensor_add(self.particular, m_product(z, self.projector, t))

    def random_instance(
        self,
        seed: int,
        t: TransformSpec,
        generator_factory: Callable[[int], TensorGenerator] = TensorGenerator,
    ) -> DenseTensor3:
        """Instantiate with a seeded complex Gaussian free tensor drawn from generator_factory(seed)."""
        return self.instantiate(generator_factory(seed).tensor(self.z_shape), t)


def _check_rhs(a: DenseTensor3, b: Optional[DenseTensor3]) -> DenseTensor3:
    if b is None:
        raise ShapeError("This system needs a right-hand side tensor B.")
    if b.n1 != a.n1 or b.n3 != a.n3:
        raise ShapeError(f"Right-hand side has shape {b.shape}; it needs {a.n1} rows and {a.n3} slices.")
    return b


def _require_square(a: DenseTensor3, operation: str) -> None:
    if not a.is_square():
        raise ShapeError(f"{operation} needs a square tensor (n1 = n2), got shape {a.shape}.")


def _fixed_one_inverse(
    a: DenseTensor3, t: TransformSpec, params: Optional[OneInverseParams], a_minus: Optional[DenseTensor3]
) -> DenseTensor3:
    if params is not None and a_minus is not None:
        raise ValueError("Pass either params or a_minus, not both.")
    return a_minus if a_minus is not None else one_inverse(a, t, params)


def _left_projector(a: DenseTensor3, a_minus: DenseTensor3, t: TransformSpec) -> DenseTensor3:
    """I - A^- * A."""
    return tensor_sub(identity_tensor(a.n2, t), m_product(a_minus, a, t))


def solve_mp_projected(
    a: DenseTensor3,
    b: DenseTensor3,
    t: TransformSpec,
    params: Optional[OneInverseParams] = None,
    *,
    a_minus: Optional[DenseTensor3] = None,
) -> SolutionFamily:
    """Solutions of A * X = A * A^+ * B: X = A^(-,+) * B + (I - A^- * A) * Z."""
    _check_rhs(a, b)
    a_minus = _fixed_one_inverse(a, t, params, a_minus)
    particular = m_product(one_mp_inverse(a, t, a_minus=a_minus), b, t)
    return SolutionFamily(particular, _left_projector(a, a_minus, t), LEFT_FREE, SYSTEM_MP_PROJECTED)


def solve_mp_right(
    a: DenseTensor3,
    t: TransformSpec,
    params: Optional[OneInverseParams] = None,
    *,
    a_minus: Optional[DenseTensor3] = None,
) -> SolutionFamily:
    """Solutions of X * A * A^+ = A^(-,+): X = A^- + Z * (I - A * A^+)."""
    a_minus = _fixed_one_inverse(a, t, params, a_minus)
    projector = tensor_sub(identity_tensor(a.n1, t), m_product(a, mp_inverse(a, t), t))
    return SolutionFamily(a_minus, projector, RIGHT_FREE, SYSTEM_MP_RIGHT)


def solve_drazin_projected(
    a: DenseTensor3,
    b: DenseTensor3,
    t: TransformSpec,
    params: Optional[OneInverseParams] = None,
    *,
    a_minus: Optional[DenseTensor3] = None,
) -> SolutionFamily:
    """Solutions of A * X = A * A^D * B: X = A^(-,D) * B + (I - A^- * A) * Z."""
    _require_square(a, "solve_drazin_projected")
    _check_rhs(a, b)
    a_minus = _fixed_one_inverse(a, t, params, a_minus)
    particular = m_product(one_d_inverse(a, t, a_minus=a_minus), b, t)
    return SolutionFamily(particular, _left_projector(a, a_minus, t), LEFT_FREE, SYSTEM_DRAZIN_PROJECTED)


def solve_drazin_right(
    a: DenseTensor3,
    t: TransformSpec,
    params: Optional[OneInverseParams] = None,
    *,
    a_minus: Optional[DenseTensor3] = None,
) -> SolutionFamily:
    """Solutions of X * A * A^D = A^(-,D): X = A^- + Z * (I - A * A^D)."""
    _require_square(a, "solve_drazin_right")
    a_minus = _fixed_one_inverse(a, t, params, a_minus)
    projector = tensor_sub(identity_tensor(a.n1, t), m_product(a, drazin_inverse(a, t), t))
    return SolutionFamily(a_minus, projector, RIGHT_FREE, SYSTEM_DRAZIN_RIGHT)


def solve_star_projected(
    a: DenseTensor3,
    b: DenseTensor3,
    t: TransformSpec,
    params: Optional[OneInverseParams] = None,
    *,
    a_minus: Optional[DenseTensor3] = None,
) -> SolutionFamily:
    """Solutions of A * X = A * A^* * B: X = A^(-,*) * B + (I - A^- * A) * Z."""
    _check_rhs(a, b)
    a_minus = _fixed_one_inverse(a, t, params, a_minus)
    particular = m_product(one_star_inverse(a, t, a_minus=a_minus), b, t)
    return SolutionFamily(particular, _left_projector(a, a_minus, t), LEFT_FREE, SYSTEM_STAR_PROJECTED)


_PROJECTED: Dict[str, Callable[..., SolutionFamily]] = {
    SYSTEM_MP_PROJECTED: solve_mp_projected,
    SYSTEM_DRAZIN_PROJECTED: solve_drazin_projected,
    SYSTEM_STAR_PROJECTED: solve_star_projected,
}

_RIGHT: Dict[str, Callable[..., SolutionFamily]] = {
    SYSTEM_MP_RIGHT: solve_mp_right,
    SYSTEM_DRAZIN_RIGHT: solve_drazin_right,
}

SYSTEMS = tuple(_PROJECTED) + tuple(_RIGHT)


def solve(
    system: str,
    a: DenseTensor3,
    t: TransformSpec,
    b: Optional[DenseTensor3] = None,
    params: Optional[OneInverseParams] = None,
    a_minus: Optional[DenseTensor3] = None,
) -> SolutionFamily:
    """
    Solution family of the named system.

    Args:
        system: one of SYSTEMS
        a: coefficient tensor
        t: the transform
        b: right-hand side, required by the projected systems
        params: free blocks of the fixed {1}-inverse (zero when omitted)
        a_minus: the fixed {1}-inverse itself, instead of params

    Returns:
        SolutionFamily: particular solution, projector and free side
    """
    logger.debug("Solving %s for A of shape %s", system, a.shape)
    if system in _PROJECTED:
        return _PROJECTED[system](a, b, t, params, a_minus=a_minus)
    if system in _RIGHT:
        if b is not None:
            logger.warning("System %s has no right-hand side; ignoring B.", system)
        return _RIGHT[system](a, t, params, a_minus=a_minus)
    raise ValueError(f"Unknown system '{system}'. Choose from {', '.join(SYSTEMS)}.")
