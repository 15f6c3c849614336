"""
Verify Service Module - residual checks for claimed inverses

Every check evaluates the defining equations of a claim, measures each
residual in the Frobenius norm of the original (untransformed) domain and
passes when all residuals are within tolerance * max(||A||_F, 1).
"""

import json
import logging
from dataclasses import dataclass, field
from typing import Dict, Iterable, Optional

import numpy as np

from services.errors import ShapeError
from services.inverse_service import drazin_inverse, mp_inverse, require_one_inverse, tensor_index
from services.solver_service import (
    PROJECTED_SYSTEMS,
    SYSTEM_DRAZIN_PROJECTED,
    SYSTEM_DRAZIN_RIGHT,
    SYSTEM_MP_PROJECTED,
    SYSTEM_MP_RIGHT,
)
from services.tensor_service import (
    DenseTensor3,
    TransformSpec,
    frobenius_norm,
    from_transformed_slices,
    transformed_slices,
)

logger = logging.getLogger(__name__)

DEFAULT_TOLERANCE = 1e-8

CLAIM_MP = "mp"
CLAIM_ONE_MP = "one-mp"
CLAIM_DRAZIN = "drazin"
CLAIM_ONE_D = "one-d"
CLAIM_ONE_STAR = "one-star"
CLAIM_EXACT = "exact"
CLAIM_ONE_INVERSE = "one-inverse"

CLAIMS = (CLAIM_MP, CLAIM_ONE_MP, CLAIM_DRAZIN, CLAIM_ONE_D, CLAIM_ONE_STAR, CLAIM_EXACT, CLAIM_ONE_INVERSE)

DRAZIN_POWER_EQUATION = "(I) X*A^(k+1) = A^k"

_PENROSE_NAMES = {
    1: "(I) A*X*A = A",
    2: "(II) X*A*X = X",
    3: "(III) (A*X)^* = A*X",
    4: "(IV) (X*A)^* = X*A",
}


@dataclass(frozen=True)
class VerificationReport:
    claim: str
    residuals: Dict[str, float]
    tolerance: float
    scale: float
    passed: bool = field(init=False)

    def __post_init__(self):
        limit = self.tolerance * self.scale
        object.__setattr__(self, "passed", all(value <= limit for value in self.residuals.values()))

    def to_dict(self) -> Dict:
        return {
            "claim": self.claim,
            "residuals": dict(self.residuals),
            "tolerance": self.tolerance,
            "scale": self.scale,
            "pass": self.passed,
        }

    def to_json(self) -> str:
        return json.dumps(self.to_dict(), indent=2)

    def to_text(self) -> str:
        """Flat key-value block, one line per field or residual."""
        lines = [f"claim: {self.claim}"]
        lines.extend(f"residual {name}: {value:.6e}" for name, value in self.residuals.items())
        lines.append(f"tolerance: {self.tolerance:.3e}")
        lines.append(f"scale: {self.scale:.6e}")
        lines.append(f"pass: {'yes' if self.passed else 'no'}")
        return "\n".join(lines)


def _conj_t(stack: np.ndarray) -> np.ndarray:
    return np.conj(np.swapaxes(stack, 1, 2))


def _scale(a: DenseTensor3) -> float:
    return max(frobenius_norm(a), 1.0)


def _report(claim: str, residuals: Dict[str, np.ndarray], a: DenseTensor3, t: TransformSpec,
            tol: Optional[float], weights: Optional[Dict[str, float]] = None) -> VerificationReport:
    """
    Turn transform-domain differences into original-domain residual norms.

    A residual named in weights is multiplied by its weight before the
    comparison with tolerance * scale.
    """
    weights = weights or {}
    norms = {
        name: weights.get(name, 1.0) * frobenius_norm(from_transformed_slices(diff, t))
        for name, diff in residuals.items()
    }
    report = VerificationReport(
        claim=claim,
        residuals=norms,
        tolerance=DEFAULT_TOLERANCE if tol is None else tol,
        scale=_scale(a),
    )
    logger.debug("Check %s: residuals %s, pass=%s", claim, norms, report.passed)
    return report


def _check_inverse_shape(a: DenseTensor3, x: DenseTensor3, name: str = "x") -> None:
    expected = (a.n2, a.n1, a.n3)
    if x.shape != expected:
        raise ShapeError(f"{name} has shape {x.shape}, expected {expected} for A of shape {a.shape}.")


def _require_square(a: DenseTensor3) -> None:
    if not a.is_square():
        raise ShapeError(f"This check needs a square tensor (n1 = n2), got shape {a.shape}.")


def _drazin_exponent(a: DenseTensor3, t: TransformSpec) -> int:
    return max(tensor_index(a, t).overall, 1)


def penrose_label(subset: Iterable[int]) -> str:
    equations = sorted(set(subset))
    if equations == [1, 2, 3, 4]:
        return CLAIM_MP
    if equations == [1]:
        return CLAIM_ONE_INVERSE
    return "{" + ",".join(str(e) for e in equations) + "}-inverse"


def check_penrose(a: DenseTensor3, x: DenseTensor3, t: TransformSpec, subset: Iterable[int] = (1, 2, 3, 4),
                  tol: Optional[float] = None) -> VerificationReport:
    """
    Residuals of the requested Penrose equations.

    Args:
        a: the tensor
        x: the candidate inverse, n2 x n1 x n3
        t: the transform
        subset: equation numbers drawn from {1, 2, 3, 4}
        tol: relative tolerance, DEFAULT_TOLERANCE when omitted
    """
    equations = sorted(set(subset))
    if not equations or not set(equations) <= set(_PENROSE_NAMES):
        raise ValueError(f"Penrose equations must be a non-empty subset of 1-4, got {equations}.")
    _check_inverse_shape(a, x)
    hat_a, hat_x = transformed_slices(a, t), transformed_slices(x, t)
    ax, xa = hat_a @ hat_x, hat_x @ hat_a
    differences = {
        1: lambda: ax @ hat_a - hat_a,
        2: lambda: xa @ hat_x - hat_x,
        3: lambda: _conj_t(ax) - ax,
        4: lambda: _conj_t(xa) - xa,
    }
    residuals = {_PENROSE_NAMES[e]: differences[e]() for e in equations}
    return _report(penrose_label(equations), residuals, a, t, tol)


def check_one_inverse(a: DenseTensor3, x: DenseTensor3, t: TransformSpec,
                      tol: Optional[float] = None) -> VerificationReport:
    """The {1}-equation A*X*A = A on its own."""
    return check_penrose(a, x, t, subset=(1,), tol=tol)


def check_drazin(a: DenseTensor3, x: DenseTensor3, t: TransformSpec,
                 tol: Optional[float] = None) -> VerificationReport:
    """
    Residuals of the three Drazin equations at k = max(ind(A), 1).

    Equation (I) is measured relative to ||A^k||_F whenever some slice has a
    nonzero core part. For a nilpotent A the absolute residual is kept.
    """
    _require_square(a)
    _check_inverse_shape(a, x)
    index = tensor_index(a, t)
    k = max(index.overall, 1)
    hat_a, hat_x = transformed_slices(a, t), transformed_slices(x, t)
    a_k = np.linalg.matrix_power(hat_a, k)
    weights = {}
    a_k_norm = frobenius_norm(from_transformed_slices(a_k, t))
    if any(index.stable_ranks) and a_k_norm > 0:
        weights[DRAZIN_POWER_EQUATION] = _scale(a) / a_k_norm
    residuals = {
        DRAZIN_POWER_EQUATION: hat_x @ a_k @ hat_a - a_k,
        "(II) X*A*X = X": hat_x @ hat_a @ hat_x - hat_x,
        "(III) A*X = X*A": hat_a @ hat_x - hat_x @ hat_a,
    }
    return _report(CLAIM_DRAZIN, residuals, a, t, tol, weights)


def check_one_d(a: DenseTensor3, x: DenseTensor3, a_minus: DenseTensor3, t: TransformSpec,
                tol: Optional[float] = None) -> VerificationReport:
    """
    Residuals of the 1-D system for the fixed {1}-inverse a_minus.

    Raises:
        InvalidInverseError: a_minus is not a {1}-inverse of a.
    """
    _require_square(a)
    _check_inverse_shape(a, x)
    require_one_inverse(a, a_minus, t)
    k = _drazin_exponent(a, t)
    hat_a, hat_x = transformed_slices(a, t), transformed_slices(x, t)
    hat_minus = transformed_slices(a_minus, t)
    hat_d = transformed_slices(drazin_inverse(a, t), t)
    a_k = np.linalg.matrix_power(hat_a, k)
    residuals = {
        "(I) X*A*X = X": hat_x @ hat_a @ hat_x - hat_x,
        "(II) X*A^k = A^-*A^k": hat_x @ a_k - hat_minus @ a_k,
        "(III) A*X = A*A^D": hat_a @ hat_x - hat_a @ hat_d,
    }
    return _report(CLAIM_ONE_D, residuals, a, t, tol)


def check_one_star(a: DenseTensor3, x: DenseTensor3, a_minus: DenseTensor3, t: TransformSpec,
                   tol: Optional[float] = None) -> VerificationReport:
    """
    Residuals of the 1-Star system for the fixed {1}-inverse a_minus.

    Raises:
        InvalidInverseError: a_minus is not a {1}-inverse of a.
    """
    _check_inverse_shape(a, x)
    require_one_inverse(a, a_minus, t)
    hat_a, hat_x = transformed_slices(a, t), transformed_slices(x, t)
    hat_minus = transformed_slices(a_minus, t)
    mp_conj = _conj_t(transformed_slices(mp_inverse(a, t), t))
    residuals = {
        "(I) X*(A^+)^**X = X": hat_x @ mp_conj @ hat_x - hat_x,
        "(II) A*X = A*A^*": hat_a @ hat_x - hat_a @ _conj_t(hat_a),
        "(III) X*(A^+)^* = A^-*A": hat_x @ mp_conj - hat_minus @ hat_a,
    }
    return _report(CLAIM_ONE_STAR, residuals, a, t, tol)


def check_one_mp_system(a: DenseTensor3, x: DenseTensor3, t: TransformSpec,
                        tol: Optional[float] = None) -> VerificationReport:
    """X*A*X = X and A*X = A*A^+; passing is membership in the 1-MP class."""
    _check_inverse_shape(a, x)
    hat_a, hat_x = transformed_slices(a, t), transformed_slices(x, t)
    hat_mp = transformed_slices(mp_inverse(a, t), t)
    residuals = {
        "X*A*X = X": hat_x @ hat_a @ hat_x - hat_x,
        "A*X = A*A^+": hat_a @ hat_x - hat_a @ hat_mp,
    }
    return _report(CLAIM_ONE_MP, residuals, a, t, tol)


def check_one_mp(a: DenseTensor3, x: DenseTensor3, a_minus: DenseTensor3, t: TransformSpec,
                 tol: Optional[float] = None) -> VerificationReport:
    """
    1-MP check for a fixed {1}-inverse: X = X*A*A^+ and X*A = A^-*A.

    Raises:
        InvalidInverseError: a_minus is not a {1}-inverse of a.
    """
    _check_inverse_shape(a, x)
    require_one_inverse(a, a_minus, t)
    hat_a, hat_x = transformed_slices(a, t), transformed_slices(x, t)
    hat_minus = transformed_slices(a_minus, t)
    hat_mp = transformed_slices(mp_inverse(a, t), t)
    residuals = {
        "X*A*A^+ = X": hat_x @ hat_a @ hat_mp - hat_x,
        "X*A = A^-*A": hat_x @ hat_a - hat_minus @ hat_a,
    }
    return _report(CLAIM_ONE_MP, residuals, a, t, tol)


def check_exact(a: DenseTensor3, x: DenseTensor3, t: TransformSpec,
                tol: Optional[float] = None) -> VerificationReport:
    """A*X = I and X*A = I."""
    _require_square(a)
    _check_inverse_shape(a, x)
    hat_a, hat_x = transformed_slices(a, t), transformed_slices(x, t)
    identity = np.eye(a.n1, dtype=np.complex128)
    residuals = {
        "A*X = I": hat_a @ hat_x - identity,
        "X*A = I": hat_x @ hat_a - identity,
    }
    return _report(CLAIM_EXACT, residuals, a, t, tol)


def check_system(system: str, a: DenseTensor3, x: DenseTensor3, t: TransformSpec,
                 b: Optional[DenseTensor3] = None, a_minus: Optional[DenseTensor3] = None,
                 tol: Optional[float] = None) -> VerificationReport:
    """
    Residual of the defining equation of one multilinear system.

    Projected systems (mp-proj, drazin-proj, star-proj) need b; right-sided
    systems (mp-right, drazin-right) need a_minus.
    """
    hat_a, hat_x = transformed_slices(a, t), transformed_slices(x, t)
    if system in PROJECTED_SYSTEMS:
        if b is None:
            raise ShapeError(f"System {system} needs a right-hand side tensor B.")
        hat_b = transformed_slices(b, t)
        if system == SYSTEM_MP_PROJECTED:
            hat_inv = transformed_slices(mp_inverse(a, t), t)
        elif system == SYSTEM_DRAZIN_PROJECTED:
            hat_inv = transformed_slices(drazin_inverse(a, t), t)
        else:
            hat_inv = _conj_t(hat_a)
        residuals = {"A*X = A*G*B": hat_a @ hat_x - hat_a @ hat_inv @ hat_b}
    elif system in (SYSTEM_MP_RIGHT, SYSTEM_DRAZIN_RIGHT):
        if a_minus is None:
            raise ShapeError(f"System {system} needs the fixed {{1}}-inverse A^-.")
        hat_minus = transformed_slices(a_minus, t)
        inverse = mp_inverse(a, t) if system == SYSTEM_MP_RIGHT else drazin_inverse(a, t)
        projector = hat_a @ transformed_slices(inverse, t)
        residuals = {"X*A*G = A^-*A*G": hat_x @ projector - hat_minus @ projector}
    else:
        raise ValueError(f"Unknown system '{system}'.")
    return _report(f"system:{system}", residuals, a, t, tol)
