import math
from typing import List, Tuple

import numpy as np
from loguru import logger
from numpy.polynomial import polynomial as P

from haar_affine.config import settings
from haar_affine.exceptions import DomainError
from haar_affine.models import ComplexValue, RootsReport
from haar_affine.symbol.series import PowerSeries

NEWTON_STEPS = 3


def _polynomial_coeffs(u: PowerSeries) -> np.ndarray:
    if not u.is_polynomial:
        raise DomainError("Roots are only computed for polynomial symbols")
    top = u.trimmed_degree()
    if top < 0:
        raise DomainError("The zero polynomial has no isolated roots")
    return u.as_complex(top)


def _refine(coeffs: np.ndarray, z: complex) -> complex:
    derivative = P.polyder(coeffs)
    for _ in range(NEWTON_STEPS):
        slope = P.polyval(z, derivative)
        if slope == 0:
            break
        step = P.polyval(z, coeffs) / slope
        if not np.isfinite(step):
            break
        z = z - step
    return complex(z)


def _relative_residual(coeffs: np.ndarray, z: complex) -> float:
    scale = float(P.polyval(abs(z), np.abs(coeffs)))
    return abs(complex(P.polyval(z, coeffs))) / scale if scale else 0.0


def polynomial_roots(u: PowerSeries) -> Tuple[List[complex], float]:
    """All roots from the companion matrix, each polished by a few Newton steps."""
    coeffs = _polynomial_coeffs(u)
    if len(coeffs) == 1:
        return [], 0.0
    raw = P.polyroots(coeffs)
    roots = [_refine(coeffs, complex(z)) for z in raw]
    residual = max(_relative_residual(coeffs, z) for z in roots)
    return roots, residual


def _argument(z: complex) -> float:
    return math.atan2(z.imag, z.real) % (2 * math.pi)


def roots_min_modulus(u: PowerSeries) -> RootsReport:
    """All roots plus z_0, the smallest in modulus; ties go to the smallest argument in [0, 2 pi)."""
    roots, residual = polynomial_roots(u)
    report = RootsReport(
        roots=[ComplexValue(re=z.real, im=z.imag) for z in roots],
        max_residual=residual,
        residual_ok=residual <= settings.root_residual,
    )
    if not report.residual_ok:
        logger.warning(f"Root residual {residual} exceeds {settings.root_residual}")
    if not roots:
        return report
    smallest = min(abs(z) for z in roots)
    ties = [z for z in roots if abs(z) <= smallest * (1 + 1e-12) + 1e-15]
    z0 = min(ties, key=_argument)
    report.z0 = ComplexValue(re=z0.real, im=z0.imag)
    report.z0_modulus = abs(z0)
    return report
