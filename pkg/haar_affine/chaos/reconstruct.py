import math
from typing import List, Optional, Sequence, Tuple, Union

from loguru import logger

from haar_affine.chaos.affine import affine_coeffs, biorthogonal_coeffs
from haar_affine.chaos.chaos1 import Chaos1, dual_coeffs
from haar_affine.config import settings
from haar_affine.dyadic.coeffs import HaarCoeffMap, fourier_haar
from haar_affine.dyadic.norms import lp_norm
from haar_affine.dyadic.scalars import format_rational
from haar_affine.dyadic.stepfn import DyadicStep
from haar_affine.dyadic.tree import MAX_LENGTH, chaos_order, index_to_multi
from haar_affine.exceptions import CapacityError, DomainError
from haar_affine.models import NormReport, ReconstructionReport, ScalarMode


def chaos_ordering(n_max: int) -> List[int]:
    """1..n_max ordered by chaos order d, then by n inside N_d."""
    return sorted(range(1, n_max + 1), key=lambda n: (chaos_order(n), n))


def _error_reports(residual: HaarCoeffMap, p_list: Sequence[float]) -> List[NormReport]:
    squared = residual.norm2_squared()
    exact = residual.mode == ScalarMode.EXACT
    reports = [
        NormReport(
            value=math.sqrt(float(squared)),
            method="parseval",
            truncation={"max_length": residual.max_length},
            mode=residual.mode,
            exact_value=format_rational(squared) if exact else None,
            exact_power=2 if exact else None,
            tolerance=None if exact else settings.float_tolerance,
            notes=["p=2"],
        )
    ]
    for p in p_list:
        if p == 2:
            continue
        if residual.level > settings.max_step_level:
            logger.warning(f"Skipping the L^{p} error: residual needs level {residual.level}")
            continue
        report = lp_norm(residual.to_step(max(residual.level, 1)), p)
        reports.append(report.model_copy(update={"notes": report.notes + [f"p={p}"]}))
    return reports


def reconstruct_in_chaoses(
    c: Chaos1,
    x: Union[DyadicStep, HaarCoeffMap],
    n_max: int,
    depth: int,
    p_list: Optional[Sequence[float]] = None,
) -> Tuple[HaarCoeffMap, ReconstructionReport]:
    """Partial sum of x = sum_d sum_{n in N_d} (x, g^n) f_n over 1 <= n <= n_max.

    The coefficients use the bilinear pairing; f_n is truncated at ``depth``.
    Returns the partial sum as a coefficient map and the error report.
    """
    if n_max < 1:
        raise DomainError(f"n_max must be at least 1, got {n_max}")
    top = n_max.bit_length() - 1
    if top + depth - 1 > MAX_LENGTH:
        raise CapacityError(f"n_max={n_max} at depth {depth} exceeds the cap of {MAX_LENGTH}")
    target = fourier_haar(x) if isinstance(x, DyadicStep) else x
    dual = dual_coeffs(c, top)
    p_list = list(p_list) if p_list is not None else [2.0]

    logger.info(f"Reconstructing in chaoses: n_max={n_max}, depth={depth}, mode={c.mode.value}")
    terms = []
    used = 0
    for n in chaos_ordering(n_max):
        alpha = index_to_multi(n)
        coefficient = target.inner(biorthogonal_coeffs(alpha, dual))
        if not coefficient:
            continue
        used += 1
        terms.extend((gamma, coefficient * v) for gamma, v in affine_coeffs(alpha, c, depth).items())
    partial = HaarCoeffMap.from_terms(terms, c.mode)
    residual = target - partial
    report = ReconstructionReport(
        n_max=n_max,
        depth=depth,
        terms=used,
        nonzero_coefficients=len(partial),
        errors=_error_reports(residual, p_list),
    )
    logger.info(f"Reconstruction used {used} nonzero coefficients, L2 error {report.errors[0].value}")
    return partial, report
