from fractions import Fraction
from typing import List

from loguru import logger

from haar_affine.chaos.chaos1 import Chaos1, truncate_to_step, values_from_coeffs
from haar_affine.config import settings
from haar_affine.dyadic.scalars import format_scalar, is_zero, zero
from haar_affine.models import BVReport, CheckResult, ScalarMode

RELATIVE_SLACK = 1e-12
POINTWISE_LEVEL = 12


def _tolerance(c: Chaos1) -> float:
    return 0.0 if c.mode == ScalarMode.EXACT else settings.float_tolerance


def check_value_relation(c: Chaos1, N: int) -> CheckResult:
    """(1 - z) f_check(z) = (2z - 1) f^(z) through degree N.

    f_check has the coefficients f(1/2^k). Coefficient k of the identity reads
    v_k - v_{k-1} = 2 c_{k-1} - c_k.
    """
    values = values_from_coeffs(c, N)
    tol = _tolerance(c)
    failures: List[int] = []
    previous_v, previous_c = zero(c.mode), zero(c.mode)
    for k in range(N + 1):
        ck = c.coeff(k)
        lhs = values[k] - previous_v
        rhs = previous_c * 2 - ck
        if not is_zero(lhs - rhs, tol):
            failures.append(k)
        previous_v, previous_c = values[k], ck

    # values against pointwise evaluation of the truncation at 1/2^k
    m = min(N + 1, settings.max_step_level, POINTWISE_LEVEL)
    step = truncate_to_step(c, m)
    pointwise_failures = [
        k for k in range(m) if not is_zero(step.value_at(Fraction(1, 1 << k)) - values[k], tol)
    ]
    if failures or pointwise_failures:
        logger.warning(f"Value relation failed at degrees {failures[:5]}, pointwise at {pointwise_failures[:5]}")
    return CheckResult(
        name="value-relation",
        passed=not failures and not pointwise_failures,
        detail={
            "degree": N,
            "failed_degrees": failures,
            "pointwise_level": m,
            "pointwise_failures": pointwise_failures,
            "values_head": [format_scalar(v) for v in values[:4]],
        },
    )


def bv_report(c: Chaos1, N: int) -> BVReport:
    """Partial sums of |2c_k - c_{k+1}| and |c_k| over k <= N, with both comparisons checked.

    The lower comparison uses c_k = sum_{j=k..N} 2^(k-j-1) (2c_j - c_{j+1}) + 2^(k-N-1) c_{N+1}.
    """
    moduli = [abs(c.coeff(k)) for k in range(N + 2)]
    jumps = [abs(c.coeff(k) * 2 - c.coeff(k + 1)) for k in range(N + 1)]
    bv_sum = float(sum(jumps))
    a1_sum = float(sum(moduli[: N + 1]))

    upper_ok = all(
        jumps[k] <= (2 * moduli[k] + moduli[k + 1]) * (1 + RELATIVE_SLACK) + RELATIVE_SLACK
        for k in range(N + 1)
    )
    lower_ok = True
    suffix = 0.0  # sum_{j=k..N} 2^(k-j-1) jumps[j], built from the top
    for k in range(N, -1, -1):
        suffix = suffix / 2 + jumps[k] / 2
        bound = suffix + moduli[N + 1] * 2.0 ** (k - N - 1)
        if moduli[k] > bound * (1 + RELATIVE_SLACK) + RELATIVE_SLACK:
            lower_ok = False
            break
    return BVReport(
        depth=N,
        bv_sum=bv_sum,
        a1_sum=a1_sum,
        ratio=bv_sum / a1_sum if a1_sum else None,
        termwise_upper_ok=upper_ok,
        tail_lower_ok=lower_ok,
    )

