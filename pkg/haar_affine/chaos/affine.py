"""The affine system f_beta = V^beta f, its biorthogonal partner g^alpha, and the
commutant operators T_f and T_f*.

Everything here works on :class:`HaarCoeffMap` so that deep objects stay sparse;
the ``*_function`` wrappers turn a map into a step function when it is shallow
enough.
"""
import math
from typing import Dict, List, Literal, Optional, Union

from loguru import logger

from haar_affine.chaos.chaos1 import Chaos1, DualCoeffs, dual_coeffs
from haar_affine.chaos.chaos_d import ChaosD
from haar_affine.config import settings
from haar_affine.dyadic.coeffs import HaarCoeffMap, fourier_haar
from haar_affine.dyadic.scalars import Scalar, abs2, format_rational, is_zero, one, power_of_two, zero
from haar_affine.dyadic.stepfn import DyadicStep
from haar_affine.dyadic.tree import (
    MAX_LENGTH,
    DyadicInterval,
    GapVector,
    MultiIndex,
    interval_of,
    multi_indices,
)
from haar_affine.exceptions import CapacityError, DomainError
from haar_affine.models import CheckResult, NormReport, ScalarMode
from haar_affine.symbol.series import multiply_last

Pairing = Literal["sesquilinear", "bilinear"]
WALSH_MAX_LENGTH = 12


def _as_coeff_map(x: Union[HaarCoeffMap, DyadicStep]) -> HaarCoeffMap:
    return fourier_haar(x) if isinstance(x, DyadicStep) else x


def _trailing_zeros(alpha: MultiIndex) -> int:
    count = 0
    for b in reversed(alpha.bits):
        if b:
            break
        count += 1
    return count


def affine_coeffs(beta: MultiIndex, c: Chaos1, depth: int) -> HaarCoeffMap:
    """f_beta = V^beta f_depth = sum_{k<depth} c_k V^{beta 0_k} h."""
    if len(beta) + depth - 1 > MAX_LENGTH:
        raise CapacityError(f"f_beta with |beta|={len(beta)} at depth {depth} exceeds the cap of {MAX_LENGTH}")
    return HaarCoeffMap({beta + MultiIndex.zeros(k): c.coeff(k) for k in range(depth)}, c.mode)


def affine_function(beta: MultiIndex, c: Chaos1, depth: int, level: Optional[int] = None) -> DyadicStep:
    return affine_coeffs(beta, c, depth).to_step(level)


def biorthogonal_coeffs(alpha: MultiIndex, dual: DualCoeffs) -> HaarCoeffMap:
    """g^alpha = sum_{j<=k_s} d_j 2^(|alpha|-j) V^{alpha minus its last j zeros} h."""
    last_gap = GapVector.from_multi(alpha).gaps[-1]
    if dual.depth < last_gap:
        raise CapacityError(f"g^{alpha} needs dual depth >= {last_gap}, have {dual.depth}")
    k = len(alpha)
    coeffs: Dict[MultiIndex, Scalar] = {}
    for j in range(last_gap + 1):
        coeffs[MultiIndex(alpha.bits[:k - j])] = dual.coeff(j) * power_of_two(k - j, dual.mode)
    return HaarCoeffMap(coeffs, dual.mode)


def biorthogonal_g(alpha: MultiIndex, dual: DualCoeffs, level: Optional[int] = None) -> DyadicStep:
    if level is not None and level < len(alpha) + 1:
        raise CapacityError(f"g^{alpha} needs level >= {len(alpha) + 1}, got {level}")
    return biorthogonal_coeffs(alpha, dual).to_step(level)


def apply_Tf_coeffs(c: Chaos1, x: Union[HaarCoeffMap, DyadicStep], depth: int) -> HaarCoeffMap:
    """T_f x = sum_alpha xi_alpha V^alpha f_depth."""
    x = _as_coeff_map(x)
    terms = []
    for alpha, xi in x.items():
        if len(alpha) + depth - 1 > MAX_LENGTH:
            raise CapacityError(f"T_f at depth {depth} pushes {alpha} past the cap of {MAX_LENGTH}")
        for j in range(depth):
            terms.append((alpha + MultiIndex.zeros(j), xi * c.coeff(j)))
    return HaarCoeffMap.from_terms(terms, c.mode)


def apply_Tf(c: Chaos1, x: Union[HaarCoeffMap, DyadicStep], depth: int, level: Optional[int] = None) -> DyadicStep:
    return apply_Tf_coeffs(c, x, depth).to_step(level)


def apply_Tf_chaos(c: Chaos1, x: ChaosD, depth: int) -> ChaosD:
    """T_f on the d-th chaos: the symbol gets multiplied by f^(z_d)."""
    u = c.symbol().truncate(depth - 1)
    product = multiply_last(x.symbol(), u)
    return ChaosD.from_gaps(x.d, product, x.mode)


def apply_Tf_adjoint(
    c: Chaos1,
    y: Union[HaarCoeffMap, DyadicStep],
    depth: int,
    pairing: Pairing = "sesquilinear",
) -> HaarCoeffMap:
    """Coefficient at alpha: sum_{j<depth} c_j^* eta_{alpha 0_j} / 2^j.

    ``pairing="bilinear"`` gives the transpose instead, using c_j itself.
    """
    if pairing not in ("sesquilinear", "bilinear"):
        raise DomainError(f"Unknown pairing '{pairing}'")
    y = _as_coeff_map(y)
    terms = []
    for gamma, eta in y.items():
        k = len(gamma)
        for j in range(min(_trailing_zeros(gamma), depth - 1) + 1):
            cj = c.coeff(j)
            if pairing == "sesquilinear":
                cj = cj.conjugate()
            terms.append((MultiIndex(gamma.bits[:k - j]), cj * eta * power_of_two(-j, c.mode)))
    return HaarCoeffMap.from_terms(terms, c.mode)


def x0_coeffs(n: int, max_len: int, mode: ScalarMode = ScalarMode.EXACT) -> HaarCoeffMap:
    """Indices (0_{k_1}, 1, ..., 1, 0_n) with every k_i < n and length <= max_len, coefficient 1.

    The Haar functions at these indices have disjoint supports of total measure
    tending to 1 as max_len grows.
    """
    if n < 1:
        raise DomainError(f"x0 needs n >= 1, got {n}")
    if max_len > MAX_LENGTH:
        raise CapacityError(f"Cap {max_len} exceeds the multi-index cap of {MAX_LENGTH}")
    tail = (0,) * n
    prefixes: List[tuple] = [()]
    keys: List[MultiIndex] = []
    while prefixes:
        grown = []
        for prefix in prefixes:
            if len(prefix) + n <= max_len:
                keys.append(MultiIndex(prefix + tail))
            for k in range(n):
                block = prefix + (0,) * k + (1,)
                if len(block) + n <= max_len:
                    grown.append(block)
        prefixes = grown
    keys.sort(key=lambda a: (len(a), a.position))
    logger.debug(f"x0 with n={n}, cap {max_len}: {len(keys)} Haar terms")
    return HaarCoeffMap({alpha: one(mode) for alpha in keys}, mode)


def x0_construct(n: int, max_len: int, mode: ScalarMode = ScalarMode.EXACT) -> DyadicStep:
    return x0_coeffs(n, max_len, mode).to_step()


def x0_is_disjoint(x0: HaarCoeffMap) -> bool:
    """Exact check that the supports I_alpha of the terms do not overlap."""
    intervals: List[DyadicInterval] = sorted((interval_of(a) for a in x0), key=lambda I: I.left)
    return all(a.right <= b.left for a, b in zip(intervals, intervals[1:]))


def x0_block_cap(n: int, max_len: int) -> int:
    """Largest s such that every index with s blocks fits the cap."""
    return max_len // n


def x0_cap_for(c: Chaos1, n: int, tolerance: float) -> int:
    """Smallest cap whose geometric defect bound is below the tolerance."""
    limit = float(_x0_limit(c, n))
    if limit <= tolerance:
        return n
    blocks = math.ceil(math.log(tolerance / limit) / math.log(1.0 - 2.0 ** -n))
    while (1.0 - 2.0 ** -n) ** blocks * limit >= tolerance:
        blocks += 1
    cap = blocks * n
    if cap > MAX_LENGTH:
        raise CapacityError(f"Tolerance {tolerance} needs a cap of {cap}, beyond {MAX_LENGTH}")
    return cap


def _x0_limit(c: Chaos1, n: int):
    total = abs2(zero(c.mode))
    for j in range(n + 1):
        total = total + abs2(c.coeff(j)) * power_of_two(-j, c.mode)
    return total


def x0_energy(c: Chaos1, n: int, max_len: int) -> NormReport:
    """||T_f* x0||^2 in L^2 for the capped x0, with the limit sum_{j<=n} |c_j|^2 / 2^j.

    ``value`` is the squared norm.
    """
    x0 = x0_coeffs(n, max_len, c.mode)
    adjoint = apply_Tf_adjoint(c, x0, n + 1)
    energy = adjoint.norm2_squared()
    limit = _x0_limit(c, n)
    s_max = x0_block_cap(n, max_len)
    defect_bound = (1.0 - 2.0 ** -n) ** s_max * float(limit)
    exact = c.mode == ScalarMode.EXACT
    logger.info(f"x0 energy n={n}, cap {max_len}: {float(energy)} (limit {float(limit)})")
    return NormReport(
        value=float(energy),
        certified_lower=float(energy),
        certified_upper=max(float(limit), float(energy)),
        method="x0-energy",
        truncation={"n": n, "max_len": max_len, "blocks": s_max, "terms": len(x0)},
        mode=c.mode,
        exact_value=format_rational(energy) if exact else None,
        exact_power=1 if exact else None,
        notes=[
            "value is the squared L2 norm",
            f"limit={format_rational(limit) if exact else float(limit)}",
            f"defect_bound={defect_bound}",
        ],
    )


def walsh_coeffs(alpha: MultiIndex, c: Chaos1, depth: int) -> HaarCoeffMap:
    """W^alpha f = sum_{|beta|=|alpha|} (-1)^(alpha, beta) V^beta f_depth."""
    k = len(alpha)
    if k > WALSH_MAX_LENGTH:
        raise CapacityError(f"Walsh index length {k} exceeds {WALSH_MAX_LENGTH}")
    terms = []
    for beta in multi_indices(k):
        sign = -1 if sum(a & b for a, b in zip(alpha.bits, beta.bits)) % 2 else 1
        for gamma, v in affine_coeffs(beta, c, depth).items():
            terms.append((gamma, v * sign))
    return HaarCoeffMap.from_terms(terms, c.mode)


def walsh_affine(alpha: MultiIndex, c: Chaos1, depth: int, level: Optional[int] = None) -> DyadicStep:
    return walsh_coeffs(alpha, c, depth).to_step(level)


def inverse_check(c: Chaos1, x: Union[HaarCoeffMap, DyadicStep], depth: int) -> CheckResult:
    """T_g T_f x = x, with g the dual; terms past the dual depth are allowed to remain."""
    x = _as_coeff_map(x)
    dual = dual_coeffs(c, depth)
    g = dual.as_chaos()
    roundtrip = apply_Tf_coeffs(g, apply_Tf_coeffs(c, x, depth + 1), depth + 1)
    residual = roundtrip - x
    tol = 0.0 if c.mode == ScalarMode.EXACT else settings.float_tolerance
    stray = []
    for gamma, value in residual.items():
        if is_zero(value, tol):
            continue
        zeros = _trailing_zeros(gamma)
        explained = any(
            MultiIndex(gamma.bits[:len(gamma) - s]) in x for s in range(depth + 1, zeros + 1)
        )
        if not explained:
            stray.append(str(gamma))
    return CheckResult(
        name="inverse",
        passed=not stray,
        detail={
            "depth": depth,
            "residual_terms": len(residual),
            "tail_energy": float(residual.norm2_squared()),
            "unexplained": stray[:10],
        },
    )
