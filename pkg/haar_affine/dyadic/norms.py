"""Norms of dyadic step functions: L^p, BMO_d, H^1_d (Paley) and the sharp function."""
import math
from fractions import Fraction
from typing import List

import numpy as np

from haar_affine.config import settings
from haar_affine.dyadic.coeffs import haar_levels
from haar_affine.dyadic.scalars import GaussianRational, abs2_array, format_rational, power_of_two
from haar_affine.dyadic.stepfn import DyadicStep, require_mean_zero
from haar_affine.exceptions import DomainError
from haar_affine.models import NormReport, ScalarMode


def _tolerance(x: DyadicStep):
    return None if x.mode == ScalarMode.EXACT else settings.float_tolerance


def _moduli(x: DyadicStep) -> np.ndarray:
    return np.abs(np.asarray([complex(v) for v in x.values], dtype=np.complex128))


def _real_step(values, level: int, mode: ScalarMode) -> DyadicStep:
    if mode == ScalarMode.EXACT:
        arr = np.empty(len(values), dtype=object)
        arr[:] = [GaussianRational(q) for q in values]
        return DyadicStep(level, arr, mode)
    return DyadicStep(level, np.asarray(values, dtype=np.complex128), mode)


def lp_norm(x: DyadicStep, p: float) -> NormReport:
    """(2^-m sum |x_j|^p)^(1/p); the p-th power is exact for even integer p in exact mode."""
    if p < 1:
        raise DomainError(f"L^p norms need p >= 1, got {p}")
    truncation = {"level": x.level}
    if math.isinf(p):
        if x.mode == ScalarMode.EXACT:
            top = max(abs2_array(x.values))
            return NormReport(
                value=math.sqrt(float(top)), method="sup", truncation=truncation, mode=x.mode,
                exact_value=format_rational(top), exact_power=2,
            )
        return NormReport(value=float(_moduli(x).max()), method="sup", truncation=truncation,
                          mode=x.mode, tolerance=settings.float_tolerance)
    if x.mode == ScalarMode.EXACT and float(p).is_integer() and int(p) % 2 == 0:
        half = int(p) // 2
        power = sum((q ** half for q in abs2_array(x.values)), Fraction(0)) * power_of_two(-x.level, x.mode)
        return NormReport(
            value=float(power) ** (1.0 / p), method="exact-power", truncation=truncation,
            mode=x.mode, exact_value=format_rational(power), exact_power=int(p),
        )
    total = np.sum(_moduli(x) ** p) / (1 << x.level)
    return NormReport(value=float(total ** (1.0 / p)), method="float", truncation=truncation,
                      mode=ScalarMode.FLOAT, tolerance=settings.float_tolerance)


def oscillations(x: DyadicStep) -> List[np.ndarray]:
    """Squared local L^2 oscillation ||2^|a| V^a* x||^2 for every alpha, grouped by |alpha|.

    Uses mean(|v|^2) - |mean(v)|^2 over the cells of I_alpha.
    """
    m = x.level
    s1 = x.values
    s2 = abs2_array(x.values)
    out: List[np.ndarray] = [None] * m
    for k in range(m - 1, -1, -1):
        s1 = s1[0::2] + s1[1::2]
        s2 = s2[0::2] + s2[1::2]
        width = m - k
        out[k] = s2 * power_of_two(-width, x.mode) - abs2_array(s1) * power_of_two(-2 * width, x.mode)
    return out


def bmo_norm(x: DyadicStep) -> NormReport:
    """sup over |alpha| < level(x) of ||2^|alpha| V^alpha* x||_2; the square is exact."""
    require_mean_zero(x)
    zero = Fraction(0) if x.mode == ScalarMode.EXACT else 0.0
    sup = max((max(row) for row in oscillations(x)), default=zero)
    sup = max(sup, zero)
    return NormReport(
        value=math.sqrt(float(sup)), method="dyadic-oscillation-sup",
        truncation={"level": x.level}, mode=x.mode,
        exact_value=format_rational(sup) if x.mode == ScalarMode.EXACT else None,
        exact_power=2 if x.mode == ScalarMode.EXACT else None,
        tolerance=_tolerance(x),
    )


def sharp_squared(x: DyadicStep) -> DyadicStep:
    """(x^#)^2: the cellwise max of squared oscillations over the ancestors of each cell."""
    require_mean_zero(x)
    zero = Fraction(0) if x.mode == ScalarMode.EXACT else 0.0
    current = [zero]
    for row in oscillations(x):
        parent = [v for v in current for _ in (0, 1)] if len(current) < len(row) else current
        current = [max(a, b) for a, b in zip(parent, row)]
    cells = [v for v in current for _ in (0, 1)] if x.level else current
    return _real_step(cells, x.level, x.mode)


def sharp(x: DyadicStep) -> DyadicStep:
    """x^#(t) = sup over I_alpha containing t of ||2^|alpha| V^alpha* x||_2, in float mode."""
    squared = sharp_squared(x)
    roots = [math.sqrt(max(0.0, complex(v).real)) for v in squared.values]
    return DyadicStep(x.level, np.asarray(roots, dtype=np.complex128), ScalarMode.FLOAT)


def paley_squared(x: DyadicStep) -> DyadicStep:
    """(Px)^2: squared Fourier-Haar coefficients summed along each cell's ancestor path."""
    require_mean_zero(x)
    zero = Fraction(0) if x.mode == ScalarMode.EXACT else 0.0
    current = [zero]
    for k, row in enumerate(haar_levels(x)):
        parent = [v for v in current for _ in (0, 1)] if k else current
        current = [a + b for a, b in zip(parent, abs2_array(row))]
    cells = [v for v in current for _ in (0, 1)] if x.level else current
    return _real_step(cells, x.level, x.mode)


def paley(x: DyadicStep) -> DyadicStep:
    squared = paley_squared(x)
    roots = [math.sqrt(max(0.0, complex(v).real)) for v in squared.values]
    return DyadicStep(x.level, np.asarray(roots, dtype=np.complex128), ScalarMode.FLOAT)


def h1_norm(x: DyadicStep) -> NormReport:
    """Paley form of the H^1_d norm, the integral of Px."""
    px = paley(x)
    value = float(np.sum(px.values.real)) / (1 << x.level)
    return NormReport(
        value=value, method="paley", truncation={"level": x.level}, mode=ScalarMode.FLOAT,
        tolerance=settings.float_tolerance, notes=["atomic H1_d norm not computed"],
    )


def paley_lp_norm(x: DyadicStep, p: float) -> NormReport:
    """||Px||_p, comparable to ||x||_p for 1 < p < infinity."""
    report = lp_norm(paley(x), p)
    return report.model_copy(update={"method": "paley-" + report.method})


def bmo_prime_norm(x: DyadicStep) -> NormReport:
    """L^1 variant of the oscillation sup: sup over alpha of ||2^|alpha| V^alpha* x||_1."""
    require_mean_zero(x)
    values = np.asarray([complex(v) for v in x.values], dtype=np.complex128)
    best = 0.0
    for k in range(x.level):
        blocks = values.reshape(1 << k, -1)
        centered = blocks - blocks.mean(axis=1, keepdims=True)
        best = max(best, float(np.abs(centered).mean(axis=1).max()))
    return NormReport(value=best, method="dyadic-l1-oscillation-sup", truncation={"level": x.level},
                      mode=ScalarMode.FLOAT, tolerance=settings.float_tolerance)


def project_chaos1(x: DyadicStep) -> DyadicStep:
    """Q x: the average of x over each interval (2^-k-1, 2^-k], k < level(x)."""
    m = x.level
    values = x.values.copy()
    for k in range(m):
        lo, hi = 1 << (m - k - 1), 1 << (m - k)
        block = values[lo:hi]
        values[lo:hi] = block.sum() * power_of_two(-(m - k - 1), x.mode)
    return DyadicStep(m, values, x.mode)
