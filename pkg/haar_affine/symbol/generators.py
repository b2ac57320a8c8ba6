"""Generators for the example symbols.

- polynomial: the given coefficients, exactly zero past the last one
- taylor: the given coefficients as a truncated series
- geometric(a): 1/(1 + a z), c_k = (-a)^k
- binomial(theta, p): (1 - 2^(1/p) z)^theta
- counterexample(p): exp((1 + w)/(1 - w)) with w = 2^(1/p) z
"""
import math
import warnings
from typing import Any, Dict, Optional, Tuple, Union

import numpy as np
from loguru import logger
from scipy.special import gamma

from haar_affine.config import settings
from haar_affine.dyadic.scalars import coerce, one
from haar_affine.exceptions import CapacityError, DomainError, ModeError, SymbolHypothesisWarning
from haar_affine.models import (
    BinomialSpec,
    CounterexampleSpec,
    GeometricSpec,
    PolynomialSpec,
    ScalarMode,
    SymbolKind,
    TaylorSpec,
)
from haar_affine.symbol.series import PowerSeries


def _require_float(kind: SymbolKind, mode: ScalarMode) -> None:
    if mode == ScalarMode.EXACT:
        raise ModeError(f"The {kind.value} symbol is float-only; rerun with --mode float")


def _check_finite(series: PowerSeries, kind: SymbolKind, N: int) -> PowerSeries:
    if not np.all(np.isfinite(series.as_complex())):
        raise CapacityError(
            f"The {kind.value} coefficients overflow float64 at truncation {N}; lower --trunc or raise p"
        )
    return series


def polynomial_symbol(coeffs, mode: ScalarMode = ScalarMode.EXACT) -> PowerSeries:
    return PowerSeries.from_coeffs(coeffs, mode, is_polynomial=True)


def geometric_symbol(a, N: int, mode: ScalarMode = ScalarMode.EXACT) -> PowerSeries:
    a = coerce(a, mode)
    coeffs = [one(mode)]
    for _ in range(N):
        coeffs.append(coeffs[-1] * (-a))
    radius = math.inf if not a else 1.0 / abs(a)
    return PowerSeries(tuple(coeffs), mode, not a, radius)


def binomial_symbol(theta: float, p: float, N: int, mode: ScalarMode = ScalarMode.FLOAT) -> PowerSeries:
    """Generalized binomial series b_k = b_{k-1} (theta - k + 1)/k (-2^(1/p))."""
    _require_float(SymbolKind.BINOMIAL, mode)
    if not 0.0 < theta < 1.0 - 1.0 / p:
        message = f"theta={theta} lies outside (0, 1 - 1/p) = (0, {1.0 - 1.0 / p}) for p={p}"
        warnings.warn(message, SymbolHypothesisWarning, stacklevel=2)
        logger.warning(message)
    scale = -(2.0 ** (1.0 / p))
    coeffs = np.zeros(N + 1, dtype=np.complex128)
    coeffs[0] = 1.0
    for k in range(1, N + 1):
        coeffs[k] = coeffs[k - 1] * (theta - k + 1) / k * scale
    terminates = float(theta).is_integer() and theta >= 0
    if terminates:
        coeffs = coeffs[: int(theta) + 1] if int(theta) <= N else coeffs
    series = PowerSeries(
        tuple(complex(v) for v in coeffs), ScalarMode.FLOAT, terminates, math.inf if terminates else 2.0 ** (-1.0 / p)
    )
    return _check_finite(series, SymbolKind.BINOMIAL, N)


def counterexample_symbol(p: float, N: Optional[int] = None, mode: ScalarMode = ScalarMode.FLOAT) -> PowerSeries:
    """exp of the Moebius series (1 + w)/(1 - w), rescaled by w = 2^(1/p) z.

    Coefficients are stored unscaled. The k-th one has size about
    2^(k/p) exp(2 sqrt(2k)), so float64 overflows once N/p + 4.1 sqrt(N) nears
    1024: the default N = 2048 needs p above about 2.5, and smaller p needs a
    smaller N. Overflow raises CapacityError.
    """
    _require_float(SymbolKind.COUNTEREXAMPLE, mode)
    N = settings.counterexample_trunc if N is None else N
    numerator = PowerSeries.from_coeffs([1, 1], ScalarMode.FLOAT, is_polynomial=True)
    denominator = PowerSeries.from_coeffs([1, -1], ScalarMode.FLOAT, is_polynomial=True)
    moebius = numerator * denominator.reciprocal(N)
    series = moebius.exp().rescale(2.0 ** (1.0 / p))
    series = PowerSeries(series.coeffs, series.mode, False, 2.0 ** (-1.0 / p))
    logger.debug(f"Counterexample symbol built through degree {N} for p={p}")
    return _check_finite(series, SymbolKind.COUNTEREXAMPLE, N)


def binomial_asymptotic_constants(theta: float) -> Tuple[float, float]:
    """Limits of |c_k| (k+1)^(1+theta) and |d_k| (k+1)^(1-theta) on the scaled coefficients.

    They are 1/|Gamma(-theta)| and 1/Gamma(theta).
    """
    return 1.0 / abs(float(gamma(-theta))), 1.0 / float(gamma(theta))


def make_symbol(
    kind: Union[SymbolKind, str],
    params: Dict[str, Any],
    N: int,
    mode: ScalarMode = ScalarMode.EXACT,
) -> PowerSeries:
    """Build the symbol of the given kind through degree N."""
    try:
        kind = SymbolKind(kind)
    except ValueError:
        raise DomainError(f"Unknown symbol kind '{kind}'")
    if kind == SymbolKind.POLYNOMIAL:
        return polynomial_symbol(params["coeffs"], mode)
    if kind == SymbolKind.TAYLOR:
        return PowerSeries.from_coeffs(params["coeffs"], mode)
    if kind == SymbolKind.GEOMETRIC:
        return geometric_symbol(params["a"], N, mode)
    if kind == SymbolKind.BINOMIAL:
        return binomial_symbol(float(params["theta"]), float(params["p"]), N, mode)
    if kind == SymbolKind.COUNTEREXAMPLE:
        return counterexample_symbol(float(params["p"]), N, mode)
    raise DomainError(f"Symbol kind '{kind.value}' cannot be generated")


def symbol_from_spec(spec, N: int, mode: ScalarMode = ScalarMode.EXACT) -> PowerSeries:
    """Dispatch a parsed symbol document onto make_symbol."""
    if isinstance(spec, (PolynomialSpec, TaylorSpec)):
        return make_symbol(spec.kind, {"coeffs": spec.coeffs}, N, mode)
    if isinstance(spec, GeometricSpec):
        return make_symbol(spec.kind, {"a": spec.a}, N, mode)
    if isinstance(spec, BinomialSpec):
        return make_symbol(spec.kind, {"theta": spec.theta, "p": spec.p}, N, mode)
    if isinstance(spec, CounterexampleSpec):
        return make_symbol(spec.kind, {"p": spec.p}, N, mode)
    raise DomainError(f"Unsupported symbol document {type(spec).__name__}")
