"""Symbol-side norms: A_p^+ norms, H^infinity boundary estimates and the
weighted Toeplitz multiplier sections behind M_p^+."""
import math
from fractions import Fraction
from typing import Iterable, List, Optional

import numpy as np
from loguru import logger
from scipy.linalg import svdvals, toeplitz

from haar_affine.config import settings
from haar_affine.dyadic.scalars import format_rational
from haar_affine.exceptions import DomainError
from haar_affine.models import MultiplierTrend, NormReport, ScalarMode
from haar_affine.symbol.series import DyadicRadius, PowerSeries, Radius, radius_value

GEOMETRIC_PROFILES = (0.5, 0.8, 0.9, 0.95, 0.99)
POWER_ITERATIONS = 40


def _check_p(p: float) -> None:
    if p < 1:
        raise DomainError(f"p must be at least 1, got {p}")


def equivalence_radius(p: float) -> DyadicRadius:
    """2^(-1/p), where the A_p^+ norm of f^ is equivalent to ||f||_p; 1 at p = infinity."""
    _check_p(p)
    if math.isinf(p):
        return DyadicRadius(Fraction(0))
    return DyadicRadius(-1 / Fraction(str(p)))


def _degree(u: PowerSeries, N: Optional[int]) -> int:
    return u.degree if N is None else N


def _tail(u: PowerSeries, R: Radius, N: int) -> Optional[float]:
    return u.tail_bound(R, N)


def _exact_ap_power(u: PowerSeries, p: float, R: Radius, N: int) -> Optional[Fraction]:
    """sum (|a_k| R^k)^p exactly, when p is an even integer and R^p is rational."""
    if u.mode != ScalarMode.EXACT or not float(p).is_integer() or int(p) % 2:
        return None
    if isinstance(R, DyadicRadius):
        weight = R.power(p)
    elif isinstance(R, (int, Fraction)):
        weight = Fraction(R) ** int(p)
    else:
        weight = None
    if weight is None:
        return None
    half = int(p) // 2
    return sum((u[k].abs2() ** half * weight ** k for k in range(N + 1)), Fraction(0))


def ap_norm(u: PowerSeries, p: float, R: Radius, N: Optional[int] = None) -> NormReport:
    """||(a_k R^k)||_{l^p} over k <= N; a certified lower bound for the full norm."""
    _check_p(p)
    N = _degree(u, N)
    truncation = {"N": N, "R": radius_value(R)}
    scaled = u.scaled_moduli(R, N)
    if math.isinf(p):
        value = float(scaled.max())
        tail = _tail(u, R, N)
        upper = max(value, float(u.scaled_moduli(R).max())) if tail is not None else None
        return NormReport(value=value, certified_lower=value, certified_upper=upper, method="ap-sup",
                          truncation=truncation, mode=ScalarMode.FLOAT, tolerance=settings.float_tolerance)
    exact = _exact_ap_power(u, p, R, N)
    if exact is not None:
        value = float(exact) ** (1.0 / p)
        upper = value if u.is_polynomial and N >= u.trimmed_degree() else None
        return NormReport(
            value=value, certified_lower=value, certified_upper=upper, method="ap-exact-power",
            truncation=truncation, mode=ScalarMode.EXACT, exact_value=format_rational(exact),
            exact_power=int(p),
        )
    value = float(np.sum(scaled ** p) ** (1.0 / p))
    tail = _tail(u, R, N)
    upper = None if tail is None else value + tail
    return NormReport(value=value, certified_lower=value, certified_upper=upper, method="ap-float",
                      truncation=truncation, mode=ScalarMode.FLOAT, tolerance=settings.float_tolerance)


def boundary_values(u: PowerSeries, R: Radius, n_samples: int, N: Optional[int] = None) -> np.ndarray:
    """Truncated sum at R e^(2 pi i j / n) for j < n, via one FFT of the folded coefficients."""
    N = _degree(u, N)
    b = u.as_complex(N) * radius_value(R) ** np.arange(N + 1)
    folded = np.zeros(n_samples, dtype=np.complex128)
    np.add.at(folded, np.arange(N + 1) % n_samples, b)
    return np.fft.ifft(folded) * n_samples


def hinf_boundary(u: PowerSeries, R: Radius, n_samples: Optional[int] = None, N: Optional[int] = None) -> NormReport:
    """max over equispaced samples on |z| = R of the degree-N truncation.

    The sample count is rounded up to an even number so that z = R and z = -R
    are both sampled. The upper bound adds the largest drift between samples,
    (pi/n) sum k |b_k|, and the coefficient tail when it is known.
    """
    n_samples = settings.samples if n_samples is None else n_samples
    if n_samples < 64:
        raise DomainError(f"hinf_boundary needs at least 64 samples, got {n_samples}")
    n_samples += n_samples % 2
    N = _degree(u, N)
    values = np.abs(boundary_values(u, R, n_samples, N))
    value = float(values.max())
    scaled = u.scaled_moduli(R, N)
    drift = math.pi / n_samples * float(np.sum(np.arange(N + 1) * scaled))
    tail = _tail(u, R, N)
    notes = [] if tail is not None else ["coefficient tail not bounded"]
    return NormReport(
        value=value,
        certified_lower=max(0.0, value - tail) if tail is not None else None,
        certified_upper=value + drift + tail if tail is not None else None,
        method="boundary-fft",
        truncation={"N": N, "R": radius_value(R), "samples": n_samples},
        mode=ScalarMode.FLOAT,
        tolerance=settings.float_tolerance,
        notes=notes,
    )


def toeplitz_section(u: PowerSeries, R: Radius, N: int) -> np.ndarray:
    """Lower triangular N x N matrix with entries b_{i-j} = a_{i-j} R^(i-j)."""
    b = u.as_complex(N - 1) * radius_value(R) ** np.arange(N)
    return toeplitz(b, np.zeros(N, dtype=np.complex128))


def _lp(x: np.ndarray, p: float) -> float:
    return float(np.sum(np.abs(x) ** p) ** (1.0 / p))


def _dual_direction(v: np.ndarray, p: float) -> np.ndarray:
    if p == 2:
        return v
    modulus = np.abs(v)
    with np.errstate(divide="ignore", invalid="ignore"):
        scaled = v * modulus ** (p - 2)
    return np.where(modulus > 0, scaled, 0)


def _boyd_ratio(A: np.ndarray, x: np.ndarray, p: float) -> float:
    """Boyd's power method for ||A||_{p->p} started at x; returns the best ratio seen."""
    q = p / (p - 1)
    x = x / _lp(x, p)
    best = _lp(A @ x, p)
    for _ in range(POWER_ITERATIONS):
        y = A @ x
        z = A.conj().T @ _dual_direction(y, p)
        if not np.any(z):
            break
        x = _dual_direction(z, q)
        x = x / _lp(x, p)
        ratio = _lp(A @ x, p)
        if ratio <= best * (1 + 1e-12):
            best = max(best, ratio)
            break
        best = ratio
    return best


def _test_vectors(N: int, seed: int) -> Iterable[np.ndarray]:
    k = np.arange(N)
    yield np.ones(N)
    for r in GEOMETRIC_PROFILES:
        yield r ** k
    rng = np.random.default_rng(seed)
    for _ in range(3):
        yield rng.standard_normal(N) + 1j * rng.standard_normal(N)


def multiplier_norm(u: PowerSeries, p: float, R: Radius, N: Optional[int] = None) -> NormReport:
    """Norm of the N x N weighted Toeplitz section on l^p.

    p = 2 gives the largest singular value, a lower bound converging upward to
    the multiplier norm. p = 1 and p = infinity give sum |b_j| exactly. Any other
    p gives the interval [best test-vector ratio, sum |b_j| + tail].
    """
    _check_p(p)
    N = settings.trunc if N is None else N
    A = toeplitz_section(u, R, N)
    l1 = float(np.abs(A[:, 0]).sum())
    tail = _tail(u, R, N - 1)
    upper = l1 + tail if tail is not None else None
    truncation = {"N": N, "R": radius_value(R), "p": p}
    if p == 2:
        value = float(svdvals(A)[0])
        logger.debug(f"Toeplitz section N={N}: sigma_max={value}")
        return NormReport(value=value, certified_lower=value, certified_upper=upper, method="toeplitz-svd",
                          truncation=truncation, mode=ScalarMode.FLOAT, tolerance=settings.float_tolerance)
    if p == 1 or math.isinf(p):
        return NormReport(value=l1, certified_lower=l1, certified_upper=upper, method="toeplitz-l1",
                          truncation=truncation, mode=ScalarMode.FLOAT, tolerance=settings.float_tolerance)
    lower = max(_boyd_ratio(A, x.astype(np.complex128), p) for x in _test_vectors(N, settings.seed))
    lower = min(lower, l1)
    return NormReport(
        value=lower,
        certified_lower=lower,
        certified_upper=upper if upper is not None else l1,
        method="toeplitz-interval",
        truncation=truncation,
        mode=ScalarMode.FLOAT,
        tolerance=settings.float_tolerance,
        is_interval=True,
        notes=[] if upper is not None else ["upper bound covers the section only"],
    )


def multiplier_trend(u: PowerSeries, p: float, R: Radius, sizes: Iterable[int]) -> MultiplierTrend:
    """Section norms for growing N."""
    rows: List[NormReport] = []
    for N in sizes:
        rows.append(multiplier_norm(u, p, R, N))
        logger.info(f"Multiplier section p={p}, N={N}: [{rows[-1].certified_lower}, {rows[-1].certified_upper}]")
    return MultiplierTrend(p=p, radius=radius_value(R), rows=rows)
