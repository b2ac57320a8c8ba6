"""Spectra of T_f: the critical radius, the image cloud f^(closed disk) and
spectral radius estimates."""
import math
from fractions import Fraction
from typing import Optional

import numpy as np
from loguru import logger
from scipy.linalg import svdvals, toeplitz

from haar_affine.chaos.chaos1 import Chaos1
from haar_affine.config import settings
from haar_affine.exceptions import DomainError
from haar_affine.models import (
    PointSource,
    SpectralRadiusBounds,
    SpectralRadiusPoint,
    SpectralRadiusTrace,
    SpectrumCloud,
    SpectrumPoint,
)
from haar_affine.symbol.norms import ap_norm, hinf_boundary, toeplitz_section
from haar_affine.symbol.series import DyadicRadius, PowerSeries

L2_RADIUS = DyadicRadius(Fraction(-1, 2))


def critical_radius(p: float) -> DyadicRadius:
    """R_p = 2^(-1/2) for 1 < p <= 2, 2^(-1/p) for p >= 2, and 1 at p = infinity."""
    if p <= 1:
        raise DomainError(f"The critical radius needs p > 1, got {p}")
    if math.isinf(p):
        return DyadicRadius(Fraction(0))
    if p <= 2:
        return L2_RADIUS
    return DyadicRadius(-1 / Fraction(str(p)))


def _truncation(u: PowerSeries, N: Optional[int]) -> int:
    if u.is_polynomial:
        return u.trimmed_degree() if N is None else max(N, 0)
    return u.degree if N is None else min(N, u.degree)


def spectrum_cloud(
    c: Chaos1,
    p: float,
    n_radial: int = 100,
    n_angular: int = 360,
    n_boundary: int = 720,
    N: Optional[int] = None,
) -> SpectrumCloud:
    """Images under f^ of the circle |z| = R_p and of a polar grid inside it."""
    R = critical_radius(p)
    radius = R.value
    u = c.symbol()
    N = _truncation(u, N)
    tail = u.tail_bound(R, N)
    if tail is None:
        logger.warning(f"Spectrum cloud for a truncated series at N={N}: tail not bounded")

    angles = 2 * np.pi * np.arange(n_boundary) / n_boundary
    boundary = u.evaluate(radius * np.exp(1j * angles), N)
    radii = radius * np.arange(1, n_radial) / n_radial
    theta = 2 * np.pi * np.arange(n_angular) / n_angular
    grid = (radii[:, None] * np.exp(1j * theta[None, :])).ravel()
    interior = u.evaluate(np.concatenate(([0j], grid)), N)

    points = [SpectrumPoint(re=float(w.real), im=float(w.imag), source=PointSource.BOUNDARY) for w in boundary]
    points += [SpectrumPoint(re=float(w.real), im=float(w.imag), source=PointSource.INTERIOR) for w in interior]
    logger.info(f"Spectrum cloud p={p}: {len(points)} points at radius {radius}")
    return SpectrumCloud(
        p=None if math.isinf(p) else p,
        radius_used=radius,
        points=points,
        tail_bound=tail,
        truncation={"N": N, "n_radial": n_radial, "n_angular": n_angular, "n_boundary": n_boundary},
    )


def spectral_radius_estimate(
    c: Chaos1, N: Optional[int] = None, n_max: int = 32, samples: Optional[int] = None
) -> SpectralRadiusTrace:
    """sigma_max(M_N^n)^(1/n) for n = 1..n_max, M_N the Toeplitz section at R = 2^(-1/2).

    Powers of a lower triangular Toeplitz section are the sections of the
    powered symbol, so M_N^n is rebuilt from the first column of f^^n.
    """
    N = settings.trunc if N is None else N
    if N < 1 or n_max < 1:
        raise DomainError(f"Need N >= 1 and n_max >= 1, got N={N}, n_max={n_max}")
    u = c.symbol()
    column = toeplitz_section(u, L2_RADIUS, N)[:, 0]
    reference = hinf_boundary(u, L2_RADIUS, samples, _truncation(u, N - 1))

    points = []
    power = np.zeros(N, dtype=np.complex128)
    power[0] = 1.0
    for n in range(1, n_max + 1):
        power = np.convolve(power, column)[:N]
        sigma = float(svdvals(toeplitz(power, np.zeros(N, dtype=np.complex128)))[0])
        points.append(SpectralRadiusPoint(n=n, estimate=sigma ** (1.0 / n) if sigma > 0 else 0.0))
    logger.info(f"Spectral radius trace N={N}: last estimate {points[-1].estimate}, H-infinity {reference.value}")
    return SpectralRadiusTrace(section=N, radius=L2_RADIUS.value, hinf_reference=reference.value, points=points)


def spectral_radius_bounds(
    c: Chaos1, p: float, N: Optional[int] = None, samples: Optional[int] = None
) -> SpectralRadiusBounds:
    """hinf(f^, R_p) <= rho(T_f) <= A_1^+ norm of f^ at R_p; both sides agree for p <= 2."""
    R = critical_radius(p)
    u = c.symbol()
    N = _truncation(u, N)
    lower = hinf_boundary(u, R, samples, N).value
    if p <= 2:
        return SpectralRadiusBounds(p=p, radius=R.value, lower=lower, upper=lower, method="hinf")
    a1 = ap_norm(u, 1, R, N)
    upper = a1.certified_upper if a1.certified_upper is not None else a1.value
    return SpectralRadiusBounds(p=p, radius=R.value, lower=lower, upper=max(lower, upper), method="hinf-a1")
