"""Basis and equivalence verdicts for the affine system generated by a chaos-1 function.

Polynomial symbols are decided from their roots. Other symbols get numeric
evidence only: growth of truncated sums on the critical circle, sampled zeros,
convergence of the scaled coefficient sums and the uniform minimality profile.
"""
import math
from fractions import Fraction
from typing import Iterable, List, Optional, Tuple

import numpy as np
from loguru import logger

from haar_affine.chaos.chaos1 import Chaos1, dual_coeffs
from haar_affine.classify.spectrum import critical_radius, spectral_radius_bounds
from haar_affine.config import settings
from haar_affine.exceptions import DomainError
from haar_affine.models import (
    CaseTag,
    ClassificationReport,
    EndpointVerdict,
    MinimalityProfile,
    PerPVerdict,
    TheoremVerdict,
    VerdictLevel,
)
from haar_affine.symbol.norms import boundary_values, hinf_boundary, multiplier_norm
from haar_affine.symbol.roots import roots_min_modulus
from haar_affine.symbol.series import DyadicRadius, PowerSeries, Radius, radius_value

CASE_BOUNDARIES = (
    ("1/2", 0.5),
    ("2^(-1/2)", 2.0 ** -0.5),
    ("1", 1.0),
)
SETTLED = 1e-6
SECTION_CAP = 128


def _check_p(p: float) -> None:
    if not p > 1:
        raise DomainError(f"p must lie in (1, infinity), got {p}")


# Polynomial classification

def _snap(modulus: float) -> Tuple[float, Optional[str]]:
    for name, value in CASE_BOUNDARIES:
        if abs(modulus - value) <= settings.boundary_tolerance:
            return value, name
    return modulus, None


def _case(modulus: float) -> Tuple[CaseTag, Optional[float]]:
    if modulus <= 0.5:
        return CaseTag.A, None
    if modulus >= 1.0:
        return CaseTag.D, None
    p0 = -1.0 / math.log2(modulus)
    if modulus == 2.0 ** -0.5:
        p0 = 2.0
    return (CaseTag.B if modulus <= 2.0 ** -0.5 else CaseTag.C), p0


def _per_p(case: CaseTag, p0: Optional[float], p: float) -> PerPVerdict:
    if case == CaseTag.A:
        return PerPVerdict(p=p, is_basis=False, is_equivalent=False, evidence=["case a", "|z0| <= 1/2"])
    if case == CaseTag.D:
        return PerPVerdict(p=p, is_basis=True, is_equivalent=True, evidence=["case d", "|z0| >= 1"])
    tag = f"case {case.value}"
    if abs(p - p0) <= settings.boundary_tolerance * max(1.0, p0):
        return PerPVerdict(p=p, is_basis=False, is_equivalent=False, evidence=[tag, "endpoint"])
    if p > p0:
        return PerPVerdict(p=p, is_basis=False, is_equivalent=False, evidence=[tag, "p > p0"])
    return PerPVerdict(p=p, is_basis=True, is_equivalent=case == CaseTag.C, evidence=[tag, "p < p0"])


def classify_polynomial(c: Chaos1, p_list: Optional[Iterable[float]] = None) -> ClassificationReport:
    """Case a-d from the smallest root z0 of f^, with a verdict for every p in p_list.

    p0 = -1/log2|z0| separates the exponents where the system is a basis from
    those where it is not. Case b systems are bases below p0 without being
    equivalent to the Haar system.
    """
    if not c.is_polynomial:
        raise DomainError("classify_polynomial needs a polynomial symbol")
    p_list = list(settings.p_list if p_list is None else p_list)
    for p in p_list:
        _check_p(p)
    roots = roots_min_modulus(c.symbol())
    flags: List[str] = []
    if not roots.residual_ok:
        flags.append("root-residual")

    if roots.z0_modulus is None:
        case, p0, modulus = CaseTag.D, None, None
    else:
        modulus, boundary = _snap(roots.z0_modulus)
        if boundary is not None:
            flags.append(f"boundary-ambiguous: |z0| = {boundary}")
            logger.warning(f"|z0| = {roots.z0_modulus} lies within tolerance of the case boundary {boundary}")
        case, p0 = _case(modulus)

    per_p = [_per_p(case, p0, p) for p in p_list]
    logger.info(f"Classified polynomial symbol: case {case.value}, p0={p0}")
    return ClassificationReport(
        z0=roots.z0,
        z0_modulus=roots.z0_modulus,
        p0=p0,
        p0_infinite=case == CaseTag.D,
        case_tag=case,
        per_p=per_p,
        flags=flags,
    )


# Numeric evidence helpers

def _series_degree(c: Chaos1, N: Optional[int]) -> int:
    N = settings.trunc if N is None else N
    return N if c.is_polynomial else min(N, c.depth - 1)


def _circle_sup(u: PowerSeries, R: Radius, N: int, samples: int) -> float:
    return float(np.abs(boundary_values(u, R, samples, N)).max())


def _growth(u: PowerSeries, R: Radius, N: int, samples: int) -> float:
    """sup of the degree-N truncation over sup of the degree-N/4 one, on |z| = R."""
    small = _circle_sup(u, R, max(N // 4, 1), samples)
    return _circle_sup(u, R, N, samples) / small if small else math.inf


def _sampled_min(u: PowerSeries, R: Radius, N: int, samples: int) -> float:
    """min |truncation| over the circle |z| = R and a polar grid inside it."""
    radius = radius_value(R)
    grid = radius * np.outer(np.arange(40) / 40, np.exp(2j * np.pi * np.arange(180) / 180)).ravel()
    inner = np.abs(u.evaluate(grid, N)).min()
    return float(min(inner, np.abs(boundary_values(u, R, samples, N)).min()))


def _l1_settled(u: PowerSeries, R: Radius, N: int) -> Optional[bool]:
    """True when sum |a_k| R^k has settled by N/4, False when it still grows past the threshold."""
    scaled = u.scaled_moduli(R, N)
    total = float(scaled.sum())
    head = float(scaled[: max(N // 4, 1) + 1].sum())
    if total - head <= SETTLED * max(total, 1.0):
        return True
    if head and total / head > settings.growth_threshold:
        return False
    return None


def _interval(u: PowerSeries, p: float, R: Radius, N: int):
    section = min(N + 1, SECTION_CAP)
    return multiplier_norm(u, p, R, section)


# Theorem-level verdicts

def theorem_verdict(
    c: Chaos1, p: float, N: Optional[int] = None, samples: Optional[int] = None
) -> TheoremVerdict:
    """Whether {f_n} is a basis of L^p equivalent to the Haar system.

    For p <= 2 this is the L^2 test: f^ bounded with no zero on the closed disk
    of radius 2^(-1/2), reported with A = min |f^| and B = max |f^| there. For
    p > 2 a zero in the closed disk of radius 2^(-1/p) is decisive. Otherwise
    a symbol whose scaled coefficients and reciprocal coefficients are both
    absolutely summable there counts as positive, with the truncated M_p^+
    section intervals of f^ and 1/f^ attached.
    """
    _check_p(p)
    R = critical_radius(p)
    samples = settings.samples if samples is None else samples
    if c.coeff(0) == 0:
        return TheoremVerdict(p=p, level=VerdictLevel.CERTIFIED_NEGATIVE, radius=R.value,
                              evidence=["symbol vanishes at the origin"])
    if c.is_polynomial:
        return _polynomial_verdict(c, p, R, samples)
    return _series_verdict(c, p, R, _series_degree(c, N), samples)


def _polynomial_verdict(c: Chaos1, p: float, R: DyadicRadius, samples: int) -> TheoremVerdict:
    u = c.symbol()
    N = max(u.trimmed_degree(), 0)
    roots = roots_min_modulus(u)
    evidence: List[str] = []
    if roots.z0_modulus is not None:
        evidence.append(f"|z0| = {roots.z0_modulus}")
        if roots.z0_modulus <= R.value * (1 + settings.boundary_tolerance):
            if abs(roots.z0_modulus - R.value) <= settings.boundary_tolerance:
                evidence.append("boundary-ambiguous")
            evidence.append(f"zero of f^ in the closed disk of radius {R}")
            return TheoremVerdict(p=p, level=VerdictLevel.CERTIFIED_NEGATIVE, radius=R.value, evidence=evidence)
    evidence.append(f"f^ has no zero in the closed disk of radius {R}")

    hinf = hinf_boundary(u, R, samples, N)
    lower = float(np.abs(boundary_values(u, R, hinf.truncation["samples"], N)).min())
    verdict = TheoremVerdict(
        p=p, level=VerdictLevel.NUMERIC_POSITIVE, radius=R.value,
        lower_bound_a=lower, upper_bound_b=hinf.value, evidence=evidence,
    )
    if p <= 2:
        verdict.symbol_interval = hinf
    else:
        evidence.append("polynomial symbol lies in A_1^+")
        dual_degree = min(settings.trunc, SECTION_CAP)
        verdict.symbol_interval = _interval(u, p, R, N)
        verdict.reciprocal_interval = _interval(u.reciprocal(dual_degree), p, R, dual_degree)
    return verdict


def _series_verdict(c: Chaos1, p: float, R: DyadicRadius, N: int, samples: int) -> TheoremVerdict:
    u = c.symbol()
    g = u.reciprocal(N)
    evidence: List[str] = [f"truncation N={N}"]
    threshold = settings.growth_threshold

    def verdict(level: VerdictLevel, **extra) -> TheoremVerdict:
        logger.info(f"theorem_verdict p={p}: {level.value}")
        return TheoremVerdict(p=p, level=level, radius=R.value, evidence=evidence, **extra)

    g_growth = _growth(g, R, N, samples)
    if g_growth > threshold:
        evidence.append(f"1/f^ truncations grow by {g_growth:.4g} on |z| = {R} from N/4 to N")
        logger.warning(f"1/f^ looks unbounded on |z| = {R} (heuristic)")
        return verdict(VerdictLevel.NUMERIC_NEGATIVE)
    f_growth = _growth(u, R, N, samples)
    if f_growth > threshold:
        evidence.append(f"f^ truncations grow by {f_growth:.4g} on |z| = {R} from N/4 to N")
        logger.warning(f"f^ looks unbounded on |z| = {R} (heuristic)")
        return verdict(VerdictLevel.NUMERIC_NEGATIVE)

    hinf = hinf_boundary(u, R, samples, N)
    smallest = _sampled_min(u, R, N, samples)
    if smallest <= math.sqrt(settings.float_tolerance) * max(hinf.value, 1.0):
        evidence.append(f"sampled |f^| drops to {smallest:.3g} inside the closed disk")
        return verdict(VerdictLevel.NUMERIC_NEGATIVE)
    evidence.append("no sampled zero in the closed disk")
    bounds = {"lower_bound_a": smallest, "upper_bound_b": hinf.value}

    if p <= 2:
        return verdict(VerdictLevel.NUMERIC_POSITIVE, symbol_interval=hinf, **bounds)

    intervals = {"symbol_interval": _interval(u, p, R, N), "reciprocal_interval": _interval(g, p, R, N)}
    profile = minimality_profile(c, p, N)
    if profile.uniformly_minimal is False:
        evidence.append(f"A_p'^+ norms of 1/f^ grow by {profile.growth_ratio:.4g}: not uniformly minimal")
        return verdict(VerdictLevel.NUMERIC_NEGATIVE, **bounds, **intervals)
    if _l1_settled(u, R, N) and _l1_settled(g, R, N):
        evidence.append("f^ and 1/f^ absolutely summable on the closed disk")
        return verdict(VerdictLevel.NUMERIC_POSITIVE, **bounds, **intervals)
    evidence.append("M_p^+ membership not settled by the truncated sections")
    return verdict(VerdictLevel.INCONCLUSIVE, **bounds, **intervals)


def minimality_profile(c: Chaos1, p: float, N: Optional[int] = None) -> MinimalityProfile:
    """Partial A_p'^+ norms of 1/f^ at radius 2^(-1/p), up to N.

    sup_a ||f_a||_p ||g^a||_p' is comparable to the full norm, so growth along
    the checkpoints means the system is not uniformly minimal.
    """
    _check_p(p)
    N = _series_degree(c, N)
    if N < 1:
        raise DomainError(f"minimality_profile needs N >= 1, got {N}")
    q = p / (p - 1)
    R = DyadicRadius(-1 / Fraction(str(p)))
    scaled = dual_coeffs(c, N).as_chaos().symbol().scaled_moduli(R, N)
    cumulative = np.cumsum(scaled ** q) ** (1.0 / q)
    checkpoints = sorted({max(N >> shift, 1) for shift in (4, 3, 2, 1, 0)})
    partial = [float(cumulative[k]) for k in checkpoints]
    quarter = float(cumulative[max(N // 4, 1)])
    growth = partial[-1] / quarter if quarter else math.inf
    if growth > settings.growth_threshold:
        minimal: Optional[bool] = False
    elif growth <= 1 + SETTLED:
        minimal = True
    else:
        minimal = None
    logger.debug(f"Minimality profile p={p}: growth {growth}")
    return MinimalityProfile(
        p=p,
        conjugate_exponent=q,
        radius=R.value,
        checkpoints=checkpoints,
        partial_norms=partial,
        growth_ratio=growth,
        uniformly_minimal=minimal,
    )


# Endpoints

def endpoint_verdict(
    c: Chaos1, space: str, N: Optional[int] = None, samples: Optional[int] = None
) -> EndpointVerdict:
    """T_f on BMO_d (f^ in A_1^+ of the unit disk with no zero on its closure) or on H^1_d (the L^2 test)."""
    if space == "h1":
        l2 = theorem_verdict(c, 2.0, N, samples)
        rho = spectral_radius_bounds(c, 2.0, N if not c.is_polynomial else None, samples).lower
        return EndpointVerdict(space="h1", level=l2.level, spectral_radius=rho,
                               evidence=["reduces to the L^2 test"] + l2.evidence)
    if space != "bmo":
        raise DomainError(f"Unknown endpoint space '{space}'; expected bmo or h1")

    samples = settings.samples if samples is None else samples
    R = critical_radius(math.inf)
    u = c.symbol()
    N = max(u.trimmed_degree(), 0) if c.is_polynomial else _series_degree(c, N)
    rho = float(u.scaled_moduli(R, N).sum())
    if c.coeff(0) == 0:
        return EndpointVerdict(space="bmo", level=VerdictLevel.CERTIFIED_NEGATIVE, spectral_radius=rho,
                               evidence=["symbol vanishes at the origin"])
    if c.is_polynomial:
        roots = roots_min_modulus(u)
        if roots.z0_modulus is not None and roots.z0_modulus <= 1 + settings.boundary_tolerance:
            return EndpointVerdict(space="bmo", level=VerdictLevel.CERTIFIED_NEGATIVE, spectral_radius=rho,
                                   evidence=[f"zero of f^ at |z0| = {roots.z0_modulus} in the closed unit disk"])
        return EndpointVerdict(space="bmo", level=VerdictLevel.NUMERIC_POSITIVE, spectral_radius=rho,
                               evidence=["polynomial symbol without zeros in the closed unit disk"])

    evidence = [f"truncation N={N}"]
    settled = _l1_settled(u, R, N)
    if settled is False:
        evidence.append("sum |c_k| keeps growing")
        return EndpointVerdict(space="bmo", level=VerdictLevel.NUMERIC_NEGATIVE, spectral_radius=rho, evidence=evidence)
    smallest = _sampled_min(u, R, N, samples)
    if smallest <= math.sqrt(settings.float_tolerance) * max(rho, 1.0):
        evidence.append(f"sampled |f^| drops to {smallest:.3g} in the closed unit disk")
        return EndpointVerdict(space="bmo", level=VerdictLevel.NUMERIC_NEGATIVE, spectral_radius=rho, evidence=evidence)
    if settled:
        evidence.append("absolutely summable and zero-free, so 1/f^ is absolutely summable too")
        return EndpointVerdict(space="bmo", level=VerdictLevel.NUMERIC_POSITIVE, spectral_radius=rho, evidence=evidence)
    evidence.append("sum |c_k| not settled at this truncation")
    return EndpointVerdict(space="bmo", level=VerdictLevel.INCONCLUSIVE, spectral_radius=rho, evidence=evidence)
