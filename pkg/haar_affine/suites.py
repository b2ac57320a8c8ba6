"""Self-verification suites.

Each suite checks one identity of the affine Haar calculus on concrete data and
returns a VerificationReport. Randomized suites draw rational data from a
seeded generator, so runs are reproducible.
"""
import inspect
from fractions import Fraction
from typing import Callable, Dict, List, Optional

import numpy as np
from loguru import logger

from haar_affine.chaos.affine import (
    affine_coeffs,
    apply_Tf_chaos,
    apply_Tf_coeffs,
    biorthogonal_coeffs,
    inverse_check,
    walsh_coeffs,
    x0_cap_for,
    x0_coeffs,
    x0_energy,
    x0_is_disjoint,
)
from haar_affine.chaos.chaos1 import Chaos1, dual_coeffs, truncate_to_step
from haar_affine.chaos.chaos_d import ChaosD
from haar_affine.config import settings
from haar_affine.dyadic.coeffs import HaarCoeffMap
from haar_affine.dyadic.scalars import abs2, format_scalar, is_zero, power_of_two
from haar_affine.dyadic.stepfn import norm2_squared
from haar_affine.dyadic.tree import MultiIndex, multi_indices
from haar_affine.exceptions import DomainError, UnknownSuiteError
from haar_affine.models import CheckResult, ScalarMode, VerificationReport
from haar_affine.symbol.relations import check_value_relation
from haar_affine.symbol.series import cauchy_product

SuiteFn = Callable[..., VerificationReport]
SUITES: Dict[str, SuiteFn] = {}
MAX_REPORTED_FAILURES = 10


def register_suite(name: str):
    def decorator(fn: SuiteFn) -> SuiteFn:
        SUITES[name] = fn
        return fn

    return decorator


def _report(suite: str, parameters: Dict, checks: List[CheckResult]) -> VerificationReport:
    return VerificationReport(
        suite=suite,
        passed=all(check.passed for check in checks),
        parameters=parameters,
        checks=checks,
    )


def _default_symbol(c: Optional[Chaos1]) -> Chaos1:
    return c if c is not None else Chaos1.polynomial(["1", "-1/3"])


def random_rational(rng: np.random.Generator, span: int = 9) -> Fraction:
    return Fraction(int(rng.integers(-span, span + 1)), int(rng.integers(1, span + 1)))


def random_polynomial(rng: np.random.Generator, max_degree: int = 8) -> Chaos1:
    """Random rational polynomial symbol with c_0 != 0."""
    degree = int(rng.integers(0, max_degree + 1))
    coeffs = [random_rational(rng) for _ in range(degree + 1)]
    if coeffs[0] == 0:
        coeffs[0] = Fraction(1)
    return Chaos1.polynomial(coeffs)


def random_haar_polynomial(rng: np.random.Generator, max_len: int = 5, terms: int = 6) -> HaarCoeffMap:
    entries = {}
    for _ in range(terms):
        length = int(rng.integers(0, max_len + 1))
        entries[MultiIndex.from_position(length, int(rng.integers(0, 1 << length)))] = random_rational(rng)
    return HaarCoeffMap(entries, ScalarMode.EXACT)


def random_chaos(rng: np.random.Generator, d: int, max_gap: int = 3, terms: int = 4) -> ChaosD:
    entries = {}
    for _ in range(terms):
        gaps = tuple(int(rng.integers(0, max_gap + 1)) for _ in range(d))
        entries[gaps] = random_rational(rng)
    return ChaosD.from_gaps(d, entries)


@register_suite("biorthogonal")
def biorthogonal_suite(c: Optional[Chaos1] = None, max_len: int = 6) -> VerificationReport:
    """(f_beta, g^alpha) = delta_{alpha beta} for all |alpha|, |beta| <= max_len."""
    c = _default_symbol(c)
    depth = max_len + 1
    dual = dual_coeffs(c, depth)
    indices = [alpha for k in range(max_len + 1) for alpha in multi_indices(k)]
    f_maps = {beta: affine_coeffs(beta, c, depth) for beta in indices}
    g_maps = {alpha: biorthogonal_coeffs(alpha, dual) for alpha in indices}
    tol = 0.0 if c.mode == ScalarMode.EXACT else settings.float_tolerance
    failures = []
    for alpha, g in g_maps.items():
        for beta, f in f_maps.items():
            target = 1 if alpha == beta else 0
            if not is_zero(f.inner(g) - target, tol):
                failures.append(f"({beta}, {alpha})")
    check = CheckResult(
        name="biorthogonal",
        passed=not failures,
        detail={"pairs": len(indices) ** 2, "failures": failures[:MAX_REPORTED_FAILURES]},
    )
    return _report("biorthogonal", {"max_len": max_len, "symbol": [format_scalar(v) for v in c.coeffs]}, [check])


@register_suite("h1-identity")
def h1_identity_suite(
    c: Optional[Chaos1] = None, n: int = 1, tolerance: float = 1e-6, max_len: Optional[int] = None
) -> VerificationReport:
    """||T_f* x0||^2 approaches sum_{j<=n} |c_j|^2 / 2^j once the cap makes the defect small."""
    c = c if c is not None else Chaos1.polynomial(["1", "-1/2"])
    max_len = x0_cap_for(c, n, tolerance) if max_len is None else max_len
    report = x0_energy(c, n, max_len)
    limit = float(sum((abs2(c.coeff(j)) * power_of_two(-j, c.mode) for j in range(n + 1)), 0))
    gap = abs(report.value - limit)
    check = CheckResult(
        name="h1-identity",
        passed=gap <= tolerance and report.value <= limit * (1 + 1e-15),
        detail={"energy": report.value, "limit": limit, "gap": gap, "max_len": max_len, "n": n},
    )
    return _report("h1-identity", {"n": n, "max_len": max_len, "tolerance": tolerance}, [check])


@register_suite("value-relation")
def value_relation_suite(seed: Optional[int] = None, count: int = 50, degree: int = 64) -> VerificationReport:
    """(1 - z) f_check = (2z - 1) f^ and the dual recurrence on random rational polynomials."""
    seed = settings.seed if seed is None else seed
    rng = np.random.default_rng(seed)
    checks = []
    for i in range(count):
        c = random_polynomial(rng)
        relation = check_value_relation(c, degree)
        relation.detail["sample"] = i
        checks.append(relation)
        product = cauchy_product(c.symbol().truncate(degree).coeffs, dual_coeffs(c, degree).coeffs,
                                 degree, ScalarMode.EXACT)
        unit = [1] + [0] * degree
        checks.append(CheckResult(
            name="dual-recurrence",
            passed=all(product[k] == unit[k] for k in range(degree + 1)),
            detail={"sample": i, "degree": degree},
        ))
    return _report("value-relation", {"seed": seed, "count": count, "degree": degree}, checks)


@register_suite("walsh")
def walsh_suite(c: Optional[Chaos1] = None, max_len: int = 5) -> VerificationReport:
    """(W^alpha f, W^beta f) = delta_{alpha beta} for |alpha| = |beta| <= max_len; f = h by default."""
    c = c if c is not None else Chaos1.polynomial(["1"])
    depth = max(c.depth, 1)
    checks = []
    for k in range(max_len + 1):
        maps = {alpha: walsh_coeffs(alpha, c, depth) for alpha in multi_indices(k)}
        failures = [
            f"({alpha}, {beta})"
            for alpha, wa in maps.items()
            for beta, wb in maps.items()
            if wa.inner(wb) != (1 if alpha == beta else 0)
        ]
        checks.append(CheckResult(name=f"walsh-length-{k}", passed=not failures,
                                  detail={"pairs": len(maps) ** 2, "failures": failures[:MAX_REPORTED_FAILURES]}))
    return _report("walsh", {"max_len": max_len}, checks)


@register_suite("parseval")
def parseval_suite(seed: Optional[int] = None, count: int = 10, max_level: int = 12) -> VerificationReport:
    """||f_m||^2 = sum_{k<m} |c_k|^2 2^-k on the level-m truncation, exactly."""
    seed = settings.seed if seed is None else seed
    rng = np.random.default_rng(seed)
    checks = []
    for i in range(count):
        c = Chaos1.from_coeffs([random_rational(rng) for _ in range(max_level)])
        m = int(rng.integers(1, max_level + 1))
        lhs = norm2_squared(truncate_to_step(c, m))
        rhs = sum((abs2(c.coeff(k)) * power_of_two(-k, c.mode) for k in range(m)), Fraction(0))
        checks.append(CheckResult(name="parseval", passed=lhs == rhs,
                                  detail={"sample": i, "level": m, "norm2_squared": str(lhs)}))
    return _report("parseval", {"seed": seed, "count": count, "max_level": max_level}, checks)


@register_suite("commutation")
def commutation_suite(
    c: Optional[Chaos1] = None, seed: Optional[int] = None, count: int = 100, max_order: int = 3
) -> VerificationReport:
    """T_f V_b = V_b T_f on Haar polynomials, and T_f on the d-th chaos multiplies the symbol by f^(z_d)."""
    c = _default_symbol(c)
    seed = settings.seed if seed is None else seed
    rng = np.random.default_rng(seed)
    depth = max(c.depth, 1)
    shift_failures, symbol_failures = [], []
    for i in range(count):
        x = random_haar_polynomial(rng)
        b = int(rng.integers(0, 2))
        if apply_Tf_coeffs(c, x.dilate(b), depth) != apply_Tf_coeffs(c, x, depth).dilate(b):
            shift_failures.append(i)
        chaos = random_chaos(rng, int(rng.integers(1, max_order + 1)))
        via_symbol = apply_Tf_chaos(c, chaos, depth).to_coeff_map()
        if via_symbol != apply_Tf_coeffs(c, chaos.to_coeff_map(), depth):
            symbol_failures.append(i)
    checks = [
        CheckResult(name="shift-commutation", passed=not shift_failures,
                    detail={"samples": count, "failures": shift_failures[:MAX_REPORTED_FAILURES]}),
        CheckResult(name="symbol-identity", passed=not symbol_failures,
                    detail={"samples": count, "failures": symbol_failures[:MAX_REPORTED_FAILURES]}),
    ]
    return _report("commutation", {"seed": seed, "count": count, "max_order": max_order}, checks)


@register_suite("inverse")
def inverse_suite(c: Optional[Chaos1] = None, seed: Optional[int] = None, count: int = 20,
                  depth: int = 8) -> VerificationReport:
    """T_g T_f x = x on random Haar polynomials, g the dual of f."""
    c = _default_symbol(c)
    seed = settings.seed if seed is None else seed
    rng = np.random.default_rng(seed)
    checks = [inverse_check(c, random_haar_polynomial(rng), depth) for _ in range(count)]
    return _report("inverse", {"seed": seed, "count": count, "depth": depth}, checks)


@register_suite("disjointness")
def disjointness_suite(max_n: int = 4, max_len: int = 12) -> VerificationReport:
    """The Haar terms of x0 have pairwise disjoint supports, checked exactly."""
    checks = []
    for n in range(1, max_n + 1):
        x0 = x0_coeffs(n, max_len)
        checks.append(CheckResult(name=f"x0-disjoint-n{n}", passed=x0_is_disjoint(x0),
                                  detail={"n": n, "max_len": max_len, "terms": len(x0)}))
    return _report("disjointness", {"max_n": max_n, "max_len": max_len}, checks)


def run_suite(name: str, **params) -> VerificationReport:
    """Run one registered suite.

    Unknown names raise UnknownSuiteError; parameters the suite does not take
    raise DomainError.
    """
    if name not in SUITES:
        raise UnknownSuiteError(name, sorted(SUITES))
    accepted = inspect.signature(SUITES[name]).parameters
    rejected = sorted(set(params) - set(accepted))
    if rejected:
        logger.error(f"Suite {name} rejected parameters {rejected}")
        raise DomainError(
            f"Suite '{name}' does not take {', '.join(rejected)}; it takes {', '.join(accepted) or 'no parameters'}"
        )
    try:
        logger.info(f"Running verification suite {name}")
        report = SUITES[name](**params)
        level = "INFO" if report.passed else "WARNING"
        logger.log(level, f"Suite {name} {'passed' if report.passed else 'failed'} ({len(report.checks)} checks)")
        return report
    except Exception as e:
        logger.error(f"Suite {name} failed to run: {str(e)}")
        raise


def run_all(seed: Optional[int] = None) -> List[VerificationReport]:
    """Every suite with its default parameters; randomized ones share the seed."""
    reports = []
    for name in sorted(SUITES):
        fn = SUITES[name]
        params = {"seed": seed} if seed is not None and "seed" in inspect.signature(fn).parameters else {}
        reports.append(run_suite(name, **params))
    return reports
