"""First-order Haar chaoses f = sum c_k h_{2^k} and their dual functions."""
import math
from dataclasses import dataclass
from fractions import Fraction
from typing import Iterable, List, Tuple

from loguru import logger

from haar_affine.dyadic.coeffs import HaarCoeffMap
from haar_affine.dyadic.scalars import Scalar, abs2, coerce, format_rational, power_of_two, zero
from haar_affine.dyadic.stepfn import DyadicStep
from haar_affine.dyadic.tree import MultiIndex
from haar_affine.exceptions import CapacityError, DomainError
from haar_affine.models import NormReport, ScalarMode, SymbolKind
from haar_affine.symbol.series import PowerSeries


@dataclass(frozen=True)
class Chaos1:
    """Coefficients (c_0, ..., c_{N-1}) of a chaos-1 function, c_k = 2^k (f, h_{2^k})."""

    coeffs: Tuple[Scalar, ...]
    mode: ScalarMode = ScalarMode.EXACT
    provenance: SymbolKind = SymbolKind.USER
    is_polynomial: bool = False

    def __post_init__(self):
        if not self.coeffs:
            raise DomainError("A chaos-1 function needs at least one coefficient")

    @classmethod
    def from_coeffs(
        cls,
        values: Iterable,
        mode: ScalarMode = ScalarMode.EXACT,
        provenance: SymbolKind = SymbolKind.USER,
        is_polynomial: bool = False,
    ) -> "Chaos1":
        return cls(tuple(coerce(v, mode) for v in values), mode, provenance, is_polynomial)

    @classmethod
    def polynomial(cls, values: Iterable, mode: ScalarMode = ScalarMode.EXACT) -> "Chaos1":
        return cls.from_coeffs(values, mode, SymbolKind.POLYNOMIAL, True)

    @classmethod
    def from_series(cls, u: PowerSeries, provenance: SymbolKind = SymbolKind.USER) -> "Chaos1":
        return cls(u.coeffs, u.mode, provenance, u.is_polynomial)

    @property
    def depth(self) -> int:
        """Number of stored coefficients."""
        return len(self.coeffs)

    def coeff(self, k: int) -> Scalar:
        if k < len(self.coeffs):
            return self.coeffs[k]
        if self.is_polynomial:
            return zero(self.mode)
        raise CapacityError(f"Coefficient c_{k} is beyond the stored depth {self.depth}")

    def symbol(self) -> PowerSeries:
        """f^(z) = sum c_k z^k."""
        return PowerSeries(self.coeffs, self.mode, self.is_polynomial, math.inf if self.is_polynomial else None)

    def coeff_map(self, m: int) -> HaarCoeffMap:
        """{0_k: c_k for k < m}."""
        return HaarCoeffMap({MultiIndex.zeros(k): self.coeff(k) for k in range(m)}, self.mode)


def coeffs_from_values(values: Iterable, mode: ScalarMode = ScalarMode.EXACT) -> Chaos1:
    """c_k = -f(1/2^k) - sum_{j<k} 2^(k-j-1) f(1/2^j)."""
    vals = [coerce(v, mode) for v in values]
    coeffs: List[Scalar] = []
    carry = zero(mode)  # sum_{j<k} 2^(k-j-1) v_j
    for v in vals:
        coeffs.append(-v - carry)
        carry = carry * 2 + v
    return Chaos1(tuple(coeffs), mode)


def values_from_coeffs(c: Chaos1, K: int) -> List[Scalar]:
    """f(1/2^k) = -c_k + sum_{j<k} c_j for k = 0..K."""
    values: List[Scalar] = []
    partial = zero(c.mode)
    for k in range(K + 1):
        ck = c.coeff(k)
        values.append(-ck + partial)
        partial = partial + ck
    return values


def truncate_to_step(c: Chaos1, m: int) -> DyadicStep:
    """f_m = sum_{k<m} c_k h_{2^k} at level m."""
    if m < 1:
        raise DomainError(f"Truncation level must be at least 1, got {m}")
    return c.coeff_map(m).to_step(m)


@dataclass(frozen=True)
class DualCoeffs:
    """Coefficients (d_0, ..., d_N) of the dual g, with g^ = 1/f^."""

    coeffs: Tuple[Scalar, ...]
    mode: ScalarMode = ScalarMode.EXACT

    @property
    def depth(self) -> int:
        return len(self.coeffs) - 1

    def coeff(self, j: int) -> Scalar:
        if j >= len(self.coeffs):
            raise CapacityError(f"Dual coefficient d_{j} needs dual depth >= {j}, have {self.depth}")
        return self.coeffs[j]

    def as_chaos(self) -> Chaos1:
        return Chaos1(self.coeffs, self.mode)


def dual_coeffs(c: Chaos1, N: int) -> DualCoeffs:
    """c_0 d_0 = 1 and sum_{j<=k} c_{k-j} d_j = 0 for 1 <= k <= N."""
    reciprocal = c.symbol().reciprocal(N)
    logger.debug(f"Dual coefficients computed through degree {N} in {c.mode.value} mode")
    return DualCoeffs(reciprocal.coeffs, c.mode)


def bmo_chaos1(c: Chaos1, m: int) -> NormReport:
    """BMO_d norm of the level-m truncation: max_i (sum_{j<m-i} |c_{i+j}|^2 2^-j)^(1/2)."""
    if m > c.depth and not c.is_polynomial:
        raise CapacityError(f"Level {m} exceeds the stored depth {c.depth}")
    best = Fraction(0) if c.mode == ScalarMode.EXACT else 0.0
    for i in range(m):
        total = sum(
            (abs2(c.coeff(i + j)) * power_of_two(-j, c.mode) for j in range(m - i)),
            Fraction(0) if c.mode == ScalarMode.EXACT else 0.0,
        )
        best = max(best, total)
    exact = c.mode == ScalarMode.EXACT
    return NormReport(
        value=math.sqrt(float(best)),
        method="chaos1-closed-form",
        truncation={"level": m},
        mode=c.mode,
        exact_value=format_rational(best) if exact else None,
        exact_power=2 if exact else None,
    )
