"""Truncated power series standing for symbols.

``PowerSeries((a_0, ..., a_N))`` is the series ``sum a_k z^k`` known through
degree N. When ``is_polynomial`` is set, the coefficients past N are exactly
zero and the series may be indexed and multiplied beyond its stored degree.
Ring operations follow the usual truncated-series rules: the result is known
through the smallest degree known for every operand.
"""
import cmath
import math
from dataclasses import dataclass
from fractions import Fraction
from typing import Dict, Iterable, Optional, Sequence, Tuple, Union

import numpy as np

from haar_affine.dyadic.scalars import Scalar, coerce, one, zero
from haar_affine.exceptions import CapacityError, DomainError, DualUndefinedError, ModeError
from haar_affine.models import ScalarMode


@dataclass(frozen=True)
class DyadicRadius:
    """The radius 2^exponent with a rational exponent, e.g. 2^(-1/p)."""

    exponent: Fraction

    @property
    def value(self) -> float:
        return 2.0 ** float(self.exponent)

    def __float__(self) -> float:
        return self.value

    def power(self, p: float) -> Optional[Fraction]:
        """R^p as an exact rational when p * exponent is an integer."""
        e = Fraction(str(p)) * self.exponent
        if e.denominator != 1:
            return None
        return Fraction(2) ** int(e)

    def __str__(self):
        return f"2^({self.exponent})"


Radius = Union[DyadicRadius, float]


def radius_value(R: Radius) -> float:
    return R.value if isinstance(R, DyadicRadius) else float(R)


@dataclass(frozen=True)
class PowerSeries:
    coeffs: Tuple[Scalar, ...]
    mode: ScalarMode = ScalarMode.EXACT
    is_polynomial: bool = False
    radius: Optional[Union[Fraction, float]] = None

    def __post_init__(self):
        if not self.coeffs:
            raise DomainError("A power series needs at least one coefficient")

    @classmethod
    def from_coeffs(
        cls,
        values: Iterable,
        mode: ScalarMode = ScalarMode.EXACT,
        is_polynomial: bool = False,
        radius=None,
    ) -> "PowerSeries":
        coeffs = tuple(coerce(v, mode) for v in values)
        if is_polynomial and radius is None:
            radius = math.inf
        return cls(coeffs, mode, is_polynomial, radius)

    @classmethod
    def constant(cls, c, mode: ScalarMode = ScalarMode.EXACT) -> "PowerSeries":
        return cls.from_coeffs([c], mode, is_polynomial=True)

    @property
    def degree(self) -> int:
        """Highest stored degree."""
        return len(self.coeffs) - 1

    def __len__(self) -> int:
        return len(self.coeffs)

    def __getitem__(self, k: int) -> Scalar:
        if k < len(self.coeffs):
            return self.coeffs[k]
        if self.is_polynomial:
            return zero(self.mode)
        raise CapacityError(f"Coefficient {k} is beyond the stored degree {self.degree}")

    def trimmed_degree(self) -> int:
        """Degree after dropping trailing zero coefficients; -1 for the zero series."""
        for k in range(len(self.coeffs) - 1, -1, -1):
            if self.coeffs[k] != 0:
                return k
        return -1

    def truncate(self, N: int) -> "PowerSeries":
        """Coefficients a_0..a_N; pads with zeros for polynomials."""
        coeffs = tuple(self[k] for k in range(N + 1))
        return PowerSeries(coeffs, self.mode, self.is_polynomial and N >= self.trimmed_degree(), self.radius)

    def _common_degree(self, other: "PowerSeries") -> int:
        if self.mode != other.mode:
            raise DomainError(f"Cannot mix {self.mode.value} and {other.mode.value} series")
        if self.is_polynomial and other.is_polynomial:
            return max(self.degree, other.degree)
        if self.is_polynomial:
            return other.degree
        if other.is_polynomial:
            return self.degree
        return min(self.degree, other.degree)

    def __add__(self, other: "PowerSeries") -> "PowerSeries":
        N = self._common_degree(other)
        coeffs = tuple(self[k] + other[k] for k in range(N + 1))
        return PowerSeries(coeffs, self.mode, self.is_polynomial and other.is_polynomial)

    def __neg__(self) -> "PowerSeries":
        return PowerSeries(tuple(-a for a in self.coeffs), self.mode, self.is_polynomial, self.radius)

    def __sub__(self, other: "PowerSeries") -> "PowerSeries":
        return self + (-other)

    def scale(self, s) -> "PowerSeries":
        s = coerce(s, self.mode) if not isinstance(s, Fraction) else s
        return PowerSeries(tuple(a * s for a in self.coeffs), self.mode, self.is_polynomial, self.radius)

    def __mul__(self, other: "PowerSeries") -> "PowerSeries":
        N = self._common_degree(other)
        if self.is_polynomial and other.is_polynomial:
            N = self.degree + other.degree
        if self.mode == ScalarMode.FLOAT:
            a = self.as_complex(min(N, self.degree))
            b = other.as_complex(min(N, other.degree))
            coeffs = tuple(complex(v) for v in np.convolve(a, b)[: N + 1])
            coeffs = coeffs + (0j,) * (N + 1 - len(coeffs))
        else:
            coeffs = tuple(
                sum((self[j] * other[k - j] for j in range(k + 1)), zero(self.mode)) for k in range(N + 1)
            )
        return PowerSeries(coeffs, self.mode, self.is_polynomial and other.is_polynomial)

    def power(self, n: int) -> "PowerSeries":
        result = PowerSeries.constant(one(self.mode), self.mode)
        if not self.is_polynomial:
            result = result.truncate(self.degree)
            result = PowerSeries(result.coeffs, self.mode, False)
        for _ in range(n):
            result = result * self
        return result

    def reciprocal(self, N: Optional[int] = None) -> "PowerSeries":
        """1/u through degree N: b_0 = 1/a_0, sum_{j<=k} a_{k-j} b_j = 0."""
        N = self.degree if N is None else N
        a0 = self.coeffs[0]
        if a0 == 0:
            raise DualUndefinedError()
        if self.mode == ScalarMode.FLOAT:
            a = self.as_complex(N)
            out = np.zeros(N + 1, dtype=np.complex128)
            out[0] = 1.0 / a[0]
            for k in range(1, N + 1):
                out[k] = -np.dot(a[k:0:-1], out[:k]) / a[0]
            return PowerSeries(tuple(complex(v) for v in out), self.mode, False)
        b = [one(self.mode) / a0]
        for k in range(1, N + 1):
            acc = zero(self.mode)
            for j in range(k):
                acc = acc + self[k - j] * b[j]
            b.append(-acc / a0)
        return PowerSeries(tuple(b), self.mode, False)

    def compose(self, inner: "PowerSeries") -> "PowerSeries":
        """u(v(z)) through the common degree; needs v(0) = 0."""
        if inner.coeffs[0] != 0:
            raise DomainError("Composition needs an inner series vanishing at 0")
        N = self.degree if not self.is_polynomial else self._common_degree(inner)
        N = min(N, inner.degree) if not inner.is_polynomial else N
        inner = PowerSeries(tuple(inner[k] for k in range(N + 1)), inner.mode, False)
        result = PowerSeries((self[N],) + (zero(self.mode),) * N, self.mode, False)
        for k in range(N - 1, -1, -1):
            product = result * inner
            result = PowerSeries(
                (product.coeffs[0] + self[k],) + product.coeffs[1:N + 1], self.mode, False
            )
        return result

    def exp(self) -> "PowerSeries":
        """exp(u) by n b_n = sum_{k=1..n} k a_k b_{n-k}."""
        a0 = self.coeffs[0]
        if self.mode == ScalarMode.FLOAT:
            a = self.as_complex() * np.arange(len(self.coeffs))
            out = np.zeros(len(self.coeffs), dtype=np.complex128)
            out[0] = cmath.exp(complex(a0))
            for n in range(1, len(out)):
                out[n] = np.dot(a[1:n + 1], out[n - 1::-1]) / n
            return PowerSeries(tuple(complex(v) for v in out), self.mode, False)
        if a0 != 0:
            raise ModeError("exp of a series with a nonzero constant term is float-only")
        b = [one(self.mode)]
        for n in range(1, self.degree + 1):
            acc = zero(self.mode)
            for k in range(1, n + 1):
                acc = acc + self.coeffs[k] * k * b[n - k]
            b.append(acc / n)
        return PowerSeries(tuple(b), self.mode, False)

    def rescale(self, r) -> "PowerSeries":
        """u(r z): coefficient k becomes a_k r^k."""
        if self.mode == ScalarMode.FLOAT:
            r = complex(r)
        coeffs = []
        factor = one(self.mode) if self.mode == ScalarMode.EXACT else 1.0 + 0j
        for a in self.coeffs:
            coeffs.append(a * factor)
            factor = factor * r
        return PowerSeries(tuple(coeffs), self.mode, self.is_polynomial)

    def as_complex(self, N: Optional[int] = None) -> np.ndarray:
        N = self.degree if N is None else N
        return np.asarray([complex(self[k]) for k in range(N + 1)], dtype=np.complex128)

    def scaled_moduli(self, R: Radius, N: Optional[int] = None) -> np.ndarray:
        """|a_k| R^k for k <= N."""
        moduli = np.abs(self.as_complex(N))
        return moduli * radius_value(R) ** np.arange(len(moduli))

    def evaluate(self, z, N: Optional[int] = None):
        """Truncated sum at z (scalar or array), in floating point."""
        return np.polynomial.polynomial.polyval(np.asarray(z, dtype=np.complex128), self.as_complex(N))

    def evaluate_exact(self, z: Scalar) -> Scalar:
        acc = zero(self.mode)
        for a in reversed(self.coeffs):
            acc = acc * z + a
        return acc

    def tail_bound(self, R: Radius, N: int) -> Optional[float]:
        """Bound on sum_{k>N} |a_k| R^k, known only for polynomials."""
        if self.is_polynomial:
            return 0.0 if N >= self.trimmed_degree() else float(self.scaled_moduli(R)[N + 1:].sum())
        return None

    def __eq__(self, other) -> bool:
        if not isinstance(other, PowerSeries):
            return NotImplemented
        N = max(self.degree, other.degree)
        try:
            return all(self[k] == other[k] for k in range(N + 1))
        except CapacityError:
            return False

    __hash__ = None


def multiply_last(symbol: Dict[Tuple[int, ...], Scalar], u: PowerSeries) -> Dict[Tuple[int, ...], Scalar]:
    """Multiply a d-variable polynomial {(k_1..k_d): coeff} by u(z_d)."""
    product: Dict[Tuple[int, ...], Scalar] = {}
    top = u.trimmed_degree() if u.is_polynomial else u.degree
    for gaps, value in symbol.items():
        for j in range(top + 1):
            key = gaps[:-1] + (gaps[-1] + j,)
            term = value * u[j]
            product[key] = product[key] + term if key in product else term
    return {key: v for key, v in product.items() if v != 0}


def cauchy_product(a: Sequence[Scalar], b: Sequence[Scalar], N: int, mode: ScalarMode) -> Tuple[Scalar, ...]:
    return tuple(
        sum((a[j] * b[k - j] for j in range(k + 1) if j < len(a) and k - j < len(b)), zero(mode))
        for k in range(N + 1)
    )
