"""Scalars for the two arithmetic modes.

A computation runs either in exact mode, where every scalar is a
:class:`GaussianRational` (a pair of ``fractions.Fraction``), or in float mode,
where scalars are Python ``complex`` values and arrays are ``complex128``.
"""
import math
import numbers
import re
from fractions import Fraction
from typing import Iterable, Optional, Union

import numpy as np

from haar_affine.exceptions import InputParseError, ModeError
from haar_affine.models import ScalarMode

_Q0 = Fraction(0)


class GaussianRational:
    """Exact complex rational ``re + im*i``. Instances are treated as immutable."""

    __slots__ = ("re", "im")

    def __init__(self, re=0, im=0):
        self.re = Fraction(re)
        self.im = Fraction(im)

    @classmethod
    def _new(cls, re: Fraction, im: Fraction) -> "GaussianRational":
        obj = object.__new__(cls)
        obj.re = re
        obj.im = im
        return obj

    @staticmethod
    def _coerce(other) -> Optional["GaussianRational"]:
        if isinstance(other, GaussianRational):
            return other
        if isinstance(other, numbers.Integral):
            return GaussianRational._new(Fraction(int(other)), _Q0)
        if isinstance(other, Fraction):
            return GaussianRational._new(other, _Q0)
        return None

    def is_real(self) -> bool:
        return self.im == 0

    def conjugate(self) -> "GaussianRational":
        return GaussianRational._new(self.re, -self.im)

    def abs2(self) -> Fraction:
        return self.re * self.re + self.im * self.im

    def __add__(self, other):
        o = self._coerce(other)
        if o is None:
            return NotImplemented
        return GaussianRational._new(self.re + o.re, self.im + o.im)

    __radd__ = __add__

    def __sub__(self, other):
        o = self._coerce(other)
        if o is None:
            return NotImplemented
        return GaussianRational._new(self.re - o.re, self.im - o.im)

    def __rsub__(self, other):
        o = self._coerce(other)
        if o is None:
            return NotImplemented
        return GaussianRational._new(o.re - self.re, o.im - self.im)

    def __mul__(self, other):
        o = self._coerce(other)
        if o is None:
            return NotImplemented
        if not self.im and not o.im:
            return GaussianRational._new(self.re * o.re, _Q0)
        return GaussianRational._new(
            self.re * o.re - self.im * o.im, self.re * o.im + self.im * o.re
        )

    __rmul__ = __mul__

    def __truediv__(self, other):
        o = self._coerce(other)
        if o is None:
            return NotImplemented
        if not o:
            raise ZeroDivisionError("division by exact zero")
        if not o.im:
            return GaussianRational._new(self.re / o.re, self.im / o.re)
        den = o.abs2()
        return GaussianRational._new(
            (self.re * o.re + self.im * o.im) / den, (self.im * o.re - self.re * o.im) / den
        )

    def __rtruediv__(self, other):
        o = self._coerce(other)
        if o is None:
            return NotImplemented
        return o / self

    def __pow__(self, k):
        if not isinstance(k, numbers.Integral):
            return NotImplemented
        if k < 0:
            return GaussianRational._new(Fraction(1), _Q0) / (self ** (-k))
        result = GaussianRational._new(Fraction(1), _Q0)
        base = self
        while k:
            if k & 1:
                result = result * base
            base = base * base
            k >>= 1
        return result

    def __neg__(self):
        return GaussianRational._new(-self.re, -self.im)

    def __pos__(self):
        return self

    def __eq__(self, other):
        o = self._coerce(other)
        if o is None:
            return NotImplemented
        return self.re == o.re and self.im == o.im

    def __hash__(self):
        if not self.im:
            return hash(self.re)
        return hash((self.re, self.im))

    def __bool__(self):
        return bool(self.re) or bool(self.im)

    def __abs__(self) -> float:
        return math.sqrt(float(self.abs2()))

    def __complex__(self) -> complex:
        return complex(float(self.re), float(self.im))

    def __float__(self) -> float:
        if self.im:
            raise TypeError(f"{self} has a nonzero imaginary part")
        return float(self.re)

    def __repr__(self):
        return f"GaussianRational('{self}')"

    def __str__(self):
        return format_scalar(self)


Scalar = Union[GaussianRational, complex]

_REAL = re.compile(r"([+-]?)(\d+(?:\.\d+)?|\.\d+)(?:[eE]([+-]?\d+))?(?:/(\d+))?")


def format_rational(q: Fraction) -> str:
    if q.denominator == 1:
        return str(q.numerator)
    return f"{q.numerator}/{q.denominator}"


def _format_float(x: float) -> str:
    return repr(float(x))


def format_scalar(s) -> str:
    """Render a scalar: "p/q" or "p/q+r/s i" exactly, shortest repr for floats."""
    if isinstance(s, GaussianRational):
        if not s.im:
            return format_rational(s.re)
        sign = "+" if s.im > 0 else "-"
        return f"{format_rational(s.re)}{sign}{format_rational(abs(s.im))} i"
    if isinstance(s, Fraction):
        return format_rational(s)
    z = complex(s)
    if z.imag == 0:
        return _format_float(z.real)
    sign = "+" if z.imag >= 0 else "-"
    return f"{_format_float(z.real)}{sign}{_format_float(abs(z.imag))} i"


def _parse_real(token: str, offset: int, text: str) -> Fraction:
    match = _REAL.fullmatch(token)
    if match is None:
        prefix = _REAL.match(token)
        position = offset + (prefix.end() if prefix else 0)
        raise InputParseError(f"Malformed scalar '{text}'", position)
    sign, body, exponent, denominator = match.groups()
    literal = sign + body + (f"e{exponent}" if exponent else "")
    value = Fraction(literal)
    if denominator is not None:
        if int(denominator) == 0:
            raise InputParseError(f"Zero denominator in scalar '{text}'", offset + token.index("/") + 1)
        value /= int(denominator)
    return value


def _split_complex(text: str):
    """Split "a+b i" into (real token, imaginary token or None)."""
    body = text.rstrip()
    if not body or body[-1] not in "ij":
        return body, None
    body = body[:-1].rstrip()
    if body.endswith("*"):
        body = body[:-1].rstrip()
    cut = None
    for k in range(len(body) - 1, 0, -1):
        if body[k] in "+-" and body[k - 1] not in "eE":
            cut = k
            break
    if cut is None:
        return "", body
    return body[:cut].rstrip(), body[cut:].replace(" ", "")


def parse_scalar(text: str, mode: ScalarMode = ScalarMode.EXACT) -> Scalar:
    """Parse "p/q", "p/q+r/s i", "r/s i" or a decimal string, bit-exact for rationals."""
    if not isinstance(text, str):
        raise InputParseError(f"Scalar must be a string, got {type(text).__name__}")
    stripped = text.strip()
    if not stripped:
        raise InputParseError("Empty scalar", 0)
    lead = len(text) - len(text.lstrip())
    real_token, imag_token = _split_complex(stripped)
    re_part = _parse_real(real_token, lead, text) if real_token else _Q0
    im_part = _Q0
    if imag_token is not None:
        im_offset = lead + len(real_token)
        if imag_token in ("", "+"):
            im_part = Fraction(1)
        elif imag_token == "-":
            im_part = Fraction(-1)
        else:
            im_part = _parse_real(imag_token, im_offset, text)
    if mode == ScalarMode.EXACT:
        return GaussianRational._new(re_part, im_part)
    return complex(float(re_part), float(im_part))


def coerce(value, mode: ScalarMode) -> Scalar:
    if mode == ScalarMode.EXACT:
        if isinstance(value, GaussianRational):
            return value
        if isinstance(value, str):
            return parse_scalar(value, mode)
        if isinstance(value, numbers.Integral):
            return GaussianRational._new(Fraction(int(value)), _Q0)
        if isinstance(value, Fraction):
            return GaussianRational._new(value, _Q0)
        raise ModeError(f"Exact mode cannot take the float value {value!r}")
    if isinstance(value, str):
        return parse_scalar(value, mode)
    return complex(value)


def zero(mode: ScalarMode) -> Scalar:
    return GaussianRational._new(_Q0, _Q0) if mode == ScalarMode.EXACT else 0j


def one(mode: ScalarMode) -> Scalar:
    return GaussianRational._new(Fraction(1), _Q0) if mode == ScalarMode.EXACT else 1 + 0j


def mode_of(s) -> ScalarMode:
    return ScalarMode.EXACT if isinstance(s, GaussianRational) else ScalarMode.FLOAT


def abs2(s) -> Union[Fraction, float]:
    if isinstance(s, GaussianRational):
        return s.abs2()
    z = complex(s)
    return z.real * z.real + z.imag * z.imag


def is_zero(s, tol: float = 0.0) -> bool:
    if isinstance(s, GaussianRational):
        return not s
    return abs(complex(s)) <= tol


def power_of_two(k: int, mode: ScalarMode) -> Union[Fraction, float]:
    """2**k, exact for either sign of k in exact mode."""
    if mode == ScalarMode.EXACT:
        return Fraction(2) ** k
    return 2.0 ** k


def scalar_array(values: Iterable, mode: ScalarMode) -> np.ndarray:
    values = list(values)
    if mode == ScalarMode.EXACT:
        arr = np.empty(len(values), dtype=object)
        arr[:] = [coerce(v, mode) for v in values]
        return arr
    return np.asarray([coerce(v, mode) for v in values], dtype=np.complex128)


def zeros_array(n: int, mode: ScalarMode) -> np.ndarray:
    if mode == ScalarMode.EXACT:
        arr = np.empty(n, dtype=object)
        arr[:] = [zero(mode)] * n
        return arr
    return np.zeros(n, dtype=np.complex128)


def abs2_array(values: np.ndarray) -> np.ndarray:
    """Cellwise |v|^2: Fractions in an object array, or float64."""
    if values.dtype == object:
        out = np.empty(len(values), dtype=object)
        out[:] = [v.abs2() for v in values]
        return out
    return (values * values.conj()).real
