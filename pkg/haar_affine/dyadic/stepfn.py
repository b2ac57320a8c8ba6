"""Dyadic step functions and the Haar multishift.

``DyadicStep(level=m, values=...)`` is constant on each of the 2^m cells
``(j/2^m, (j+1)/2^m]``. Values live in a numpy array: ``object`` dtype holding
:class:`GaussianRational` in exact mode, ``complex128`` in float mode.
"""
import math
from dataclasses import dataclass
from fractions import Fraction
from typing import Iterable, Union

import numpy as np

from haar_affine.config import settings
from haar_affine.dyadic.scalars import (
    Scalar,
    abs2_array,
    is_zero,
    power_of_two,
    scalar_array,
    zeros_array,
)
from haar_affine.dyadic.tree import MAX_LENGTH, MultiIndex, index_to_multi
from haar_affine.exceptions import CapacityError, DomainError, NonZeroMeanError
from haar_affine.models import ScalarMode


def check_step_level(level: int) -> None:
    if level > settings.max_step_level:
        raise CapacityError(
            f"Step function level {level} exceeds max_step_level={settings.max_step_level}; "
            "work with coefficient maps instead"
        )
    if level > MAX_LENGTH:
        raise CapacityError(f"Step function level {level} exceeds the cap of {MAX_LENGTH}")


@dataclass(frozen=True, eq=False)
class DyadicStep:
    level: int
    values: np.ndarray
    mode: ScalarMode = ScalarMode.EXACT

    def __post_init__(self):
        if self.level < 0:
            raise DomainError(f"Step function level must be non-negative, got {self.level}")
        if len(self.values) != 1 << self.level:
            raise DomainError(
                f"Level {self.level} needs {1 << self.level} values, got {len(self.values)}"
            )
        self.values.flags.writeable = False

    @classmethod
    def from_values(cls, values: Iterable, mode: ScalarMode = ScalarMode.EXACT) -> "DyadicStep":
        arr = scalar_array(values, mode)
        level = len(arr).bit_length() - 1
        return cls(level, arr, mode)

    @classmethod
    def zeros(cls, level: int, mode: ScalarMode = ScalarMode.EXACT) -> "DyadicStep":
        check_step_level(level)
        return cls(level, zeros_array(1 << level, mode), mode)

    def __len__(self) -> int:
        return len(self.values)

    def refine(self, level: int) -> "DyadicStep":
        """Represent the same function at a finer level."""
        if level < self.level:
            raise DomainError(f"Cannot refine level {self.level} down to {level}")
        if level == self.level:
            return self
        check_step_level(level)
        return DyadicStep(level, np.repeat(self.values, 1 << (level - self.level)), self.mode)

    def coarsen(self) -> "DyadicStep":
        """Drop refinement levels that carry no information."""
        x = self
        while x.level > 0 and all(a == b for a, b in zip(x.values[0::2], x.values[1::2])):
            x = DyadicStep(x.level - 1, x.values[0::2].copy(), x.mode)
        return x

    def mean(self) -> Scalar:
        return self.values.sum() * power_of_two(-self.level, self.mode)

    def _align(self, other: "DyadicStep"):
        if self.mode != other.mode:
            raise DomainError(f"Cannot mix {self.mode.value} and {other.mode.value} step functions")
        m = max(self.level, other.level)
        return self.refine(m), other.refine(m), m

    def __add__(self, other: "DyadicStep") -> "DyadicStep":
        x, y, m = self._align(other)
        return DyadicStep(m, x.values + y.values, self.mode)

    def __sub__(self, other: "DyadicStep") -> "DyadicStep":
        x, y, m = self._align(other)
        return DyadicStep(m, x.values - y.values, self.mode)

    def __neg__(self) -> "DyadicStep":
        return DyadicStep(self.level, -self.values, self.mode)

    def scale(self, s) -> "DyadicStep":
        if self.mode == ScalarMode.FLOAT:
            s = complex(s)
        return DyadicStep(self.level, self.values * s, self.mode)

    def __eq__(self, other) -> bool:
        if not isinstance(other, DyadicStep) or self.mode != other.mode:
            return NotImplemented
        x, y, _ = self._align(other)
        return bool(all(a == b for a, b in zip(x.values, y.values)))

    def allclose(self, other: "DyadicStep", tol: float = 1e-12) -> bool:
        m = max(self.level, other.level)
        x = np.asarray([complex(v) for v in self.refine(m).values])
        y = np.asarray([complex(v) for v in other.refine(m).values])
        return bool(np.allclose(x, y, atol=tol, rtol=0.0))

    def is_zero(self) -> bool:
        tol = 0.0 if self.mode == ScalarMode.EXACT else settings.float_tolerance
        return all(is_zero(v, tol) for v in self.values)

    def __hash__(self):
        x = self.coarsen()
        return hash((x.level, tuple(x.values)))

    def value_at(self, t) -> Scalar:
        """Value at a point t in (0, 1]; cells are open on the left."""
        if not 0 < t <= 1:
            raise DomainError(f"Point {t} lies outside (0, 1]")
        j = math.ceil(t * (1 << self.level)) - 1
        return self.values[j]


def require_mean_zero(x: DyadicStep) -> None:
    mu = x.mean()
    if x.mode == ScalarMode.EXACT:
        if mu:
            raise NonZeroMeanError(mu)
    else:
        scale = max(1.0, float(np.max(np.abs(x.values))))
        if abs(mu) > settings.float_tolerance * scale:
            raise NonZeroMeanError(mu)


def haar(n: int, level: int, mode: ScalarMode = ScalarMode.EXACT) -> DyadicStep:
    """h_n = V^alpha h at the given level; +1 on the left half of I_alpha, -1 on the right."""
    alpha = index_to_multi(n)
    k = len(alpha)
    if level < k + 1:
        raise CapacityError(f"h_{n} needs level >= {k + 1}, got {level}")
    check_step_level(level)
    values = [0] * (1 << (k + 1))
    values[2 * alpha.position] = 1
    values[2 * alpha.position + 1] = -1
    return DyadicStep(k + 1, scalar_array(values, mode), mode).refine(level)


def dilate(b: int, x: DyadicStep) -> DyadicStep:
    """V_0 x(t) = x(2t) on (0, 1/2]; V_1 x(t) = x(2t - 1) on (1/2, 1]."""
    if b not in (0, 1):
        raise DomainError(f"Dilation bit must be 0 or 1, got {b}")
    check_step_level(x.level + 1)
    blank = zeros_array(len(x.values), x.mode)
    parts = (x.values, blank) if b == 0 else (blank, x.values)
    return DyadicStep(x.level + 1, np.concatenate(parts), x.mode)


def apply_multi(alpha: MultiIndex, x: DyadicStep) -> DyadicStep:
    """V^alpha = V_{a1} V_{a2} ... V_{ak}; the rightmost factor acts first."""
    for b in reversed(alpha.bits):
        x = dilate(b, x)
    return x


def _cells_of(alpha: MultiIndex, x: DyadicStep) -> np.ndarray:
    k = len(alpha)
    if k > x.level:
        raise CapacityError(f"Index of length {k} exceeds step level {x.level}")
    width = 1 << (x.level - k)
    start = alpha.position * width
    return x.values[start:start + width]


def adjoint_scaled(alpha: MultiIndex, x: DyadicStep) -> DyadicStep:
    """2^|alpha| V^alpha* x: the restriction to I_alpha stretched to (0, 1], minus its mean."""
    cells = _cells_of(alpha, x)
    level = x.level - len(alpha)
    local_mean = cells.sum() * power_of_two(-level, x.mode)
    return DyadicStep(level, cells - local_mean, x.mode)


def adjoint(alpha: MultiIndex, x: DyadicStep) -> DyadicStep:
    return adjoint_scaled(alpha, x).scale(power_of_two(-len(alpha), x.mode))


def inner(x: DyadicStep, y: DyadicStep) -> Scalar:
    """Bilinear pairing (x, y) = integral of x*y, without conjugation."""
    x, y, m = x._align(y)
    return (x.values * y.values).sum() * power_of_two(-m, x.mode)


def conjugate_values(values: np.ndarray) -> np.ndarray:
    if values.dtype == object:
        out = np.empty(len(values), dtype=object)
        out[:] = [v.conjugate() for v in values]
        return out
    return values.conj()


def inner_sesquilinear(x: DyadicStep, y: DyadicStep) -> Scalar:
    x, y, m = x._align(y)
    return (x.values * conjugate_values(y.values)).sum() * power_of_two(-m, x.mode)


def norm2_squared(x: DyadicStep) -> Union[float, Fraction]:
    """||x||^2 in L^2: exact Fraction in exact mode."""
    return abs2_array(x.values).sum() * power_of_two(-x.level, x.mode)

