"""Fourier-Haar coefficient maps.

A :class:`HaarCoeffMap` stores a finite sum ``sum_alpha xi_alpha V^alpha h``
sparsely. Objects whose support runs deep into the tree (x_0, T_f x,
reconstructions) are kept in this form and only turned into step functions when
they are shallow enough.
"""
from collections import defaultdict
from typing import Dict, Iterable, Iterator, List, Mapping, Optional, Tuple

import numpy as np

from haar_affine.dyadic.scalars import Scalar, abs2, coerce, power_of_two, zero, zeros_array
from haar_affine.dyadic.stepfn import DyadicStep, check_step_level, require_mean_zero
from haar_affine.dyadic.tree import MultiIndex
from haar_affine.exceptions import DomainError
from haar_affine.models import ScalarMode


def _key(alpha: MultiIndex) -> Tuple[int, int]:
    return len(alpha), alpha.position


class HaarCoeffMap:
    """Finite map alpha -> xi_alpha; missing indices are zero."""

    def __init__(
        self,
        coeffs: Optional[Mapping[MultiIndex, Scalar]] = None,
        mode: ScalarMode = ScalarMode.EXACT,
    ):
        self.mode = mode
        self._coeffs: Dict[MultiIndex, Scalar] = {}
        for alpha, value in (coeffs or {}).items():
            value = coerce(value, mode)
            if value != 0:
                self._coeffs[alpha] = value

    @classmethod
    def from_terms(
        cls, terms: Iterable[Tuple[MultiIndex, Scalar]], mode: ScalarMode = ScalarMode.EXACT
    ) -> "HaarCoeffMap":
        """Sum possibly repeated (alpha, value) terms."""
        acc: Dict[MultiIndex, Scalar] = defaultdict(lambda: zero(mode))
        for alpha, value in terms:
            acc[alpha] = acc[alpha] + value
        return cls(acc, mode)

    def __getitem__(self, alpha: MultiIndex) -> Scalar:
        return self._coeffs.get(alpha, zero(self.mode))

    def get(self, alpha: MultiIndex) -> Scalar:
        return self[alpha]

    def __contains__(self, alpha: MultiIndex) -> bool:
        return alpha in self._coeffs

    def __len__(self) -> int:
        return len(self._coeffs)

    def __iter__(self) -> Iterator[MultiIndex]:
        return iter(sorted(self._coeffs, key=_key))

    def items(self) -> List[Tuple[MultiIndex, Scalar]]:
        """Entries ordered by (|alpha|, position)."""
        return [(alpha, self._coeffs[alpha]) for alpha in self]

    def __eq__(self, other) -> bool:
        if not isinstance(other, HaarCoeffMap):
            return NotImplemented
        return self._coeffs == other._coeffs

    def __repr__(self):
        body = ", ".join(f"{alpha}: {value}" for alpha, value in self.items())
        return f"HaarCoeffMap({{{body}}}, mode={self.mode.value})"

    @property
    def max_length(self) -> int:
        return max((len(alpha) for alpha in self._coeffs), default=-1)

    @property
    def level(self) -> int:
        """Smallest step level that represents the sum exactly."""
        return self.max_length + 1

    def _check_mode(self, other: "HaarCoeffMap") -> None:
        if self.mode != other.mode:
            raise DomainError(f"Cannot mix {self.mode.value} and {other.mode.value} coefficient maps")

    def __add__(self, other: "HaarCoeffMap") -> "HaarCoeffMap":
        self._check_mode(other)
        return HaarCoeffMap.from_terms(list(self._coeffs.items()) + list(other._coeffs.items()), self.mode)

    def __neg__(self) -> "HaarCoeffMap":
        return HaarCoeffMap({alpha: -v for alpha, v in self._coeffs.items()}, self.mode)

    def __sub__(self, other: "HaarCoeffMap") -> "HaarCoeffMap":
        return self + (-other)

    def scale(self, s) -> "HaarCoeffMap":
        s = coerce(s, self.mode) if self.mode == ScalarMode.FLOAT else s
        return HaarCoeffMap({alpha: v * s for alpha, v in self._coeffs.items()}, self.mode)

    def dilate(self, b: int) -> "HaarCoeffMap":
        """V_b on coefficients: V_b V^alpha h = V^{b alpha} h."""
        prefix = MultiIndex((b,))
        return HaarCoeffMap({prefix + alpha: v for alpha, v in self._coeffs.items()}, self.mode)

    def inner(self, other: "HaarCoeffMap") -> Scalar:
        """Bilinear pairing through (V^a h, V^b h) = delta_ab 2^-|a|."""
        self._check_mode(other)
        small, large = (self, other) if len(self) <= len(other) else (other, self)
        total = zero(self.mode)
        for alpha, v in small._coeffs.items():
            w = large._coeffs.get(alpha)
            if w is not None:
                total = total + v * w * power_of_two(-len(alpha), self.mode)
        return total

    def inner_sesquilinear(self, other: "HaarCoeffMap") -> Scalar:
        self._check_mode(other)
        total = zero(self.mode)
        for alpha, v in self._coeffs.items():
            w = other._coeffs.get(alpha)
            if w is not None:
                total = total + v * w.conjugate() * power_of_two(-len(alpha), self.mode)
        return total

    def norm2_squared(self):
        """Parseval: ||x||^2 = sum |xi_alpha|^2 2^-|alpha|."""
        total = abs2(zero(self.mode))
        for alpha, v in self.items():
            total = total + abs2(v) * power_of_two(-len(alpha), self.mode)
        return total

    def by_order(self) -> Dict[int, "HaarCoeffMap"]:
        """Split into Haar chaoses; an index with s ones belongs to order s + 1."""
        groups: Dict[int, Dict[MultiIndex, Scalar]] = defaultdict(dict)
        for alpha, v in self._coeffs.items():
            groups[alpha.ones + 1][alpha] = v
        return {d: HaarCoeffMap(groups[d], self.mode) for d in sorted(groups)}

    def to_step(self, level: Optional[int] = None) -> DyadicStep:
        """sum xi_alpha V^alpha h as a step function at level max(level, self.level)."""
        target = max(self.level, 0 if level is None else level)
        check_step_level(target)
        by_level: Dict[int, Dict[int, Scalar]] = defaultdict(dict)
        for alpha, v in self._coeffs.items():
            by_level[len(alpha)][alpha.position] = v
        current = zeros_array(1, self.mode)
        for k in range(self.level):
            xi = zeros_array(1 << k, self.mode)
            for j, v in by_level.get(k, {}).items():
                xi[j] = v
            nxt = zeros_array(1 << (k + 1), self.mode)
            nxt[0::2] = current + xi
            nxt[1::2] = current - xi
            current = nxt
        return DyadicStep(max(self.level, 0), current, self.mode).refine(target)


def haar_levels(x: DyadicStep) -> List[np.ndarray]:
    """Coefficient arrays per level: entry j of level k is xi at (k, j)."""
    m = x.level
    sums = x.values
    levels: List[np.ndarray] = [None] * m
    for k in range(m - 1, -1, -1):
        left, right = sums[0::2], sums[1::2]
        levels[k] = (left - right) * power_of_two(-(m - k), x.mode)
        sums = left + right
    return levels


def fourier_haar(x: DyadicStep) -> HaarCoeffMap:
    """xi_alpha = 2^|alpha| (x, V^alpha h) for every |alpha| < level(x)."""
    require_mean_zero(x)
    coeffs: Dict[MultiIndex, Scalar] = {}
    for k, row in enumerate(haar_levels(x)):
        for j, v in enumerate(row):
            if v != 0:
                coeffs[MultiIndex.from_position(k, j)] = v
    return HaarCoeffMap(coeffs, x.mode)
