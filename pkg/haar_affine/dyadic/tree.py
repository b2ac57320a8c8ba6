"""Addressing of the dyadic tree.

A multi-index ``alpha = (a_1, ..., a_k)`` over {0, 1} is a node of the infinite
binary tree. It carries the dyadic interval ``I_alpha = (j/2^k, (j+1)/2^k]`` with
``j = sum a_v 2^(k-v)`` and the Haar number ``n = 2^k + j``.
"""
from dataclasses import dataclass
from fractions import Fraction
from typing import Iterable, List, Tuple

from haar_affine.exceptions import CapacityError, DomainError

MAX_LENGTH = 62


def _check_length(k: int) -> None:
    if k > MAX_LENGTH:
        raise CapacityError(f"Multi-index length {k} exceeds the cap of {MAX_LENGTH}")


@dataclass(frozen=True, order=True)
class MultiIndex:
    bits: Tuple[int, ...] = ()

    def __post_init__(self):
        _check_length(len(self.bits))
        if any(b not in (0, 1) for b in self.bits):
            raise DomainError(f"Multi-index bits must be 0 or 1, got {self.bits}")

    @classmethod
    def of(cls, *bits: int) -> "MultiIndex":
        return cls(tuple(bits))

    @classmethod
    def from_position(cls, length: int, j: int) -> "MultiIndex":
        return cls(tuple((j >> (length - 1 - v)) & 1 for v in range(length)))

    @classmethod
    def zeros(cls, k: int) -> "MultiIndex":
        """The index 0_k."""
        return cls((0,) * k)

    def __len__(self) -> int:
        return len(self.bits)

    def __iter__(self):
        return iter(self.bits)

    def concat(self, other: "MultiIndex") -> "MultiIndex":
        return MultiIndex(self.bits + other.bits)

    def __add__(self, other: "MultiIndex") -> "MultiIndex":
        return self.concat(other)

    def is_prefix_of(self, other: "MultiIndex") -> bool:
        return other.bits[: len(self.bits)] == self.bits

    @property
    def position(self) -> int:
        j = 0
        for b in self.bits:
            j = (j << 1) | b
        return j

    @property
    def ones(self) -> int:
        return sum(self.bits)

    def __str__(self):
        return "(" + ",".join(str(b) for b in self.bits) + ")"


ROOT = MultiIndex()


@dataclass(frozen=True)
class DyadicInterval:
    """The interval (j/2^k, (j+1)/2^k], open on the left."""

    level: int
    position: int

    def __post_init__(self):
        if self.level < 0 or not 0 <= self.position < (1 << self.level):
            raise DomainError(f"No dyadic interval at level {self.level}, position {self.position}")

    @property
    def left(self) -> Fraction:
        return Fraction(self.position, 1 << self.level)

    @property
    def right(self) -> Fraction:
        return Fraction(self.position + 1, 1 << self.level)

    @property
    def length(self) -> Fraction:
        return Fraction(1, 1 << self.level)

    def contains(self, t: Fraction) -> bool:
        return self.left < t <= self.right

    def issubset(self, other: "DyadicInterval") -> bool:
        return other.left <= self.left and self.right <= other.right

    def is_disjoint(self, other: "DyadicInterval") -> bool:
        return self.right <= other.left or other.right <= self.left


@dataclass(frozen=True)
class GapVector:
    """Gaps (k_1, ..., k_d) of the multi-index (0_{k1}, 1, 0_{k2}, 1, ..., 1, 0_{kd})."""

    gaps: Tuple[int, ...]

    def __post_init__(self):
        if not self.gaps or any(k < 0 for k in self.gaps):
            raise DomainError(f"Gap vector needs d >= 1 non-negative gaps, got {self.gaps}")

    @property
    def d(self) -> int:
        return len(self.gaps)

    def to_multi(self) -> MultiIndex:
        bits: List[int] = []
        for i, k in enumerate(self.gaps):
            if i:
                bits.append(1)
            bits.extend([0] * k)
        return MultiIndex(tuple(bits))

    @classmethod
    def from_multi(cls, alpha: MultiIndex) -> "GapVector":
        gaps = [0]
        for b in alpha.bits:
            if b:
                gaps.append(0)
            else:
                gaps[-1] += 1
        return cls(tuple(gaps))

    def with_last(self, k: int) -> "GapVector":
        return GapVector(self.gaps[:-1] + (k,))


def index_to_multi(n: int) -> MultiIndex:
    if n < 1:
        raise DomainError(f"Haar numbering starts at 1, got {n}")
    k = n.bit_length() - 1
    _check_length(k)
    return MultiIndex.from_position(k, n - (1 << k))


def multi_to_index(alpha: MultiIndex) -> int:
    return (1 << len(alpha)) + alpha.position


def interval_of(alpha: MultiIndex) -> DyadicInterval:
    return DyadicInterval(len(alpha), alpha.position)


def chaos_order(n: int) -> int:
    if n < 1:
        raise DomainError(f"Chaos order is defined for n >= 1, got {n}")
    return bin(n).count("1")


def nd_to_gaps(n: int) -> GapVector:
    """Solve i_1 = k_1+...+k_d+d-1, ..., i_d = k_d for the binary exponents of n."""
    if n < 1:
        raise DomainError(f"Gap vectors are defined for n >= 1, got {n}")
    exponents = [i for i in range(n.bit_length() - 1, -1, -1) if (n >> i) & 1]
    gaps = [exponents[v] - exponents[v + 1] - 1 for v in range(len(exponents) - 1)]
    gaps.append(exponents[-1])
    return GapVector(tuple(gaps))


def gaps_to_nd(g: GapVector) -> int:
    n = 0
    exponent = -1
    for k in reversed(g.gaps):
        exponent += k + 1
        n += 1 << exponent
    return n


def multi_indices(length: int) -> Iterable[MultiIndex]:
    """All multi-indices of the given length in increasing position order."""
    for j in range(1 << length):
        yield MultiIndex.from_position(length, j)


def is_antichain(indices: Iterable[MultiIndex]) -> bool:
    """True when no index is a proper prefix of another."""
    ordered = sorted(indices, key=lambda a: a.bits)
    for a, b in zip(ordered, ordered[1:]):
        if a.is_prefix_of(b):
            return False
    return True
