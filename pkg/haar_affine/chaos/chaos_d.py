"""Haar chaoses of order d.

An element of the d-th chaos is ``sum xi_{k_1..k_d} V_0^{k_1} V_1 ... V_1 V_0^{k_d} h``,
stored by gap vector. Its symbol is the d-variable polynomial
``sum xi_{k_1..k_d} z_1^{k_1} ... z_d^{k_d}``.
"""
from dataclasses import dataclass, field
from typing import Dict, List, Mapping, Optional, Sequence, Tuple

import numpy as np

from haar_affine.dyadic.coeffs import HaarCoeffMap, fourier_haar
from haar_affine.dyadic.scalars import Scalar, coerce
from haar_affine.dyadic.stepfn import DyadicStep
from haar_affine.dyadic.tree import GapVector
from haar_affine.exceptions import DomainError
from haar_affine.models import ScalarMode


@dataclass(frozen=True)
class ChaosD:
    d: int
    coeffs: Dict[GapVector, Scalar] = field(default_factory=dict)
    mode: ScalarMode = ScalarMode.EXACT

    def __post_init__(self):
        if self.d < 1:
            raise DomainError(f"Chaos order must be positive, got {self.d}")
        for g in self.coeffs:
            if g.d != self.d:
                raise DomainError(f"Gap vector {g.gaps} does not belong to chaos order {self.d}")

    @classmethod
    def from_gaps(
        cls, d: int, coeffs: Mapping[Tuple[int, ...], object], mode: ScalarMode = ScalarMode.EXACT
    ) -> "ChaosD":
        values = {GapVector(tuple(k)): coerce(v, mode) for k, v in coeffs.items()}
        return cls(d, {g: v for g, v in values.items() if v != 0}, mode)

    @classmethod
    def from_coeff_map(cls, d: int, x: HaarCoeffMap) -> "ChaosD":
        coeffs = {}
        for alpha, v in x.items():
            if alpha.ones + 1 != d:
                raise DomainError(f"Index {alpha} lies in chaos {alpha.ones + 1}, not {d}")
            coeffs[GapVector.from_multi(alpha)] = v
        return cls(d, coeffs, x.mode)

    def to_coeff_map(self) -> HaarCoeffMap:
        return HaarCoeffMap({g.to_multi(): v for g, v in self.coeffs.items()}, self.mode)

    def to_step(self, level: Optional[int] = None) -> DyadicStep:
        return self.to_coeff_map().to_step(level)

    def symbol(self) -> Dict[Tuple[int, ...], Scalar]:
        """Coefficients of x^(z_1, ..., z_d) keyed by exponent tuples."""
        return {g.gaps: v for g, v in self.coeffs.items()}

    def evaluate(self, z: Sequence[complex]) -> complex:
        if len(z) != self.d:
            raise DomainError(f"Chaos of order {self.d} needs {self.d} variables, got {len(z)}")
        z = np.asarray(z, dtype=np.complex128)
        return complex(sum(complex(v) * np.prod(z ** np.asarray(g.gaps)) for g, v in self.coeffs.items()))

    def norm2_squared(self):
        return self.to_coeff_map().norm2_squared()


def decompose_chaoses(x: DyadicStep) -> List[ChaosD]:
    """Group the Fourier-Haar expansion of x by chaos order, lowest order first."""
    return [ChaosD.from_coeff_map(d, part) for d, part in fourier_haar(x).by_order().items()]
