from pydantic import BaseModel, Field, field_validator, model_validator
from typing import Annotated, Any, Dict, List, Literal, Optional, Union
from enum import Enum


class ScalarMode(str, Enum):
    EXACT = "exact"
    FLOAT = "float"


class SymbolKind(str, Enum):
    POLYNOMIAL = "polynomial"
    GEOMETRIC = "geometric"
    BINOMIAL = "binomial"
    COUNTEREXAMPLE = "counterexample"
    TAYLOR = "taylor"
    USER = "user"


class CaseTag(str, Enum):
    A = "a"
    B = "b"
    C = "c"
    D = "d"


class VerdictLevel(str, Enum):
    CERTIFIED_NEGATIVE = "certified_negative"
    NUMERIC_NEGATIVE = "numeric_negative"
    NUMERIC_POSITIVE = "numeric_positive"
    INCONCLUSIVE = "inconclusive"


class PointSource(str, Enum):
    BOUNDARY = "boundary"
    INTERIOR = "interior"


def _stringify(value: Any) -> Any:
    if isinstance(value, (int, float)) and not isinstance(value, bool):
        return str(value)
    return value


# Input documents

class StepFunctionSpec(BaseModel):
    level: int = Field(ge=0)
    values: List[str]

    @field_validator("values", mode="before")
    @classmethod
    def stringify_values(cls, v):
        return [_stringify(item) for item in v] if isinstance(v, list) else v

    @model_validator(mode="after")
    def check_length(self):
        if len(self.values) != 2 ** self.level:
            raise ValueError(
                f"level {self.level} needs {2 ** self.level} values, got {len(self.values)}"
            )
        return self


class PolynomialSpec(BaseModel):
    kind: Literal["polynomial"]
    coeffs: List[str] = Field(min_length=1)

    @field_validator("coeffs", mode="before")
    @classmethod
    def stringify_coeffs(cls, v):
        return [_stringify(item) for item in v] if isinstance(v, list) else v


class TaylorSpec(BaseModel):
    kind: Literal["taylor"]
    coeffs: List[str] = Field(min_length=1)

    @field_validator("coeffs", mode="before")
    @classmethod
    def stringify_coeffs(cls, v):
        return [_stringify(item) for item in v] if isinstance(v, list) else v


class GeometricSpec(BaseModel):
    kind: Literal["geometric"]
    a: str

    @field_validator("a", mode="before")
    @classmethod
    def stringify_a(cls, v):
        return _stringify(v)


class BinomialSpec(BaseModel):
    kind: Literal["binomial"]
    theta: float
    p: float = Field(gt=1.0)


class CounterexampleSpec(BaseModel):
    kind: Literal["counterexample"]
    p: float = Field(gt=1.0)


SymbolSpec = Annotated[
    Union[PolynomialSpec, TaylorSpec, GeometricSpec, BinomialSpec, CounterexampleSpec],
    Field(discriminator="kind"),
]


# Reports

class NormReport(BaseModel):
    value: float
    certified_lower: Optional[float] = None
    certified_upper: Optional[float] = None
    method: str
    truncation: Dict[str, Any] = Field(default_factory=dict)
    mode: ScalarMode = ScalarMode.FLOAT
    exact_value: Optional[str] = None  # exact_power-th power of the norm, "p/q"
    exact_power: Optional[int] = None
    tolerance: Optional[float] = None
    is_interval: bool = False
    notes: List[str] = Field(default_factory=list)

    @model_validator(mode="after")
    def check_bounds(self):
        slack = 1e-12 * max(1.0, abs(self.value))
        if self.certified_lower is not None and self.certified_lower > self.value + slack:
            raise ValueError(f"certified_lower {self.certified_lower} exceeds value {self.value}")
        if self.certified_upper is not None and self.certified_upper < self.value - slack:
            raise ValueError(f"certified_upper {self.certified_upper} is below value {self.value}")
        return self


class CheckResult(BaseModel):
    name: str
    passed: bool
    detail: Dict[str, Any] = Field(default_factory=dict)


class VerificationReport(BaseModel):
    suite: str
    passed: bool
    parameters: Dict[str, Any] = Field(default_factory=dict)
    checks: List[CheckResult] = Field(default_factory=list)
    error_message: Optional[str] = None


class ComplexValue(BaseModel):
    re: float
    im: float


class SpectrumPoint(BaseModel):
    re: float
    im: float
    source: PointSource


class SpectrumCloud(BaseModel):
    p: Optional[float] = None
    radius_used: float
    points: List[SpectrumPoint]
    tail_bound: Optional[float] = None
    truncation: Dict[str, Any] = Field(default_factory=dict)


class SpectralRadiusPoint(BaseModel):
    n: int
    estimate: float


class SpectralRadiusTrace(BaseModel):
    section: int
    radius: float
    hinf_reference: float
    points: List[SpectralRadiusPoint]


class SpectralRadiusBounds(BaseModel):
    p: float
    radius: float
    lower: float
    upper: float
    method: str


class RootsReport(BaseModel):
    roots: List[ComplexValue]
    z0: Optional[ComplexValue] = None
    z0_modulus: Optional[float] = None
    max_residual: float = 0.0
    residual_ok: bool = True


class PerPVerdict(BaseModel):
    p: float
    is_basis: bool
    is_equivalent: bool
    evidence: List[str] = Field(default_factory=list)


class ClassificationReport(BaseModel):
    z0: Optional[ComplexValue] = None
    z0_modulus: Optional[float] = None
    p0: Optional[float] = None
    p0_infinite: bool = False
    case_tag: CaseTag
    per_p: List[PerPVerdict]
    flags: List[str] = Field(default_factory=list)


class TheoremVerdict(BaseModel):
    p: float
    level: VerdictLevel
    radius: float
    lower_bound_a: Optional[float] = None
    upper_bound_b: Optional[float] = None
    symbol_interval: Optional[NormReport] = None
    reciprocal_interval: Optional[NormReport] = None
    evidence: List[str] = Field(default_factory=list)


class EndpointVerdict(BaseModel):
    space: Literal["bmo", "h1"]
    level: VerdictLevel
    spectral_radius: Optional[float] = None
    evidence: List[str] = Field(default_factory=list)


class BVReport(BaseModel):
    depth: int
    bv_sum: float
    a1_sum: float
    ratio: Optional[float] = None
    termwise_upper_ok: bool
    tail_lower_ok: bool


class ReconstructionReport(BaseModel):
    n_max: int
    depth: int
    ordering: str = "d ascending, n ascending within N_d"
    terms: int
    nonzero_coefficients: int
    errors: List[NormReport] = Field(default_factory=list)


class MinimalityProfile(BaseModel):
    p: float
    conjugate_exponent: float
    radius: float
    checkpoints: List[int]
    partial_norms: List[float]
    growth_ratio: float
    uniformly_minimal: Optional[bool] = None


class MultiplierTrend(BaseModel):
    p: float
    radius: float
    rows: List[NormReport]
