from pydantic import BaseModel, Field, field_validator, model_validator
from pydantic_settings import BaseSettings, SettingsConfigDict
from typing import List, Optional


class Settings(BaseSettings):
    # Scalars
    mode: str = "exact"
    float_tolerance: float = 1e-12

    # Truncation
    depth: int = 16
    trunc: int = 512
    samples: int = 4096
    max_step_level: int = 20
    counterexample_trunc: int = 2048

    # Reports
    p_list: List[float] = [1.25, 1.5, 2.0, 3.0, 4.0, 8.0]
    seed: int = 20240607

    # Classification
    boundary_tolerance: float = 1e-9
    root_residual: float = 1e-12
    growth_threshold: float = 1.1

    # Application
    log_level: str = "INFO"
    log_file: Optional[str] = None
    out: Optional[str] = None

    model_config = SettingsConfigDict(env_file=".env", env_prefix="HAAR_AFFINE_")


settings = Settings()


class RunConfig(BaseModel):
    """Settings for one CLI run, after command-line overrides."""

    mode: str = "exact"
    depth: int = 16
    trunc: int = 512
    samples: int = 4096
    p_list: List[float] = Field(default_factory=lambda: [1.25, 1.5, 2.0, 3.0, 4.0, 8.0])
    seed: int = 20240607
    out: Optional[str] = None

    @field_validator("mode")
    @classmethod
    def check_mode(cls, v):
        if v not in ("exact", "float"):
            raise ValueError(f"mode must be exact or float, got {v}")
        return v

    @field_validator("p_list")
    @classmethod
    def check_p(cls, v):
        if any(p < 1 for p in v):
            raise ValueError(f"every p must be at least 1, got {v}")
        return v

    @model_validator(mode="after")
    def check_sizes(self):
        if self.trunc < 1 or self.depth < 1:
            raise ValueError(f"trunc and depth must be positive, got trunc={self.trunc}, depth={self.depth}")
        if self.samples < 64:
            raise ValueError(f"samples must be at least 64, got {self.samples}")
        return self

    @classmethod
    def from_settings(cls, base: Optional[Settings] = None, **overrides) -> "RunConfig":
        base = base or settings
        values = {name: getattr(base, name) for name in cls.model_fields}
        values.update({k: v for k, v in overrides.items() if v is not None})
        return cls(**values)
