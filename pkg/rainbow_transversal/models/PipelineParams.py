import math
from typing import Optional
from pydantic import BaseModel, ConfigDict, Field, computed_field, model_validator
from pydantic.alias_generators import to_camel

_PARAMS_CONFIG = ConfigDict(alias_generator=to_camel, populate_by_name=True, frozen=True)


class DensityParams(BaseModel):
    model_config = _PARAMS_CONFIG

    epsilon: float = Field(default=0.1, gt=0, lt=1)
    c: float = Field(default=0.24, gt=0, lt=1)
    c_prime: float = Field(default=1 / 50, gt=0, lt=1)

    @model_validator(mode='after')
    def check_constants(self):
        if 4 * self.c + self.c_prime > 1 + 1e-12:
            raise ValueError(f"[DENSITY PARAMS] 4c + c' must be at most 1, got {4 * self.c + self.c_prime}.")
        return self

    @computed_field
    @property
    def size_exponent(self) -> float:
        return 2 / math.log2(1 + self.c * self.epsilon)

    @property
    def increment(self) -> float:
        return 1 + self.c * self.epsilon


class ExpansionSpec(BaseModel):
    model_config = _PARAMS_CONFIG

    factor: float = Field(default=2, gt=1)
    cap: int = Field(gt=0)

    @classmethod
    def for_core(cls, core_size: int) -> "ExpansionSpec":
        return cls(factor=2, cap=max(1, (2 * core_size) // 3))

    def bound(self, set_size: int) -> float:
        return min(self.factor * set_size, self.cap)

    @property
    def max_checked_size(self) -> int:
        return math.ceil(self.cap / self.factor)


class StageThresholds(BaseModel):
    """Every asymptotic constant of the pipeline evaluated at a concrete (n, d, |A1|)."""
    model_config = ConfigDict(frozen=True)

    n: int
    d: float
    core_size: int
    p: float
    theta: float
    theta_floor: float
    reach_threshold: float
    min_degree_threshold: float
    trim_count: int
    trim_loss_threshold: float
    trimmed_min_degree: float
    final_min_degree: float
    reach_step_cap: int
    trace_step_cap: int
    d_min: float


class PipelineParams(BaseModel):
    model_config = _PARAMS_CONFIG

    reserve_exp: float = Field(default=0.32, gt=0, lt=1)
    theta_exp: float = Field(default=0.66, gt=0, lt=1)
    min_deg_coef: float = Field(default=1e-3, gt=0)
    trim_coef: float = Field(default=1e-4, gt=0)
    epsilon: float = Field(default=0.1, gt=0, lt=1)
    density: DensityParams = DensityParams()
    step_cap_multiplier: int = Field(default=2, ge=1)
    d_min_exp: float = Field(default=1 / 200, gt=0, lt=1)
    scaled: bool = True
    core_fraction: Optional[float] = Field(default=0.5, gt=0, le=1)
    expansion_exact_limit: int = Field(default=24, ge=1)
    density_exact_limit: int = Field(default=16, ge=1)
    violator_restarts: int = Field(default=200, ge=1)
    density_samples: int = Field(default=200, ge=1)
    reach_relaxation: bool = True

    def reserve_probability(self, n: int) -> float:
        return n ** -self.reserve_exp

    def theta(self, n: int) -> float:
        return n ** -self.theta_exp

    def d_min(self, n: int) -> float:
        return n ** -self.d_min_exp

    def thresholds(self, n: int, d: float, core_size: int) -> StageThresholds:
        log_n = max(1, math.ceil(math.log2(max(n, 2))))
        theta = self.theta(n)
        theta_floor = 4 * log_n + 1 if self.scaled else 0.0
        min_degree = self.min_deg_coef * d * core_size
        loss = self.trim_coef * d * core_size
        trimmed = (self.min_deg_coef - 2 * self.trim_coef) * d * core_size
        final = self.min_deg_coef * d * core_size / 2
        if self.scaled:
            min_degree, loss = max(min_degree, 1.0), max(loss, 1.0)
            trimmed, final = max(trimmed, 1.0), max(final, 1.0)
        return StageThresholds(
            n=n,
            d=d,
            core_size=core_size,
            p=self.reserve_probability(n),
            theta=theta,
            theta_floor=theta_floor,
            reach_threshold=max(theta * core_size, theta_floor, 1.0),
            min_degree_threshold=min_degree,
            trim_count=math.ceil(self.trim_coef * d * core_size),
            trim_loss_threshold=loss,
            trimmed_min_degree=trimmed,
            final_min_degree=final,
            reach_step_cap=self.step_cap_multiplier * log_n,
            trace_step_cap=4 * self.step_cap_multiplier * log_n,
            d_min=self.d_min(n),
        )
