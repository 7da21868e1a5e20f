import math
from typing import List, Literal, Optional
from pydantic import BaseModel, ConfigDict, Field, model_validator
from pydantic.alias_generators import to_camel

_SPEC_CONFIG = ConfigDict(alias_generator=to_camel, populate_by_name=True)

Family = Literal["cyclic", "z2k", "random-latin", "split"]
Solver = Literal["auto", "pipeline", "exact", "greedy"]


class GenSpec(BaseModel):
    model_config = _SPEC_CONFIG

    n: int = Field(ge=1)
    target_colours: Optional[int] = None
    family: Family = "cyclic"
    seed: int = 0
    mixing_steps: Optional[int] = Field(default=None, ge=0)

    @model_validator(mode='after')
    def check_target(self):
        if self.target_colours is not None and not (self.n <= self.target_colours <= self.n * self.n):
            raise ValueError(
                f"[GEN SPEC] target colours {self.target_colours} outside [{self.n}, {self.n * self.n}].")
        if self.family == "z2k" and self.n % 2:
            raise ValueError(f"[GEN SPEC] z2k tables have even order, got n={self.n}.")
        return self


class ExperimentSpec(BaseModel):
    model_config = _SPEC_CONFIG

    n_values: List[int] = Field(min_length=1)
    colour_fractions: List[float] = Field(min_length=1)
    trials: int = Field(default=1, ge=1)
    master_seed: int = 0
    solver: Solver = "auto"
    output_path: Optional[str] = None
    format: Literal["csv", "json"] = "csv"
    mixing_steps: Optional[int] = Field(default=None, ge=0)

    @model_validator(mode='after')
    def check_cells(self):
        for d in self.colour_fractions:
            if not 0 < d <= 1:
                raise ValueError(f"[EXPERIMENT SPEC] colour fraction {d} outside (0, 1].")
        for n in self.n_values:
            if n < 1:
                raise ValueError(f"[EXPERIMENT SPEC] order {n} must be positive.")
            for d in self.colour_fractions:
                if math.ceil(d * n * n) < n:
                    raise ValueError(f"[EXPERIMENT SPEC] cell n={n}, d={d} gives fewer than n colours.")
        return self

    @staticmethod
    def colours_for(n: int, d: float) -> int:
        return math.ceil(d * n * n)
