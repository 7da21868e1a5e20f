from typing import Any, Dict, List, Optional
from pydantic import BaseModel, Field
from .RainbowMatching import RainbowMatching
from .Subpair import Subpair
from .Stages import StageState


class Violation(BaseModel):
    row: int
    col: int
    colour: int
    reason: str


class ValidationReport(BaseModel):
    ok: bool
    violations: List[Violation] = []


class InequalityCheck(BaseModel):
    """One asserted inequality `lhs <relation> rhs` with its numeric slack."""
    name: str
    lhs: float
    rhs: float
    relation: str = ">="
    holds: bool
    slack: float

    @classmethod
    def at_least(cls, name: str, lhs: float, rhs: float) -> "InequalityCheck":
        return cls(name=name, lhs=lhs, rhs=rhs, relation=">=", holds=lhs >= rhs, slack=lhs - rhs)

    @classmethod
    def at_most(cls, name: str, lhs: float, rhs: float) -> "InequalityCheck":
        return cls(name=name, lhs=lhs, rhs=rhs, relation="<=", holds=lhs <= rhs, slack=rhs - lhs)

    @classmethod
    def equal(cls, name: str, lhs: float, rhs: float) -> "InequalityCheck":
        return cls(name=name, lhs=lhs, rhs=rhs, relation="=", holds=lhs == rhs, slack=lhs - rhs)


class StageRecord(BaseModel):
    name: str
    sizes: Dict[str, int] = {}
    checks: List[InequalityCheck] = []
    notes: List[str] = []

    def log_line(self) -> str:
        sizes = ",".join(f"{key}={value}" for key, value in self.sizes.items())
        checks = "; ".join(
            f"{c.name}: {c.lhs:.4g} {c.relation} {c.rhs:.4g} [{'ok' if c.holds else 'VIOLATED'} slack={c.slack:.4g}]"
            for c in self.checks
        )
        return f"stage={self.name} sizes={sizes or '-'} checks={checks or '-'}"


class FailureReport(BaseModel):
    stage: str
    inequality: str
    lhs: Optional[float] = None
    rhs: Optional[float] = None
    slack: Optional[float] = None
    message: str = ""
    details: Dict[str, Any] = {}


class StageFailure(ValueError):
    """Raised by a pipeline stage that could not meet its working inequality."""

    def __init__(self, report: FailureReport):
        super().__init__(f"[{report.stage.upper()}] {report.message or report.inequality}")
        self.report = report


class PipelineResult(BaseModel):
    matching: Optional[RainbowMatching] = None
    failure: Optional[FailureReport] = None
    stages: List[StageRecord] = []
    state: StageState = Field(default_factory=StageState)
    seed: int = 0

    @property
    def success(self) -> bool:
        return self.matching is not None


class AutoResult(BaseModel):
    matching: Optional[RainbowMatching] = None
    method: str
    authoritative: bool = False
    failures: List[FailureReport] = Field(default_factory=list)

    @property
    def found(self) -> bool:
        return self.matching is not None

    def verdict(self) -> str:
        if self.found:
            return f"found ({self.method})"
        return "none (exact)" if self.authoritative else "none found"


class ExpansionVerdict(BaseModel):
    """`holds` is exhaustive when `exact`, otherwise a local-search verdict. Violators are always verified."""
    holds: bool
    exact: bool
    side: str = "A"
    violator: Optional[List[int]] = None
    neighbourhood_size: Optional[int] = None
    bound: Optional[float] = None


class DensityVerdict(BaseModel):
    dense: bool
    exact: bool
    witness: Optional[Subpair] = None
    witness_density: Optional[float] = None
