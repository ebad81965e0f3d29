from enum import Enum
from typing import Optional

from pydantic import BaseModel, ConfigDict, Field

REPORT_SCHEMA_VERSION = 1


class CheckKind(str, Enum):
    INEQUALITY = 'inequality'
    IDENTITY = 'identity'
    STRICT = 'strict'
    REPORT = 'report'


class VerificationReport(BaseModel):
    """One evaluated check. slack = rhs - lhs."""
    model_config = ConfigDict(frozen=True, populate_by_name=True)

    check: str
    kind: CheckKind
    lhs: float
    rhs: float
    slack: float
    tolerance: float
    passed: bool = Field(alias='pass')
    seed: Optional[int] = None
    instance: Optional[int] = None
    runtime: Optional[float] = None
    detail: Optional[str] = None
    extra: dict[str, float | int | str | bool] = Field(default_factory=dict)

    @staticmethod
    def evaluate(check: str, lhs: float, rhs: float, tolerance: float,
                 kind: CheckKind = CheckKind.INEQUALITY, **fields) -> 'VerificationReport':
        slack = float(rhs) - float(lhs)
        if kind is CheckKind.INEQUALITY:
            passed = slack >= -tolerance
        elif kind is CheckKind.IDENTITY:
            passed = abs(slack) <= tolerance
        elif kind is CheckKind.STRICT:
            passed = slack > 0.0
        else:
            passed = True
        return VerificationReport(check=check, kind=kind, lhs=float(lhs), rhs=float(rhs), slack=slack,
                                  tolerance=float(tolerance), passed=passed, **fields)

    @staticmethod
    def failure(check: str, error: Exception, **fields) -> 'VerificationReport':
        """Report for a check that raised instead of producing numbers."""
        return VerificationReport(check=check, kind=CheckKind.REPORT, lhs=float('nan'), rhs=float('nan'),
                                  slack=float('nan'), tolerance=0.0, passed=False,
                                  detail=f"{type(error).__name__}: {error}", **fields)

    def to_json(self, include_timing: bool = False) -> str:
        exclude = None if include_timing else {'runtime'}
        return self.model_dump_json(by_alias=True, exclude=exclude, exclude_none=True)


class PartitionReport(BaseModel):
    model_config = ConfigDict(frozen=True)

    valid: bool
    violations: list[str]
    k: int
    l: int
    vertex_count: int
    min_degree: Optional[int] = None
    max_degree: Optional[int] = None
    area_error: float = 0.0
    min_hole_gap: Optional[float] = None
