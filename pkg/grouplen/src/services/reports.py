"""Report models shared by analyze, verify and construct; serialized as deterministic JSON."""

from __future__ import annotations

import json
from collections import Counter
from enum import Enum
from typing import Any, Dict, Iterable, List, Literal, Optional, Union

from pydantic import BaseModel, Field

from .. import __version__
from ..core.permcore import PermutationGroup, format_cycles
from ..core.radicals import Length, format_length
from ..core.structure import ChiefFactor

LengthValue = Union[int, Literal["infinite"]]


def length_value(length: Length) -> LengthValue:
    return format_length(length)


class Verdict(str, Enum):
    PASS = "PASS"
    FAIL = "FAIL"
    SKIPPED = "SKIPPED"


class SubgroupSummary(BaseModel):
    order: int
    generators: List[str]

    @classmethod
    def of(cls, H: PermutationGroup) -> "SubgroupSummary":
        return cls(order=H.order(), generators=[format_cycles(g) for g in H.generators])


class ChiefFactorSummary(BaseModel):
    order: int
    abelian: bool
    label: str

    @classmethod
    def of(cls, factor: ChiefFactor) -> "ChiefFactorSummary":
        return cls(order=factor.order, abelian=factor.abelian, label=factor.describe())


class FormationSummary(BaseModel):
    formation: str
    residual: Optional[SubgroupSummary] = None
    n_frak: Optional[LengthValue] = None
    n_sigma: Optional[LengthValue] = None
    skipped: Optional[str] = None


class AnalysisReport(BaseModel):
    tool_version: str = __version__
    group: str
    degree: int
    order: int
    sigma: str
    primes: List[int]
    predicates: Dict[str, Any] = Field(default_factory=dict)
    chief_series: Optional[List[ChiefFactorSummary]] = None
    subgroups: Dict[str, SubgroupSummary] = Field(default_factory=dict)
    lengths: Dict[str, LengthValue] = Field(default_factory=dict)
    formations: List[FormationSummary] = Field(default_factory=list)
    skipped: Dict[str, str] = Field(default_factory=dict)

    def to_json(self) -> str:
        return dump_json(self)


class CheckRecord(BaseModel):
    check_id: str
    group: str
    maximal_subgroup: Optional[str] = None
    class_size: Optional[int] = None
    values: Dict[str, Any] = Field(default_factory=dict)
    verdict: Verdict
    cap: Optional[str] = None
    detail: Optional[str] = None
    timing: Optional[float] = None


class VerificationSummary(BaseModel):
    groups: int = 0
    checks: int = 0
    passed: int = 0
    failed: int = 0
    skipped: int = 0
    # length name -> {difference -> number of (G, M) pairs}
    differences: Dict[str, Dict[str, int]] = Field(default_factory=dict)


class VerificationReport(BaseModel):
    tool_version: str = __version__
    config: Dict[str, Any] = Field(default_factory=dict)
    checks: List[CheckRecord] = Field(default_factory=list)
    summary: VerificationSummary = Field(default_factory=VerificationSummary)

    @property
    def failures(self) -> List[CheckRecord]:
        return [c for c in self.checks if c.verdict is Verdict.FAIL]

    def to_json(self) -> str:
        return dump_json(self)


def summarize(checks: Iterable[CheckRecord], groups: int, differences: Dict[str, Counter]) -> VerificationSummary:
    checks = list(checks)
    verdicts = Counter(c.verdict for c in checks)
    return VerificationSummary(
        groups=groups,
        checks=len(checks),
        passed=verdicts[Verdict.PASS],
        failed=verdicts[Verdict.FAIL],
        skipped=verdicts[Verdict.SKIPPED],
        differences={name: {str(d): counts[d] for d in sorted(counts)} for name, counts in sorted(differences.items())},
    )


class ChainFactRecord(BaseModel):
    stage: int
    fact: str
    expected: Any
    observed: Any
    mode: str


class ChainProvenance(BaseModel):
    tool_version: str = __version__
    sigma: str
    p: int
    n: int
    seed: int
    primes: List[int]
    dimensions: List[int]
    group_orders: List[int]
    degree: int
    maximal_order: int
    difference: Optional[int]
    facts: List[ChainFactRecord]
    final_remarks: Optional[Dict[str, Any]] = None

    def to_json(self) -> str:
        return dump_json(self)


def dump_json(model: BaseModel) -> str:
    return json.dumps(model.model_dump(mode="json"), indent=2, sort_keys=True) + "\n"
