"""
JSON documents produced by the command-line harness.

Every document is a pydantic model; rationals are carried as "p/q" strings and
timing fields are called ``elapsed_seconds`` so fingerprints can drop them.
"""

import hashlib
import json
from typing import Any, Dict, List, Optional

from pydantic import BaseModel, ConfigDict, Field

from .discharging import AuditReport

SCHEMA_VERSION = "1.0"
TIMING_FIELDS = frozenset({"elapsed_seconds"})


# =============================================================================
# Data Models
# =============================================================================

class AssertionResult(BaseModel):
    name: str
    status: str
    witness: Optional[Dict[str, Any]] = None
    detail: str = ""


class AuditReportModel(BaseModel):
    audit: str
    mode: str
    ok: bool
    assertions: List[AssertionResult] = []
    ledger: Optional[Dict[str, Any]] = None
    facts: Dict[str, Any] = {}

    @classmethod
    def from_report(cls, report: AuditReport) -> "AuditReportModel":
        return cls.model_validate(report.to_dict())


class ExactSummary(BaseModel):
    status: str
    value: Optional[int] = None
    nodes: int = 0
    lower_bound: int = 0
    refuted: List[int] = []


class ConstructiveSummary(BaseModel):
    palette: int
    colors_used: int
    valid: bool
    steps: int
    kinds: Dict[str, int] = {}
    methods: Dict[str, int] = {}
    fallbacks: int = 0
    supplementary: int = 0


class InstanceResult(BaseModel):
    index: int
    source: str
    n: int
    m: int
    delta: int
    hypotheses: Optional[Dict[str, Any]] = None
    exact: Optional[ExactSummary] = None
    constructive: Optional[ConstructiveSummary] = None
    audit: Optional[AuditReportModel] = None
    agreement: Optional[bool] = None
    falsification: List[str] = []
    certificate: Optional[str] = None
    error: Optional[str] = None
    elapsed_seconds: float = 0.0

    @property
    def aborted(self) -> bool:
        return self.exact is not None and self.exact.status == "ABORTED"


class RunSummary(BaseModel):
    instances: int = 0
    hypotheses_ok: int = 0
    exact_ok: int = 0
    exact_aborted: int = 0
    constructive_ok: int = 0
    audit_ok: int = 0
    agreement_checked: int = 0
    falsification_candidates: int = 0

    @classmethod
    def tally(cls, results: List[InstanceResult]) -> "RunSummary":
        return cls(
            instances=len(results),
            hypotheses_ok=sum(1 for r in results if r.hypotheses and r.hypotheses.get('ok')),
            exact_ok=sum(1 for r in results if r.exact and r.exact.status == "OK"),
            exact_aborted=sum(1 for r in results if r.aborted),
            constructive_ok=sum(1 for r in results if r.constructive and r.constructive.valid),
            audit_ok=sum(1 for r in results if r.audit and r.audit.ok),
            agreement_checked=sum(1 for r in results if r.agreement is not None),
            falsification_candidates=sum(1 for r in results if r.falsification),
        )


class RunReport(BaseModel):
    schema_version: str = SCHEMA_VERSION
    success: bool = True
    command: str
    argv: List[str] = []
    seed: Optional[int] = None
    theorem_class: Optional[str] = Field(default=None, alias="class")
    budget: Optional[int] = None
    analysis: Optional[Dict[str, Any]] = None
    instances: List[InstanceResult] = []
    summary: RunSummary = Field(default_factory=RunSummary)
    falsification_candidates: List[int] = []
    certificates: List[str] = []
    error: Optional[str] = None
    elapsed_seconds: float = 0.0

    model_config = ConfigDict(populate_by_name=True)

    def finalize(self) -> "RunReport":
        """Recompute the summary and candidate list from the instances."""
        self.instances.sort(key=lambda r: r.index)
        self.summary = RunSummary.tally(self.instances)
        self.falsification_candidates = [r.index for r in self.instances if r.falsification]
        self.certificates = [r.certificate for r in self.instances if r.certificate]
        return self

    def to_json(self) -> str:
        return json.dumps(self.model_dump(mode="json", by_alias=True), indent=2, ensure_ascii=False)

    def fingerprint(self) -> str:
        """sha256 of the canonical JSON with every timing field removed."""
        canonical = json.dumps(_strip_timing(self.model_dump(mode="json", by_alias=True)),
                               sort_keys=True, separators=(",", ":"), ensure_ascii=False)
        return hashlib.sha256(canonical.encode("utf-8")).hexdigest()


def _strip_timing(data: Any) -> Any:
    if isinstance(data, dict):
        return {k: _strip_timing(v) for k, v in data.items() if k not in TIMING_FIELDS}
    if isinstance(data, list):
        return [_strip_timing(v) for v in data]
    return data


class CorpusManifestEntry(BaseModel):
    """One manifest line: edge file, rotation file or "-", provenance, class tag."""

    edge_path: str
    embedding_path: Optional[str] = None
    provenance: str
    theorem_class: str

    def to_line(self) -> str:
        return "\t".join((self.edge_path, self.embedding_path or "-", self.provenance, self.theorem_class))

    @classmethod
    def from_line(cls, line: str) -> "CorpusManifestEntry":
        parts = line.rstrip("\n").split("\t")
        if len(parts) != 4:
            raise ValueError(f"manifest line needs 4 tab-separated fields, got {len(parts)}")
        edge_path, embedding_path, provenance, tag = parts
        return cls(
            edge_path=edge_path,
            embedding_path=None if embedding_path == "-" else embedding_path,
            provenance=provenance,
            theorem_class=tag,
        )
