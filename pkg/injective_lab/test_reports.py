#!/usr/bin/env python3
"""
Tests for the JSON report models.
"""

import json

import pytest

from .configurations import TheoremClass
from .discharging import audit_for_class
from .instance_factory import petersen_graph
from .reports import (
    SCHEMA_VERSION,
    AuditReportModel,
    CorpusManifestEntry,
    ExactSummary,
    InstanceResult,
    RunReport,
)


def make_instance(index: int, **kwargs) -> InstanceResult:
    return InstanceResult(index=index, source=f"inst-{index}", n=10, m=15, delta=3, **kwargs)


def test_run_report_uses_class_alias():
    report = RunReport(command="verify", theorem_class="MAD52_D4")
    data = json.loads(report.to_json())
    assert data['class'] == "MAD52_D4"
    assert data['schema_version'] == SCHEMA_VERSION
    assert RunReport.model_validate(data).theorem_class == "MAD52_D4"


def test_finalize_sorts_and_tallies():
    report = RunReport(command="verify")
    report.instances = [
        make_instance(2, exact=ExactSummary(status="ABORTED", nodes=10)),
        make_instance(0, exact=ExactSummary(status="OK", value=3), falsification=["exact χ_i = 5 exceeds 4"]),
        make_instance(1, certificate="runs/violation.json", falsification=["theorem violation"]),
    ]
    report.finalize()
    assert [r.index for r in report.instances] == [0, 1, 2]
    assert report.falsification_candidates == [0, 1]
    assert report.certificates == ["runs/violation.json"]
    assert (report.summary.instances, report.summary.exact_ok, report.summary.exact_aborted) == (3, 1, 1)
    assert report.instances[2].aborted


def test_fingerprint_ignores_timing():
    a = RunReport(command="analyze", elapsed_seconds=1.5, instances=[make_instance(0, elapsed_seconds=0.2)])
    b = RunReport(command="analyze", elapsed_seconds=9.0, instances=[make_instance(0, elapsed_seconds=7.1)])
    assert a.fingerprint() == b.fingerprint()
    c = RunReport(command="analyze", instances=[make_instance(1)])
    assert a.fingerprint() != c.fingerprint()


def test_audit_report_model_from_report():
    report = audit_for_class(petersen_graph(), TheoremClass.MAD52_D3)
    model = AuditReportModel.from_report(report)
    assert model.ok
    assert model.assertions[0].status == "SKIP"
    json.dumps(model.model_dump(mode="json"))


def test_manifest_lines():
    entry = CorpusManifestEntry(edge_path="0001.edges", provenance="fixed:petersen/subdivide=3",
                                theorem_class="MAD4219_D3")
    assert entry.to_line() == "0001.edges\t-\tfixed:petersen/subdivide=3\tMAD4219_D3"
    assert CorpusManifestEntry.from_line(entry.to_line() + "\n") == entry
    with pytest.raises(ValueError):
        CorpusManifestEntry.from_line("0001.edges\t-\tMAD4219_D3")
