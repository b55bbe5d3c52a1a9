#!/usr/bin/env python3
"""
End-to-end tests of the command-line harness: exit codes and JSON reports.
"""

import json
from pathlib import Path

import pytest

from . import cli
from .cli import EXIT_FAILURE, EXIT_HYPOTHESIS, EXIT_INPUT, EXIT_OK, Job, evaluate, main
from .configurations import TheoremClass
from .graph_structure import format_graph, parse_graph
from .instance_factory import cycle_graph, petersen_graph, subdivide
from .reports import RunReport


@pytest.fixture
def run(tmp_path, capsys):
    """Call main with --output pointed at tmp_path; return (exit code, parsed report)."""
    def _run(*argv):
        code = main(["--output", str(tmp_path), *argv])
        out = capsys.readouterr().out
        return code, json.loads(out)
    return _run


def write_graph(path: Path, g) -> str:
    path.write_text(format_graph(g), encoding="utf-8")
    return str(path)


# ============================================================================
# analyze / color / audit
# ============================================================================

def test_analyze_cycle(run, tmp_path):
    code, report = run("analyze", write_graph(tmp_path / "c6.edges", cycle_graph(6)))
    assert code == EXIT_OK
    assert report['success'] is True
    analysis = report['analysis']
    assert (analysis['delta'], analysis['girth'], analysis['mad']) == (2, 6, "2/1")
    assert analysis['threads']['bare_cycles'] == 1
    assert "unavailable" in analysis['aux_h']


def test_malformed_input_exits_2(run, tmp_path):
    path = tmp_path / "bad.edges"
    path.write_text("3 2\n0 1\n", encoding="utf-8")
    code, report = run("analyze", str(path))
    assert code == EXIT_INPUT
    assert report['success'] is False
    assert report["error"].startswith("line 2:")


def test_missing_file_exits_2(run, tmp_path):
    code, _report = run("analyze", str(tmp_path / "nope.edges"))
    assert code == EXIT_INPUT


def test_hypothesis_rejection_exits_4(run, tmp_path):
    code, report = run("color", write_graph(tmp_path / "petersen.edges", petersen_graph()), "--class", "mad52_d4")
    assert code == EXIT_HYPOTHESIS
    assert report['success'] is False


def test_color_needs_a_mode(run, tmp_path):
    code, _report = run("color", write_graph(tmp_path / "c5.edges", cycle_graph(5)))
    assert code == EXIT_INPUT


def test_exact_coloring_of_petersen(run, tmp_path):
    code, report = run("color", write_graph(tmp_path / "petersen.edges", petersen_graph()), "--exact")
    assert code == EXIT_OK
    assert report['instances'][0]['exact']['value'] == 5


def test_constructive_and_exact_agree(run, tmp_path):
    path = write_graph(tmp_path / "p3.edges", subdivide(petersen_graph(), 3)[0])
    code, report = run("color", path, "--class", "mad4219_d3", "--exact")
    assert code == EXIT_OK
    instance = report['instances'][0]
    assert instance['constructive']['palette'] == 3
    assert instance['constructive']['valid'] is True
    assert instance['exact']['value'] == 3
    assert instance['agreement'] is True




def test_fallback_steps_are_reported_as_falsifications(monkeypatch):
    real = cli.color_constructive

    def off_rule(*args, **kwargs):
        result = real(*args, **kwargs)
        result.trace[0].fallback = "fallback-local"
        return result

    monkeypatch.setattr(cli, "color_constructive", off_rule)
    g = subdivide(petersen_graph(), 3)[0]
    result = evaluate(Job(0, "petersen/3", g, None, TheoremClass.MAD4219_D3, 10_000, exact=False))
    assert result.constructive.valid is True
    assert result.constructive.fallbacks == 1
    assert result.constructive.supplementary == 0
    assert any(r.startswith("prescribed extension failed at levels 0:AUXH_CYCLE:fallback-local")
               for r in result.falsification)
def test_audit_strict_and_survey(run, tmp_path):
    good = write_graph(tmp_path / "p3.edges", subdivide(petersen_graph(), 3)[0])
    code, report = run("audit", good, "--class", "mad4219_d3")
    assert code == EXIT_OK
    assert report['instances'][0]['audit']['ok'] is True

    dense = write_graph(tmp_path / "p2.edges", subdivide(petersen_graph(), 2)[0])
    code, _report = run("audit", dense, "--class", "mad4219_d3")
    assert code == EXIT_HYPOTHESIS
    code, _report = run("audit", dense, "--class", "mad4219_d3", "--survey")
    assert code == EXIT_OK


# ============================================================================
# generate
# ============================================================================

def test_generate_class2_counterexample(run, tmp_path):
    code, report = run("generate", "--construction", "class2_counterexample", "--base", "petersen")
    assert code == EXIT_OK
    g = parse_graph((tmp_path / "class2_counterexample.edges").read_text(encoding="utf-8"))
    assert (g.n, g.max_degree) == (25, 3)
    assert report['analysis']['girth'] == 10


def test_generate_refuses_class1_base(run):
    code, _report = run("generate", "--construction", "class2_counterexample", "--base", "C4")
    assert code == EXIT_INPUT


def test_generate_embedded_subdivision_then_audit(run, tmp_path):
    code, report = run("generate", "--construction", "subdivide", "--base", "octahedron",
                       "--k", "2", "--planar", "--name", "oct2")
    assert code == EXIT_OK
    assert len(report['analysis']['files']) == 2
    code, report = run("audit", str(tmp_path / "oct2.edges"), "--embedding", str(tmp_path / "oct2.rot"),
                       "--class", "planar_g9", "--survey")
    assert code == EXIT_OK
    names = {a['name']: a['status'] for a in report['instances'][0]['audit']['assertions']}
    assert names['euler_sum'] == "PASS"


def test_generate_corpus(run, tmp_path):
    code, report = run("generate", "--construction", "corpus", "--class", "planar_g13",
                       "--count", "2", "--size", "20", "--seed", "3")
    assert code == EXIT_OK
    assert report['analysis']['instances'] == 2
    assert (tmp_path / "manifest.tsv").exists()


# ============================================================================
# verify
# ============================================================================

def test_verify_empty_corpus(run):
    code, report = run("verify", "--class", "mad94_d4", "--count", "0")
    assert code == EXIT_OK
    assert report['summary']['instances'] == 0
    assert report['class'] == "MAD94_D4"


def test_verify_flags_injected_corruption(run):
    code, report = run("verify", "--class", "mad4219_d3", "--count", "1", "--inject-corrupt", "0")
    assert code == EXIT_FAILURE
    assert report['falsification_candidates'] == [0]
    assert report['instances'][0]['constructive']['valid'] is False


def test_verify_is_deterministic(run):
    argv = ("verify", "--class", "mad52_d3", "--count", "3", "--size", "16", "--seed", "5")
    code, first = run(*argv)
    assert code == EXIT_OK, first['falsification_candidates']
    _code, second = run(*argv)
    assert RunReport.model_validate(first).fingerprint() == RunReport.model_validate(second).fingerprint()
    assert first['summary']['falsification_candidates'] == 0
    assert first['summary']['constructive_ok'] == 3


def test_parallel_workers_give_the_same_instances(run):
    argv = ("verify", "--class", "mad94_d4", "--count", "3", "--size", "16", "--seed", "8", "--no-audit")
    _code, serial = run(*argv)
    _code, parallel = run("--jobs", "2", *argv)

    def strip(report):
        return [{k: v for k, v in r.items() if k != "elapsed_seconds"} for r in report['instances']]

    assert strip(serial) == strip(parallel)


@pytest.mark.acceptance
@pytest.mark.parametrize("cls", ["mad52_d4", "mad52_d3", "mad94_d4", "mad4219_d3", "planar_g9", "planar_g13"])
def test_campaign(run, cls):
    """Full corpus per class; no falsification candidates expected"""
    code, report = run("verify", "--class", cls, "--count", "200", "--size", "40", "--seed", "1")
    assert code == EXIT_OK, report['falsification_candidates']
    print(f"✅ {cls}: {report['summary']}")
