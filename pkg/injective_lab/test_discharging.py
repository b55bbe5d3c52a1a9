#!/usr/bin/env python3
"""
Tests for the discharging audits.
"""

import json
from fractions import Fraction

import pytest

from .configurations import Kind, Scene, TheoremClass
from .discharging import (
    AuditMode,
    AuditReport,
    Role,
    Status,
    _preconditions,
    audit_for_class,
    audit_lemma6,
    audit_lemma8,
    audit_lemma9,
    audit_thm5a,
    audit_thm5b,
    lemma8_degree_bound,
    vertex_roles,
)
from .errors import AuditFailure, PreconditionError
from .instance_factory import complete_graph, octahedron_graph, petersen_graph, plane_embedding, subdivide
from .test_configurations import ring_with_trees


def embedded_octahedron(k: int):
    octahedron = octahedron_graph()
    return subdivide(octahedron, k, plane_embedding(octahedron))


def k4_with_two_subdivided_edges():
    """Vertex 0 has degree 3 and two 2-neighbors"""
    return subdivide(complete_graph(4), {(0, 1): 1, (0, 2): 1})[0]


def ten_face_between_hubs():
    """10-cycle whose 3-vertices each carry a 4-vertex with three leaves"""
    hang = {j: (10 + j // 2,) for j in range(0, 10, 2)}
    trees = [(10 + i, 15 + 3 * i + k) for i in range(5) for k in range(3)]
    return ring_with_trees(10, hang, trees)


def thirteen_face_with_type1_vertex():
    """
    13-cycle 0..12 with 4-vertices at 0, 4, 8 and a 3-vertex at 11.

    Vertex 11 sends a 2-thread to 8 and 1-threads to 0 and (through 13) to the
    4-vertex 14, so it is a type-1 vertex whose weak angle faces outward.
    """
    hang = {0: (15, 16), 4: (17, 18), 8: (19, 20), 11: (13,)}
    return ring_with_trees(13, hang, [(13, 14), (14, 21), (14, 22), (14, 23)])


def face_of_length(emb, length: int) -> int:
    return next(i for i, walk in enumerate(emb.faces) if len(walk) == length)


# ============================================================================
# Vertex-charge audits
# ============================================================================

def test_lemma6_on_four_regular_graph():
    report = audit_lemma6(octahedron_graph())
    assert report.ok
    assert report.status_of("final_at_least_5/2") == Status.PASS
    assert report.ledger.summary()['min_vertex_final'] == "4/1"
    assert report.ledger.transfers == []


def test_lemma6_on_subdivided_octahedron():
    """4-vertices send 1/3 to each of four 2-neighbors; everybody ends at 8/3"""
    g = subdivide(octahedron_graph(), 1)[0]
    report = audit_lemma6(g)
    assert report.ok
    assert report.ledger.charge("v0") == Fraction(8, 3)
    assert report.ledger.charge("v6") == Fraction(8, 3)
    assert report.status_of("four_plus_at_least_8/3") == Status.PASS


def test_lemma6_survey_records_violated_preconditions():
    g = k4_with_two_subdivided_edges()
    report = audit_lemma6(g, AuditMode.SURVEY)
    assert report.ok
    assert report.status_of("pre:delta_at_least_4") == Status.SKIP
    assert report.status_of("final_at_least_5/2") == Status.SKIP
    assert report.status_of("conservation") == Status.PASS
    assert report.ledger.charge("v0") == Fraction(5, 2)


def test_lemma6_strict_rejects_with_witness():
    with pytest.raises(PreconditionError) as exc:
        audit_lemma6(k4_with_two_subdivided_edges())
    assert exc.value.witness == {'delta': 3}


def test_lemma9_spot_values():
    """Octahedron with 3-threads: 4-vertices end at 5/2, thread vertices at 9/4"""
    g = subdivide(octahedron_graph(), 3)[0]
    report = audit_lemma9(g)
    assert report.ok
    assert report.ledger.charge("v0") == Fraction(5, 2)
    assert report.ledger.charge("v6") == Fraction(9, 4)
    assert report.ledger.summary()['moved_by_rule'] == {'R1': "9/1"}


def test_lemma9_survey_skips_reducible_configurations():
    g = subdivide(octahedron_graph(), 4)[0]
    with pytest.raises(PreconditionError):
        audit_lemma9(g)
    report = audit_lemma9(g, AuditMode.SURVEY)
    assert report.ok
    assert report.status_of("pre:no_four_thread") == Status.SKIP
    assert report.facts['clean_vertices'] == 0


# ============================================================================
# Counting chain for the cubic class
# ============================================================================

def test_lemma8_degree_bound():
    assert lemma8_degree_bound(9) == 3
    assert lemma8_degree_bound(6) == 1
    assert lemma8_degree_bound(4) == Fraction(-1, 3)


def test_lemma8_on_subdivided_petersen():
    report = audit_lemma8(subdivide(petersen_graph(), 3)[0])
    assert report.ok
    assert report.facts['ratio'] == "9/1"
    assert (report.facts['V2'], report.facts['V3']) == (45, 10)
    assert report.facts['a'][9] == 10
    for name in ("ratio_above_15/2", "table", "hat_average_degree_above_2", "cycle_with_degree_3"):
        assert report.status_of(name) == Status.PASS
    assert report.facts['strict_reading']['cycle_with_degree_3'] is True
    json.dumps(report.to_dict())


def test_lemma8_strict_rejects_dense_input():
    """Petersen with 2-threads has mad 9/4, above 42/19"""
    with pytest.raises(PreconditionError):
        audit_lemma8(subdivide(petersen_graph(), 2)[0])
    report = audit_lemma8(subdivide(petersen_graph(), 2)[0], AuditMode.SURVEY)
    assert report.status_of("pre:mad_below_42/19") == Status.SKIP
    assert report.status_of("ratio_above_15/2") == Status.SKIP


# ============================================================================
# Face-charge audits
# ============================================================================

def test_thm5a_universal_identities():
    g, emb = embedded_octahedron(2)
    with pytest.raises(PreconditionError):
        audit_thm5a(g, emb)
    report = audit_thm5a(g, emb, AuditMode.SURVEY)
    assert report.ok
    for name in ("euler_sum", "conservation", "face_formula"):
        assert report.status_of(name) == Status.PASS
    assert report.ledger.summary()['total_initial'] == "-8/1"
    assert report.ledger.face_stats["f0"].t2 == 6


def test_thm5b_universal_identities():
    g, emb = embedded_octahedron(4)
    report = audit_thm5b(g, emb, AuditMode.SURVEY)
    assert report.ok
    for name in ("euler_sum", "conservation", "phase1_face_formula", "phase2_face_formula",
                 "phase2_vertex_neutral", "weak_on_one_face"):
        assert report.status_of(name) == Status.PASS
    assert (report.facts['type1'], report.facts['type2']) == (0, 0)




def test_thm5a_ten_face_is_refilled_across_its_two_vertices():
    """The 10-face ends phase one at -2/3 and receives 1/3 across each of its five 2-vertices"""
    g, emb = ten_face_between_hubs()
    report = audit_thm5a(g, emb, AuditMode.SURVEY)
    fid = f"f{face_of_length(emb, 10)}"
    assert report.ledger.element_charges[fid].after_phase1 == Fraction(-2, 3)
    assert report.ledger.charge(fid) == 1
    received = [t for t in report.ledger.transfers if t.rule == "R2" and t.target == fid]
    assert len(received) == 5
    assert all(t.amount == Fraction(1, 3) for t in received)
    assert report.status_of("face_formula") == Status.PASS


def test_thm5b_bad_thirteen_face():
    g, emb = thirteen_face_with_type1_vertex()
    assert g.max_degree == 4
    report = audit_thm5b(g, emb, AuditMode.SURVEY)
    fid = f"f{face_of_length(emb, 13)}"
    assert (report.facts['type1'], report.facts['type2']) == (1, 0)
    assert report.ledger.element_charges[fid].after_phase1 == Fraction(-1, 3)
    assert report.facts['bad_faces'] == {fid: 'b'}
    assert report.status_of("claim1_bad_faces") == Status.PASS
    assert report.ledger.charge(fid) == 0
    assert report.ledger.face_stats[fid].count(Role.STRONG) == 1
    assert report.status_of("weak_on_one_face") == Status.PASS
    weak = [(i, p) for (i, p), role in vertex_roles(g, emb).items() if role == Role.WEAK]
    assert [emb.faces[i][p] for i, p in weak] == [11]
    assert weak[0][0] != face_of_length(emb, 13)
    print(f"✅ bad face {fid}: {report.ledger.face_stats[fid].to_dict()}")


def test_supplementary_configuration_does_not_stop_a_strict_audit():
    scene = Scene(subdivide(complete_graph(4), 2)[0])
    report = AuditReport("thm5b", AuditMode.STRICT)
    assert _preconditions(report, scene, [], [Kind.RC7])
    assert report.status_of("pre:no_rc7") == Status.SKIP
    assert report.facts['supplementary'] == {'RC7': 4}

    with pytest.raises(PreconditionError):
        _preconditions(AuditReport("thm5b", AuditMode.STRICT), scene, [], [Kind.RC4])
def test_planar_audit_needs_matching_embedding():
    g, _emb = embedded_octahedron(2)
    with pytest.raises(PreconditionError):
        audit_thm5a(g, plane_embedding(octahedron_graph()), AuditMode.SURVEY)
    with pytest.raises(PreconditionError):
        audit_for_class(g, TheoremClass.PLANAR_G9)


# ============================================================================
# Dispatch and reports
# ============================================================================

def test_cycle_argument_class_has_no_discharging():
    report = audit_for_class(petersen_graph(), TheoremClass.MAD52_D3)
    assert report.ok
    assert report.status_of("discharging") == Status.SKIP


def test_raise_on_failure():
    report = AuditReport("demo", AuditMode.SURVEY)
    report.record("holds", True)
    assert report.raise_on_failure() is report
    report.record("breaks", False, {'vertex': 3})
    with pytest.raises(AuditFailure) as exc:
        report.raise_on_failure()
    assert exc.value.report is report
    assert report.to_dict()['assertions'][1] == {'name': 'breaks', 'status': 'FAIL', 'witness': {'vertex': 3}}
