#!/usr/bin/env python3
"""
Tests for the proof-driven colorer and trace replay.
"""

import pytest

from .configurations import Kind, Reduction, TheoremClass, find_reduction, occurrences
from .errors import HypothesisError, TheoremViolation
from .exact_solvers import Coloring, SolverStatus, list_color_exact, validate_injective
from .graph_structure import neighboring_graph
from .instance_factory import (
    build_corpus,
    cycle_graph,
    octahedron_graph,
    path_graph,
    petersen_graph,
    plane_embedding,
    subdivide,
    wheel_graph,
)
from .reduction_engine import TraceStep, _extend, color_constructive, replay_trace
from .test_configurations import (
    chorded_cube_subdivided,
    embedded_twins,
    k4_fed_by_two_threads,
    nine_face_with_pendants,
    petersen_with_bare_spokes,
    rc5_graph,
    rc6_graph,
)


def embedded_octahedron(k: int):
    octahedron = octahedron_graph()
    return subdivide(octahedron, k, plane_embedding(octahedron))


def assert_valid(g, result):
    assert validate_injective(g, result.coloring).ok
    assert result.colors_used <= result.palette
    assert all(0 <= c < result.palette for c in result.coloring.assignment.values())


def test_subdivided_petersen_gets_three_colors():
    g = subdivide(petersen_graph(), 3)[0]
    result = color_constructive(g, TheoremClass.MAD4219_D3)
    assert result.palette == 3
    assert_valid(g, result)
    assert result.trace[0].reduction.kind == Kind.AUXH_CYCLE
    print(f"✅ Petersen x3: {result.to_dict()}")


def test_mad94_class_on_subdivided_octahedron():
    g = subdivide(octahedron_graph(), 4)[0]
    result = color_constructive(g, TheoremClass.MAD94_D4)
    assert result.palette == 4
    assert_valid(g, result)
    assert result.kind_counts().get("FOUR_THREAD", 0) >= 1


def test_mad52_class_on_subdivided_octahedron():
    g = subdivide(octahedron_graph(), 2)[0]
    result = color_constructive(g, TheoremClass.MAD52_D4)
    assert result.palette == 5
    assert_valid(g, result)


@pytest.mark.parametrize("cls, k, palette", [
    (TheoremClass.PLANAR_G9, 2, 5),
    (TheoremClass.PLANAR_G13, 4, 4),
])
def test_planar_classes(cls, k, palette):
    g, emb = embedded_octahedron(k)
    result = color_constructive(g, cls, emb)
    assert result.palette == palette
    assert_valid(g, result)


def test_cycle_of_length_divisible_by_four_uses_two_colors():
    g = cycle_graph(8)
    result = color_constructive(g, TheoremClass.MAD52_D4, enforce_hypotheses=False)
    assert result.palette == 3
    assert result.colors_used == 2
    assert [step.reduction.kind for step in result.trace] == [Kind.BARE_CYCLE]
    assert result.trace[0].method == "cycle-pattern"


def test_path_with_palette_override():
    g = path_graph(3)
    result = color_constructive(g, TheoremClass.MAD52_D4, palette=2, enforce_hypotheses=False)
    assert [step.reduction.kind for step in result.trace] == [Kind.ONE_VERTEX]
    assert_valid(g, result)
    assert result.to_dict()['steps'] == 1


def test_hypotheses_enforced_by_default():
    with pytest.raises(HypothesisError):
        color_constructive(petersen_graph(), TheoremClass.MAD52_D4)


def test_too_small_palette_is_a_violation():
    """C5 squared is C5 again; two colors cannot work"""
    with pytest.raises(TheoremViolation) as exc:
        color_constructive(cycle_graph(5), TheoremClass.MAD52_D4, palette=2, enforce_hypotheses=False)
    assert exc.value.class_tag == "MAD52_D4"
    assert exc.value.to_dict()['edge_list'].startswith("5 5\n")


def test_replay_verifies_every_step():
    g = subdivide(petersen_graph(), 3)[0]
    trace = replay_trace(g, TheoremClass.MAD4219_D3)
    assert trace
    assert all(step.verified for step in trace)
    assert all(step.mad_after is not None for step in trace)
    assert not any("mad grew" in d for step in trace for d in step.diagnostics)
    assert trace[0].to_dict()['verified'] is True


def test_trace_reductions_are_reported_in_input_labels():
    g = subdivide(octahedron_graph(), 4)[0]
    result = color_constructive(g, TheoremClass.MAD94_D4)
    for step in result.trace:
        labels = step.to_dict()['reduction']['deletion_set']
        assert all(0 <= v < g.n for v in labels)


@pytest.mark.parametrize("cls", [
    TheoremClass.MAD52_D4,
    TheoremClass.MAD52_D3,
    TheoremClass.MAD94_D4,
    TheoremClass.MAD4219_D3,
])
def test_generated_instances_are_colored(cls):
    corpus = build_corpus(cls, seed=7, count=2, size=20, include_fixed=False)
    for inst in corpus.instances:
        result = color_constructive(inst.graph, cls, inst.embedding)
        assert_valid(inst.graph, result)


# ============================================================================
# Extension of single configurations
# ============================================================================

def extend_once(g, reduction: Reduction, palette: int, emb=None, colored=None):
    """Color g minus the deletion set (exactly, unless given), then extend through ``reduction``."""
    if colored is None:
        keep = [v for v in range(g.n) if v not in reduction.deletion_set]
        sub, origin = g.subgraph(keep)
        colored = {}
        if sub.n:
            below = list_color_exact(neighboring_graph(sub), {v: frozenset(range(palette)) for v in range(sub.n)})
            assert below.status == SolverStatus.OK
            colored = {origin[i]: c for i, c in below.coloring.assignment.items()}
    step = TraceStep(0, g, emb, reduction, tuple(range(g.n)), "single")
    colors = _extend(step, dict(colored), palette, 10_000)
    assert validate_injective(g, Coloring(colors)).ok
    assert all(0 <= c < palette for c in colors.values())
    return step, colors


def thread_of_p6(order):
    return Reduction(Kind.TWO_THREAD, frozenset({1, 3}), order, {'u': 0, 'v': 4, 'thread': (1, 3)})


def test_greedy_extension_in_the_given_order():
    step, colors = extend_once(path_graph(6), thread_of_p6((3, 1)), 2, colored={0: 0, 2: 1, 4: 0, 5: 1})
    assert step.method == "greedy"
    assert step.fallback is None
    assert colors == {0: 0, 1: 1, 2: 1, 3: 0, 4: 0, 5: 1}


def test_dead_end_falls_back_and_marks_the_step():
    step, _ = extend_once(path_graph(6), thread_of_p6((1, 3)), 2, colored={0: 0, 2: 1, 4: 0, 5: 1})
    assert step.method == "exact"
    assert step.fallback == "fallback-local"
    assert "greedy dead end at vertex 3" in step.diagnostics
    assert step.to_dict()['fallback'] == "fallback-local"


def _l6():
    g = chorded_cube_subdivided()
    return g, None, find_reduction(g, TheoremClass.MAD52_D4), 5


def _three_thread():
    g = subdivide(wheel_graph(4), 3)[0]
    return g, None, find_reduction(g, TheoremClass.MAD94_D4), 4


def _face_window():
    g, emb = embedded_twins(1)
    return g, emb, find_reduction(g, TheoremClass.PLANAR_G9, emb), 5


def _nine_face():
    g, emb = nine_face_with_pendants()
    reduction = next(r for r in occurrences(g, [Kind.H5A_CASE2D], emb) if r.anchors['v1'] == 0)
    return g, emb, reduction, 6


def _rc4():
    g, emb = embedded_twins(2)
    return g, emb, find_reduction(g, TheoremClass.PLANAR_G13, emb), 4


def _rc5():
    g = rc5_graph()
    return g, None, occurrences(g, [Kind.RC5])[0], 4


def _rc6():
    g = rc6_graph()
    return g, None, occurrences(g, [Kind.RC6])[0], 4


@pytest.mark.parametrize("build, kind", [
    (_l6, Kind.L6_CONFIG),
    (_three_thread, Kind.THREE_THREAD_3END),
    (_face_window, Kind.H5A_CONFIG),
    (_nine_face, Kind.H5A_CASE2D),
    (_rc4, Kind.RC4),
    (_rc5, Kind.RC5),
    (_rc6, Kind.RC6),
])
def test_local_configurations_extend_greedily(build, kind):
    g, emb, reduction, palette = build()
    assert reduction.kind == kind
    step, _ = extend_once(g, reduction, palette, emb)
    assert step.method == "greedy"
    assert step.fallback is None
    print(f"✅ {kind.value}: {len(reduction.deletion_set)} deleted, {palette} colors")


def test_even_cycles_case_is_colored_by_degree_lists():
    g = petersen_with_bare_spokes()
    result = color_constructive(g, TheoremClass.MAD52_D3)
    assert [step.reduction.kind for step in result.trace] == [Kind.G23_EVEN_CYCLES]
    assert result.trace[0].remainder == ()
    assert result.trace[0].method == "theorem-B"
    assert result.fallbacks == 0
    assert_valid(g, result)


def test_supplementary_steps_are_counted():
    g = k4_fed_by_two_threads()
    result = color_constructive(g, TheoremClass.PLANAR_G13, enforce_hypotheses=False)
    assert result.palette == 4
    assert result.trace[0].reduction.kind == Kind.RC7
    assert result.supplementary == 1
    assert result.fallbacks == 0
    assert result.to_dict()['supplementary'] == 1
    assert_valid(g, result)
