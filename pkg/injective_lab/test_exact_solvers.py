#!/usr/bin/env python3
"""
Tests for the exact solvers: χ, χ_i, list coloring, chromatic index and validation.
"""

from itertools import product

import pytest
from hypothesis import given, settings, strategies as st

from .errors import PreconditionError
from .exact_solvers import (
    Coloring,
    SolverStatus,
    chromatic_index,
    chromatic_number,
    injective_chromatic_number,
    is_list_coloring,
    list_color_exact,
    validate_injective,
)
from .graph_structure import Graph
from .instance_factory import (
    class2_counterexample,
    complete_graph,
    cycle_graph,
    petersen_graph,
    regular_even_order_insert,
    star_graph,
    subdivide,
)


@st.composite
def small_graphs(draw, max_n=6):
    n = draw(st.integers(min_value=1, max_value=max_n))
    pairs = [(u, v) for u in range(n) for v in range(u + 1, n)]
    chosen = draw(st.lists(st.sampled_from(pairs), unique=True)) if pairs else []
    return Graph.from_edges(n, chosen)


def brute_force_chromatic(g: Graph) -> int:
    for k in range(1, g.n + 1):
        for colors in product(range(k), repeat=g.n):
            if all(colors[u] != colors[v] for u, v in g.edges()):
                return k
    return 0


# ============================================================================
# χ and χ_i
# ============================================================================

@pytest.mark.parametrize("g, expected", [
    (star_graph(3), 3),
    (cycle_graph(4), 2),
    (cycle_graph(5), 3),
    (petersen_graph(), 5),
    (Graph.from_edges(2, [(0, 1)]), 1),
])
def test_injective_chromatic_number(g, expected):
    result = injective_chromatic_number(g)
    assert result.status == SolverStatus.OK
    assert result.value == expected
    assert validate_injective(g, result.coloring).ok
    assert result.coloring.palette_size == expected


def test_injective_chromatic_number_of_subdivided_petersen():
    g = subdivide(petersen_graph(), 3)[0]
    result = injective_chromatic_number(g)
    assert result.ok and result.value == 3


def test_class2_counterexamples_need_delta_plus_one():
    """Subdividing a Class 2 graph once forces χ_i = Δ+1"""
    triangle = class2_counterexample(complete_graph(3))
    assert injective_chromatic_number(triangle).value == 3

    petersen = class2_counterexample(petersen_graph())
    assert petersen.n == 25
    result = injective_chromatic_number(petersen)
    assert result.ok and result.value == 4
    assert result.refuted == (3,)
    print(f"✅ subdivided Petersen: χ_i = 4 after {result.nodes} search nodes")


def test_solver_reports_abort_with_bounds():
    result = injective_chromatic_number(petersen_graph(), budget=1)
    assert result.status == SolverStatus.ABORTED
    assert result.value is None
    assert result.lower_bound >= 3
    assert result.coloring is not None
    assert validate_injective(petersen_graph(), result.coloring).ok


def test_empty_graph():
    assert chromatic_number(Graph(0, ())).value == 0


@pytest.mark.property_based
@settings(max_examples=80, deadline=None)
@given(small_graphs())
def test_chromatic_number_matches_brute_force(g):
    result = chromatic_number(g)
    assert result.value == brute_force_chromatic(g)
    assert all(result.coloring[u] != result.coloring[v] for u, v in g.edges())


# ============================================================================
# List coloring
# ============================================================================

def test_list_color_exact_sat_and_unsat():
    c4 = cycle_graph(4)
    two = {v: frozenset({0, 1}) for v in range(4)}
    result = list_color_exact(c4, two)
    assert result.status == SolverStatus.OK
    assert is_list_coloring(c4, two, result.coloring)

    k3 = complete_graph(3)
    assert list_color_exact(k3, {v: frozenset({0, 1}) for v in range(3)}).status == SolverStatus.UNSAT


def test_list_color_exact_needs_every_list():
    with pytest.raises(PreconditionError):
        list_color_exact(cycle_graph(3), {0: frozenset({0}), 1: frozenset({1})})


@pytest.mark.property_based
@settings(max_examples=100, deadline=None)
@given(small_graphs(), st.data())
def test_list_color_exact_certificates(g, data):
    lists = {v: frozenset(data.draw(st.sets(st.integers(0, 3), min_size=1, max_size=3))) for v in range(g.n)}
    result = list_color_exact(g, lists)
    if result.status == SolverStatus.OK:
        assert is_list_coloring(g, lists, result.coloring)
    else:
        assert result.status == SolverStatus.UNSAT
        for colors in product(*(sorted(lists[v]) for v in range(g.n))):
            assert any(colors[u] == colors[v] for u, v in g.edges())


# ============================================================================
# Chromatic index
# ============================================================================

@pytest.mark.parametrize("g, value, tag", [
    (petersen_graph(), 4, "CLASS2"),
    (cycle_graph(6), 2, "CLASS1"),
    (cycle_graph(5), 3, "CLASS2"),
    (complete_graph(4), 3, "CLASS1"),
])
def test_chromatic_index(g, value, tag):
    result = chromatic_index(g)
    assert (result.value, result.tag) == (value, tag)
    assert sorted(result.coloring) == g.edges()
    for v in range(g.n):
        seen = [c for (a, b), c in result.coloring.items() if v in (a, b)]
        assert len(seen) == len(set(seen))


def test_inserting_a_vertex_into_k4_gives_class2():
    inserted = regular_even_order_insert(complete_graph(4))
    assert inserted.graph.n == 5
    assert inserted.tag == "CLASS2"
    assert chromatic_index(inserted.graph).value == 4


def test_chromatic_index_needs_an_edge():
    with pytest.raises(PreconditionError):
        chromatic_index(Graph(2, ((), ())))


# ============================================================================
# Validation
# ============================================================================

def test_validate_injective_reports_smallest_violation():
    c5 = cycle_graph(5)
    assert validate_injective(c5, Coloring({0: 0, 1: 1, 2: 2, 3: 0, 4: 1})).ok is False
    # violations (1, 3) at 2 and (2, 4) at 3
    check = validate_injective(c5, Coloring({0: 0, 1: 1, 2: 2, 3: 1, 4: 2}))
    assert check.ok is False
    assert check.pair == (1, 3) and check.common_neighbor == 2
    assert check.to_dict() == {"ok": False, "pair": [1, 3], "common_neighbor": 2}
    assert validate_injective(c5, Coloring({0: 0, 1: 0, 2: 1, 3: 1, 4: 2})).ok


def test_adjacent_vertices_may_share_a_color():
    """Injective colorings need not be proper"""
    assert validate_injective(Graph.from_edges(2, [(0, 1)]), Coloring({0: 0, 1: 0})).ok


def test_validate_rejects_partial_coloring():
    with pytest.raises(PreconditionError):
        validate_injective(cycle_graph(3), Coloring({0: 0, 1: 1}))
