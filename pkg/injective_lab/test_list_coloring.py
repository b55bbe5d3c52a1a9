#!/usr/bin/env python3
"""
Tests for constructive list coloring (degree lists, Gallai trees), checked
against the exact list-coloring oracle.
"""

import random

import networkx as nx
import pytest

from .errors import PreconditionError
from .exact_solvers import SolverStatus, is_list_coloring, list_color_exact
from .graph_structure import Graph
from .instance_factory import complete_graph, cycle_graph, path_graph, petersen_graph
from .list_coloring import (
    blocks,
    color_degree_lists,
    color_theorem_A_nonuniform,
    color_theorem_A_surplus,
    is_degree_choosable,
)


def bowtie() -> Graph:
    return Graph.from_edges(5, [(0, 1), (0, 2), (1, 2), (0, 3), (0, 4), (3, 4)])


def diamond() -> Graph:
    return Graph.from_edges(4, [(0, 1), (0, 2), (1, 2), (1, 3), (2, 3)])


def proper_from_lists(g, lists, result) -> bool:
    coloring = result.coloring.assignment
    G = g.to_networkx() if isinstance(g, Graph) else g
    return (
        all(coloring[v] in lists[v] for v in G.nodes())
        and all(coloring[a] != coloring[b] for a, b in G.edges())
    )


# ============================================================================
# Blocks and degree-choosability
# ============================================================================

def test_blocks_of_bowtie():
    decomposition = blocks(bowtie())
    assert sorted(sorted(b) for b in decomposition.blocks) == [[0, 1, 2], [0, 3, 4]]
    assert decomposition.cut_vertices == frozenset({0})
    assert len(decomposition.block_tree) == 2


def test_bridges_are_blocks():
    decomposition = blocks(path_graph(3))
    assert len(decomposition.blocks) == 2
    assert all(decomposition.is_bridge(i) for i in range(2))


@pytest.mark.parametrize("g, choosable", [
    (complete_graph(4), False),
    (cycle_graph(5), False),
    (bowtie(), False),
    (path_graph(4), False),
    (cycle_graph(4), True),
    (diamond(), True),
    (petersen_graph(), True),
])
def test_is_degree_choosable(g, choosable):
    verdict = is_degree_choosable(g)
    assert bool(verdict) is choosable
    if choosable:
        assert verdict.witness_block is not None
    else:
        assert verdict.witness_block is None


def test_degree_choosability_needs_connected_graph():
    with pytest.raises(PreconditionError):
        is_degree_choosable(Graph(2, ((), ())))


# ============================================================================
# Theorem A
# ============================================================================

def test_surplus_ordering():
    """Colors inward toward the root; every non-root vertex sees fewer colored neighbors than its list"""
    g = path_graph(4)
    lists = {0: frozenset({0}), 1: frozenset({0, 1}), 2: frozenset({0, 1}), 3: frozenset({5, 6})}
    result = color_theorem_A_surplus(g, lists, 3)
    assert result.order[-1] == 3
    assert proper_from_lists(g, lists, result)
    for v in range(3):
        assert result.inspected[v] < len(lists[v])
    assert result.method == "surplus"


def test_surplus_needs_a_spare_color_at_the_root():
    lists = {v: frozenset({0, 1}) for v in range(4)}
    with pytest.raises(PreconditionError):
        color_theorem_A_surplus(cycle_graph(4), lists, 0)


def test_surplus_rejects_short_lists():
    with pytest.raises(PreconditionError):
        color_theorem_A_surplus(cycle_graph(4), {0: frozenset({0, 1, 2}), 1: frozenset({0}),
                                                 2: frozenset({0, 1}), 3: frozenset({0, 1})}, 0)


def test_nonuniform_lists_on_odd_cycle():
    """C5 with one list differing is colorable though C5 is a Gallai tree"""
    g = cycle_graph(5)
    lists = {v: frozenset({0, 1}) for v in range(5)}
    lists[0] = frozenset({1, 2})
    result = color_theorem_A_nonuniform(g, lists)
    assert proper_from_lists(g, lists, result)
    assert result.method == "nonuniform"
    assert result.order[0] == 0 and result.coloring[0] == 2


def test_nonuniform_preconditions():
    with pytest.raises(PreconditionError):
        color_theorem_A_nonuniform(cycle_graph(5), {v: frozenset({0, 1}) for v in range(5)})
    with pytest.raises(PreconditionError):
        color_theorem_A_nonuniform(path_graph(3), {0: frozenset({0}), 1: frozenset({0, 1}), 2: frozenset({1})})


# ============================================================================
# Theorem B
# ============================================================================

def test_even_cycle_alternates():
    g = cycle_graph(6)
    lists = {v: frozenset({3, 7}) for v in range(6)}
    result = color_degree_lists(g, lists)
    assert result.method == "degree-lists/even-cycle"
    assert proper_from_lists(g, lists, result)
    assert not result.fallback


def test_identical_lists_on_petersen_use_a_nonadjacent_pair():
    g = petersen_graph()
    lists = {v: frozenset({0, 1, 2}) for v in range(10)}
    result = color_degree_lists(g, lists)
    assert result.method == "degree-lists/nonadjacent-pair"
    assert proper_from_lists(g, lists, result)
    x, y = result.order[:2]
    assert not g.has_edge(x, y) and result.coloring[x] == result.coloring[y]


def test_pendant_parts_are_colored_before_the_block():
    """A C4 with a path hanging off it"""
    g = Graph.from_edges(6, [(0, 1), (1, 2), (2, 3), (3, 0), (0, 4), (4, 5)])
    lists = {0: frozenset({0, 1, 2}), 1: frozenset({0, 1}), 2: frozenset({0, 1}), 3: frozenset({0, 1}),
             4: frozenset({0, 2}), 5: frozenset({2})}
    result = color_degree_lists(g, lists)
    assert proper_from_lists(g, lists, result)
    assert result.order.index(4) < result.order.index(0)


def test_gallai_tree_is_rejected():
    with pytest.raises(PreconditionError):
        color_degree_lists(complete_graph(4), {v: frozenset({0, 1, 2}) for v in range(4)})


def test_accepts_networkx_graphs_with_any_labels():
    G = nx.cycle_graph(["a", "b", "c", "d"])
    lists = {v: frozenset({0, 1}) for v in G}
    result = color_degree_lists(G, lists)
    assert proper_from_lists(G, lists, result)


@pytest.mark.property_based
def test_constructive_colorings_agree_with_oracle():
    """Random connected non-Gallai graphs on at most 7 vertices with random degree-sized lists"""
    rng = random.Random(20240601)
    trials = fallbacks = 0
    while trials < 1000:
        n = rng.randint(3, 7)
        h = nx.gnp_random_graph(n, rng.uniform(0.3, 0.8), seed=rng.randrange(2 ** 32))
        if not nx.is_connected(h):
            continue
        g = Graph.from_networkx(h)
        if not is_degree_choosable(g):
            continue
        lists = {v: frozenset(rng.sample(range(7), g.degree(v))) for v in range(g.n)}
        result = color_degree_lists(g, lists)
        assert is_list_coloring(g, lists, result.coloring)
        assert list_color_exact(g, lists).status == SolverStatus.OK
        fallbacks += result.fallback
        trials += 1
    print(f"✅ {trials} trials, {fallbacks} oracle fallbacks")
