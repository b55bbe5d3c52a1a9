"""
Constructive list coloring

Realizes the degree-list lemma (surplus vertex / non-identical lists on a
2-connected graph) and the Gallai-tree characterization of degree-choosable
graphs. Every operation accepts either a ``Graph`` or a ``networkx.Graph`` with
arbitrary node labels, so the reduction engine can hand over pieces of G^(2)
without relabeling.
"""

import logging
from dataclasses import dataclass, field
from typing import Dict, FrozenSet, Hashable, List, Mapping, Optional, Sequence, Tuple, Union

import networkx as nx

from .errors import PreconditionError, SolverAborted
from .exact_solvers import Coloring, SolverStatus, list_color_exact
from .graph_structure import Graph

logger = logging.getLogger(__name__)

GraphLike = Union[Graph, nx.Graph]
Lists = Mapping[Hashable, FrozenSet[int]]

ORACLE_BUDGET = 1_000_000


@dataclass(frozen=True)
class BlockDecomposition:
    """Blocks (2-connected pieces and bridges), cut vertices, and the block-cut incidences."""

    blocks: Tuple[FrozenSet[Hashable], ...]
    block_edges: Tuple[Tuple[Tuple[Hashable, Hashable], ...], ...]
    cut_vertices: FrozenSet[Hashable]
    block_tree: Tuple[Tuple[int, Hashable], ...]

    def is_bridge(self, index: int) -> bool:
        return len(self.block_edges[index]) == 1


@dataclass(frozen=True)
class ListColoringResult:
    """
    A list coloring together with how it was produced.

    ``inspected[v]`` counts the already-colored neighbors of v at the moment v
    was colored; ``fallback`` marks an INTERNAL-FALLBACK to the exact oracle.
    """

    coloring: Coloring
    order: Tuple[Hashable, ...]
    inspected: Mapping[Hashable, int]
    method: str
    fallback: bool = False
    notes: Tuple[str, ...] = field(default_factory=tuple)


@dataclass(frozen=True)
class DegreeChoosability:
    choosable: bool
    witness_block: Optional[FrozenSet[Hashable]] = None

    def __bool__(self) -> bool:
        return self.choosable


def _as_nx(g: GraphLike) -> nx.Graph:
    return g.to_networkx() if isinstance(g, Graph) else g


def _edge_key(a: Hashable, b: Hashable) -> Tuple[Hashable, Hashable]:
    return (a, b) if a <= b else (b, a)


def _require_connected(G: nx.Graph) -> None:
    if G.number_of_nodes() == 0 or not nx.is_connected(G):
        raise PreconditionError("graph must be connected and nonempty")


def _require_degree_lists(G: nx.Graph, lists: Lists) -> None:
    for v in sorted(G.nodes()):
        if v not in lists:
            raise PreconditionError(f"vertex {v} has no list", {'vertex': v})
        if len(lists[v]) < G.degree(v):
            raise PreconditionError(
                f"|L({v})| = {len(lists[v])} < d({v}) = {G.degree(v)}", {'vertex': v}
            )


def _greedy(G: nx.Graph, lists: Lists, order: Sequence[Hashable],
            assignment: Optional[Dict[Hashable, int]] = None) -> Tuple[Dict[Hashable, int], Dict[Hashable, int]]:
    assignment = dict(assignment or {})
    inspected: Dict[Hashable, int] = {}
    for v in order:
        taken = {assignment[w] for w in G[v] if w in assignment}
        inspected[v] = sum(1 for w in G[v] if w in assignment)
        free = sorted(set(lists[v]) - taken)
        if not free:
            raise PreconditionError(f"no color left for vertex {v}", {'vertex': v})
        assignment[v] = free[0]
    return assignment, inspected


# ============================================================================
# BLOCKS
# ============================================================================

def blocks(g: GraphLike) -> BlockDecomposition:
    """Standard biconnected decomposition; isolated vertices contribute no block."""
    G = _as_nx(g)
    pieces = sorted(
        tuple(sorted(_edge_key(a, b) for a, b in edges))
        for edges in nx.biconnected_component_edges(G)
    )
    vertex_sets = tuple(frozenset(v for e in edges for v in e) for edges in pieces)
    cut = frozenset(nx.articulation_points(G))
    tree = tuple(
        (i, c) for i, verts in enumerate(vertex_sets) for c in sorted(verts & cut)
    )
    return BlockDecomposition(vertex_sets, tuple(pieces), cut, tree)


def _gallai_witness(G: nx.Graph) -> Optional[FrozenSet[Hashable]]:
    decomposition = blocks(G)
    for verts, edges in zip(decomposition.blocks, decomposition.block_edges):
        k, e = len(verts), len(edges)
        clique = e == k * (k - 1) // 2
        odd_cycle = k >= 3 and k % 2 == 1 and e == k
        if not clique and not odd_cycle:
            return verts
    return None


def is_degree_choosable(g: GraphLike) -> DegreeChoosability:
    """
    False iff g is a Gallai tree (every block a clique or an odd cycle).

    When true, the witness is the first block that is neither.
    """
    G = _as_nx(g)
    _require_connected(G)
    witness = _gallai_witness(G)
    return DegreeChoosability(witness is not None, witness)


# ============================================================================
# THEOREM A
# ============================================================================

def _surplus(G: nx.Graph, lists: Lists, y: Hashable, method: str = "surplus") -> ListColoringResult:
    dist = nx.single_source_shortest_path_length(G, y)
    order = tuple(sorted(G.nodes(), key=lambda v: (-dist[v], v)))
    assignment, inspected = _greedy(G, lists, order)
    return ListColoringResult(Coloring(assignment), order, inspected, method)


def color_theorem_A_surplus(g: GraphLike, lists: Lists, y: Hashable) -> ListColoringResult:
    """
    Color greedily from the vertex farthest from y inward.

    Every vertex other than y still has an uncolored neighbor closer to y when
    its turn comes, so at most |L(v)| - 1 colors are ever blocked; y itself has
    a spare color.

    Raises:
        PreconditionError: disconnected graph, short list, or no surplus at y
    """
    G = _as_nx(g)
    _require_connected(G)
    _require_degree_lists(G, lists)
    if y not in G:
        raise PreconditionError(f"root {y} not in graph", {'vertex': y})
    if len(lists[y]) <= G.degree(y):
        raise PreconditionError(f"root {y} has no surplus color", {'vertex': y})
    return _surplus(G, lists, y)


def _nonuniform(G: nx.Graph, lists: Lists) -> ListColoringResult:
    chosen = None
    for a, b in sorted(_edge_key(a, b) for a, b in G.edges()):
        if set(lists[a]) != set(lists[b]):
            x, y = (a, b) if set(lists[a]) - set(lists[b]) else (b, a)
            chosen = (x, y)
            break
    if chosen is None:
        raise PreconditionError("all lists are identical")
    x, y = chosen
    c = min(set(lists[x]) - set(lists[y]))

    rest = G.copy()
    rest.remove_node(x)
    rest_lists = {v: (frozenset(lists[v]) - {c}) if G.has_edge(v, x) else frozenset(lists[v]) for v in rest}
    inner = _surplus(rest, rest_lists, y)

    assignment = {x: c}
    assignment.update(inner.coloring.assignment)
    inspected = {x: 0}
    inspected.update({v: n + (1 if G.has_edge(v, x) else 0) for v, n in inner.inspected.items()})
    return ListColoringResult(Coloring(assignment), (x,) + inner.order, inspected, "nonuniform")


def color_theorem_A_nonuniform(g: GraphLike, lists: Lists) -> ListColoringResult:
    """
    2-connected graph, degree-sized lists, not all lists equal.

    Pick an edge xy whose lists differ, give x a color y cannot use, then
    y has a spare color in G - x and the surplus ordering finishes.
    """
    G = _as_nx(g)
    _require_connected(G)
    if G.number_of_nodes() > 2 and not nx.is_biconnected(G):
        raise PreconditionError("graph must be 2-connected", {'cut_vertices': sorted(nx.articulation_points(G))})
    _require_degree_lists(G, lists)
    if len({frozenset(lists[v]) for v in G}) < 2:
        raise PreconditionError("all lists are identical")
    return _nonuniform(G, lists)


# ============================================================================
# THEOREM B
# ============================================================================

def _oracle(G: nx.Graph, lists: Lists, reason: str) -> ListColoringResult:
    logger.warning("INTERNAL-FALLBACK to exact list coloring: %s", reason)
    nodes = sorted(G.nodes())
    index = {v: i for i, v in enumerate(nodes)}
    graph = Graph.from_edges(len(nodes), ((index[a], index[b]) for a, b in G.edges()))
    result = list_color_exact(graph, {index[v]: frozenset(lists[v]) for v in nodes}, ORACLE_BUDGET)
    if result.status == SolverStatus.ABORTED:
        raise SolverAborted(f"exact list coloring aborted after {result.nodes} nodes")
    if result.status == SolverStatus.UNSAT:
        raise PreconditionError("lists admit no proper coloring")
    assignment = {nodes[i]: c for i, c in result.coloring.assignment.items()}
    return ListColoringResult(Coloring(assignment), tuple(nodes), {}, "oracle", True, (reason,))


def _brooks_pair(B: nx.Graph) -> Optional[Tuple[Hashable, Hashable, Hashable]]:
    for z in sorted(B.nodes()):
        nbrs = sorted(B[z])
        for i, x in enumerate(nbrs):
            for y in nbrs[i + 1:]:
                if B.has_edge(x, y):
                    continue
                rest = B.subgraph(v for v in B if v not in (x, y))
                if nx.is_connected(rest):
                    return z, x, y
    return None


def _color_block(B: nx.Graph, lists: Lists) -> ListColoringResult:
    surplus = [v for v in sorted(B) if len(lists[v]) > B.degree(v)]
    if surplus:
        return _surplus(B, lists, surplus[0])
    if B.number_of_nodes() <= 2:
        return _oracle(B, lists, "bridge block without surplus")
    if len({frozenset(lists[v]) for v in B}) > 1:
        return _nonuniform(B, lists)

    palette = sorted(lists[min(B)])
    if all(d == 2 for _v, d in B.degree()) and B.number_of_nodes() % 2 == 0:
        start = min(B)
        walk = [start] + [w for _u, w in nx.dfs_edges(B, start)]
        assignment = {v: palette[i % 2] for i, v in enumerate(walk)}
        position = {v: i for i, v in enumerate(walk)}
        inspected = {v: sum(1 for w in B[v] if position[w] < position[v]) for v in walk}
        return ListColoringResult(Coloring(assignment), tuple(walk), inspected, "even-cycle")

    found = _brooks_pair(B)
    if found is None:
        return _oracle(B, lists, "identical lists and no nonadjacent neighbor pair")
    z, x, y = found
    c = palette[0]
    rest = B.subgraph(v for v in B if v not in (x, y)).copy()
    rest_lists = {
        v: frozenset(lists[v]) - {c} if (B.has_edge(v, x) or B.has_edge(v, y)) else frozenset(lists[v])
        for v in rest
    }
    inner = _surplus(rest, rest_lists, z)
    assignment = {x: c, y: c}
    assignment.update(inner.coloring.assignment)
    inspected = {x: 0, y: 0}
    inspected.update({
        v: n + int(B.has_edge(v, x)) + int(B.has_edge(v, y)) for v, n in inner.inspected.items()
    })
    return ListColoringResult(Coloring(assignment), (x, y) + inner.order, inspected, "nonadjacent-pair")


def color_degree_lists(g: GraphLike, lists: Lists) -> ListColoringResult:
    """
    Color a connected non-Gallai-tree graph from lists with |L(v)| >= d(v).

    The parts hanging off a non-Gallai block are colored first, each rooted at
    its attachment to the block; the block is then colored from what is left.

    Raises:
        PreconditionError: disconnected graph, short list, or a Gallai tree
    """
    G = _as_nx(g)
    _require_connected(G)
    _require_degree_lists(G, lists)

    surplus = [v for v in sorted(G) if len(lists[v]) > G.degree(v)]
    if surplus:
        return _surplus(G, lists, surplus[0], method="surplus")

    block = _gallai_witness(G)
    if block is None:
        raise PreconditionError("graph is a Gallai tree", {'blocks': [sorted(b) for b in blocks(G).blocks]})

    assignment: Dict[Hashable, int] = {}
    inspected: Dict[Hashable, int] = {}
    order: List[Hashable] = []
    outside = G.subgraph(v for v in G if v not in block)
    for comp in sorted(nx.connected_components(outside), key=min):
        part = G.subgraph(comp).copy()
        root = min(v for v in comp if any(w in block for w in G[v]))
        piece = _surplus(part, {v: lists[v] for v in comp}, root)
        assignment.update(piece.coloring.assignment)
        inspected.update(piece.inspected)
        order.extend(piece.order)

    B = G.subgraph(block).copy()
    block_lists = {
        v: frozenset(lists[v]) - {assignment[w] for w in G[v] if w in assignment} for v in B
    }
    piece = _color_block(B, block_lists)
    assignment.update(piece.coloring.assignment)
    for v, n in piece.inspected.items():
        inspected[v] = n + sum(1 for w in G[v] if w in order)
    order.extend(piece.order)
    return ListColoringResult(
        Coloring(assignment), tuple(order), inspected, f"degree-lists/{piece.method}", piece.fallback, piece.notes
    )
