"""
Graph structure for injective coloring experiments

Provides:
- Graph / PlaneEmbedding value types with edge-list and rotation-system formats
- Degree profile, girth and exact maximum average degree (Goldberg max-flow)
- The neighboring graph G^(2), thread decomposition, the 2-3 subgraph G_23
- The auxiliary graph H on 3-vertices used by the Δ=3 density argument
"""

import logging
import math
from collections import Counter
from dataclasses import dataclass, field
from fractions import Fraction
from functools import cached_property
from typing import Dict, FrozenSet, Iterable, List, Mapping, Optional, Sequence, Tuple

import networkx as nx

from .errors import EmbeddingError, GraphFormatError, PreconditionError

logger = logging.getLogger(__name__)

INFINITE = math.inf


# ============================================================================
# GRAPH
# ============================================================================

@dataclass(frozen=True)
class Graph:
    """Simple undirected graph on vertices 0..n-1 with sorted adjacency tuples."""

    n: int
    adjacency: Tuple[Tuple[int, ...], ...]

    def __post_init__(self):
        if self.n < 0 or len(self.adjacency) != self.n:
            raise ValueError(f"adjacency has {len(self.adjacency)} rows for n={self.n}")
        for v, nbrs in enumerate(self.adjacency):
            if list(nbrs) != sorted(set(nbrs)):
                raise ValueError(f"neighbors of {v} must be sorted and distinct")
            for w in nbrs:
                if w == v:
                    raise ValueError(f"loop at vertex {v}")
                if not 0 <= w < self.n:
                    raise ValueError(f"neighbor {w} of {v} out of range")
        for v, nbrs in enumerate(self.adjacency):
            for w in nbrs:
                if v not in self._sets[w]:
                    raise ValueError(f"adjacency not symmetric on edge {v}-{w}")

    @classmethod
    def from_edges(cls, n: int, edges: Iterable[Tuple[int, int]]) -> "Graph":
        adj: List[set] = [set() for _ in range(n)]
        for u, v in edges:
            if not (0 <= u < n and 0 <= v < n):
                raise ValueError(f"edge {u}-{v} out of range for n={n}")
            if u == v:
                raise ValueError(f"loop at vertex {u}")
            adj[u].add(v)
            adj[v].add(u)
        return cls(n, tuple(tuple(sorted(s)) for s in adj))

    @classmethod
    def from_networkx(cls, g: nx.Graph) -> "Graph":
        """Convert, numbering nodes in sorted order."""
        nodes = sorted(g.nodes())
        index = {node: i for i, node in enumerate(nodes)}
        return cls.from_edges(len(nodes), ((index[a], index[b]) for a, b in g.edges()))

    @cached_property
    def _sets(self) -> Tuple[FrozenSet[int], ...]:
        return tuple(frozenset(nbrs) for nbrs in self.adjacency)

    def neighbors(self, v: int) -> Tuple[int, ...]:
        return self.adjacency[v]

    def degree(self, v: int) -> int:
        return len(self.adjacency[v])

    def has_edge(self, u: int, v: int) -> bool:
        return v in self._sets[u]

    @cached_property
    def max_degree(self) -> int:
        return max((len(a) for a in self.adjacency), default=0)

    @cached_property
    def min_degree(self) -> int:
        return min((len(a) for a in self.adjacency), default=0)

    @cached_property
    def edge_count(self) -> int:
        return sum(len(a) for a in self.adjacency) // 2

    def edges(self) -> List[Tuple[int, int]]:
        return [(u, v) for u in range(self.n) for v in self.adjacency[u] if u < v]

    def edges_within(self, vertices: Iterable[int]) -> int:
        inside = set(vertices)
        return sum(1 for u in inside for v in self.adjacency[u] if v in inside and u < v)

    def to_networkx(self) -> nx.Graph:
        g = nx.Graph()
        g.add_nodes_from(range(self.n))
        g.add_edges_from(self.edges())
        return g

    def subgraph(self, keep: Iterable[int]) -> Tuple["Graph", Tuple[int, ...]]:
        """
        Induced subgraph on ``keep``, relabeled to 0..k-1.

        Returns:
            (subgraph, origin) where origin[new] = old vertex id
        """
        origin = tuple(sorted(set(keep)))
        index = {old: new for new, old in enumerate(origin)}
        rows = tuple(tuple(index[w] for w in self.adjacency[old] if w in index) for old in origin)
        return Graph(len(origin), rows), origin

    def is_connected(self) -> bool:
        return self.n > 0 and nx.is_connected(self.to_networkx())


# ============================================================================
# EDGE-LIST FORMAT
# ============================================================================

def _parse_int(token: str, line: int) -> int:
    try:
        return int(token)
    except ValueError:
        raise GraphFormatError(f"expected an integer, got {token!r}", line)


def parse_graph(text: str) -> Graph:
    """
    Parse an edge-list document: header "n m", then m lines "u v".

    Raises:
        GraphFormatError: malformed line, out-of-range vertex, loop, duplicate edge
    """
    lines = [line.strip() for line in text.lstrip("\ufeff").splitlines()]
    while lines and not lines[-1]:
        lines.pop()
    if not lines:
        raise GraphFormatError("empty document", 1)

    header = lines[0].split()
    if len(header) != 2:
        raise GraphFormatError("header must be 'n m'", 1)
    n, m = (_parse_int(tok, 1) for tok in header)
    if n < 0 or m < 0:
        raise GraphFormatError("n and m must be nonnegative", 1)
    if len(lines) - 1 != m:
        raise GraphFormatError(f"expected {m} edge lines, found {len(lines) - 1}", len(lines))

    edges = []
    seen = set()
    for number, line in enumerate(lines[1:], start=2):
        parts = line.split()
        if len(parts) != 2:
            raise GraphFormatError("edge line must be 'u v'", number)
        u, v = (_parse_int(tok, number) for tok in parts)
        if not (0 <= u < n and 0 <= v < n):
            raise GraphFormatError(f"vertex out of range 0..{n - 1}", number)
        if u == v:
            raise GraphFormatError(f"loop at vertex {u}", number)
        key = (min(u, v), max(u, v))
        if key in seen:
            raise GraphFormatError(f"duplicate edge {key[0]}-{key[1]}", number)
        seen.add(key)
        edges.append(key)
    return Graph.from_edges(n, edges)


def format_graph(g: Graph) -> str:
    lines = [f"{g.n} {g.edge_count}"]
    lines.extend(f"{u} {v}" for u, v in g.edges())
    return "\n".join(lines) + "\n"


# ============================================================================
# PLANE EMBEDDING
# ============================================================================

@dataclass(frozen=True)
class PlaneEmbedding:
    """
    Rotation system of a plane graph.

    Faces are closed walks of darts; a cut vertex shows up once per visit, so
    face degrees sum to 2|E|. Construction rejects anything that is not a
    permutation of the adjacency or that fails Euler's identity per component.
    """

    host: Graph
    rotation: Tuple[Tuple[int, ...], ...]

    def __post_init__(self):
        if len(self.rotation) != self.host.n:
            raise EmbeddingError(f"rotation has {len(self.rotation)} rows for n={self.host.n}")
        for v, order in enumerate(self.rotation):
            if len(set(order)) != len(order) or tuple(sorted(order)) != self.host.neighbors(v):
                raise EmbeddingError(f"rotation at vertex {v} is not a permutation of its neighbors")
        self._check_euler()

    def _check_euler(self) -> None:
        face_count = Counter()
        component_of = {}
        components = [c for c in nx.connected_components(self.host.to_networkx()) if len(c) > 1]
        for i, comp in enumerate(components):
            for v in comp:
                component_of[v] = i
        for walk in self.faces:
            face_count[component_of[walk[0]]] += 1
        for i, comp in enumerate(components):
            edges = self.host.edges_within(comp)
            euler = len(comp) - edges + face_count[i]
            if euler != 2:
                raise EmbeddingError(
                    f"Euler check failed on component containing {min(comp)}: V - E + F = {euler}"
                )

    @cached_property
    def faces(self) -> Tuple[Tuple[int, ...], ...]:
        emb = nx.PlanarEmbedding()
        emb.add_nodes_from(range(self.host.n))
        emb.set_data({v: list(order) for v, order in enumerate(self.rotation) if order})
        seen: set = set()
        walks = []
        for v, order in enumerate(self.rotation):
            for w in order:
                if (v, w) not in seen:
                    walks.append(tuple(emb.traverse_face(v, w, mark_half_edges=seen)))
        return tuple(walks)

    @cached_property
    def dart_face(self) -> Dict[Tuple[int, int], int]:
        """Face index of every dart (u, v)."""
        owner = {}
        for index, walk in enumerate(self.faces):
            for i, v in enumerate(walk):
                owner[(v, walk[(i + 1) % len(walk)])] = index
        return owner

    def face_degree(self, index: int) -> int:
        return len(self.faces[index])

    def face_across(self, index: int, position: int) -> int:
        """Face on the other side of the vertex at ``position`` of face ``index``."""
        walk = self.faces[index]
        v = walk[position]
        return self.dart_face[(v, walk[position - 1])]

    def restrict(self, keep: Iterable[int]) -> Tuple["PlaneEmbedding", Tuple[int, ...]]:
        """Embedding of the induced subgraph; surviving rotations drop removed entries."""
        sub, origin = self.host.subgraph(keep)
        index = {old: new for new, old in enumerate(origin)}
        rotation = tuple(
            tuple(index[w] for w in self.rotation[old] if w in index) for old in origin
        )
        return PlaneEmbedding(sub, rotation), origin


def parse_rotation(text: str, g: Graph) -> PlaneEmbedding:
    """Line k lists vertex k's neighbors in cyclic order."""
    lines = text.lstrip("\ufeff").splitlines()
    while len(lines) > g.n and not lines[-1].strip():
        lines.pop()
    if len(lines) > g.n:
        raise GraphFormatError(f"rotation has {len(lines)} lines for {g.n} vertices", g.n + 1)
    lines += [""] * (g.n - len(lines))
    rotation = []
    for number, line in enumerate(lines, start=1):
        rotation.append(tuple(_parse_int(tok, number) for tok in line.split()))
    return PlaneEmbedding(g, tuple(rotation))


def format_rotation(emb: PlaneEmbedding) -> str:
    return "\n".join(" ".join(str(w) for w in order) for order in emb.rotation) + "\n"


# ============================================================================
# BASIC INVARIANTS
# ============================================================================

@dataclass(frozen=True)
class DegreeProfile:
    n: int
    m: int
    max_degree: int
    min_degree: int
    counts: Mapping[int, int]

    def to_dict(self) -> Dict:
        return {
            'n': self.n,
            'm': self.m,
            'delta': self.max_degree,
            'min_degree': self.min_degree,
            'degree_counts': {str(d): c for d, c in sorted(self.counts.items())},
        }


def degree_profile(g: Graph) -> DegreeProfile:
    counts = Counter(g.degree(v) for v in range(g.n))
    return DegreeProfile(g.n, g.edge_count, g.max_degree, g.min_degree, dict(counts))


def girth(g: Graph):
    """Length of a shortest cycle, or INFINITE for forests."""
    value = nx.girth(g.to_networkx())
    return INFINITE if value == math.inf else int(value)


@dataclass(frozen=True)
class MadResult:
    value: Fraction
    witness: FrozenSet[int]


def format_rational(value) -> str:
    """Render as "p/q" (integers too: "2/1")."""
    value = Fraction(value)
    return f"{value.numerator}/{value.denominator}"


def _density_network(g: Graph, p: int, q: int) -> nx.DiGraph:
    # Goldberg's network scaled by q: the min cut is below q*m*n exactly when
    # some vertex set S has |E(S)| / |S| > p / q.
    m = g.edge_count
    net = nx.DiGraph()
    net.add_nodes_from(["s", "t"])
    for v in range(g.n):
        net.add_edge("s", v, capacity=q * m)
        net.add_edge(v, "t", capacity=q * m + 2 * p - q * g.degree(v))
    for u, v in g.edges():
        net.add_edge(u, v, capacity=q)
        net.add_edge(v, u, capacity=q)
    return net


def mad_exact(g: Graph) -> MadResult:
    """
    Exact maximum average degree with a witness vertex set.

    Starts from the density of the whole graph and repeatedly asks the flow
    oracle for a denser set; each answer is a strictly denser rational with
    denominator at most n, so the loop ends at the optimum.
    """
    if g.n == 0:
        raise PreconditionError("mad of the empty graph is undefined")
    m = g.edge_count
    if m == 0:
        return MadResult(Fraction(0), frozenset({0}))

    best = Fraction(m, g.n)
    witness = frozenset(range(g.n))
    while True:
        p, q = best.numerator, best.denominator
        cut_value, (source_side, _) = nx.minimum_cut(_density_network(g, p, q), "s", "t")
        if cut_value >= q * m * g.n:
            break
        denser = frozenset(v for v in source_side if v != "s")
        density = Fraction(g.edges_within(denser), len(denser))
        if density <= best:
            break
        logger.debug("mad search: density %s -> %s on %d vertices", best, density, len(denser))
        best, witness = density, denser
    return MadResult(2 * best, witness)


def neighboring_graph(g: Graph) -> Graph:
    """G^(2): u ~ v iff u != v and they share a common neighbor."""
    edges = set()
    for v in range(g.n):
        nbrs = g.neighbors(v)
        for i, a in enumerate(nbrs):
            for b in nbrs[i + 1:]:
                edges.add((a, b))
    return Graph.from_edges(g.n, edges)


# ============================================================================
# THREADS
# ============================================================================

@dataclass(frozen=True)
class Thread:
    """Path whose interior vertices have degree 2 and whose ends have degree >= 3."""

    u: int
    v: int
    interior: Tuple[int, ...]

    @property
    def length(self) -> int:
        return len(self.interior)

    @property
    def is_loop(self) -> bool:
        return self.u == self.v


@dataclass(frozen=True)
class ThreadEnd:
    """A thread seen from one of its ends; ``path`` runs outward from ``end``."""

    thread: Thread
    end: int
    far_end: int
    path: Tuple[int, ...]

    @property
    def length(self) -> int:
        return len(self.path)

    @property
    def first(self) -> int:
        return self.path[0] if self.path else self.far_end


@dataclass(frozen=True)
class NonThreadComponent:
    """A maximal chain of 2-vertices that is not a thread: 'cycle' or 'pendant'."""

    kind: str
    vertices: Tuple[int, ...]
    ends: Tuple[int, ...] = ()


@dataclass(frozen=True)
class ThreadDecomposition:
    threads: Tuple[Thread, ...]
    zero_threads: Tuple[Thread, ...]
    non_thread: Tuple[NonThreadComponent, ...]
    pseudo_adjacent: FrozenSet[FrozenSet[int]]
    nearby: Mapping[int, Tuple[int, ...]]
    incidence: Mapping[Tuple[int, int], ThreadEnd] = field(repr=False)

    def threads_at(self, v: int) -> Tuple[ThreadEnd, ...]:
        """One entry per incident edge of v that starts a thread, by first step."""
        return self._by_end.get(v, ())

    def ends_of(self, t: Thread) -> Tuple[ThreadEnd, ThreadEnd]:
        first_u = t.interior[0] if t.interior else t.v
        first_v = t.interior[-1] if t.interior else t.u
        return self.incidence[(t.u, first_u)], self.incidence[(t.v, first_v)]

    def nearby_count(self, v: int) -> int:
        return len(self.nearby.get(v, ()))

    @cached_property
    def _by_end(self) -> Dict[int, Tuple[ThreadEnd, ...]]:
        grouped: Dict[int, List[ThreadEnd]] = {}
        for (end, first), te in sorted(self.incidence.items()):
            grouped.setdefault(end, []).append(te)
        return {v: tuple(items) for v, items in grouped.items()}

    def bare_cycles(self) -> Tuple[NonThreadComponent, ...]:
        return tuple(c for c in self.non_thread if c.kind == "cycle")


def _walk_twos(g: Graph, start: int, prev: int, cur: int, twos: set) -> Tuple[List[int], int]:
    path = []
    while cur in twos and cur != start:
        path.append(cur)
        a, b = g.neighbors(cur)
        prev, cur = cur, (b if a == prev else a)
    return path, cur


def _orient(u: int, v: int, interior: Sequence[int]) -> Thread:
    forward = (u, interior[0] if interior else v)
    backward = (v, interior[-1] if interior else u)
    if backward < forward:
        return Thread(v, u, tuple(reversed(interior)))
    return Thread(u, v, tuple(interior))


def thread_decomposition(g: Graph) -> ThreadDecomposition:
    """
    Maximal threads, 0-threads, and the non-thread chains of 2-vertices.

    All-2-vertex cycles and chains ending at a 1-vertex are reported in
    ``non_thread`` rather than dropped.
    """
    twos = {v for v in range(g.n) if g.degree(v) == 2}
    seen: set = set()
    threads: List[Thread] = []
    non_thread: List[NonThreadComponent] = []

    for start in sorted(twos):
        if start in seen:
            continue
        a, b = g.neighbors(start)
        right, right_end = _walk_twos(g, start, start, b, twos)
        if right_end == start:
            cycle = (start,) + tuple(right)
            seen.update(cycle)
            non_thread.append(NonThreadComponent("cycle", cycle))
            continue
        left, left_end = _walk_twos(g, start, start, a, twos)
        chain = tuple(reversed(left)) + (start,) + tuple(right)
        seen.update(chain)
        if g.degree(left_end) >= 3 and g.degree(right_end) >= 3:
            threads.append(_orient(left_end, right_end, chain))
        else:
            non_thread.append(NonThreadComponent("pendant", chain, (left_end, right_end)))

    zero = [Thread(u, v, ()) for u, v in g.edges() if g.degree(u) >= 3 and g.degree(v) >= 3]

    incidence: Dict[Tuple[int, int], ThreadEnd] = {}
    for t in threads + zero:
        forward = ThreadEnd(t, t.u, t.v, t.interior)
        backward = ThreadEnd(t, t.v, t.u, tuple(reversed(t.interior)))
        incidence[(forward.end, forward.first)] = forward
        incidence[(backward.end, backward.first)] = backward

    nearby: Dict[int, List[int]] = {}
    for (end, _first), te in sorted(incidence.items()):
        nearby.setdefault(end, []).extend(te.path)

    pseudo = frozenset(frozenset((t.u, t.v)) for t in threads + zero if not t.is_loop)
    return ThreadDecomposition(
        threads=tuple(sorted(threads, key=lambda t: (t.u, t.v, t.interior))),
        zero_threads=tuple(zero),
        non_thread=tuple(non_thread),
        pseudo_adjacent=pseudo,
        nearby={v: tuple(vs) for v, vs in nearby.items()},
        incidence=incidence,
    )


# ============================================================================
# G_23 AND THE AUXILIARY GRAPH H
# ============================================================================

@dataclass(frozen=True)
class G23Subgraph:
    """Edges of g joining a 2-vertex and a 3-vertex, on the full vertex set."""

    graph: Graph
    isolated: FrozenSet[int]


def build_G23(g: Graph) -> G23Subgraph:
    edges = [
        (u, v) for u, v in g.edges()
        if {g.degree(u), g.degree(v)} == {2, 3}
    ]
    sub = Graph.from_edges(g.n, edges)
    isolated = frozenset(v for v in range(g.n) if sub.degree(v) == 0)
    return G23Subgraph(sub, isolated)


@dataclass(frozen=True)
class AuxiliaryGraph:
    """
    H on the 3-vertices of a subcubic graph.

    ``edges`` is the simple collapse (loops dropped); ``thread_edges`` keeps
    one edge per qualifying thread and is what degrees and cycles are read
    from. ``strict_thread_edges`` applies the 2-thread rule only when both
    ends qualify.
    """

    host_three_vertices: Tuple[int, ...]
    edges: FrozenSet[Tuple[int, int]]
    thread_edges: Tuple[Tuple[int, int, Thread], ...]
    strict_thread_edges: Tuple[Tuple[int, int, Thread], ...]
    nearby_counts: Mapping[int, int]
    a_counts: Tuple[int, ...]
    a_hat_counts: Tuple[int, ...]
    n_H: int
    n_hat: int

    @cached_property
    def _degrees(self) -> Counter:
        deg = Counter()
        for u, v, _t in self.thread_edges:
            deg[u] += 1
            deg[v] += 1
        return deg

    def degree(self, v: int) -> int:
        """Degree in the thread multigraph (a loop counts twice)."""
        return self._degrees[v]

    def simple_degree(self, v: int) -> int:
        return sum(1 for e in self.edges if v in e)

    @property
    def hat_vertices(self) -> Tuple[int, ...]:
        return tuple(v for v in self.host_three_vertices if self.degree(v) > 0)

    def multigraph(self, strict: bool = False) -> nx.MultiGraph:
        h = nx.MultiGraph()
        h.add_nodes_from(self.host_three_vertices)
        for u, v, t in (self.strict_thread_edges if strict else self.thread_edges):
            h.add_edge(u, v, thread=t)
        return h


def _two_thread_rule(td: ThreadDecomposition, te: ThreadEnd) -> bool:
    others = sorted(
        o.length for o in td.threads_at(te.end) if (o.end, o.first) != (te.end, te.first)
    )
    return len(others) == 2 and others[1] == 3 and others[0] in (2, 3)


def build_auxiliary_H(g: Graph) -> AuxiliaryGraph:
    """
    Build H: a 3-thread uv adds uv; a 2-thread uv adds uv when, at one of its
    ends, one other thread is a 3-thread and the remaining one is a 2- or
    3-thread.

    Raises:
        PreconditionError: Δ != 3, a 1-vertex, or a thread with >= 4 interior vertices
    """
    if g.max_degree != 3:
        raise PreconditionError(f"auxiliary H needs Δ = 3, got {g.max_degree}", {'delta': g.max_degree})
    for v in range(g.n):
        if g.degree(v) == 1:
            raise PreconditionError(f"vertex {v} has degree 1", {'vertex': v})
    td = thread_decomposition(g)
    for t in td.threads:
        if t.length >= 4:
            raise PreconditionError(
                f"{t.length}-thread between {t.u} and {t.v}", {'thread': [t.u, *t.interior, t.v]}
            )

    threes = tuple(v for v in range(g.n) if g.degree(v) == 3)
    either, both = [], []
    for t in td.threads:
        if t.length == 3:
            either.append((t.u, t.v, t))
            both.append((t.u, t.v, t))
        elif t.length == 2:
            verdicts = [_two_thread_rule(td, te) for te in td.ends_of(t)]
            if any(verdicts):
                either.append((t.u, t.v, t))
            if all(verdicts):
                both.append((t.u, t.v, t))

    simple = frozenset((min(u, v), max(u, v)) for u, v, _t in either if u != v)
    nearby_counts = {v: td.nearby_count(v) for v in threes}
    deg = Counter()
    for u, v, _t in either:
        deg[u] += 1
        deg[v] += 1

    a_counts = [0] * 10
    a_hat = [0] * 10
    for v in threes:
        i = nearby_counts[v]
        a_counts[i] += 1
        if deg[v] > 0:
            a_hat[i] += 1

    return AuxiliaryGraph(
        host_three_vertices=threes,
        edges=simple,
        thread_edges=tuple(either),
        strict_thread_edges=tuple(both),
        nearby_counts=nearby_counts,
        a_counts=tuple(a_counts),
        a_hat_counts=tuple(a_hat),
        n_H=len(threes),
        n_hat=sum(1 for v in threes if deg[v] > 0),
    )
