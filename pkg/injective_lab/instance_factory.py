"""
Instance factory

Deterministic constructions (named graphs, subdivision, vertex insertion,
the Class 2 counterexample pipeline) and seeded generators for corpora that
satisfy each theorem class. Generated instances are re-checked against the
class hypotheses before they are handed out.
"""

import hashlib
import logging
import math
import random
from dataclasses import dataclass, field
from fractions import Fraction
from pathlib import Path
from typing import Callable, Dict, List, Mapping, Optional, Tuple, Union

import networkx as nx

from .configurations import TheoremClass, check_hypotheses
from .errors import EmbeddingError, GenerationError, PreconditionError, SolverAborted
from .exact_solvers import DEFAULT_BUDGET, SolverStatus, chromatic_index
from .graph_structure import (
    Graph,
    PlaneEmbedding,
    format_graph,
    format_rotation,
    girth,
    mad_exact,
)
from .reports import CorpusManifestEntry

logger = logging.getLogger(__name__)

GENERATION_ATTEMPTS = 50
CHORD_TRIES = 60

Edge = Tuple[int, int]
Counts = Union[int, Mapping[Edge, int]]


# ============================================================================
# NAMED GRAPHS
# ============================================================================

def path_graph(n: int) -> Graph:
    return Graph.from_networkx(nx.path_graph(n))


def cycle_graph(n: int) -> Graph:
    return Graph.from_networkx(nx.cycle_graph(n))


def star_graph(leaves: int) -> Graph:
    """K_{1,leaves} with the center at 0."""
    return Graph.from_networkx(nx.star_graph(leaves))


def complete_graph(n: int) -> Graph:
    return Graph.from_networkx(nx.complete_graph(n))


def petersen_graph() -> Graph:
    return Graph.from_networkx(nx.petersen_graph())


def cube_graph() -> Graph:
    """Q3 with vertices numbered in sorted order of their bit strings."""
    return Graph.from_networkx(nx.hypercube_graph(3))


def octahedron_graph() -> Graph:
    return Graph.from_networkx(nx.octahedral_graph())


def wheel_graph(rim: int) -> Graph:
    """Hub 0 joined to a cycle of ``rim`` vertices; Δ = rim."""
    return Graph.from_networkx(nx.wheel_graph(rim + 1))


def antiprism_graph() -> Graph:
    """Square antiprism: 4-regular and planar on 8 vertices."""
    return Graph.from_networkx(nx.circulant_graph(8, [1, 2]))


def dodecahedron_graph() -> Graph:
    return Graph.from_networkx(nx.dodecahedral_graph())


def twin_dodecahedra_graph() -> Graph:
    """Two dodecahedra joined by one edge: planar, girth 5, Δ = 4 at the two bridge ends."""
    h = nx.disjoint_union(nx.dodecahedral_graph(), nx.dodecahedral_graph())
    h.add_edge(0, 20)
    return Graph.from_networkx(h)


def _planar_faces(emb: nx.PlanarEmbedding) -> List[Tuple[int, ...]]:
    seen = set()
    faces = []
    for u, v in sorted(emb.edges()):
        if (u, v) not in seen:
            faces.append(tuple(emb.traverse_face(u, v, mark_half_edges=seen)))
    return faces


def stacked_quadrangulation(stacks: int, seed: int = 0) -> Graph:
    """
    The cube with ``stacks`` vertices stacked into 4-faces.

    Each new vertex is joined to two opposite corners of a face, splitting it
    into two 4-faces, so the graph stays a quadrangulation (girth 4). One
    stack already lifts Δ to 4.
    """
    rng = random.Random(seed)
    h = nx.convert_node_labels_to_integers(nx.hypercube_graph(3), ordering="sorted")
    for _ in range(stacks):
        _, emb = nx.check_planarity(h)
        quads = [face for face in _planar_faces(emb) if len(face) == 4]
        face = rng.choice(quads)
        shift = rng.randint(0, 1)
        x = h.number_of_nodes()
        h.add_edge(face[shift], x)
        h.add_edge(x, face[shift + 2])
    return Graph.from_networkx(h)


NAMED_GRAPHS: Dict[str, Callable[[], Graph]] = {
    'petersen': petersen_graph,
    'cube': cube_graph,
    'octahedron': octahedron_graph,
    'antiprism': antiprism_graph,
    'dodecahedron': dodecahedron_graph,
    'twin_dodecahedra': twin_dodecahedra_graph,
    **{f'W{k}': (lambda k=k: wheel_graph(k)) for k in range(4, 9)},
    **{f'K{k}': (lambda k=k: complete_graph(k)) for k in range(1, 6)},
    **{f'SQ{k}': (lambda k=k: stacked_quadrangulation(k, seed=k)) for k in range(1, 5)},
}


def named_graph(name: str) -> Graph:
    """
    Look up a named construction.

    Besides the fixed names, "P<n>", "C<n>" and "S<k>" give paths, cycles and
    stars of the stated size.
    """
    if name in NAMED_GRAPHS:
        return NAMED_GRAPHS[name]()
    prefix, digits = name[:1], name[1:]
    if digits.isdigit():
        size = int(digits)
        if prefix == "P" and size >= 1:
            return path_graph(size)
        if prefix == "C" and size >= 3:
            return cycle_graph(size)
        if prefix == "S" and size >= 1:
            return star_graph(size)
    choices = ", ".join(sorted(NAMED_GRAPHS))
    raise ValueError(f"unknown construction {name!r} (choose from {choices}, P<n>, C<n>, S<k>)")


def plane_embedding(g: Graph) -> PlaneEmbedding:
    """A plane embedding of a planar graph (rotation in clockwise order)."""
    planar, emb = nx.check_planarity(g.to_networkx())
    if not planar:
        raise EmbeddingError("graph is not planar")
    rotation = tuple(
        tuple(emb.neighbors_cw_order(v)) if g.degree(v) else () for v in range(g.n)
    )
    return PlaneEmbedding(g, rotation)


# ============================================================================
# SUBDIVISION AND INSERTION
# ============================================================================

def _edge_counts(g: Graph, k: Counts) -> Dict[Edge, int]:
    if isinstance(k, int):
        if k < 0:
            raise PreconditionError(f"subdivision count must be >= 0, got {k}")
        return {e: k for e in g.edges()}
    counts = {}
    for e in g.edges():
        c = k.get(e, k.get((e[1], e[0]), 0))
        if c < 0:
            raise PreconditionError(f"subdivision count for {e} must be >= 0, got {c}", {'edge': list(e)})
        counts[e] = c
    return counts


def subdivide(g: Graph, k: Counts, emb: Optional[PlaneEmbedding] = None) -> Tuple[Graph, Optional[PlaneEmbedding]]:
    """
    Replace every edge by a path with k interior 2-vertices.

    Args:
        g: graph to subdivide
        k: one count for all edges, or a per-edge mapping (missing edges: 0)
        emb: optional plane embedding of g, extended through the subdivision

    Returns:
        (graph, embedding); original vertices keep their ids, new vertices
        follow in sorted edge order, each path numbered from its smaller end
    """
    counts = _edge_counts(g, k)
    next_id = g.n
    edges: List[Edge] = []
    # toward[(v, w)] = the vertex next to v on the path that replaced edge vw
    toward: Dict[Edge, int] = {}
    interior_rotation: Dict[int, Tuple[int, int]] = {}
    for (u, v) in g.edges():
        path = [u] + list(range(next_id, next_id + counts[(u, v)])) + [v]
        next_id += counts[(u, v)]
        edges.extend(zip(path, path[1:]))
        toward[(u, v)] = path[1]
        toward[(v, u)] = path[-2]
        for i in range(1, len(path) - 1):
            interior_rotation[path[i]] = (path[i - 1], path[i + 1])

    sub = Graph.from_edges(next_id, edges)
    if emb is None:
        return sub, None
    rotation = [tuple(toward[(v, w)] for w in emb.rotation[v]) for v in range(g.n)]
    rotation += [interior_rotation[x] for x in range(g.n, next_id)]
    return sub, PlaneEmbedding(sub, tuple(rotation))


def insert_vertex(g: Graph, e: Edge) -> Graph:
    """Replace edge e by a path of length 2 through a new vertex n."""
    u, v = e
    if not (0 <= u < g.n and 0 <= v < g.n) or not g.has_edge(u, v):
        raise PreconditionError(f"edge {u}-{v} is not in the graph", {'edge': [u, v]})
    return subdivide(g, {(min(u, v), max(u, v)): 1})[0]


@dataclass(frozen=True)
class Insertion:
    graph: Graph
    edge: Edge
    tag: Optional[str]


def regular_even_order_insert(g: Graph, e: Optional[Edge] = None, budget: int = DEFAULT_BUDGET) -> Insertion:
    """
    Insert a vertex into one edge of a regular graph of even order; the
    result is Class 2. The class is confirmed with the exact edge solver
    (None when the budget runs out).
    """
    if g.n == 0 or g.min_degree != g.max_degree or g.n % 2:
        raise PreconditionError(
            "vertex insertion needs a regular graph of even order",
            {'n': g.n, 'min_degree': g.min_degree, 'max_degree': g.max_degree},
        )
    edge = e or g.edges()[0]
    out = insert_vertex(g, edge)
    result = chromatic_index(out, budget)
    return Insertion(out, edge, result.tag if result.status == SolverStatus.OK else None)


def class2_counterexample(g: Graph, budget: int = DEFAULT_BUDGET) -> Graph:
    """
    Subdivide every edge of a Class 2 graph once.

    An injective Δ-coloring of the result would color the edges of g through
    the colors of the subdivision vertices, so χ_i of the result is at least Δ+1.

    Raises:
        PreconditionError: g is Class 1
        SolverAborted: the edge solver ran out of budget before deciding
    """
    result = chromatic_index(g, budget)
    if result.status == SolverStatus.ABORTED:
        raise SolverAborted(f"chromatic index undecided after {result.nodes} nodes")
    if result.tag != "CLASS2":
        raise PreconditionError(
            f"input is {result.tag} (χ' = {result.value} = Δ); a Class 2 graph is required",
            {'chromatic_index': result.value, 'delta': g.max_degree},
        )
    return subdivide(g, 1)[0]


# ============================================================================
# RANDOM SPARSE GRAPHS (mad classes)
# ============================================================================

def _mad_ok(h: nx.Graph, bound: Fraction, strict: bool) -> bool:
    value = mad_exact(Graph.from_networkx(h)).value
    return value < bound if strict else value <= bound


def _add_path(h: nx.Graph, a: int, b: Optional[int], length: int) -> List[int]:
    """Hang a path of ``length`` new vertices off a (closing at b when given)."""
    start = h.number_of_nodes()
    fresh = list(range(start, start + length))
    chain = [a] + fresh + ([b] if b is not None else [])
    h.add_nodes_from(fresh)
    h.add_edges_from(zip(chain, chain[1:]))
    return fresh


def random_sparse(
    n: int,
    mad_bound: Fraction,
    delta_min: int,
    seed: int,
    strict: bool = False,
    delta_max: Optional[int] = None,
) -> Graph:
    """
    Connected graph on n vertices with Δ >= delta_min and mad within the bound.

    Grows a tree of threads from a hub of degree delta_min, then closes
    threads between low-degree vertices (leaves first) while the exact mad
    check still passes.

    Raises:
        GenerationError: no graph found within the attempt budget
    """
    if n == 1:
        return Graph(1, ((),))
    delta_max = delta_max or max(delta_min, 4) + 2
    if n < delta_min + 1 or delta_max < delta_min:
        raise GenerationError(f"no connected graph on {n} vertices has Δ >= {delta_min} and Δ <= {delta_max}")

    rng = random.Random(seed)
    for attempt in range(GENERATION_ATTEMPTS):
        h = nx.Graph()
        h.add_node(0)
        budget = n - 1
        for _ in range(delta_min):
            length = min(rng.randint(1, 3), budget - (delta_min - h.degree(0) - 1))
            if length < 1:
                break
            _add_path(h, 0, None, length)
            budget -= length
        if h.degree(0) < delta_min:
            continue

        tree_target = rng.randint(budget // 3, budget // 2) if budget > 1 else budget
        while budget > 0 and n - budget - 1 < delta_min + tree_target:
            open_ends = sorted(v for v in h.nodes if 0 < h.degree(v) < delta_max and v != 0)
            if not open_ends:
                break
            length = min(rng.randint(1, 3), budget)
            _add_path(h, rng.choice(open_ends), None, length)
            budget -= length

        for _ in range(CHORD_TRIES):
            if budget <= 0 and not any(h.degree(v) == 1 for v in h.nodes):
                break
            leaves = sorted(v for v in h.nodes if h.degree(v) == 1)
            roomy = sorted(v for v in h.nodes if h.degree(v) < delta_max)
            if len(roomy) < 2:
                break
            a = rng.choice(leaves or roomy)
            b = rng.choice([v for v in (leaves if len(leaves) > 1 else roomy) if v != a] or [a])
            if a == b:
                break
            length = min(rng.randint(1, 4), budget)
            if length == 0 and h.has_edge(a, b):
                continue
            fresh = _add_path(h, a, b, length)
            if _mad_ok(h, mad_bound, strict):
                budget -= length
                continue
            h.remove_nodes_from(fresh)
            if not fresh:
                h.remove_edge(a, b)

        while budget > 0:
            open_ends = sorted(v for v in h.nodes if h.degree(v) < delta_max and v != 0)
            if not open_ends:
                break
            length = min(rng.randint(1, 3), budget)
            _add_path(h, rng.choice(open_ends), None, length)
            budget -= length

        g = Graph.from_networkx(h)
        if g.n != n or not g.is_connected() or not delta_min <= g.max_degree <= delta_max:
            continue
        if not _mad_ok(h, mad_bound, strict):
            continue
        logger.debug("random_sparse(n=%d, seed=%d): accepted on attempt %d", n, seed, attempt + 1)
        return g
    raise GenerationError(
        f"random_sparse(n={n}, bound={mad_bound}, Δ>={delta_min}, seed={seed}) failed after {GENERATION_ATTEMPTS} attempts"
    )


def random_threaded(
    n_base: int,
    k: int,
    seed: int,
    chords: int = 0,
    matching: bool = False,
    mad_bound: Optional[Fraction] = None,
    strict: bool = False,
) -> Graph:
    """
    A random connected cubic graph with every edge replaced by a k-thread.

    ``chords`` extra edges between nonadjacent 3-vertices lift those ends to
    degree 4. With ``matching`` the edges of a perfect matching stay bare, so
    each 3-vertex keeps one 3-neighbor; with k = 1 that is the graph whose
    G_23 is a union of even cycles.

    Raises:
        GenerationError: no graph found within the attempt budget
    """
    if n_base < 4 or n_base % 2:
        raise GenerationError(f"a cubic base needs an even order >= 4, got {n_base}")
    rng = random.Random(seed)
    for attempt in range(GENERATION_ATTEMPTS):
        h = nx.random_regular_graph(3, n_base, seed=rng.getrandbits(32))
        if not nx.is_connected(h):
            continue
        bare = set()
        if matching:
            pairs = nx.max_weight_matching(h, maxcardinality=True)
            if 2 * len(pairs) != n_base:
                continue
            bare = {(min(a, b), max(a, b)) for a, b in pairs}
        for _ in range(chords):
            open_ends = sorted(v for v in h.nodes if h.degree(v) == 3)
            pairs = [(a, b) for a in open_ends for b in open_ends if a < b and not h.has_edge(a, b)]
            if not pairs:
                break
            h.add_edge(*rng.choice(pairs))
        base = Graph.from_networkx(h)
        g, _ = subdivide(base, {e: 0 if e in bare else k for e in base.edges()})
        if mad_bound is not None and not _mad_ok(g.to_networkx(), mad_bound, strict):
            continue
        logger.debug("random_threaded(n_base=%d, k=%d, seed=%d): accepted on attempt %d",
                     n_base, k, seed, attempt + 1)
        return g
    raise GenerationError(
        f"random_threaded(n_base={n_base}, k={k}, chords={chords}, seed={seed}) failed after "
        f"{GENERATION_ATTEMPTS} attempts"
    )


# ============================================================================
# RANDOM PLANAR GRAPHS WITH LARGE GIRTH
# ============================================================================

PLANAR_BASES: Dict[str, Callable[[], Graph]] = {
    'octahedron': octahedron_graph,
    'antiprism': antiprism_graph,
    **{f'W{k}': (lambda k=k: wheel_graph(k)) for k in range(5, 9)},
    **{f'SQ{k}': (lambda k=k: stacked_quadrangulation(k, seed=k)) for k in range(1, 4)},
}


def _shortest_weighted_cycle(base: nx.Graph, counts: Dict[Edge, int]) -> Tuple[int, List[Edge]]:
    best_len, best_edges = math.inf, []
    for (u, v) in sorted(counts):
        base.remove_edge(u, v)
        try:
            path = nx.dijkstra_path(base, u, v, weight=lambda a, b, _d: counts[(min(a, b), max(a, b))] + 1)
        except nx.NetworkXNoPath:
            path = None
        base.add_edge(u, v)
        if path is None:
            continue
        cycle = [(u, v)] + [(min(a, b), max(a, b)) for a, b in zip(path, path[1:])]
        length = sum(counts[e] + 1 for e in cycle)
        if length < best_len:
            best_len, best_edges = length, cycle
    return best_len, best_edges


def random_planar_girth(
    n_target: int,
    girth_min: int,
    delta_min: int,
    seed: int,
    base: Optional[str] = None,
    spread: int = 1,
) -> Tuple[Graph, PlaneEmbedding]:
    """
    Embedded planar graph with girth >= girth_min and Δ >= delta_min.

    A curated embedded base is subdivided edge by edge with random,
    non-uniform counts: shortest cycles are lengthened until the girth bound
    holds, then random edges are subdivided further until n_target vertices.
    A larger ``spread`` draws the initial counts from a wider range, which
    leaves more short threads between the long ones.
    """
    if girth_min < 3:
        raise PreconditionError(f"girth_min must be >= 3, got {girth_min}")
    rng = random.Random(seed)
    names = [name for name in sorted(PLANAR_BASES) if PLANAR_BASES[name]().max_degree >= delta_min]
    if base is None:
        if not names:
            raise PreconditionError(f"no curated base has Δ >= {delta_min}")
        base = rng.choice(names)
    g = PLANAR_BASES[base]() if base in PLANAR_BASES else named_graph(base)
    emb = plane_embedding(g)
    net = g.to_networkx()

    base_girth = girth(g)
    if base_girth >= girth_min:
        counts = {e: 0 for e in g.edges()}
    else:
        k0 = math.ceil(girth_min / base_girth) - 1
        counts = {e: rng.randint(max(0, k0 - spread), k0 + spread) for e in g.edges()}
    while True:
        length, cycle = _shortest_weighted_cycle(net, counts)
        if length >= girth_min:
            break
        counts[rng.choice(cycle)] += 1
    edges = sorted(counts)
    while g.n + sum(counts.values()) < n_target:
        counts[rng.choice(edges)] += 1

    out, out_emb = subdivide(g, counts, emb)
    logger.debug("random_planar_girth: base %s, %d vertices, girth %s", base, out.n, girth(out))
    return out, out_emb


# ============================================================================
# CORPORA
# ============================================================================

@dataclass(frozen=True)
class CorpusInstance:
    graph: Graph
    embedding: Optional[PlaneEmbedding]
    provenance: str


@dataclass
class Corpus:
    seed: int
    cls: TheoremClass
    instances: List[CorpusInstance] = field(default_factory=list)

    def fingerprint(self) -> str:
        digest = hashlib.sha256()
        digest.update(f"{self.seed}\t{self.cls.value}\n".encode())
        for inst in self.instances:
            digest.update(inst.provenance.encode())
            digest.update(format_graph(inst.graph).encode())
            if inst.embedding is not None:
                digest.update(format_rotation(inst.embedding).encode())
        return digest.hexdigest()


def _fixed_instances(cls: TheoremClass) -> List[CorpusInstance]:
    """Curated instances, each meant to reach a different configuration of the class."""
    if cls == TheoremClass.MAD4219_D3:
        return [CorpusInstance(subdivide(petersen_graph(), 3)[0], None, "fixed:petersen/subdivide=3")]
    if cls == TheoremClass.MAD94_D4:
        return [
            CorpusInstance(subdivide(octahedron_graph(), 4)[0], None, "fixed:octahedron/subdivide=4"),
            CorpusInstance(subdivide(wheel_graph(4), 3)[0], None, "fixed:W4/subdivide=3"),
        ]
    if cls == TheoremClass.MAD52_D4:
        chorded = cube_graph().to_networkx()
        chorded.add_edge(0, 7)
        return [
            CorpusInstance(subdivide(octahedron_graph(), 2)[0], None, "fixed:octahedron/subdivide=2"),
            CorpusInstance(subdivide(Graph.from_networkx(chorded), 1)[0], None, "fixed:cube+0-7/subdivide=1"),
        ]
    if cls == TheoremClass.MAD52_D3:
        petersen = petersen_graph()
        spokes_bare = {(u, v): 0 if v == u + 5 else 1 for u, v in petersen.edges()}
        return [
            CorpusInstance(subdivide(petersen, 1)[0], None, "fixed:petersen/subdivide=1"),
            CorpusInstance(subdivide(petersen, spokes_bare)[0], None, "fixed:petersen/subdivide=1,spokes=0"),
        ]
    k = 1 if cls == TheoremClass.PLANAR_G9 else 2
    octahedron = octahedron_graph()
    twins = twin_dodecahedra_graph()
    g, emb = subdivide(octahedron, 2 * k, plane_embedding(octahedron))
    twin_g, twin_emb = subdivide(twins, k, plane_embedding(twins))
    return [
        CorpusInstance(g, emb, f"fixed:octahedron/subdivide={2 * k}"),
        CorpusInstance(twin_g, twin_emb, f"fixed:twin_dodecahedra/subdivide={k}"),
    ]


# (thread length, whether chords lift some ends to degree 4)
THREADED_MODES: Dict[TheoremClass, Tuple[int, bool]] = {
    TheoremClass.MAD52_D4: (1, True),
    TheoremClass.MAD52_D3: (1, False),
    TheoremClass.MAD94_D4: (3, True),
    TheoremClass.MAD4219_D3: (3, False),
}


def _generate(cls: TheoremClass, size: int, seed: int) -> CorpusInstance:
    rule = cls.rule
    rng = random.Random(seed)
    n = rng.randint(max(rule.delta_min + 2, size // 2), max(rule.delta_min + 2, size))
    if rule.planar:
        spread = rng.choice((1, 3))
        g, emb = random_planar_girth(n, rule.girth_min, rule.delta_min, seed, spread=spread)
        return CorpusInstance(
            g, emb, f"random_planar_girth(n={n}, girth>={rule.girth_min}, spread={spread}, seed={seed})"
        )
    if rng.random() < 0.5:
        k, chorded = THREADED_MODES[cls]
        n_base = max(6 if chorded else 4, 2 * round(n / (2 + 3 * k)))
        matching = cls == TheoremClass.MAD52_D3 and rng.random() < 0.5
        chords = n_base // 6 if chorded else 0
        g = random_threaded(n_base, k, seed, chords=chords,
                            matching=matching, mad_bound=rule.mad_bound, strict=rule.mad_strict)
        return CorpusInstance(
            g, None, f"random_threaded(n_base={n_base}, k={k}, chords={chords}, matching={matching}, seed={seed})"
        )
    g = random_sparse(n, rule.mad_bound, rule.delta_min, seed, strict=rule.mad_strict, delta_max=rule.delta_exact)
    return CorpusInstance(g, None, f"random_sparse(n={n}, mad<={rule.mad_bound}, seed={seed})")


def build_corpus(cls: TheoremClass, seed: int, count: int, size: int = 40, include_fixed: bool = True) -> Corpus:
    """
    ``count`` instances satisfying the class hypotheses, fixed instances first.

    Instance i is generated from its own seed drawn from the corpus seed, so
    a corpus is a pure function of (class, seed, count, size).

    Raises:
        GenerationError: a generator gave up, or an instance failed re-verification
    """
    corpus = Corpus(seed, cls)
    if count <= 0:
        return corpus
    if include_fixed:
        corpus.instances.extend(_fixed_instances(cls)[:count])
    seeds = random.Random(seed)
    while len(corpus.instances) < count:
        instance_seed = seeds.getrandbits(64)
        try:
            inst = _generate(cls, size, instance_seed)
        except GenerationError as e:
            logger.info("skipping seed %d: %s", instance_seed, e)
            continue
        corpus.instances.append(inst)

    for index, inst in enumerate(corpus.instances):
        check = check_hypotheses(inst.graph, cls, inst.embedding)
        if not check.ok:
            raise GenerationError(f"instance {index} ({inst.provenance}) fails re-verification: {check}")
    logger.info("corpus %s seed=%d: %d instances", cls.value, seed, len(corpus.instances))
    return corpus


def write_corpus(corpus: Corpus, directory: Path) -> Path:
    """
    Write one edge-list file (plus rotation file when embedded) per instance
    and a manifest with lines ``edges<TAB>rotation|-<TAB>provenance<TAB>class``.
    """
    directory = Path(directory)
    directory.mkdir(parents=True, exist_ok=True)
    lines = []
    for index, inst in enumerate(corpus.instances):
        edge_name = f"{index:04d}.edges"
        (directory / edge_name).write_text(format_graph(inst.graph), encoding="utf-8")
        rot_name = None
        if inst.embedding is not None:
            rot_name = f"{index:04d}.rot"
            (directory / rot_name).write_text(format_rotation(inst.embedding), encoding="utf-8")
        entry = CorpusManifestEntry(
            edge_path=edge_name, embedding_path=rot_name, provenance=inst.provenance, theorem_class=corpus.cls.value,
        )
        lines.append(entry.to_line())
    manifest = directory / "manifest.tsv"
    manifest.write_text("\n".join(lines) + ("\n" if lines else ""), encoding="utf-8")
    return manifest
