"""
Exact coloring oracles

- chromatic_number: DSATUR branch and bound with a greedy-clique lower bound
- injective_chromatic_number: chromatic number of the neighboring graph G^(2)
- list_color_exact: exact list-coloring decision
- chromatic_index: edge coloring through the line graph (Class 1 / Class 2)
- validate_injective: checks a coloring against the common-neighbor rule

Budgets count search nodes, so results are reproducible; running out of budget
gives an explicit ABORTED result, never a guessed number.
"""

import logging
from dataclasses import dataclass, field
from enum import Enum
from typing import Dict, FrozenSet, List, Mapping, Optional, Sequence, Tuple

import networkx as nx

from .errors import PreconditionError
from .graph_structure import Graph, neighboring_graph

logger = logging.getLogger(__name__)

DEFAULT_BUDGET = 2_000_000


class SolverStatus(str, Enum):
    OK = "OK"
    UNSAT = "UNSAT"
    ABORTED = "ABORTED"


@dataclass(frozen=True)
class Coloring:
    """Total map vertex -> color id."""

    assignment: Mapping[int, int]

    @property
    def palette_size(self) -> int:
        return len(set(self.assignment.values()))

    def __getitem__(self, v: int) -> int:
        return self.assignment[v]

    def to_dict(self) -> Dict[str, int]:
        return {str(v): c for v, c in sorted(self.assignment.items())}


ListAssignment = Mapping[int, FrozenSet[int]]


@dataclass(frozen=True)
class SolverResult:
    """Outcome of an exact search plus its certificate."""

    status: SolverStatus
    value: Optional[int] = None
    coloring: Optional[Coloring] = None
    nodes: int = 0
    lower_bound: int = 0
    refuted: Tuple[int, ...] = ()

    @property
    def ok(self) -> bool:
        return self.status == SolverStatus.OK


@dataclass(frozen=True)
class EdgeColoringResult:
    status: SolverStatus
    value: Optional[int] = None
    tag: Optional[str] = None
    coloring: Mapping[Tuple[int, int], int] = field(default_factory=dict)
    nodes: int = 0


@dataclass(frozen=True)
class InjectiveCheck:
    ok: bool
    pair: Optional[Tuple[int, int]] = None
    common_neighbor: Optional[int] = None

    def to_dict(self) -> Dict:
        if self.ok:
            return {'ok': True}
        return {'ok': False, 'pair': list(self.pair), 'common_neighbor': self.common_neighbor}


class _BudgetExhausted(Exception):
    pass


class _Budget:
    def __init__(self, limit: int):
        self.limit = limit
        self.used = 0

    def spend(self) -> None:
        self.used += 1
        if self.used > self.limit:
            raise _BudgetExhausted()


# ============================================================================
# VERTEX COLORING
# ============================================================================

def greedy_clique(g: Graph) -> Tuple[int, ...]:
    """Largest clique found by growing from each vertex through high-degree neighbors."""
    best: List[int] = [0] if g.n else []
    for v in range(g.n):
        clique = [v]
        for w in sorted(g.neighbors(v), key=lambda x: (-g.degree(x), x)):
            if all(g.has_edge(w, x) for x in clique):
                clique.append(w)
        if len(clique) > len(best):
            best = clique
    return tuple(sorted(best))


def _k_coloring(adj: Sequence[Sequence[int]], k: int, budget: _Budget) -> Optional[List[int]]:
    n = len(adj)
    colors = [-1] * n
    counts = [[0] * k for _ in range(n)]
    saturation = [0] * n
    degree = [len(a) for a in adj]

    def pick() -> int:
        best, key = -1, None
        for v in range(n):
            if colors[v] < 0:
                candidate = (saturation[v], degree[v], -v)
                if key is None or candidate > key:
                    best, key = v, candidate
        return best

    def assign(v: int, c: int) -> None:
        colors[v] = c
        for w in adj[v]:
            counts[w][c] += 1
            if counts[w][c] == 1:
                saturation[w] += 1

    def unassign(v: int, c: int) -> None:
        colors[v] = -1
        for w in adj[v]:
            counts[w][c] -= 1
            if counts[w][c] == 0:
                saturation[w] -= 1

    def search(colored: int, used: int) -> bool:
        if colored == n:
            return True
        budget.spend()
        v = pick()
        # colors above used+1 are interchangeable with used+1
        for c in range(min(used + 1, k)):
            if counts[v][c] == 0:
                assign(v, c)
                if search(colored + 1, max(used, c + 1)):
                    return True
                unassign(v, c)
        return False

    return colors if search(0, 0) else None


def chromatic_number(g: Graph, budget: int = DEFAULT_BUDGET, lower_bound: int = 0) -> SolverResult:
    """
    Exact χ(g).

    Args:
        g: graph to color
        budget: maximum number of search nodes over all palette sizes tried
        lower_bound: a known lower bound (e.g. Δ when g is a neighboring graph)

    Returns:
        SolverResult with the optimal coloring, or ABORTED with the best bounds
    """
    if g.n == 0:
        return SolverResult(SolverStatus.OK, 0, Coloring({}))

    lower = max(len(greedy_clique(g)), lower_bound, 1)
    greedy = nx.coloring.greedy_color(g.to_networkx(), strategy="saturation_largest_first")
    upper = max(greedy.values()) + 1
    incumbent = Coloring(dict(sorted(greedy.items())))
    tracker = _Budget(budget)
    refuted: List[int] = []

    try:
        for k in range(lower, upper):
            found = _k_coloring(g.adjacency, k, tracker)
            if found is not None:
                return SolverResult(
                    SolverStatus.OK, k, Coloring(dict(enumerate(found))),
                    tracker.used, lower, tuple(refuted),
                )
            refuted.append(k)
    except _BudgetExhausted:
        known = max([lower] + [k + 1 for k in refuted])
        logger.info("chromatic_number aborted after %d nodes (bounds %d..%d)", tracker.used, known, upper)
        return SolverResult(SolverStatus.ABORTED, None, incumbent, tracker.used, known, tuple(refuted))

    return SolverResult(SolverStatus.OK, upper, incumbent, tracker.used, lower, tuple(refuted))


def injective_chromatic_number(g: Graph, budget: int = DEFAULT_BUDGET) -> SolverResult:
    """χ_i(g) = χ(G^(2)); Δ(g) seeds the lower bound since N(v) is a clique of G^(2)."""
    return chromatic_number(neighboring_graph(g), budget, lower_bound=g.max_degree)


# ============================================================================
# LIST COLORING
# ============================================================================

def list_color_exact(g: Graph, lists: ListAssignment, budget: int = DEFAULT_BUDGET) -> SolverResult:
    """
    Decide whether g has a proper coloring with c(v) in lists[v].

    Components are solved independently; inside a component the vertex with
    the fewest available colors is branched on first (lowest id on ties).
    """
    for v in range(g.n):
        if v not in lists:
            raise PreconditionError(f"vertex {v} has no list", {'vertex': v})

    tracker = _Budget(budget)
    options = {v: sorted(lists[v]) for v in range(g.n)}
    colors: Dict[int, int] = {}

    def available(v: int) -> List[int]:
        taken = {colors[w] for w in g.neighbors(v) if w in colors}
        return [c for c in options[v] if c not in taken]

    def search(pending: List[int]) -> bool:
        if not pending:
            return True
        tracker.spend()
        v = min(pending, key=lambda x: (len(available(x)), x))
        rest = [x for x in pending if x != v]
        for c in available(v):
            colors[v] = c
            if search(rest):
                return True
            del colors[v]
        return False

    components = sorted(nx.connected_components(g.to_networkx()), key=min)
    try:
        for comp in components:
            if not search(sorted(comp)):
                return SolverResult(SolverStatus.UNSAT, nodes=tracker.used)
    except _BudgetExhausted:
        return SolverResult(SolverStatus.ABORTED, nodes=tracker.used)
    return SolverResult(SolverStatus.OK, coloring=Coloring(dict(sorted(colors.items()))), nodes=tracker.used)


def is_list_coloring(g: Graph, lists: ListAssignment, coloring: Coloring) -> bool:
    """True iff coloring is total, proper on g, and respects the lists."""
    a = coloring.assignment
    if any(v not in a or a[v] not in lists[v] for v in range(g.n)):
        return False
    return all(a[u] != a[v] for u, v in g.edges())


# ============================================================================
# EDGE COLORING
# ============================================================================

def chromatic_index(g: Graph, budget: int = DEFAULT_BUDGET) -> EdgeColoringResult:
    """
    Exact χ'(g) in {Δ, Δ+1}, solved as vertex coloring of the line graph.

    Returns:
        EdgeColoringResult tagged CLASS1 (χ' = Δ) or CLASS2 (χ' = Δ+1)
    """
    delta = g.max_degree
    if delta < 1:
        raise PreconditionError("chromatic index needs at least one edge", {'delta': delta})

    line = nx.line_graph(g.to_networkx())
    nodes = sorted(line.nodes())
    lg = Graph.from_networkx(line)
    tracker = _Budget(budget)

    try:
        for k, tag in ((delta, "CLASS1"), (delta + 1, "CLASS2")):
            found = _k_coloring(lg.adjacency, k, tracker)
            if found is not None:
                edge_colors = {tuple(sorted(nodes[i])): c for i, c in enumerate(found)}
                return EdgeColoringResult(SolverStatus.OK, k, tag, dict(sorted(edge_colors.items())), tracker.used)
    except _BudgetExhausted:
        return EdgeColoringResult(SolverStatus.ABORTED, nodes=tracker.used)
    raise AssertionError(f"no {delta + 1}-edge-coloring found; Vizing bound contradicted")


# ============================================================================
# VALIDATION
# ============================================================================

def validate_injective(g: Graph, coloring: Coloring) -> InjectiveCheck:
    """
    OK iff no two vertices with a common neighbor share a color.

    The reported violation is the smallest (pair, common neighbor) triple.
    """
    a = coloring.assignment
    for v in range(g.n):
        if v not in a:
            raise PreconditionError(f"coloring is partial: vertex {v} uncolored", {'vertex': v})

    worst = None
    for center in range(g.n):
        nbrs = g.neighbors(center)
        for i, x in enumerate(nbrs):
            for y in nbrs[i + 1:]:
                if a[x] == a[y]:
                    candidate = (x, y, center)
                    if worst is None or candidate < worst:
                        worst = candidate
    if worst is None:
        return InjectiveCheck(True)
    return InjectiveCheck(False, (worst[0], worst[1]), worst[2])
