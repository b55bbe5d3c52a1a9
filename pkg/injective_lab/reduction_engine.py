"""
Proof-driven injective colorer

Descends by deleting reducible configurations until at most ``palette``
vertices remain, colors that base distinctly, then climbs back up extending
the coloring level by level. Local configurations are extended greedily in
their extension order; cycle configurations use their list-coloring handler.
A dead end falls back to an exact list coloring of the uncolored vertices and
then of the whole level, and the step is marked so callers can report it.
Only when both fail is a TheoremViolation raised.
"""

import logging
from collections import Counter
from dataclasses import dataclass, field
from fractions import Fraction
from typing import Any, Dict, FrozenSet, Iterable, List, Optional, Sequence, Tuple

import networkx as nx

from .config import load_settings
from .configurations import (
    Kind,
    Reduction,
    SUPPLEMENTARY_KINDS,
    Scene,
    TheoremClass,
    check_hypotheses,
    configuration_family,
    find_reduction,
    verify_reduction,
)
from .errors import HypothesisError, PreconditionError, TheoremViolation
from .exact_solvers import Coloring, SolverStatus, list_color_exact, validate_injective
from .graph_structure import Graph, PlaneEmbedding, format_rational, mad_exact, neighboring_graph
from .list_coloring import (
    color_degree_lists,
    color_theorem_A_nonuniform,
    color_theorem_A_surplus,
    is_degree_choosable,
)

logger = logging.getLogger(__name__)


@dataclass
class TraceStep:
    """One deletion in the descent, with how its extension was done on the way back up."""

    level: int
    graph: Graph
    embedding: Optional[PlaneEmbedding]
    reduction: Reduction
    to_top: Tuple[int, ...]
    family: str
    method: str = "pending"
    fallback: Optional[str] = None
    diagnostics: List[str] = field(default_factory=list)
    verified: Optional[bool] = None
    mad_after: Optional[Fraction] = None

    @property
    def remainder(self) -> Tuple[int, ...]:
        return tuple(v for v in range(self.graph.n) if v not in self.reduction.deletion_set)

    def to_dict(self) -> Dict[str, Any]:
        data: Dict[str, Any] = {
            'level': self.level,
            'n': self.graph.n,
            'm': self.graph.edge_count,
            'family': self.family,
            'reduction': self.reduction.relabel(self.to_top).to_dict(),
            'method': self.method,
        }
        if self.fallback:
            data['fallback'] = self.fallback
        if self.diagnostics:
            data['diagnostics'] = list(self.diagnostics)
        if self.verified is not None:
            data['verified'] = self.verified
        if self.mad_after is not None:
            data['mad_after'] = format_rational(self.mad_after)
        return data


@dataclass
class ConstructiveResult:
    cls: TheoremClass
    palette: int
    coloring: Coloring
    trace: List[TraceStep]

    @property
    def colors_used(self) -> int:
        return self.coloring.palette_size

    @property
    def fallbacks(self) -> int:
        return sum(1 for step in self.trace if step.fallback)

    def fallback_steps(self) -> List[TraceStep]:
        return [step for step in self.trace if step.fallback]

    @property
    def supplementary(self) -> int:
        """Steps that used a configuration outside the class's published list."""
        return sum(1 for step in self.trace if step.reduction.kind in SUPPLEMENTARY_KINDS)

    def kind_counts(self) -> Dict[str, int]:
        return dict(sorted(Counter(step.reduction.kind.value for step in self.trace).items()))

    def to_dict(self) -> Dict[str, Any]:
        return {
            'class': self.cls.value,
            'palette': self.palette,
            'colors_used': self.colors_used,
            'steps': len(self.trace),
            'kinds': self.kind_counts(),
            'methods': dict(sorted(Counter(step.method for step in self.trace).items())),
            'fallbacks': self.fallbacks,
            'supplementary': self.supplementary,
        }


# ============================================================================
# EXTENSION
# ============================================================================

class _Defer(Exception):
    """A kind-specific handler declined; greedy extension in the reduction's order takes over."""


class _ExtensionFailed(Exception):
    pass


class _Extension:
    """Mutable state while extending a coloring from a level's remainder to the level."""

    def __init__(self, step: TraceStep, colored: Dict[int, int], palette: int, budget: int):
        self.step = step
        self.g = step.graph
        self.red = step.reduction
        self.square = neighboring_graph(self.g)
        self.palette = palette
        self.budget = budget
        self.colored = colored
        self.repaired: List[int] = []

    @property
    def uncolored(self) -> List[int]:
        return [v for v in range(self.g.n) if v not in self.colored]

    def note(self, message: str) -> None:
        self.step.diagnostics.append(message)

    def repair(self) -> None:
        # two survivors sharing a deleted neighbor were not constrained below
        for d in sorted(self.red.deletion_set):
            by_color: Dict[int, List[int]] = {}
            for x in self.g.neighbors(d):
                if x in self.colored:
                    by_color.setdefault(self.colored[x], []).append(x)
            for group in by_color.values():
                for x in sorted(group)[1:]:
                    del self.colored[x]
                    self.repaired.append(x)
        if self.repaired:
            self.note(f"uncolored {len(self.repaired)} vertices sharing a deleted neighbor")

    def lists(self, vertices: Iterable[int]) -> Dict[int, FrozenSet[int]]:
        full = frozenset(range(self.palette))
        return {
            v: full - {self.colored[w] for w in self.square.neighbors(v) if w in self.colored}
            for v in vertices
        }

    def square_nx(self, vertices: Iterable[int]) -> nx.Graph:
        keep = set(vertices)
        h = nx.Graph()
        h.add_nodes_from(sorted(keep))
        h.add_edges_from((u, v) for u in keep for v in self.square.neighbors(u) if v in keep and u < v)
        return h

    def greedy(self, order: Sequence[int]) -> bool:
        """Give each vertex of ``order`` its smallest free color; False at the first dead end."""
        for v in order:
            taken = {self.colored[w] for w in self.square.neighbors(v) if w in self.colored}
            free = [c for c in range(self.palette) if c not in taken]
            if not free:
                self.note(f"greedy dead end at vertex {v}")
                return False
            self.colored[v] = free[0]
        return True

    def finish(self) -> None:
        rest = self.uncolored
        if rest and not self.greedy(rest):
            raise _Defer(f"could not finish {len(rest)} leftover vertices")

    def valid(self) -> bool:
        if len(self.colored) != self.g.n:
            return False
        if any(not 0 <= c < self.palette for c in self.colored.values()):
            return False
        return all(self.colored[u] != self.colored[v] for u, v in self.square.edges())

    def apply(self, result) -> None:
        self.colored.update(result.coloring.assignment)
        if result.fallback:
            self.note("INTERNAL-FALLBACK in list coloring: " + "; ".join(result.notes))


def _extend_bare_cycle(ext: _Extension) -> str:
    cycle = list(ext.red.anchors['cycle'])
    n = len(cycle)
    if n % 4 == 0:
        for i, v in enumerate(cycle):
            ext.colored[v] = (i // 2) % 2
        return "cycle-pattern"
    # G^(2) of the cycle: one odd cycle (n odd) or two odd cycles (n = 2 mod 4)
    strands = [cycle[0::2] + cycle[1::2]] if n % 2 else [cycle[0::2], cycle[1::2]]
    for strand in strands:
        for i, v in enumerate(strand):
            ext.colored[v] = 2 if (i == len(strand) - 1 and len(strand) % 2) else i % 2
    return "cycle-pattern"


def _extend_g23_cycle(ext: _Extension) -> str:
    u = ext.red.anchors['u']
    J = sorted(ext.red.deletion_set)
    k = ext.square_nx(J)
    parts = sorted((sorted(c) for c in nx.connected_components(k)), key=lambda c: c[0])
    if len(parts) != 2 or not any(u in c for c in parts):
        ext.note(f"J^(2) has {len(parts)} components, expected two with one containing u={u}")
        logger.warning("G_23 cycle at %d: J^(2) has %d components", u, len(parts))
        raise _Defer("component check failed")
    lists = ext.lists(J)
    ucomp, other = (parts[0], parts[1]) if u in parts[0] else (parts[1], parts[0])
    ext.apply(color_theorem_A_surplus(k.subgraph(ucomp).copy(), {v: lists[v] for v in ucomp}, u))
    ext.apply(color_theorem_A_nonuniform(k.subgraph(other).copy(), {v: lists[v] for v in other}))
    ext.finish()
    return "theorem-A(a)+A(b)"


def _extend_even_cycles(ext: _Extension) -> str:
    pending = ext.uncolored
    whole = ext.square_nx(pending)
    lists = ext.lists(pending)
    methods = set()
    for comp in sorted((sorted(c) for c in nx.connected_components(whole)), key=lambda c: c[0]):
        part = whole.subgraph(comp).copy()
        if len(comp) == 1:
            ext.colored[comp[0]] = min(lists[comp[0]])
            continue
        if not is_degree_choosable(part):
            ext.note(f"G^(2) component at {comp[0]} is a Gallai tree")
            logger.warning("even-cycles case: G^(2) component at %d is a Gallai tree", comp[0])
            raise _Defer("Gallai component")
        result = color_degree_lists(part, {v: lists[v] for v in comp})
        ext.apply(result)
        methods.add(result.method)
    ext.finish()
    return "theorem-B" if methods else "trivial"


def _extend_auxh_cycle(ext: _Extension) -> str:
    v = ext.red.anchors['v']
    J = sorted(ext.red.deletion_set)
    stripped = [x for x in J if ext.square.degree(x) in (2, 4)]
    core = [x for x in J if x not in stripped]
    k_hat = ext.square_nx(core)
    used = []
    for comp in sorted((sorted(c) for c in nx.connected_components(k_hat)), key=lambda c: c[0]):
        part = k_hat.subgraph(comp).copy()
        lists = ext.lists(comp)
        surplus = [x for x in comp if len(lists[x]) > part.degree(x)]
        if surplus:
            ext.apply(color_theorem_A_surplus(part, lists, surplus[0]))
            used.append("A(a)")
        elif is_degree_choosable(part):
            ext.apply(color_degree_lists(part, lists))
            used.append("B")
        else:
            if v not in comp:
                raise _Defer(f"Gallai component at {comp[0]} without v")
            zs = [
                z for z in ext.square.neighbors(v)
                if z not in ext.red.deletion_set and z in ext.colored and ext.square.degree(z) == 2
            ]
            if not zs:
                ext.note(f"no vertex z of G^(2)-degree 2 next to v={v}")
                logger.warning("AUXH cycle at %d: no z to uncolor", v)
                raise _Defer("missing z")
            z = zs[0]
            del ext.colored[z]
            ext.apply(color_theorem_A_surplus(part, ext.lists(comp), v))
            used.append("A(a)+z")
    order = sorted(stripped, key=lambda x: (-ext.square.degree(x), x))
    if not ext.greedy(order):
        raise _Defer("stripped vertices could not be colored last")
    ext.finish()
    return "K-hat:" + ",".join(used) if used else "K-hat"


_HANDLERS = {
    Kind.BARE_CYCLE: _extend_bare_cycle,
    Kind.G23_CYCLE: _extend_g23_cycle,
    Kind.G23_EVEN_CYCLES: _extend_even_cycles,
    Kind.AUXH_CYCLE: _extend_auxh_cycle,
}


def _fallback_local(ext: _Extension) -> bool:
    pending = ext.uncolored
    sub, origin = ext.square.subgraph(pending)
    lists = ext.lists(pending)
    result = list_color_exact(sub, {i: lists[v] for i, v in enumerate(origin)}, ext.budget)
    if result.status != SolverStatus.OK:
        ext.note(f"fallback-local: {result.status.value}")
        return False
    for i, c in result.coloring.assignment.items():
        ext.colored[origin[i]] = c
    return ext.valid()


def _fallback_global(ext: _Extension) -> bool:
    full = frozenset(range(ext.palette))
    result = list_color_exact(ext.square, {v: full for v in range(ext.g.n)}, ext.budget)
    if result.status != SolverStatus.OK:
        ext.note(f"fallback-global: {result.status.value}")
        return False
    ext.colored = dict(result.coloring.assignment)
    return ext.valid()


def _extend(step: TraceStep, colored: Dict[int, int], palette: int, budget: int) -> Dict[int, int]:
    ext = _Extension(step, colored, palette, budget)
    ext.repair()
    for v in ext.red.uncolor:
        ext.colored.pop(v, None)
    base = dict(ext.colored)

    handler = _HANDLERS.get(ext.red.kind)
    if handler is not None:
        try:
            method = handler(ext)
            if ext.valid():
                step.method = method
                return ext.colored
            ext.note(f"{method} produced an invalid coloring")
            step.fallback = "handler-deferred"
        except (_Defer, PreconditionError) as e:
            ext.note(f"{ext.red.kind.value} handler deferred: {e}")
            logger.warning("extension handler for %s deferred: %s", ext.red.kind.value, e)
            step.fallback = "handler-deferred"
        ext.colored = dict(base)

    first = [v for v in ext.red.extension_order if v not in ext.colored and v not in ext.repaired]
    order = ext.repaired + first
    order += [v for v in ext.uncolored if v not in order]
    if ext.greedy(order) and ext.valid():
        step.method = "greedy"
        return ext.colored
    ext.colored = dict(base)

    logger.warning("level %d (%s): constructive extension failed, trying exact fallbacks",
                   step.level, ext.red.kind.value)
    if _fallback_local(ext):
        step.method, step.fallback = "exact", "fallback-local"
        return ext.colored
    ext.colored = dict(base)
    if _fallback_global(ext):
        step.method, step.fallback = "exact", "fallback-global"
        return ext.colored
    raise _ExtensionFailed(f"no {palette}-extension for {ext.red.kind.value} at level {step.level}")


# ============================================================================
# DRIVER
# ============================================================================

def color_constructive(
    g: Graph,
    cls: TheoremClass,
    emb: Optional[PlaneEmbedding] = None,
    palette: Optional[int] = None,
    enforce_hypotheses: bool = True,
    budget: Optional[int] = None,
) -> ConstructiveResult:
    """
    Injectively color g with the class target palette by replaying the reductions.

    Args:
        g: input graph
        cls: theorem class whose configurations drive the recursion
        emb: plane embedding (planar classes)
        palette: override for the palette size (default: Δ+1 or Δ per class)
        enforce_hypotheses: reject inputs outside the class (default True)
        budget: node budget for each exact fallback

    Returns:
        ConstructiveResult with a validated coloring and the step trace

    Raises:
        HypothesisError: g violates the class hypotheses
        TheoremViolation: an irreducible level, or a level that could not be colored
    """
    if enforce_hypotheses:
        check = check_hypotheses(g, cls, emb)
        if not check.ok:
            raise HypothesisError(check)
    k = palette if palette is not None else cls.palette(g.max_degree)
    if g.n and k < 1:
        raise PreconditionError(f"palette must be positive, got {k}")
    budget = budget or load_settings().extension_budget

    steps: List[TraceStep] = []
    level, level_emb, to_top = g, emb, tuple(range(g.n))
    while level.n > k:
        scene = Scene(level, level_emb)
        family = configuration_family(cls, level.max_degree)
        reduction = find_reduction(level, cls, level_emb, scene=scene)
        if reduction is None:
            logger.error("falsification candidate: no %s configuration on a %d-vertex level", family, level.n)
            raise TheoremViolation(
                f"no reducible configuration of family {family} on a {level.n}-vertex level",
                level, cls.value, [s.to_dict() for s in steps],
            )
        steps.append(TraceStep(len(steps), level, level_emb, reduction, to_top, family))
        keep = [v for v in range(level.n) if v not in reduction.deletion_set]
        sub, origin = level.subgraph(keep)
        sub_emb = level_emb.restrict(keep)[0] if level_emb is not None else None
        level, level_emb, to_top = sub, sub_emb, tuple(to_top[o] for o in origin)

    logger.debug("base case: %d vertices colored distinctly", level.n)
    colors: Dict[int, int] = {v: v for v in range(level.n)}
    for step in reversed(steps):
        lifted = {step.remainder[i]: c for i, c in colors.items()}
        try:
            colors = _extend(step, lifted, k, budget)
        except _ExtensionFailed as e:
            logger.error("falsification candidate: %s", e)
            raise TheoremViolation(str(e), step.graph, cls.value, [s.to_dict() for s in steps])

    coloring = Coloring(dict(sorted(colors.items())))
    check = validate_injective(g, coloring)
    if not check.ok or (g.n and max(colors.values()) >= k):
        raise TheoremViolation(f"final coloring failed validation: {check.to_dict()}", g, cls.value,
                               [s.to_dict() for s in steps])
    return ConstructiveResult(cls, k, coloring, steps)


def replay_trace(
    g: Graph,
    cls: TheoremClass,
    emb: Optional[PlaneEmbedding] = None,
    palette: Optional[int] = None,
    enforce_hypotheses: bool = True,
) -> List[TraceStep]:
    """
    Run the colorer and re-verify every step of its trace.

    Each reduction is re-detected from scratch on its level graph; for mad
    classes the remainder's mad is recomputed and must not exceed the input's.
    """
    result = color_constructive(g, cls, emb, palette=palette, enforce_hypotheses=enforce_hypotheses)
    top_mad = mad_exact(g).value if (g.n and not cls.rule.planar) else None
    for step in result.trace:
        step.verified = verify_reduction(step.graph, step.reduction, step.embedding)
        if not step.verified:
            logger.error("trace step %d: %s not re-detected", step.level, step.reduction.kind.value)
        if top_mad is not None:
            remainder, _ = step.graph.subgraph(step.remainder)
            step.mad_after = mad_exact(remainder).value if remainder.n else Fraction(0)
            if step.mad_after > top_mad:
                step.diagnostics.append(
                    f"mad grew: {format_rational(step.mad_after)} > {format_rational(top_mad)}"
                )
    return result.trace
