"""
Theorem classes and reducible configurations

A theorem class fixes the hypotheses (Δ, mad or girth) and the palette the
constructive colorer must meet. Each configuration kind has a detector that
lists every occurrence in a graph; find_reduction walks the configuration
family matching the class and the current maximum degree and returns the
first kind that occurs, choosing the occurrence with the smallest sorted
anchor tuple.
"""

import logging
from dataclasses import dataclass, field, replace
from enum import Enum
from fractions import Fraction
from functools import cached_property
from typing import Any, Callable, Dict, FrozenSet, Iterator, List, Mapping, Optional, Sequence, Tuple

import networkx as nx

from .errors import PreconditionError
from .graph_structure import (
    AuxiliaryGraph,
    Graph,
    PlaneEmbedding,
    ThreadDecomposition,
    ThreadEnd,
    build_auxiliary_H,
    build_G23,
    format_rational,
    girth,
    mad_exact,
    neighboring_graph,
    thread_decomposition,
)

logger = logging.getLogger(__name__)


# ============================================================================
# THEOREM CLASSES
# ============================================================================

@dataclass(frozen=True)
class ClassRule:
    description: str
    delta_min: int
    delta_exact: Optional[int] = None
    mad_bound: Optional[Fraction] = None
    mad_strict: bool = False
    girth_min: Optional[int] = None
    palette_offset: int = 0

    @property
    def planar(self) -> bool:
        return self.girth_min is not None


class TheoremClass(str, Enum):
    MAD52_D4 = "MAD52_D4"
    MAD52_D3 = "MAD52_D3"
    MAD94_D4 = "MAD94_D4"
    MAD4219_D3 = "MAD4219_D3"
    PLANAR_G9 = "PLANAR_G9"
    PLANAR_G13 = "PLANAR_G13"

    @classmethod
    def parse(cls, text: str) -> "TheoremClass":
        try:
            return cls(text.strip().upper())
        except ValueError:
            choices = ", ".join(c.value.lower() for c in cls)
            raise ValueError(f"unknown class {text!r} (choose from {choices})")

    @property
    def rule(self) -> ClassRule:
        return _CLASS_RULES[self]

    def palette(self, delta: int) -> int:
        """Target palette size: Δ+1 or Δ."""
        return delta + self.rule.palette_offset

    @property
    def target_label(self) -> str:
        return "Δ+1" if self.rule.palette_offset else "Δ"


_CLASS_RULES: Dict[TheoremClass, ClassRule] = {
    TheoremClass.MAD52_D4: ClassRule("mad <= 5/2, Δ >= 4", 4, mad_bound=Fraction(5, 2), palette_offset=1),
    TheoremClass.MAD52_D3: ClassRule("mad <= 5/2, Δ = 3", 3, 3, mad_bound=Fraction(5, 2), palette_offset=1),
    TheoremClass.MAD94_D4: ClassRule("mad <= 9/4, Δ >= 4", 4, mad_bound=Fraction(9, 4)),
    TheoremClass.MAD4219_D3: ClassRule("mad < 42/19, Δ = 3", 3, 3, mad_bound=Fraction(42, 19), mad_strict=True),
    TheoremClass.PLANAR_G9: ClassRule("planar, girth >= 9, Δ >= 4", 4, girth_min=9, palette_offset=1),
    TheoremClass.PLANAR_G13: ClassRule("planar, girth >= 13, Δ >= 4", 4, girth_min=13),
}


@dataclass(frozen=True)
class HypothesisCheck:
    """Verdict of check_hypotheses; on failure, the observed value against the bound."""

    cls: TheoremClass
    ok: bool
    failed: Optional[str] = None
    observed: Optional[str] = None
    bound: Optional[str] = None
    mad: Optional[Fraction] = None
    girth: Optional[float] = None

    def __str__(self) -> str:
        if self.ok:
            return f"{self.cls.value}: hypotheses hold"
        return f"{self.cls.value}: {self.failed} violated ({self.observed} vs bound {self.bound})"

    def to_dict(self) -> Dict[str, Any]:
        data: Dict[str, Any] = {'class': self.cls.value, 'ok': self.ok}
        if not self.ok:
            data.update({'failed': self.failed, 'observed': self.observed, 'bound': self.bound})
        if self.mad is not None:
            data['mad'] = format_rational(self.mad)
        if self.girth is not None:
            data['girth'] = None if self.girth == float("inf") else int(self.girth)
        return data


def check_hypotheses(g: Graph, cls: TheoremClass, emb: Optional[PlaneEmbedding] = None) -> HypothesisCheck:
    """
    Check Δ, then the embedding and girth (planar classes) or the exact mad bound.

    Returns:
        HypothesisCheck; a failure names the hypothesis and both sides of it
    """
    rule = cls.rule
    delta = g.max_degree
    if rule.delta_exact is not None and delta != rule.delta_exact:
        return HypothesisCheck(cls, False, "delta", f"Δ = {delta}", f"Δ = {rule.delta_exact}")
    if delta < rule.delta_min:
        return HypothesisCheck(cls, False, "delta", f"Δ = {delta}", f"Δ >= {rule.delta_min}")

    if rule.planar:
        if emb is None:
            return HypothesisCheck(cls, False, "embedding", "no embedding", "plane embedding required")
        if emb.host != g:
            return HypothesisCheck(cls, False, "embedding", "embedding of another graph", "embedding of the input")
        value = girth(g)
        if value < rule.girth_min:
            return HypothesisCheck(cls, False, "girth", f"girth = {value}", f"girth >= {rule.girth_min}", girth=value)
        return HypothesisCheck(cls, True, girth=value)

    mad = mad_exact(g).value
    bound = rule.mad_bound
    holds = mad < bound if rule.mad_strict else mad <= bound
    if not holds:
        relation = "<" if rule.mad_strict else "<="
        return HypothesisCheck(
            cls, False, "mad", f"mad = {format_rational(mad)}", f"mad {relation} {format_rational(bound)}", mad=mad
        )
    return HypothesisCheck(cls, True, mad=mad)


# ============================================================================
# REDUCTIONS
# ============================================================================

class Kind(str, Enum):
    ONE_VERTEX = "ONE_VERTEX"
    BARE_CYCLE = "BARE_CYCLE"
    TWO_THREAD = "TWO_THREAD"
    FOUR_THREAD = "FOUR_THREAD"
    THREE_THREAD_3END = "THREE_THREAD_3END"
    L6_CONFIG = "L6_CONFIG"
    H5A_CONFIG = "H5A_CONFIG"
    H5A_CASE2D = "H5A_CASE2D"
    RC4 = "RC4"
    RC5 = "RC5"
    RC6 = "RC6"
    RC7 = "RC7"
    G23_CYCLE = "G23_CYCLE"
    G23_EVEN_CYCLES = "G23_EVEN_CYCLES"
    AUXH_CYCLE = "AUXH_CYCLE"


GLOBAL_KINDS = frozenset({Kind.G23_CYCLE, Kind.G23_EVEN_CYCLES, Kind.AUXH_CYCLE})


@dataclass(frozen=True)
class Reduction:
    """
    One occurrence of a reducible configuration.

    ``deletion_set`` is removed before recursing; ``uncolor`` lists surviving
    vertices whose colors are dropped again before extending.
    """

    kind: Kind
    deletion_set: FrozenSet[int]
    extension_order: Tuple[int, ...]
    anchors: Mapping[str, Any]
    uncolor: FrozenSet[int] = frozenset()
    notes: Tuple[str, ...] = field(default=(), compare=False)

    @property
    def key(self) -> Tuple[int, ...]:
        vertices = set()
        for value in self.anchors.values():
            if isinstance(value, int):
                vertices.add(value)
            else:
                vertices.update(value)
        return tuple(sorted(vertices))

    def relabel(self, mapping: Sequence[int]) -> "Reduction":
        """Same reduction with vertex v renamed mapping[v]."""
        def move(value):
            return mapping[value] if isinstance(value, int) else tuple(mapping[x] for x in value)

        return Reduction(
            self.kind,
            frozenset(mapping[v] for v in self.deletion_set),
            tuple(mapping[v] for v in self.extension_order),
            {name: move(value) for name, value in self.anchors.items()},
            frozenset(mapping[v] for v in self.uncolor),
            self.notes,
        )

    def to_dict(self) -> Dict[str, Any]:
        data = {
            'kind': self.kind.value,
            'deletion_set': sorted(self.deletion_set),
            'extension_order': list(self.extension_order),
            'anchors': {k: (v if isinstance(v, int) else list(v)) for k, v in sorted(self.anchors.items())},
        }
        if self.uncolor:
            data['uncolor'] = sorted(self.uncolor)
        if self.notes:
            data['notes'] = list(self.notes)
        return data


class Scene:
    """One graph (plus optional embedding) with its derived structures computed on demand."""

    def __init__(self, g: Graph, emb: Optional[PlaneEmbedding] = None):
        self.g = g
        self.emb = emb

    @cached_property
    def threads(self) -> ThreadDecomposition:
        return thread_decomposition(self.g)

    @cached_property
    def square(self) -> Graph:
        return neighboring_graph(self.g)

    @cached_property
    def g23(self) -> Graph:
        return build_G23(self.g).graph

    @cached_property
    def mad(self) -> Fraction:
        return mad_exact(self.g).value

    @cached_property
    def aux(self) -> Optional[AuxiliaryGraph]:
        try:
            return build_auxiliary_H(self.g)
        except PreconditionError as e:
            logger.debug("auxiliary H unavailable: %s", e)
            return None

    def other_neighbor(self, x: int, v: int) -> int:
        """The neighbor of the 2-vertex x that is not v."""
        a, b = self.g.neighbors(x)
        return b if a == v else a

    def off_face(self, v: int, on_face: Sequence[int]) -> Optional[int]:
        rest = [w for w in self.g.neighbors(v) if w not in on_face]
        return rest[0] if len(rest) == 1 else None


Detector = Callable[[Scene], Iterator[Reduction]]


# ============================================================================
# LOCAL DETECTORS
# ============================================================================

def _one_vertex(s: Scene) -> Iterator[Reduction]:
    for v in range(s.g.n):
        if s.g.degree(v) <= 1:
            yield Reduction(Kind.ONE_VERTEX, frozenset({v}), (v,), {'v': v})


def _bare_cycle(s: Scene) -> Iterator[Reduction]:
    for comp in s.threads.bare_cycles():
        yield Reduction(Kind.BARE_CYCLE, frozenset(comp.vertices), comp.vertices, {'cycle': comp.vertices})


def _thread_anchors(u: int, v: int, interior: Sequence[int]) -> Dict[str, Any]:
    return {'u': u, 'v': v, 'thread': tuple(interior)}


def _two_thread(s: Scene) -> Iterator[Reduction]:
    for t in s.threads.threads:
        if t.length >= 2:
            yield Reduction(Kind.TWO_THREAD, frozenset(t.interior), t.interior, _thread_anchors(t.u, t.v, t.interior))


def _four_thread(s: Scene) -> Iterator[Reduction]:
    for t in s.threads.threads:
        if t.length >= 4:
            xs = t.interior
            order = (xs[0], xs[-1]) + xs[1:-1]
            yield Reduction(Kind.FOUR_THREAD, frozenset(xs), order, _thread_anchors(t.u, t.v, xs))


def _three_thread_3end(s: Scene) -> Iterator[Reduction]:
    g = s.g
    for t in s.threads.threads:
        if t.length != 3:
            continue
        if g.degree(t.u) == 3:
            u, v, xs = t.u, t.v, t.interior
        elif g.degree(t.v) == 3:
            u, v, xs = t.v, t.u, tuple(reversed(t.interior))
        else:
            continue
        yield Reduction(Kind.THREE_THREAD_3END, frozenset(xs), (xs[2], xs[0], xs[1]), _thread_anchors(u, v, xs))


def _l6_config(s: Scene) -> Iterator[Reduction]:
    g = s.g
    for v in range(g.n):
        if g.degree(v) != 3 or any(g.degree(x) != 2 for x in g.neighbors(v)):
            continue
        linked = [x for x in g.neighbors(v) if g.degree(s.other_neighbor(x, v)) == 3]
        if not linked:
            continue
        u = min(linked)
        x, y = sorted(w for w in g.neighbors(v) if w != u)
        yield Reduction(
            Kind.L6_CONFIG,
            frozenset((v,) + g.neighbors(v)),
            (v, x, y, u),
            {'v': v, 'u': u, 'x': x, 'y': y},
        )


def _rc4(s: Scene) -> Iterator[Reduction]:
    g = s.g
    for t in s.threads.threads:
        if t.length == 2 and not t.is_loop and g.degree(t.u) == 3 and g.degree(t.v) == 3:
            yield Reduction(Kind.RC4, frozenset(t.interior), t.interior, _thread_anchors(t.u, t.v, t.interior))


def _three_clean_ends(s: Scene, v: int) -> Optional[List[ThreadEnd]]:
    ends = list(s.threads.threads_at(v))
    if s.g.degree(v) != 3 or len(ends) != 3:
        return None
    if any(te.thread.is_loop for te in ends) or len({te.thread for te in ends}) != 3:
        return None
    return sorted(ends, key=lambda te: (te.length, te.first))


def _rc5(s: Scene) -> Iterator[Reduction]:
    for v in range(s.g.n):
        ends = _three_clean_ends(s, v)
        if ends is None or [te.length for te in ends] != [1, 2, 2]:
            continue
        p, q, r = ends
        yield Reduction(
            Kind.RC5,
            frozenset((v,) + p.path + q.path + r.path),
            (q.path[1], r.path[1], p.path[0], q.path[0], r.path[0], v),
            {'v': v, 'p': p.path, 'q': q.path, 'r': r.path},
        )


def _rc6(s: Scene) -> Iterator[Reduction]:
    g = s.g
    for v in range(g.n):
        ends = _three_clean_ends(s, v)
        if ends is None or [te.length for te in ends] != [1, 1, 2]:
            continue
        ones, q = ends[:2], ends[2]
        heavy = [te for te in ones if g.degree(te.far_end) == 3]
        if not heavy:
            continue
        p = heavy[0]
        r = ones[1] if p is ones[0] else ones[0]
        yield Reduction(
            Kind.RC6,
            frozenset((v,) + p.path + q.path + r.path),
            (q.path[1], r.path[0], p.path[0], q.path[0], v),
            {'v': v, 'p': p.path, 'q': q.path, 'r': r.path},
        )


def _rc7(s: Scene) -> Iterator[Reduction]:
    for v in range(s.g.n):
        ends = _three_clean_ends(s, v)
        if ends is None or [te.length for te in ends] != [2, 2, 2]:
            continue
        x, y, z = ends
        yield Reduction(
            Kind.RC7,
            frozenset((v,) + x.path + y.path + z.path),
            (x.path[1], y.path[1], z.path[1], x.path[0], y.path[0], z.path[0], v),
            {'v': v, 'x': x.path, 'y': y.path, 'z': z.path},
            notes=("supplementary configuration, outside the RC1-RC6 list",),
        )


# ============================================================================
# FACE DETECTORS (plane embedding required)
# ============================================================================

def _face_windows(s: Scene, size: int, exact_length: Optional[int] = None) -> Iterator[Tuple[int, ...]]:
    """Every run of ``size`` consecutive distinct vertices on a face, in both directions."""
    for walk in s.emb.faces:
        length = len(walk)
        if exact_length is not None and length != exact_length:
            continue
        if length < size:
            continue
        for i in range(length):
            window = tuple(walk[(i + j) % length] for j in range(size))
            if len(set(window)) != size:
                continue
            yield window
            yield tuple(reversed(window))


def _h5a_config(s: Scene) -> Iterator[Reduction]:
    if s.emb is None:
        return
    g = s.g
    for window in _face_windows(s, 5):
        if tuple(g.degree(x) for x in window) != (2, 3, 2, 3, 2):
            continue
        u1, u2, u3, u4, u5 = window
        outside = s.off_face(u2, (u1, u3))
        if outside is None or g.degree(outside) > 3:
            continue
        yield Reduction(
            Kind.H5A_CONFIG,
            frozenset({u3}),
            (u2, u4, u1, u5, u3),
            {'u1': u1, 'u2': u2, 'u3': u3, 'u4': u4, 'u5': u5},
            uncolor=frozenset({u1, u2, u4, u5}),
        )


_CASE2D_DEGREES = (3, 2, 3, 2, None, 2, 3, 2, 3)


def _h5a_case2d(s: Scene) -> Iterator[Reduction]:
    if s.emb is None:
        return
    g = s.g
    for window in _face_windows(s, 9, exact_length=9):
        if any(
            (g.degree(x) < 4) if want is None else (g.degree(x) != want)
            for x, want in zip(window, _CASE2D_DEGREES)
        ):
            continue
        v1, w1, v2, w2, v3, w3, v4, w4, v5 = window
        u1 = s.off_face(v1, (v5, w1))
        u2 = s.off_face(v2, (w1, w2))
        if u1 is None or u2 is None:
            continue
        anchors = {
            'v1': v1, 'w1': w1, 'v2': v2, 'w2': w2, 'v3': v3,
            'w3': w3, 'v4': v4, 'w4': w4, 'v5': v5, 'u1': u1, 'u2': u2,
        }
        deleted = frozenset({w1, v2, w2})
        if g.degree(u1) < 4:
            yield Reduction(Kind.H5A_CASE2D, deleted, (w1, w2, v2, v1, w4), anchors, uncolor=frozenset({v1, w4}))
        elif g.degree(u2) < 4:
            yield Reduction(Kind.H5A_CASE2D, deleted, (w1, w2, v2), anchors)


# ============================================================================
# GLOBAL DETECTORS
# ============================================================================

def _g23_cycle(s: Scene) -> Iterator[Reduction]:
    g, g23 = s.g, s.g23
    net = g23.to_networkx()
    for u in range(g.n):
        if g.degree(u) != 3 or g23.degree(u) != 3:
            continue
        best = None
        for a in g23.neighbors(u):
            net.remove_edge(u, a)
            try:
                path = nx.shortest_path(net, a, u)
            except nx.NetworkXNoPath:
                path = None
            net.add_edge(u, a)
            if path is None:
                continue
            cycle = (u,) + tuple(path[:-1])
            if best is None or (len(cycle), cycle) < (len(best), best):
                best = cycle
        if best is None:
            continue
        x, y = best[1], best[-1]
        w = next(z for z in g.neighbors(u) if z not in (x, y))
        yield Reduction(
            Kind.G23_CYCLE,
            frozenset(best) | {w},
            best + (w,),
            {'u': u, 'x': x, 'y': y, 'w': w, 'cycle': best},
        )


def _g23_even_cycles(s: Scene) -> Iterator[Reduction]:
    g, g23 = s.g, s.g23
    if g.n == 0 or any(g.degree(v) not in (2, 3) or g23.degree(v) != 2 for v in range(g.n)):
        return
    components = sorted(tuple(sorted(c)) for c in nx.connected_components(g23.to_networkx()))
    yield Reduction(
        Kind.G23_EVEN_CYCLES,
        frozenset(range(g.n)),
        tuple(range(g.n)),
        {},
        notes=(f"G_23 is a union of {len(components)} even cycles",),
    )


def _walk_thread(t, start: int) -> Tuple[int, ...]:
    return t.interior if t.u == start else tuple(reversed(t.interior))


def _auxh_cycle(s: Scene) -> Iterator[Reduction]:
    aux = s.aux
    if aux is None:
        return
    g = s.g
    h = aux.multigraph()
    for v in aux.hat_vertices:
        if aux.degree(v) != 3:
            continue
        best = None
        for _v, a, key in sorted(h.edges(v, keys=True), key=lambda e: (e[1], e[2])):
            first = h[v][a][key]['thread']
            if a == v:
                steps = [(v, v, first)]
            else:
                h.remove_edge(v, a, key)
                try:
                    path = nx.shortest_path(h, a, v)
                    steps = [(v, a, first)]
                    for p, q in zip(path, path[1:]):
                        k = min(h[p][q])
                        steps.append((p, q, h[p][q][k]['thread']))
                except nx.NetworkXNoPath:
                    steps = None
                h.add_edge(v, a, key=key, thread=first)
                if steps is None:
                    continue
            walk: List[int] = []
            for p, _q, t in steps:
                walk.append(p)
                walk.extend(_walk_thread(t, p))
            if len(set(walk)) != len(walk):
                continue
            hub = tuple(p for p, _q, _t in steps)
            if best is None or (len(walk), walk) < (len(best[0]), best[0]):
                best = (walk, hub)
        if best is None:
            continue
        walk, hub = best
        x, y = walk[1], walk[-1]
        rest = [z for z in g.neighbors(v) if z not in (x, y)]
        if len(rest) != 1 or rest[0] in walk:
            continue
        w = rest[0]
        yield Reduction(
            Kind.AUXH_CYCLE,
            frozenset(walk) | {w},
            tuple(walk) + (w,),
            {'v': v, 'w': w, 'x': x, 'y': y, 'cycle': tuple(walk), 'h_cycle': hub},
        )


DETECTORS: Dict[Kind, Detector] = {
    Kind.ONE_VERTEX: _one_vertex,
    Kind.BARE_CYCLE: _bare_cycle,
    Kind.TWO_THREAD: _two_thread,
    Kind.FOUR_THREAD: _four_thread,
    Kind.THREE_THREAD_3END: _three_thread_3end,
    Kind.L6_CONFIG: _l6_config,
    Kind.H5A_CONFIG: _h5a_config,
    Kind.H5A_CASE2D: _h5a_case2d,
    Kind.RC4: _rc4,
    Kind.RC5: _rc5,
    Kind.RC6: _rc6,
    Kind.RC7: _rc7,
    Kind.G23_CYCLE: _g23_cycle,
    Kind.G23_EVEN_CYCLES: _g23_even_cycles,
    Kind.AUXH_CYCLE: _auxh_cycle,
}


# ============================================================================
# FAMILIES
# ============================================================================

FAMILIES: Dict[str, Tuple[Kind, ...]] = {
    "paths": (Kind.ONE_VERTEX, Kind.BARE_CYCLE),
    "lemma6": (Kind.ONE_VERTEX, Kind.BARE_CYCLE, Kind.TWO_THREAD, Kind.L6_CONFIG),
    "lemma7": (Kind.ONE_VERTEX, Kind.BARE_CYCLE, Kind.TWO_THREAD, Kind.G23_CYCLE, Kind.G23_EVEN_CYCLES),
    "lemma9": (Kind.ONE_VERTEX, Kind.BARE_CYCLE, Kind.FOUR_THREAD, Kind.THREE_THREAD_3END),
    "lemma10": (Kind.ONE_VERTEX, Kind.BARE_CYCLE, Kind.FOUR_THREAD, Kind.AUXH_CYCLE),
    "thm5a": (Kind.ONE_VERTEX, Kind.BARE_CYCLE, Kind.TWO_THREAD, Kind.H5A_CONFIG, Kind.H5A_CASE2D),
    "thm5b": (
        Kind.ONE_VERTEX, Kind.BARE_CYCLE, Kind.FOUR_THREAD, Kind.THREE_THREAD_3END,
        Kind.RC4, Kind.RC5, Kind.RC6, Kind.RC7,
    ),
}

# Detected and reduced, but not part of the configuration list the class's
# argument names; steps and audits report them separately.
SUPPLEMENTARY_KINDS: FrozenSet[Kind] = frozenset({Kind.RC7})

# Below this exact mad G_23 must hold a cycle through a G_23-degree-3 vertex;
# only at equality may G_23 be a union of even cycles instead.
G23_THRESHOLD = Fraction(5, 2)


def configuration_family(cls: TheoremClass, delta: int) -> str:
    """
    Family of configurations to search at current maximum degree ``delta``.

    Deletions never raise Δ and the palette stays at its top-level size, so a
    level whose Δ dropped is handled by the argument for the smaller degree.
    """
    if delta <= 2:
        return "paths"
    if cls in (TheoremClass.MAD52_D4, TheoremClass.MAD52_D3):
        return "lemma6" if delta >= 4 else "lemma7"
    if cls == TheoremClass.MAD94_D4:
        return "lemma9" if delta >= 4 else "lemma7"
    if cls == TheoremClass.MAD4219_D3:
        return "lemma10"
    if cls == TheoremClass.PLANAR_G13 and delta >= 4:
        return "thm5b"
    return "thm5a"


def occurrences(g: Graph, kinds: Sequence[Kind], emb: Optional[PlaneEmbedding] = None,
                scene: Optional[Scene] = None) -> List[Reduction]:
    """Every occurrence of the given kinds, in detector order."""
    scene = scene or Scene(g, emb)
    found: List[Reduction] = []
    for kind in kinds:
        found.extend(DETECTORS[kind](scene))
    return found


def find_reduction(g: Graph, cls: TheoremClass, emb: Optional[PlaneEmbedding] = None,
                   scene: Optional[Scene] = None) -> Optional[Reduction]:
    """
    First configuration of the class family present in g, or None.

    None is not an error: on a graph satisfying the class hypotheses it is a
    falsification candidate.
    """
    scene = scene or Scene(g, emb)
    family = configuration_family(cls, g.max_degree)
    for kind in FAMILIES[family]:
        note = None
        if kind in (Kind.G23_CYCLE, Kind.G23_EVEN_CYCLES):
            below = scene.mad < G23_THRESHOLD
            if below and kind == Kind.G23_EVEN_CYCLES:
                continue
            note = f"mad {format_rational(scene.mad)} {'<' if below else '>='} 5/2"
        candidates = list(DETECTORS[kind](scene))
        if candidates:
            chosen = min(candidates, key=lambda r: r.key)
            if note:
                chosen = replace(chosen, notes=chosen.notes + (note,))
            logger.debug("%s/%s: %s at %s", cls.value, family, kind.value, chosen.key)
            return chosen
    return None


def verify_reduction(g: Graph, reduction: Reduction, emb: Optional[PlaneEmbedding] = None) -> bool:
    """Re-detect ``reduction`` from scratch on g."""
    for candidate in DETECTORS[reduction.kind](Scene(g, emb)):
        if candidate.deletion_set == reduction.deletion_set and candidate.anchors == reduction.anchors:
            return True
    return False
