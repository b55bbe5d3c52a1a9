"""
Discharging audits

Replays each discharging argument as exact rational arithmetic on a concrete
graph: seed the initial charges, apply the rules as recorded transfers, and
check every bound the argument relies on.

Two modes:
- strict: inputs outside the argument's preconditions raise PreconditionError
  with a witness.
- survey: preconditions are recorded as informational assertions, local bounds
  are evaluated only on clean elements (untouched by any reducible
  configuration of the family), and the identities that hold for every graph
  (conservation, Euler sum, charge formulas) are asserted everywhere.
"""

import logging
from dataclasses import dataclass, field
from enum import Enum
from fractions import Fraction
from typing import Any, Dict, FrozenSet, Iterable, List, Optional, Sequence, Tuple

import networkx as nx

from .configurations import FAMILIES, SUPPLEMENTARY_KINDS, Kind, Scene, TheoremClass, occurrences
from .errors import AuditFailure, PreconditionError
from .graph_structure import (
    Graph,
    PlaneEmbedding,
    ThreadDecomposition,
    build_auxiliary_H,
    format_rational,
    girth,
    mad_exact,
)

logger = logging.getLogger(__name__)

THIRD = Fraction(1, 3)
TWO_THIRDS = Fraction(2, 3)
EIGHTH = Fraction(1, 8)

# minimum degree in Ĥ of a 3-vertex with i nearby 2-vertices
LEMMA8_TABLE = {9: 3, 8: 3, 7: 2, 6: 1, 5: 1, 4: 1}

# bad 14- and 13-faces after the first phase; 4 stands for 4+
CLAIM1_SEQUENCES = {
    'a': (4, 2, 2, 2, 4, 2, 2, 2, 4, 2, 2, 3, 2, 2),
    'b': (4, 2, 2, 2, 4, 2, 2, 2, 4, 2, 3, 2, 2),
    'c': (4, 2, 2, 2, 4, 2, 2, 4, 2, 2, 3, 2, 2),
}


class AuditMode(str, Enum):
    STRICT = "strict"
    SURVEY = "survey"


class Status(str, Enum):
    PASS = "PASS"
    FAIL = "FAIL"
    SKIP = "SKIP"


class Role(str, Enum):
    WEAK = "WEAK"
    SLIM = "SLIM"
    STRONG = "STRONG"
    FAT = "FAT"
    NONE = "NONE"


# ============================================================================
# LEDGER
# ============================================================================

@dataclass
class ElementCharge:
    initial: Fraction
    after_phase1: Optional[Fraction] = None
    final: Optional[Fraction] = None


@dataclass(frozen=True)
class Transfer:
    source: str
    target: str
    amount: Fraction
    rule: str


@dataclass(frozen=True)
class FaceStats:
    length: int
    t1: int
    t2: int
    t3: int
    t4: int
    roles: Tuple[Role, ...] = ()

    @property
    def t3_prime(self) -> int:
        return sum(1 for r in self.roles if r == Role.NONE)

    def count(self, role: Role) -> int:
        return sum(1 for r in self.roles if r == role)

    def to_dict(self) -> Dict[str, Any]:
        data = {'length': self.length, 't2': self.t2, 't3': self.t3, 't4': self.t4}
        if self.t1:
            data['t1'] = self.t1
        if self.roles:
            data['t3_prime'] = self.t3_prime
            for role in (Role.WEAK, Role.SLIM, Role.STRONG, Role.FAT):
                data[role.value.lower()] = self.count(role)
        return data


class ChargeLedger:
    """Charges per element ("v3", "f0") and every transfer that moved them."""

    def __init__(self):
        self.element_charges: Dict[str, ElementCharge] = {}
        self.transfers: List[Transfer] = []
        self.face_stats: Dict[str, FaceStats] = {}
        self._current: Dict[str, Fraction] = {}

    def seed(self, element: str, amount) -> None:
        amount = Fraction(amount)
        self.element_charges[element] = ElementCharge(amount)
        self._current[element] = amount

    def move(self, source: str, target: str, amount: Fraction, rule: str) -> None:
        self._current[source] -= amount
        self._current[target] += amount
        self.transfers.append(Transfer(source, target, amount, rule))

    def charge(self, element: str) -> Fraction:
        return self._current[element]

    def end_phase(self) -> None:
        for element, charge in self.element_charges.items():
            charge.after_phase1 = self._current[element]

    def finish(self) -> None:
        for element, charge in self.element_charges.items():
            if charge.after_phase1 is None:
                charge.after_phase1 = self._current[element]
            charge.final = self._current[element]

    @property
    def total_initial(self) -> Fraction:
        return sum((c.initial for c in self.element_charges.values()), Fraction(0))

    @property
    def total_final(self) -> Fraction:
        return sum((self._current[e] for e in self.element_charges), Fraction(0))

    def conserved(self) -> bool:
        return self.total_initial == self.total_final

    def summary(self) -> Dict[str, Any]:
        by_rule: Dict[str, Fraction] = {}
        for t in self.transfers:
            by_rule[t.rule] = by_rule.get(t.rule, Fraction(0)) + t.amount
        finals = {e: self._current[e] for e in self.element_charges}
        vertex_finals = [c for e, c in finals.items() if e.startswith("v")]
        face_finals = [c for e, c in finals.items() if e.startswith("f")]
        data: Dict[str, Any] = {
            'elements': len(self.element_charges),
            'transfers': len(self.transfers),
            'moved_by_rule': {rule: format_rational(v) for rule, v in sorted(by_rule.items())},
            'total_initial': format_rational(self.total_initial),
            'total_final': format_rational(self.total_final),
        }
        if vertex_finals:
            data['min_vertex_final'] = format_rational(min(vertex_finals))
        if face_finals:
            data['min_face_final'] = format_rational(min(face_finals))
        return data


# ============================================================================
# REPORT
# ============================================================================

@dataclass(frozen=True)
class AssertionResult:
    name: str
    status: Status
    witness: Optional[Dict[str, Any]] = None
    detail: str = ""

    def to_dict(self) -> Dict[str, Any]:
        data: Dict[str, Any] = {'name': self.name, 'status': self.status.value}
        if self.witness is not None:
            data['witness'] = self.witness
        if self.detail:
            data['detail'] = self.detail
        return data


@dataclass
class AuditReport:
    audit: str
    mode: AuditMode
    ledger: Optional[ChargeLedger] = None
    assertions: List[AssertionResult] = field(default_factory=list)
    facts: Dict[str, Any] = field(default_factory=dict)

    def record(self, name: str, ok: bool, witness: Optional[Dict[str, Any]] = None, detail: str = "") -> bool:
        status = Status.PASS if ok else Status.FAIL
        self.assertions.append(AssertionResult(name, status, None if ok else witness, detail))
        if not ok:
            logger.error("audit %s: %s failed, witness %s", self.audit, name, witness)
        return ok

    def skip(self, name: str, detail: str) -> None:
        self.assertions.append(AssertionResult(name, Status.SKIP, detail=detail))

    def status_of(self, name: str) -> Optional[Status]:
        for a in self.assertions:
            if a.name == name:
                return a.status
        return None

    def failures(self) -> List[AssertionResult]:
        return [a for a in self.assertions if a.status == Status.FAIL]

    @property
    def ok(self) -> bool:
        return not self.failures()

    def raise_on_failure(self) -> "AuditReport":
        if self.failures():
            raise AuditFailure(self)
        return self

    def to_dict(self) -> Dict[str, Any]:
        data: Dict[str, Any] = {
            'audit': self.audit,
            'mode': self.mode.value,
            'ok': self.ok,
            'assertions': [a.to_dict() for a in self.assertions],
        }
        if self.ledger is not None:
            data['ledger'] = self.ledger.summary()
        if self.facts:
            data['facts'] = self.facts
        return data


# ============================================================================
# SHARED CHECKS
# ============================================================================

def _vid(v: int) -> str:
    return f"v{v}"


def _fid(i: int) -> str:
    return f"f{i}"


def _degree_class(d: int) -> int:
    return min(d, 4)


def _first_failure(values: Iterable[Tuple[Any, bool, Dict[str, Any]]]) -> Tuple[bool, Optional[Dict[str, Any]]]:
    for _element, ok, witness in values:
        if not ok:
            return False, witness
    return True, None


def _footprint(scene: Scene, kinds: Sequence[Kind]) -> FrozenSet[int]:
    """Vertices touched by some occurrence of ``kinds`` or lying on a non-thread chain."""
    touched = set()
    for red in occurrences(scene.g, kinds, scene.emb, scene=scene):
        touched |= red.deletion_set | red.uncolor | set(red.key)
    for comp in scene.threads.non_thread:
        touched.update(comp.vertices)
        touched.update(comp.ends)
    touched.update(v for v in range(scene.g.n) if scene.g.degree(v) <= 1)
    return frozenset(touched)


def _supplementary_touched(scene: Scene, kinds: Sequence[Kind]) -> FrozenSet[int]:
    """Vertices of supplementary configurations; strict audits leave them out of local checks."""
    extra = [k for k in kinds if k in SUPPLEMENTARY_KINDS]
    touched = set()
    for red in occurrences(scene.g, extra, scene.emb, scene=scene):
        touched |= red.deletion_set | red.uncolor | set(red.key)
    return frozenset(touched)


def _preconditions(
    report: AuditReport,
    scene: Scene,
    scalar: Sequence[Tuple[str, bool, Dict[str, Any]]],
    kinds: Sequence[Kind],
) -> bool:
    """
    Strict mode raises on the first violated precondition; survey mode records
    each one (PASS when it holds, SKIP otherwise).

    Returns:
        True when the scalar preconditions (degree, girth, mad) hold
    """
    strict = report.mode == AuditMode.STRICT
    for name, ok, witness in scalar:
        if ok:
            report.record(f"pre:{name}", True)
        elif strict:
            raise PreconditionError(f"{report.audit}: precondition {name} violated", witness)
        else:
            report.skip(f"pre:{name}", f"violated: {witness}")

    for kind in kinds:
        found = occurrences(scene.g, [kind], scene.emb, scene=scene)
        name = f"pre:no_{kind.value.lower()}"
        if not found:
            report.record(name, True)
            continue
        first = min(found, key=lambda r: r.key)
        if kind in SUPPLEMENTARY_KINDS:
            report.facts.setdefault('supplementary', {})[kind.value] = len(found)
            report.skip(name, f"supplementary configuration, {len(found)} occurrence(s), first at {list(first.key)}")
            continue
        if strict:
            raise PreconditionError(
                f"{report.audit}: reducible configuration {kind.value} present", first.to_dict()
            )
        report.skip(name, f"{len(found)} occurrence(s), first at {list(first.key)}")
    return all(ok for _name, ok, _w in scalar)


def _face_walk_stats(g: Graph, walk: Sequence[int], roles: Tuple[Role, ...] = ()) -> FaceStats:
    degrees = [g.degree(v) for v in walk]
    return FaceStats(
        length=len(walk),
        t1=sum(1 for d in degrees if d <= 1),
        t2=sum(1 for d in degrees if d == 2),
        t3=sum(1 for d in degrees if d == 3),
        t4=sum(1 for d in degrees if d >= 4),
        roles=roles,
    )


def _euler_total(g: Graph) -> Fraction:
    comps = [c for c in nx.connected_components(g.to_networkx())]
    with_edges = sum(1 for c in comps if len(c) > 1)
    isolated = len(comps) - with_edges
    return Fraction(-8 * with_edges - 4 * isolated)


def _planar_seed(ledger: ChargeLedger, g: Graph, emb: PlaneEmbedding) -> None:
    for v in range(g.n):
        ledger.seed(_vid(v), g.degree(v) - 4)
    for i, walk in enumerate(emb.faces):
        ledger.seed(_fid(i), len(walk) - 4)


def _face_rule_one(ledger: ChargeLedger, g: Graph, emb: PlaneEmbedding) -> None:
    # each face gives 1 to each incident 2-vertex and 1/3 to each incident 3-vertex
    for i, walk in enumerate(emb.faces):
        for v in walk:
            d = g.degree(v)
            if d == 2:
                ledger.move(_fid(i), _vid(v), Fraction(1), "R1")
            elif d == 3:
                ledger.move(_fid(i), _vid(v), THIRD, "R1")


def _vertex_audit_setup(name: str, g: Graph, mode: AuditMode, kinds: Sequence[Kind],
                        delta_ok: bool) -> Tuple[AuditReport, Scene, bool]:
    report = AuditReport(name, AuditMode(mode), ChargeLedger())
    scene = Scene(g)
    scalar_ok = _preconditions(
        report, scene, [("delta_at_least_4", delta_ok, {'delta': g.max_degree})], kinds
    )
    return report, scene, scalar_ok


def _clean_vertices(report: AuditReport, scene: Scene, kinds: Sequence[Kind]) -> List[int]:
    if report.mode == AuditMode.STRICT:
        dirty = _supplementary_touched(scene, kinds)
        return [v for v in range(scene.g.n) if v not in dirty]
    dirty = _footprint(scene, kinds)
    clean = [v for v in range(scene.g.n) if v not in dirty]
    report.facts['clean_vertices'] = len(clean)
    return clean


def _bound_check(report: AuditReport, name: str, ledger: ChargeLedger, vertices: Iterable[int],
                 bound: Fraction, scalar_ok: bool) -> None:
    if not scalar_ok:
        report.skip(name, "scalar preconditions violated")
        return
    ok, witness = _first_failure(
        (v, ledger.charge(_vid(v)) >= bound,
         {'vertex': v, 'charge': format_rational(ledger.charge(_vid(v))), 'bound': format_rational(bound)})
        for v in vertices
    )
    report.record(name, ok, witness)


# ============================================================================
# mad <= 5/2, Δ >= 4
# ============================================================================

def audit_lemma6(g: Graph, mode: AuditMode = AuditMode.STRICT) -> AuditReport:
    """
    μ(v) = d(v). R1: each 3-vertex splits 1/2 equally among its adjacent
    2-vertices. R2: each 4+-vertex sends 1/3 to each adjacent 2-vertex.
    Every vertex must end with at least 5/2, every 4+-vertex with 8/3.
    """
    kinds = FAMILIES["lemma6"]
    report, scene, scalar_ok = _vertex_audit_setup("lemma6", g, mode, kinds, g.max_degree >= 4)
    ledger = report.ledger
    for v in range(g.n):
        ledger.seed(_vid(v), g.degree(v))
    for v in range(g.n):
        twos = [x for x in g.neighbors(v) if g.degree(x) == 2]
        if not twos:
            continue
        if g.degree(v) == 3:
            share = Fraction(1, 2) / len(twos)
            for x in twos:
                ledger.move(_vid(v), _vid(x), share, "R1")
        elif g.degree(v) >= 4:
            for x in twos:
                ledger.move(_vid(v), _vid(x), THIRD, "R2")
    ledger.finish()

    report.record("conservation", ledger.conserved(),
                  {'initial': format_rational(ledger.total_initial), 'final': format_rational(ledger.total_final)})
    clean = _clean_vertices(report, scene, kinds)
    _bound_check(report, "final_at_least_5/2", ledger, clean, Fraction(5, 2), scalar_ok)
    _bound_check(report, "four_plus_at_least_8/3", ledger,
                 [v for v in clean if g.degree(v) >= 4], Fraction(8, 3), scalar_ok)
    return report


# ============================================================================
# mad <= 9/4, Δ >= 4
# ============================================================================

def audit_lemma9(g: Graph, mode: AuditMode = AuditMode.STRICT) -> AuditReport:
    """
    μ(v) = d(v). R1: each 3+-vertex gives 1/8 to each nearby 2-vertex.

    Nearby 2-vertices are counted per (thread, end) incidence, so a 2-vertex on
    a thread whose two ends coincide receives 1/8 twice from that end.
    """
    kinds = FAMILIES["lemma9"]
    report, scene, scalar_ok = _vertex_audit_setup("lemma9", g, mode, kinds, g.max_degree >= 4)
    ledger = report.ledger
    td = scene.threads
    for v in range(g.n):
        ledger.seed(_vid(v), g.degree(v))
    for v, nearby in sorted(td.nearby.items()):
        for x in nearby:
            ledger.move(_vid(v), _vid(x), EIGHTH, "R1")
    ledger.finish()

    report.record("conservation", ledger.conserved(),
                  {'initial': format_rational(ledger.total_initial), 'final': format_rational(ledger.total_final)})
    clean = _clean_vertices(report, scene, kinds)
    _bound_check(report, "final_at_least_9/4", ledger, clean, Fraction(9, 4), scalar_ok)
    _bound_check(report, "four_plus_at_least_5/2", ledger,
                 [v for v in clean if g.degree(v) >= 4], Fraction(5, 2), scalar_ok)
    return report


# ============================================================================
# mad < 42/19, Δ = 3: the counting argument behind the cycle in H
# ============================================================================

def lemma8_degree_bound(i: int) -> Fraction:
    """Lower bound 2i/3 - 3 on d_Ĥ(v) for a 3-vertex with i nearby 2-vertices."""
    return Fraction(2 * i, 3) - 3


def _has_cycle_through(h: nx.MultiGraph, v: int) -> bool:
    for _v, a, key, data in list(h.edges(v, keys=True, data=True)):
        if a == v:
            return True
        h.remove_edge(v, a, key)
        try:
            linked = nx.has_path(h, a, v)
        finally:
            h.add_edge(v, a, key=key, **data)
        if linked:
            return True
    return False


def _reading(aux, strict: bool) -> Dict[str, Any]:
    """Ĥ statistics under one reading of the 2-thread rule."""
    h = aux.multigraph(strict=strict)
    degree = {v: h.degree(v) for v in aux.host_three_vertices}
    hat = [v for v in aux.host_three_vertices if degree[v] > 0]
    a_hat = [0] * 10
    for v in hat:
        a_hat[aux.nearby_counts[v]] += 1
    table_misses = [
        v for v in hat if degree[v] < lemma8_degree_bound(aux.nearby_counts[v])
    ]
    cycle_hubs = [v for v in hat if degree[v] == 3 and _has_cycle_through(h, v)]
    return {
        'h': h,
        'degree': degree,
        'hat': hat,
        'a_hat': a_hat,
        'table_misses': table_misses,
        'cycle_hubs': cycle_hubs,
    }


def audit_lemma8(g: Graph, mode: AuditMode = AuditMode.STRICT) -> AuditReport:
    """
    Replay the counting chain: 2V₂/V₃ > 15/2, the weighted averages over all
    3-vertices and over Ĥ, the per-vertex table d_Ĥ(v) >= 2i/3 - 3, average
    degree of Ĥ above 2, and finally a cycle of H through a degree-3 vertex.

    The chain is asserted for the "either end" reading of the 2-thread rule;
    the "both ends" reading is reported under facts.
    """
    report = AuditReport("lemma8", AuditMode(mode))
    scene = Scene(g)
    mad = mad_exact(g).value if g.n else Fraction(0)
    scalar = [
        ("delta_equals_3", g.max_degree == 3, {'delta': g.max_degree}),
        ("mad_below_42/19", mad < Fraction(42, 19), {'mad': format_rational(mad), 'bound': "42/19"}),
    ]
    kinds = (Kind.ONE_VERTEX, Kind.BARE_CYCLE, Kind.FOUR_THREAD)
    scalar_ok = _preconditions(report, scene, scalar, kinds)
    config_ok = all(report.status_of(f"pre:no_{k.value.lower()}") == Status.PASS for k in kinds)
    report.facts['mad'] = format_rational(mad)

    v2 = sum(1 for v in range(g.n) if g.degree(v) == 2)
    v3 = sum(1 for v in range(g.n) if g.degree(v) == 3)
    report.facts.update({'V2': v2, 'V3': v3})
    if not (scalar_ok and config_ok) or v3 == 0:
        for name in ("ratio_above_15/2", "average_matches_ratio", "hat_average_dominates",
                     "table", "weighted_table_sum", "hat_average_degree_above_2", "cycle_with_degree_3"):
            report.skip(name, "preconditions violated" if v3 else "no 3-vertices")
        return report

    ratio = Fraction(2 * v2, v3)
    report.facts['ratio'] = format_rational(ratio)
    report.record("ratio_above_15/2", ratio > Fraction(15, 2),
                  {'lhs': format_rational(ratio), 'rhs': "15/2"})

    aux = build_auxiliary_H(g)
    report.facts['a'] = list(aux.a_counts)
    average = Fraction(sum(i * a for i, a in enumerate(aux.a_counts)), aux.n_H)
    report.record("average_matches_ratio", average == ratio and average > Fraction(15, 2),
                  {'average': format_rational(average), 'ratio': format_rational(ratio)})

    either = _reading(aux, strict=False)
    hat, degree = either['hat'], either['degree']
    report.facts['a_hat'] = either['a_hat']
    if not hat:
        report.record("hat_average_dominates", False, {'n_hat': 0})
        return report
    n_hat = len(hat)
    hat_average = Fraction(sum(i * a for i, a in enumerate(either['a_hat'])), n_hat)
    report.record("hat_average_dominates", hat_average >= average,
                  {'hat_average': format_rational(hat_average), 'average': format_rational(average)})

    if either['table_misses']:
        v = either['table_misses'][0]
        i = aux.nearby_counts[v]
        report.record("table", False, {
            'vertex': v, 'nearby': i, 'degree': degree[v], 'bound': format_rational(lemma8_degree_bound(i)),
        })
    else:
        report.record("table", True)

    degree_sum = sum(degree[v] for v in hat)
    weighted = sum((a * lemma8_degree_bound(i) for i, a in enumerate(either['a_hat'])), Fraction(0))
    report.record("weighted_table_sum", degree_sum >= weighted,
                  {'degree_sum': degree_sum, 'weighted': format_rational(weighted)})
    hat_degree = Fraction(degree_sum, n_hat)
    report.facts['hat_average_degree'] = format_rational(hat_degree)
    report.record("hat_average_degree_above_2", hat_degree > 2,
                  {'average_degree': format_rational(hat_degree)})
    report.record("cycle_with_degree_3", bool(either['cycle_hubs']), {'hat_vertices': n_hat})
    if either['cycle_hubs']:
        report.facts['cycle_hub'] = either['cycle_hubs'][0]

    both = _reading(aux, strict=True)
    both_degree_sum = sum(both['degree'][v] for v in both['hat'])
    report.facts['strict_reading'] = {
        'n_hat': len(both['hat']),
        'a_hat': both['a_hat'],
        'table_misses': both['table_misses'],
        'average_degree': format_rational(Fraction(both_degree_sum, len(both['hat']))) if both['hat'] else None,
        'cycle_with_degree_3': bool(both['cycle_hubs']),
    }
    return report


# ============================================================================
# planar, girth >= 9, Δ >= 4
# ============================================================================

def _r2_windows(g: Graph, walk: Sequence[int]) -> Iterable[int]:
    """Positions of the 2-vertex in every (4+,3,2,3,4+) run along the walk."""
    length = len(walk)
    if length < 5:
        return
    want = (4, 3, 2, 3, 4)
    for i in range(length):
        if all(_degree_class(g.degree(walk[(i + j) % length])) == want[j] for j in range(5)):
            yield (i + 2) % length


def _planar_setup(name: str, g: Graph, emb: PlaneEmbedding, mode: AuditMode, girth_min: int,
                  kinds: Sequence[Kind]) -> Tuple[AuditReport, Scene, bool]:
    if emb.host != g:
        raise PreconditionError(f"{name}: embedding belongs to another graph")
    report = AuditReport(name, AuditMode(mode), ChargeLedger())
    scene = Scene(g, emb)
    value = girth(g)
    scalar = [
        ("delta_at_least_4", g.max_degree >= 4, {'delta': g.max_degree}),
        (f"girth_at_least_{girth_min}", value >= girth_min,
         {'girth': None if value == float("inf") else int(value), 'bound': girth_min}),
    ]
    scalar_ok = _preconditions(report, scene, scalar, kinds)
    return report, scene, scalar_ok


def _clean_faces(report: AuditReport, scene: Scene, kinds: Sequence[Kind]) -> Tuple[List[int], List[int]]:
    faces = scene.emb.faces
    if report.mode == AuditMode.STRICT:
        dirty = _supplementary_touched(scene, kinds)
        return ([v for v in range(scene.g.n) if v not in dirty],
                [i for i, walk in enumerate(faces) if not dirty.intersection(walk)])
    dirty = _footprint(scene, kinds)
    vertices = [v for v in range(scene.g.n) if v not in dirty]
    clean = [i for i, walk in enumerate(faces) if not dirty.intersection(walk)]
    report.facts['clean_vertices'] = len(vertices)
    report.facts['clean_faces'] = len(clean)
    return vertices, clean


def _universal_planar(report: AuditReport, g: Graph) -> None:
    ledger = report.ledger
    expected = _euler_total(g)
    report.record("euler_sum", ledger.total_initial == expected,
                  {'total': format_rational(ledger.total_initial), 'expected': format_rational(expected)})
    report.record("conservation", ledger.conserved(),
                  {'initial': format_rational(ledger.total_initial), 'final': format_rational(ledger.total_final)})


def _face_formula(report: AuditReport, name: str, stats: Dict[str, FaceStats], phase1: Dict[str, Fraction]) -> None:
    # t1 = 0 under the preconditions; kept so the identity holds on every input
    ok, witness = _first_failure(
        (fid, phase1[fid] == s.t1 + TWO_THIRDS * s.t3 + s.t4 - 4,
         {'face': fid, 'charge': format_rational(phase1[fid]), **s.to_dict()})
        for fid, s in stats.items()
    )
    report.record(name, ok, witness)


def audit_thm5a(g: Graph, emb: PlaneEmbedding, mode: AuditMode = AuditMode.STRICT) -> AuditReport:
    """
    μ(x) = d(x) - 4 on vertices and faces.
    R1: each face gives 1 to each 2-vertex and 1/3 to each 3-vertex on it.
    R2: a face containing (4+,3,2,3,4+) gives 1/3 to the face across the 2-vertex.
    Every element must end nonnegative.
    """
    kinds = FAMILIES["thm5a"]
    report, scene, scalar_ok = _planar_setup("thm5a", g, emb, mode, 9, kinds)
    ledger = report.ledger
    _planar_seed(ledger, g, emb)
    _face_rule_one(ledger, g, emb)
    ledger.end_phase()
    for i, walk in enumerate(emb.faces):
        for position in _r2_windows(g, walk):
            ledger.move(_fid(i), _fid(emb.face_across(i, position)), THIRD, "R2")
    ledger.finish()

    stats = {_fid(i): _face_walk_stats(g, walk) for i, walk in enumerate(emb.faces)}
    ledger.face_stats = stats
    phase1 = {fid: ledger.element_charges[fid].after_phase1 for fid in stats}

    _universal_planar(report, g)
    _face_formula(report, "face_formula", stats, phase1)

    vertices, faces = _clean_faces(report, scene, kinds)
    if not scalar_ok:
        for name in ("vertex_nonnegative", "short_negative_faces", "face_nonnegative"):
            report.skip(name, "scalar preconditions violated")
        return report
    _bound_check(report, "vertex_nonnegative", ledger, vertices, Fraction(0), True)
    negatives = [i for i in faces if phase1[_fid(i)] < 0]
    ok, witness = _first_failure(
        (i, len(emb.faces[i]) <= 10, {'face': _fid(i), **stats[_fid(i)].to_dict()}) for i in negatives
    )
    report.record("short_negative_faces", ok, witness)
    ok, witness = _first_failure(
        (i, ledger.charge(_fid(i)) >= 0,
         {'face': _fid(i), 'charge': format_rational(ledger.charge(_fid(i))), 'walk': list(emb.faces[i])})
        for i in faces
    )
    report.record("face_nonnegative", ok, witness)
    return report


# ============================================================================
# planar, girth >= 13, Δ >= 4
# ============================================================================

def classify_three_vertex(g: Graph, td: ThreadDecomposition, v: int) -> Optional[str]:
    """'type-1', 'type-2' or None for the 3-vertex v."""
    if g.degree(v) != 3:
        return None
    ends = td.threads_at(v)
    if len(ends) != 3 or any(te.thread.is_loop for te in ends):
        return None
    lengths = sorted(te.length for te in ends)
    if lengths == [1, 1, 2]:
        ones = [te for te in ends if te.length == 1]
        if all(g.degree(te.far_end) >= 4 for te in ones):
            return "type-1"
        return None
    zeros = [te for te in ends if te.length == 0]
    if len(zeros) != 1:
        return None
    rest = [te for te in ends if te.length > 0]
    if 2 in (rest[0].length, rest[1].length) and all(g.degree(te.far_end) >= 4 for te in rest):
        return "type-2"
    return None


def vertex_roles(g: Graph, emb: PlaneEmbedding, td: Optional[ThreadDecomposition] = None) -> Dict[Tuple[int, int], Role]:
    """
    Role of the vertex at each (face, position) of every face walk.

    A type-1 vertex is WEAK in the angle between its two 1-threads and STRONG
    in the other two; a type-2 vertex is SLIM in the two angles at its
    0-thread and FAT in the third.
    """
    td = td or Scene(g, emb).threads
    kinds = {v: classify_three_vertex(g, td, v) for v in range(g.n) if g.degree(v) == 3}
    roles: Dict[Tuple[int, int], Role] = {}
    for i, walk in enumerate(emb.faces):
        length = len(walk)
        for position, v in enumerate(walk):
            kind = kinds.get(v)
            if kind is None:
                roles[(i, position)] = Role.NONE
                continue
            angle = {walk[position - 1], walk[(position + 1) % length]}
            ends = td.threads_at(v)
            if kind == "type-1":
                ones = {te.first for te in ends if te.length == 1}
                roles[(i, position)] = Role.WEAK if angle == ones else Role.STRONG
            else:
                zero = next(te.first for te in ends if te.length == 0)
                roles[(i, position)] = Role.SLIM if zero in angle else Role.FAT
    return roles


def _contribution(g: Graph, v: int, role: Role) -> Fraction:
    """What the vertex at one face position adds to μ** of that face (before the -4)."""
    d = g.degree(v)
    if d >= 4 or d <= 1:
        return Fraction(1)
    if d == 2:
        return Fraction(0)
    return {
        Role.NONE: TWO_THIRDS,
        Role.WEAK: Fraction(0),
        Role.SLIM: Fraction(1, 2),
        Role.STRONG: Fraction(1),
        Role.FAT: Fraction(1),
    }[role]


def _matches_claim1(classes: Sequence[int]) -> Optional[str]:
    n = len(classes)
    for label, pattern in CLAIM1_SEQUENCES.items():
        if len(pattern) != n:
            continue
        for seq in (tuple(classes), tuple(reversed(classes))):
            if any(seq[k:] + seq[:k] == pattern for k in range(n)):
                return label
    return None


def _segments(g: Graph, walk: Sequence[int], min_interior: int) -> Iterable[Tuple[int, int]]:
    """(start, span) of every face path between two 3+-vertices with enough interior vertices."""
    length = len(walk)
    anchors = [i for i, v in enumerate(walk) if g.degree(v) >= 3]
    for i in anchors:
        for span in range(min_interior + 1, length):
            j = (i + span) % length
            if g.degree(walk[j]) < 3:
                continue
            path = [walk[(i + k) % length] for k in range(span + 1)]
            if len(set(path)) == len(path):
                yield i, span


def audit_thm5b(g: Graph, emb: PlaneEmbedding, mode: AuditMode = AuditMode.STRICT) -> AuditReport:
    """
    Two-phase discharging for girth 13 with palette Δ.

    Phase I: μ(x) = d(x) - 4; each face gives 1/3 to each incident 3-vertex
    and 1 to each incident 2-vertex.
    Phase II: each face gives 2/3 to each weak vertex and 1/6 to each slim
    vertex; each face receives 1/3 from each strong and each fat vertex.

    Beyond the final bounds, the audit checks the face-charge formulas of
    both phases, the thread-count inequality, the bad-face classification and
    the two segment claims on every clean face.
    """
    kinds = FAMILIES["thm5b"]
    report, scene, scalar_ok = _planar_setup("thm5b", g, emb, mode, 13, kinds)
    ledger = report.ledger
    td = scene.threads
    roles = vertex_roles(g, emb, td)

    _planar_seed(ledger, g, emb)
    _face_rule_one(ledger, g, emb)
    ledger.end_phase()
    for (i, position), role in sorted(roles.items()):
        v = emb.faces[i][position]
        if role == Role.WEAK:
            ledger.move(_fid(i), _vid(v), TWO_THIRDS, "R2")
        elif role == Role.SLIM:
            ledger.move(_fid(i), _vid(v), Fraction(1, 6), "R2")
        elif role in (Role.STRONG, Role.FAT):
            ledger.move(_vid(v), _fid(i), THIRD, "R3")
    ledger.finish()

    stats = {}
    for i, walk in enumerate(emb.faces):
        face_roles = tuple(roles[(i, p)] for p, v in enumerate(walk) if g.degree(v) == 3)
        stats[_fid(i)] = _face_walk_stats(g, walk, face_roles)
    ledger.face_stats = stats
    phase1 = {fid: ledger.element_charges[fid].after_phase1 for fid in stats}

    _universal_planar(report, g)
    _face_formula(report, "phase1_face_formula", stats, phase1)
    ok, witness = _first_failure(
        (fid, ledger.charge(fid) == (s.t1 + TWO_THIRDS * s.t3_prime + s.t4 - 4 + Fraction(1, 2) * s.count(Role.SLIM)
                                     + s.count(Role.STRONG) + s.count(Role.FAT)),
         {'face': fid, 'charge': format_rational(ledger.charge(fid)), **s.to_dict()})
        for fid, s in stats.items()
    )
    report.record("phase2_face_formula", ok, witness)
    ok, witness = _first_failure(
        (v, ledger.charge(_vid(v)) == ledger.element_charges[_vid(v)].after_phase1,
         {'vertex': v, 'phase1': format_rational(ledger.element_charges[_vid(v)].after_phase1),
          'final': format_rational(ledger.charge(_vid(v)))})
        for v in range(g.n)
    )
    report.record("phase2_vertex_neutral", ok, witness)
    weak_counts: Dict[int, int] = {}
    for (i, position), role in roles.items():
        if role == Role.WEAK:
            v = emb.faces[i][position]
            weak_counts[v] = weak_counts.get(v, 0) + 1
    ok, witness = _first_failure(
        (v, count == 1, {'vertex': v, 'weak_faces': count}) for v, count in sorted(weak_counts.items())
    )
    report.record("weak_on_one_face", ok, witness)
    report.facts['type1'] = sum(1 for v in range(g.n) if classify_three_vertex(g, td, v) == "type-1")
    report.facts['type2'] = sum(1 for v in range(g.n) if classify_three_vertex(g, td, v) == "type-2")

    vertices, faces = _clean_faces(report, scene, kinds)
    local = ("phase1_vertex_nonnegative", "inequality_threads", "claim1_bad_faces",
             "segment_of_4", "segment_of_8", "final_face_nonnegative")
    if not scalar_ok:
        for name in local:
            report.skip(name, "scalar preconditions violated")
        return report

    _bound_check(report, "phase1_vertex_nonnegative", ledger, vertices, Fraction(0), True)

    ok, witness = _first_failure(
        (i, s.t2 <= 2 * s.t3 + 3 * s.t4 and (s.t3 == 0 or s.t2 < 2 * s.t3 + 3 * s.t4),
         {'face': _fid(i), **s.to_dict()})
        for i in faces for s in [stats[_fid(i)]]
    )
    report.record("inequality_threads", ok, witness)

    bad: Dict[str, str] = {}
    failure = None
    for i in faces:
        charge = phase1[_fid(i)]
        if charge >= 0:
            continue
        label = _matches_claim1([_degree_class(g.degree(v)) for v in emb.faces[i]])
        if charge != -THIRD or label is None:
            failure = {'face': _fid(i), 'charge': format_rational(charge),
                       'degrees': [g.degree(v) for v in emb.faces[i]]}
            break
        bad[_fid(i)] = label
    report.record("claim1_bad_faces", failure is None, failure)
    report.facts['bad_faces'] = bad

    for name, min_interior, target in (("segment_of_4", 4, Fraction(1)), ("segment_of_8", 8, Fraction(2))):
        failure = None
        for i in faces:
            walk = emb.faces[i]
            length = len(walk)
            for start, span in _segments(g, walk, min_interior):
                positions = [(start + k) % length for k in range(span + 1)]
                if min_interior == 8 and any(roles[(i, p)] == Role.SLIM for p in positions):
                    continue
                gained = sum((_contribution(g, walk[p], roles[(i, p)]) for p in positions[1:-1]), Fraction(0))
                if gained < target:
                    failure = {'face': _fid(i), 'path': [walk[p] for p in positions],
                               'gained': format_rational(gained)}
                    break
            if failure:
                break
        report.record(name, failure is None, failure)

    ok, witness = _first_failure(
        (i, ledger.charge(_fid(i)) >= 0,
         {'face': _fid(i), 'charge': format_rational(ledger.charge(_fid(i))), **stats[_fid(i)].to_dict()})
        for i in faces
    )
    report.record("final_face_nonnegative", ok, witness)
    return report


# ============================================================================
# DISPATCH
# ============================================================================

def audit_for_class(g: Graph, cls: TheoremClass, emb: Optional[PlaneEmbedding] = None,
                    mode: AuditMode = AuditMode.STRICT) -> AuditReport:
    """Run the discharging audit matching a theorem class."""
    if cls == TheoremClass.MAD52_D4:
        return audit_lemma6(g, mode)
    if cls == TheoremClass.MAD94_D4:
        return audit_lemma9(g, mode)
    if cls == TheoremClass.MAD4219_D3:
        return audit_lemma8(g, mode)
    if cls in (TheoremClass.PLANAR_G9, TheoremClass.PLANAR_G13):
        if emb is None:
            raise PreconditionError(f"{cls.value} audit needs a plane embedding")
        return audit_thm5a(g, emb, mode) if cls == TheoremClass.PLANAR_G9 else audit_thm5b(g, emb, mode)
    report = AuditReport(cls.value.lower(), AuditMode(mode))
    report.skip("discharging", "this class is proved by a global cycle argument, not by discharging")
    return report
