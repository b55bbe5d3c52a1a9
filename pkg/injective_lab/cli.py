#!/usr/bin/env python3
"""
Command-line harness for the injective coloring lab.

Subcommands:
- analyze   structural profile of one graph (Δ, girth, exact mad, threads, G_23, H)
- color     constructive coloring for a theorem class and/or the exact χ_i
- audit     discharging audit for a theorem class
- verify    generate a seeded corpus and run every check on each instance
- generate  write edge-list (and rotation) files for the constructions

JSON reports go to standard output, status lines to standard error.
Exit codes: 0 success, 2 input error, 3 failure or theorem violation,
4 hypothesis rejection.
"""

import argparse
import logging
import sys
import time
from concurrent.futures import ProcessPoolExecutor
from dataclasses import dataclass
from pathlib import Path
from typing import Any, Dict, List, Optional, Sequence, Tuple

from .config import Settings, load_settings
from .configurations import TheoremClass, check_hypotheses
from .discharging import AuditMode, audit_for_class
from .errors import (
    AuditFailure,
    EmbeddingError,
    GenerationError,
    GraphFormatError,
    HypothesisError,
    InjectiveLabError,
    PreconditionError,
    SolverAborted,
    TheoremViolation,
)
from .exact_solvers import Coloring, SolverStatus, injective_chromatic_number, validate_injective
from .graph_structure import (
    Graph,
    PlaneEmbedding,
    build_auxiliary_H,
    build_G23,
    degree_profile,
    format_graph,
    format_rational,
    format_rotation,
    girth,
    mad_exact,
    parse_graph,
    parse_rotation,
    thread_decomposition,
)
from .instance_factory import (
    build_corpus,
    class2_counterexample,
    insert_vertex,
    named_graph,
    plane_embedding,
    random_planar_girth,
    random_sparse,
    regular_even_order_insert,
    subdivide,
    write_corpus,
)
from .reduction_engine import color_constructive
from .reports import AuditReportModel, ConstructiveSummary, ExactSummary, InstanceResult, RunReport

logger = logging.getLogger(__name__)

EXIT_OK = 0
EXIT_INPUT = 2
EXIT_FAILURE = 3
EXIT_HYPOTHESIS = 4


# =============================================================================
# Input
# =============================================================================

def load_instance(path: str, embedding: Optional[str] = None) -> Tuple[Graph, Optional[PlaneEmbedding]]:
    g = parse_graph(Path(path).read_text(encoding="utf-8"))
    emb = parse_rotation(Path(embedding).read_text(encoding="utf-8"), g) if embedding else None
    return g, emb


def _girth_value(g: Graph) -> Optional[int]:
    value = girth(g)
    return None if value == float("inf") else int(value)


# =============================================================================
# Per-instance pipeline
# =============================================================================

@dataclass(frozen=True)
class Job:
    """Everything one worker needs; plain data so it crosses process boundaries."""

    index: int
    source: str
    graph: Graph
    embedding: Optional[PlaneEmbedding]
    cls: Optional[TheoremClass]
    budget: int
    exact: bool = True
    constructive: bool = True
    audit: bool = False
    audit_mode: AuditMode = AuditMode.SURVEY
    corrupt: bool = False
    output_dir: str = "runs"


def _corrupt(g: Graph, coloring: Coloring) -> Coloring:
    """Give two vertices with a common neighbor the same color (test hook)."""
    colors = dict(coloring.assignment)
    for v in range(g.n):
        if g.degree(v) >= 2:
            a, b = g.neighbors(v)[:2]
            colors[b] = colors[a]
            break
    return Coloring(colors)


def evaluate(job: Job) -> InstanceResult:
    """Run the hypotheses check, the exact solver, the colorer and the audit on one instance."""
    started = time.perf_counter()
    g = job.graph
    result = InstanceResult(index=job.index, source=job.source, n=g.n, m=g.edge_count, delta=g.max_degree)
    target = None
    if job.cls is not None:
        check = check_hypotheses(g, job.cls, job.embedding)
        result.hypotheses = check.to_dict()
        target = job.cls.palette(g.max_degree)

    if job.exact:
        solved = injective_chromatic_number(g, job.budget)
        result.exact = ExactSummary(status=solved.status.value, value=solved.value, nodes=solved.nodes,
                                    lower_bound=solved.lower_bound, refuted=list(solved.refuted))
        if solved.status == SolverStatus.OK and target is not None and solved.value > target:
            result.falsification.append(f"exact χ_i = {solved.value} exceeds the target palette {target}")

    if job.constructive and job.cls is not None and result.hypotheses and result.hypotheses['ok']:
        try:
            colored = color_constructive(g, job.cls, job.embedding)
            coloring = _corrupt(g, colored.coloring) if job.corrupt else colored.coloring
            valid = validate_injective(g, coloring)
            in_palette = all(0 <= c < colored.palette for c in coloring.assignment.values())
            summary = colored.to_dict()
            result.constructive = ConstructiveSummary(
                palette=colored.palette,
                colors_used=coloring.palette_size,
                valid=valid.ok and in_palette,
                steps=summary['steps'],
                kinds=summary['kinds'],
                methods=summary['methods'],
                fallbacks=summary['fallbacks'],
                supplementary=summary['supplementary'],
            )
            if not result.constructive.valid:
                result.falsification.append(f"constructive coloring rejected: {valid.to_dict()}")
            off_rule = colored.fallback_steps()
            if off_rule:
                where = ", ".join(f"{s.level}:{s.reduction.kind.value}:{s.fallback}" for s in off_rule)
                result.falsification.append(f"prescribed extension failed at levels {where}")
            if colored.supplementary:
                logger.warning("instance %d used %d supplementary configurations", job.index,
                               colored.supplementary)
        except TheoremViolation as e:
            path = Path(job.output_dir) / f"violation-{job.cls.value.lower()}-{job.index:04d}.json"
            result.certificate = str(e.serialize(path))
            result.falsification.append(f"theorem violation: {e}")

    if result.exact and result.exact.status == "OK" and result.constructive:
        result.agreement = result.exact.value <= result.constructive.colors_used <= result.constructive.palette

    if job.audit and job.cls is not None:
        try:
            report = audit_for_class(g, job.cls, job.embedding, job.audit_mode)
            result.audit = AuditReportModel.from_report(report)
            if not report.ok:
                names = ", ".join(a.name for a in report.failures())
                result.falsification.append(f"audit failed: {names}")
        except InjectiveLabError as e:
            result.error = f"audit: {e}"

    for reason in result.falsification:
        logger.error("falsification candidate %d (%s): %s", job.index, job.source, reason)
    result.elapsed_seconds = round(time.perf_counter() - started, 6)
    return result


def run_jobs(jobs: Sequence[Job], workers: int) -> List[InstanceResult]:
    """Evaluate jobs, in parallel when workers > 1; results come back in index order."""
    if workers <= 1 or len(jobs) <= 1:
        return [evaluate(job) for job in jobs]
    with ProcessPoolExecutor(max_workers=workers) as pool:
        results = list(pool.map(evaluate, jobs))
    return sorted(results, key=lambda r: r.index)


# =============================================================================
# Commands
# =============================================================================

def cmd_analyze(args: argparse.Namespace, settings: Settings, report: RunReport) -> int:
    g, emb = load_instance(args.input, args.embedding)
    analysis: Dict[str, Any] = degree_profile(g).to_dict()
    analysis['girth'] = _girth_value(g)
    if g.n:
        mad = mad_exact(g)
        analysis['mad'] = format_rational(mad.value)
        analysis['mad_witness'] = sorted(mad.witness)

    td = thread_decomposition(g)
    lengths: Dict[str, int] = {}
    for t in td.threads:
        lengths[str(t.length)] = lengths.get(str(t.length), 0) + 1
    analysis['threads'] = {
        'by_length': dict(sorted(lengths.items(), key=lambda kv: int(kv[0]))),
        'zero_threads': len(td.zero_threads),
        'bare_cycles': len(td.bare_cycles()),
        'pendant_chains': sum(1 for c in td.non_thread if c.kind == "pendant"),
        'pseudo_adjacent_pairs': len(td.pseudo_adjacent),
    }
    g23 = build_G23(g)
    analysis['g23'] = {'edges': g23.graph.edge_count, 'isolated': len(g23.isolated)}
    try:
        aux = build_auxiliary_H(g)
        analysis['aux_h'] = {
            'n_H': aux.n_H,
            'n_hat': aux.n_hat,
            'edges': len(aux.edges),
            'thread_edges': len(aux.thread_edges),
            'a': list(aux.a_counts),
            'a_hat': list(aux.a_hat_counts),
        }
    except PreconditionError as e:
        analysis['aux_h'] = {'unavailable': str(e)}
    if emb is not None:
        analysis['faces'] = sorted(len(walk) for walk in emb.faces)

    report.analysis = analysis
    print(f"✅ analyzed {args.input}: n={g.n}, Δ={g.max_degree}, mad={analysis.get('mad', '-')}", file=sys.stderr)
    return EXIT_OK


def cmd_color(args: argparse.Namespace, settings: Settings, report: RunReport) -> int:
    if not args.theorem_class and not args.exact:
        raise PreconditionError("color needs --class and/or --exact")
    g, emb = load_instance(args.input, args.embedding)
    cls = TheoremClass.parse(args.theorem_class) if args.theorem_class else None
    if cls is not None:
        check = check_hypotheses(g, cls, emb)
        if not check.ok:
            raise HypothesisError(check)
    job = Job(0, args.input, g, emb, cls, settings.budget, exact=args.exact, constructive=cls is not None,
              output_dir=str(args.output or settings.output_dir))
    result = evaluate(job)
    report.instances.append(result)
    if result.certificate:
        print(f"❌ theorem violation, certificate written to {result.certificate}", file=sys.stderr)
        return EXIT_FAILURE
    if result.falsification:
        print(f"❌ {'; '.join(result.falsification)}", file=sys.stderr)
        return EXIT_FAILURE
    if result.constructive:
        print(f"✅ constructive palette {result.constructive.palette}, "
              f"{result.constructive.colors_used} colors used, valid", file=sys.stderr)
    if result.exact:
        marker = "⚠️ " if result.aborted else "✅"
        print(f"{marker} exact χ_i: {result.exact.value if result.exact.value is not None else result.exact.status}",
              file=sys.stderr)
    return EXIT_OK


def cmd_audit(args: argparse.Namespace, settings: Settings, report: RunReport) -> int:
    g, emb = load_instance(args.input, args.embedding)
    cls = TheoremClass.parse(args.theorem_class)
    mode = AuditMode.SURVEY if args.survey else AuditMode.STRICT
    try:
        audit = audit_for_class(g, cls, emb, mode)
    except PreconditionError as e:
        raise HypothesisError(f"{e} (witness: {e.witness})")
    result = InstanceResult(index=0, source=args.input, n=g.n, m=g.edge_count, delta=g.max_degree,
                            audit=AuditReportModel.from_report(audit))
    report.instances.append(result)
    try:
        audit.raise_on_failure()
    except AuditFailure as e:
        result.falsification.append(str(e))
        print(f"❌ {e}", file=sys.stderr)
        return EXIT_FAILURE
    print(f"✅ audit {audit.audit}: {len(audit.assertions)} assertions, none failed", file=sys.stderr)
    return EXIT_OK


def cmd_verify(args: argparse.Namespace, settings: Settings, report: RunReport) -> int:
    cls = TheoremClass.parse(args.theorem_class)
    report.seed = args.seed
    report.theorem_class = cls.value
    corpus = build_corpus(cls, args.seed, args.count, args.size, include_fixed=not args.no_fixed)
    output_dir = str(args.output or settings.output_dir)
    jobs = [
        Job(i, inst.provenance, inst.graph, inst.embedding, cls, settings.budget,
            audit=not args.no_audit, corrupt=(i == args.inject_corrupt), output_dir=output_dir)
        for i, inst in enumerate(corpus.instances)
    ]
    logger.info("verify %s: %d instances, %d workers", cls.value, len(jobs), args.jobs or settings.jobs)
    report.instances.extend(run_jobs(jobs, args.jobs or settings.jobs))
    report.finalize()
    summary = report.summary
    print(f"{'✅' if not summary.falsification_candidates else '❌'} {cls.value}: "
          f"{summary.instances} instances, {summary.exact_ok} exact, {summary.exact_aborted} aborted, "
          f"{summary.constructive_ok} colored, {summary.falsification_candidates} falsification candidates",
          file=sys.stderr)
    return EXIT_FAILURE if summary.falsification_candidates else EXIT_OK


def _parse_edge(text: str) -> Tuple[int, int]:
    u, _, v = text.partition("-")
    try:
        return int(u), int(v)
    except ValueError:
        raise PreconditionError(f"edge must look like U-V, got {text!r}")


def cmd_generate(args: argparse.Namespace, settings: Settings, report: RunReport) -> int:
    out = Path(args.output or settings.output_dir)
    construction = args.construction
    emb: Optional[PlaneEmbedding] = None
    if construction == "corpus":
        cls = TheoremClass.parse(args.theorem_class)
        corpus = build_corpus(cls, args.seed, args.count, args.size)
        manifest = write_corpus(corpus, out)
        report.seed, report.theorem_class = args.seed, cls.value
        report.analysis = {'manifest': str(manifest), 'instances': len(corpus.instances),
                           'fingerprint': corpus.fingerprint()}
        print(f"✅ wrote {len(corpus.instances)} instances to {out}", file=sys.stderr)
        return EXIT_OK

    if construction == "named":
        g = named_graph(args.base)
    elif construction == "subdivide":
        base = named_graph(args.base)
        base_emb = plane_embedding(base) if args.planar else None
        g, emb = subdivide(base, args.k, base_emb)
    elif construction == "insert_vertex":
        base = named_graph(args.base)
        if args.edge:
            g = insert_vertex(base, _parse_edge(args.edge))
        else:
            inserted = regular_even_order_insert(base, budget=settings.budget)
            g = inserted.graph
            report.analysis = {'edge': list(inserted.edge), 'tag': inserted.tag}
    elif construction == "class2_counterexample":
        base = named_graph(args.base)
        if args.insert:
            base = regular_even_order_insert(base, budget=settings.budget).graph
        g = class2_counterexample(base, settings.budget)
    elif construction == "random_sparse":
        cls = TheoremClass.parse(args.theorem_class)
        rule = cls.rule
        if rule.planar:
            raise PreconditionError(f"{cls.value} is a planar class; use random_planar_girth")
        g = random_sparse(args.size, rule.mad_bound, rule.delta_min, args.seed,
                          strict=rule.mad_strict, delta_max=rule.delta_exact)
    else:
        g, emb = random_planar_girth(args.size, args.girth, args.delta, args.seed)
    if args.planar and emb is None and construction != "subdivide":
        emb = plane_embedding(g)

    out.mkdir(parents=True, exist_ok=True)
    stem = args.name or construction
    edge_path = out / f"{stem}.edges"
    edge_path.write_text(format_graph(g), encoding="utf-8")
    files = [str(edge_path)]
    if emb is not None:
        rot_path = out / f"{stem}.rot"
        rot_path.write_text(format_rotation(emb), encoding="utf-8")
        files.append(str(rot_path))
    report.analysis = {**(report.analysis or {}), 'files': files, 'n': g.n, 'm': g.edge_count,
                       'delta': g.max_degree, 'girth': _girth_value(g)}
    print(f"✅ wrote {', '.join(files)}", file=sys.stderr)
    return EXIT_OK


COMMANDS = {
    'analyze': cmd_analyze,
    'color': cmd_color,
    'audit': cmd_audit,
    'verify': cmd_verify,
    'generate': cmd_generate,
}

GENERATORS = ("named", "subdivide", "insert_vertex", "class2_counterexample",
              "random_sparse", "random_planar_girth", "corpus")


# =============================================================================
# Entry point
# =============================================================================

def build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(prog="injlab", description=__doc__,
                                     formatter_class=argparse.RawDescriptionHelpFormatter)
    parser.add_argument("--log-level", default=None, help="logging level (default: INJLAB_LOG_LEVEL or WARNING)")
    parser.add_argument("--budget", type=int, default=None, help="exact-solver node budget (default: INJLAB_BUDGET)")
    parser.add_argument("--jobs", type=int, default=None, help="worker processes for verify (default: INJLAB_JOBS)")
    parser.add_argument("--output", default=None, help="directory for certificates and generated files")
    sub = parser.add_subparsers(dest="command", required=True)

    p = sub.add_parser("analyze", help="structural profile of a graph")
    p.add_argument("input")
    p.add_argument("--embedding")

    p = sub.add_parser("color", help="constructive and/or exact injective coloring")
    p.add_argument("input")
    p.add_argument("--class", dest="theorem_class")
    p.add_argument("--exact", action="store_true")
    p.add_argument("--embedding")

    p = sub.add_parser("audit", help="discharging audit for a theorem class")
    p.add_argument("input")
    p.add_argument("--class", dest="theorem_class", required=True)
    p.add_argument("--embedding")
    p.add_argument("--survey", action="store_true", help="record preconditions instead of rejecting")

    p = sub.add_parser("verify", help="generate a corpus and check every instance")
    p.add_argument("--class", dest="theorem_class", required=True)
    p.add_argument("--seed", type=int, default=1)
    p.add_argument("--count", type=int, default=20)
    p.add_argument("--size", type=int, default=30)
    p.add_argument("--no-audit", action="store_true")
    p.add_argument("--no-fixed", action="store_true", help="skip the fixed named instance")
    p.add_argument("--inject-corrupt", type=int, default=None, metavar="INDEX",
                   help="test hook: corrupt the coloring of instance INDEX")

    p = sub.add_parser("generate", help="write graph files for a construction")
    p.add_argument("--construction", choices=GENERATORS, required=True)
    p.add_argument("--base", default="petersen", help="named base graph (petersen, cube, C5, K4, W5, ...)")
    p.add_argument("--k", type=int, default=1, help="subdivision count")
    p.add_argument("--edge", help="edge U-V for insert_vertex")
    p.add_argument("--insert", action="store_true", help="class2_counterexample: insert a vertex first")
    p.add_argument("--planar", action="store_true", help="also write a plane embedding")
    p.add_argument("--class", dest="theorem_class", default="mad52_d4")
    p.add_argument("--seed", type=int, default=1)
    p.add_argument("--size", type=int, default=30)
    p.add_argument("--count", type=int, default=10)
    p.add_argument("--girth", type=int, default=13)
    p.add_argument("--delta", type=int, default=4)
    p.add_argument("--name", help="file stem (default: the construction name)")
    return parser


def _settings(args: argparse.Namespace) -> Settings:
    base = load_settings()
    budget = args.budget if args.budget is not None else base.budget
    jobs = args.jobs if args.jobs is not None else base.jobs
    if budget < 1 or jobs < 1:
        raise PreconditionError("--budget and --jobs must be positive")
    return Settings(budget=budget, extension_budget=base.extension_budget, jobs=jobs,
                    log_level=(args.log_level or base.log_level).upper(),
                    output_dir=args.output or base.output_dir)


def main(argv: Optional[Sequence[str]] = None) -> int:
    argv = list(sys.argv[1:] if argv is None else argv)
    args = build_parser().parse_args(argv)
    report = RunReport(command=args.command, argv=argv)
    started = time.perf_counter()
    try:
        settings = _settings(args)
        logging.basicConfig(level=settings.log_level, stream=sys.stderr,
                            format="%(asctime)s %(levelname)s %(name)s: %(message)s")
        report.budget = settings.budget
        code = COMMANDS[args.command](args, settings, report)
    except HypothesisError as e:
        code, report.error = EXIT_HYPOTHESIS, str(e)
        print(f"❌ hypothesis rejected: {e}", file=sys.stderr)
    except TheoremViolation as e:
        path = e.serialize(Path(args.output or load_settings().output_dir) / f"violation-{args.command}.json")
        code, report.error = EXIT_FAILURE, str(e)
        report.certificates.append(str(path))
        print(f"❌ theorem violation, certificate written to {path}", file=sys.stderr)
    except (AuditFailure, GenerationError, SolverAborted) as e:
        code, report.error = EXIT_FAILURE, str(e)
        print(f"❌ {e}", file=sys.stderr)
    except (GraphFormatError, EmbeddingError, PreconditionError, ValueError, OSError) as e:
        code, report.error = EXIT_INPUT, str(e)
        print(f"❌ input error: {e}", file=sys.stderr)

    report.finalize()
    report.success = code == EXIT_OK
    report.elapsed_seconds = round(time.perf_counter() - started, 6)
    print(report.to_json())
    return code


if __name__ == "__main__":
    sys.exit(main())
