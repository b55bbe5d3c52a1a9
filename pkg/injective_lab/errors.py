"""Exception hierarchy for the injective coloring lab."""

import json
from pathlib import Path
from typing import Any, Dict, List, Optional


class InjectiveLabError(Exception):
    """Base class for every error raised by this package."""


class GraphFormatError(InjectiveLabError, ValueError):
    """Malformed edge-list or rotation-system document."""

    def __init__(self, message: str, line: Optional[int] = None):
        self.line = line
        if line is not None:
            message = f"line {line}: {message}"
        super().__init__(message)


class EmbeddingError(InjectiveLabError, ValueError):
    """Rotation system that is not a valid plane embedding."""


class PreconditionError(InjectiveLabError, ValueError):
    """An operation was called outside its preconditions."""

    def __init__(self, message: str, witness: Any = None):
        self.witness = witness
        super().__init__(message)


class HypothesisError(InjectiveLabError):
    """Input rejected by the hypotheses of a theorem class."""

    def __init__(self, check: Any):
        self.check = check
        super().__init__(str(check))


class SolverAborted(InjectiveLabError):
    """Exact search ran out of its node budget."""


class GenerationError(InjectiveLabError):
    """A seeded generator gave up after its fixed number of attempts."""


class AuditFailure(InjectiveLabError):
    """A discharging audit reported a failing assertion."""

    def __init__(self, report: Any):
        self.report = report
        failed = [a.name for a in report.failures()]
        super().__init__(f"audit {report.audit} failed: {', '.join(failed)}")


class TheoremViolation(InjectiveLabError):
    """
    The reduction engine met a graph it could neither reduce nor color.

    This is the most interesting thing the lab can produce: either a bug or a
    counterexample. The offending graph is kept so it can be written out.
    """

    def __init__(self, message: str, graph: Any, class_tag: str, trace: Optional[List[Dict]] = None):
        self.graph = graph
        self.class_tag = class_tag
        self.trace = trace or []
        super().__init__(message)

    def to_dict(self) -> Dict:
        from .graph_structure import format_graph

        return {
            'error': str(self),
            'class': self.class_tag,
            'edge_list': format_graph(self.graph),
            'trace': self.trace,
        }

    def serialize(self, path: Path) -> Path:
        """Write edge list, class tag and step trace to ``path`` as JSON."""
        path = Path(path)
        path.parent.mkdir(parents=True, exist_ok=True)
        path.write_text(json.dumps(self.to_dict(), indent=2, ensure_ascii=False), encoding="utf-8")
        return path
