"""Exception hierarchy shared by all rlcindex modules."""


class RlcError(Exception):
    """Base class for all domain errors raised by this package."""


class InvalidSequence(RlcError):
    """An operation received an empty or otherwise unusable label sequence."""


class ParseError(RlcError):
    """A text input (edge list, workload CSV) is malformed."""

    def __init__(self, message, line_number=None):
        if line_number is not None:
            message = f"line {line_number}: {message}"
        super().__init__(message)
        self.line_number = line_number


class EmptyGraph(RlcError):
    """An edge-list input contained no edges."""


class InfeasibleGraph(RlcError):
    """Generator parameters cannot produce a graph (too many edges, bad seed size)."""


class NotFound(RlcError):
    """A vertex or label identifier is unknown."""


class UnsupportedConstraint(RlcError):
    """The constraint is longer than the index build parameter k."""


class NonPrimitiveConstraint(RlcError):
    """The constraint sequence is not its own minimum repeat."""


class CorruptIndex(RlcError):
    """An index byte stream failed validation (magic, version, truncation)."""


class IndexBuildFailure(RlcError):
    """Index construction aborted; carries how far the build progressed."""

    def __init__(self, message, processed=None, total=None):
        if processed is not None and total is not None:
            message = f"{message} (processed {processed} of {total} vertices)"
        super().__init__(message)
        self.processed = processed
        self.total = total


class UnsatisfiableWorkload(RlcError):
    """Workload generation exhausted its draw budget before filling a query class."""


class EvaluatorMismatch(RlcError):
    """A benchmark evaluator answered a query differently from the stored expectation."""

    def __init__(self, evaluator, query, expected, got):
        super().__init__(
            f"evaluator {evaluator!r} answered {got} for {query}, expected {expected}"
        )
        self.evaluator = evaluator
        self.query = query
        self.expected = expected
        self.got = got


class CandidateSpaceTooLarge(RlcError):
    """An exhaustive constraint sweep would exceed the configured candidate guard."""


class ConfigRejected(RlcError):
    """Verification parameters fall outside the ranges the sweeps can handle."""


class StepLimitExceeded(RlcError):
    """A traversal exceeded its step cap (used by workload generation probes)."""
