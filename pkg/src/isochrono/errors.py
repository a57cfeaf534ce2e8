"""Exception hierarchy shared across the toolkit."""


class IsochronoError(Exception):
    """Base class for all toolkit errors."""


class InvalidInputError(IsochronoError):
    """An operation received a value outside its documented domain."""


class SchemaError(IsochronoError):
    """An input file does not match its documented schema."""


class DuplicateIdError(SchemaError):
    """A corpus contains the same segment id more than once."""


class AlignmentError(IsochronoError):
    """A line-aligned submission does not match the corpus length."""


class UnknownIdError(IsochronoError):
    """A submission references segment ids absent from the corpus."""


class InsufficientDataError(IsochronoError):
    """Too few samples for a fit to be meaningful."""


class EmptyAggregateError(IsochronoError):
    """Aggregation was asked to summarize zero segments."""


class TransportError(IsochronoError):
    """The scorer bridge is unreachable or the connection broke."""


class EvaluationError(IsochronoError):
    """A system evaluation failed hard (error budget exceeded)."""
