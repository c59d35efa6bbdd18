"""Exception hierarchy shared by all stress-gauge modules."""


class StressGaugeError(Exception):
    """Base class for all errors raised by this package."""


class InvalidData(StressGaugeError):
    """Input values violate a data invariant (non-finite entries, bad shape)."""


class InvalidScale(StressGaugeError):
    """Scale factor is non-positive or non-finite."""


class ShapeMismatch(StressGaugeError):
    """Two inputs that must agree in length or point count do not."""


class DegenerateHighSpace(StressGaugeError):
    """All high-dimensional distances are zero; normalization undefined."""


class DegenerateEmbedding(StressGaugeError):
    """All embedded distances are zero; the operation has no meaningful value."""


class UndefinedCorrelation(StressGaugeError):
    """A rank correlation was requested for a constant vector."""


class InvalidRequest(StressGaugeError):
    """The request is well-formed but meaningless (e.g. a scale curve for a scale-invariant metric)."""


class EmptyInput(StressGaugeError):
    """An operation requiring at least one element received none."""


class InvalidWeight(StressGaugeError):
    """A weight vector contains non-positive entries."""


class ParseError(StressGaugeError):
    """A CSV file could not be parsed; the message names the offending line."""


class EmptyTally(StressGaugeError):
    """An ordering tally with zero trials cannot yield a rate."""


class NumericalFailure(StressGaugeError):
    """An iterative method produced non-finite values and aborted."""
