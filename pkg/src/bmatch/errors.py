"""Exception hierarchy shared by the whole toolkit."""


class BMatchError(Exception):
    """Base class for all errors raised by this package."""


class DuplicateEdgeError(BMatchError):
    """The same (ad, consumer) pair appears more than once."""


class NonPositiveWeightError(BMatchError):
    """An edge weight is zero, negative, or not a finite number."""


class IdOutOfRangeError(BMatchError):
    """A vertex id falls outside the declared range."""


class UnknownEdgeError(BMatchError):
    """A matching refers to an edge the instance does not contain."""


class SolverNotTerminatedError(BMatchError):
    """Thresholds were requested from a solver that has not finished."""


class PredictorFailureError(BMatchError):
    """A pivot predictor produced unusable output.

    ``ad_ids`` lists the affected ads when they can be determined.
    """

    def __init__(self, message, ad_ids=()):
        super().__init__(message)
        self.ad_ids = tuple(ad_ids)


class AdIdMismatchError(BMatchError):
    """Warm-start thresholds do not line up with the instance's ad ids."""


class MalformedLineError(BMatchError):
    """A line in a prediction or threshold file cannot be parsed."""


class MalformedHeaderError(BMatchError):
    """An instance file does not start with a valid header."""


class CountMismatchError(BMatchError):
    """Declared and actual edge counts of an instance file disagree."""


class InfeasibleConfigError(BMatchError):
    """A generator configuration cannot produce a valid instance."""


class BudgetExceededError(BMatchError):
    """The exact solver ran out of its node or size budget."""


class ValueMismatchError(BMatchError):
    """Two solvers that must agree returned different matchings."""
