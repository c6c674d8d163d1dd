class GnnTrainerError(Exception):
    """Base class for this package's errors."""


class MalformedFileError(GnnTrainerError):
    """An instance, threshold, or config file cannot be parsed."""


class EmptyTrainingSetError(GnnTrainerError):
    """Training was requested without any (instance, labels) pair."""
