"""Exception hierarchy shared across the package."""


class FPStreamError(Exception):
    """Base class for all errors raised by :mod:`fpstream`."""


class RecordError(FPStreamError, ValueError):
    """A malformed event record.  ``lineno`` is 1-based when known."""

    def __init__(self, message, lineno=None):
        self.lineno = lineno
        if lineno is not None:
            message = f"line {lineno}: {message}"
        super().__init__(message)


class MissingUtilityError(FPStreamError, KeyError):
    def __init__(self, sensor):
        self.sensor = sensor
        super().__init__(sensor)

    def __str__(self):
        return f"no utility entry for sensor {self.sensor!r}"


class UtilityTableError(FPStreamError, ValueError):
    pass


class BatchOrderError(FPStreamError, ValueError):
    pass


class BatchSizeError(FPStreamError, ValueError):
    pass


class EmptyLSDSError(FPStreamError, LookupError):
    pass


class EmptyPatternError(FPStreamError, ValueError):
    pass


class EmptyTransactionError(FPStreamError, ValueError):
    pass


class ModeError(FPStreamError, ValueError):
    """A mining routine was handed a tree built in the wrong weight mode."""


class BoundsExceededError(FPStreamError, ValueError):
    pass
