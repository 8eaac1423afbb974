"""Exception hierarchy shared by the pipeline stages."""


class PollcastError(Exception):
    """Base class for all errors raised by pollcast."""


class ConfigurationError(PollcastError):
    """Election configuration is invalid or does not match the input data."""


class PollParseError(PollcastError):
    """A poll file could not be parsed."""

    def __init__(self, message, line=None):
        self.line = line
        if line is not None:
            message = f"line {line}: {message}"
        super().__init__(message)


class PollValidationError(PollParseError):
    """A poll row was readable but its values are out of range."""


class NoPollsError(PollcastError):
    """No poll qualifies for the requested pooling window."""


class DegenerateDrawError(PollcastError):
    """No eligible party passes the threshold in a simulated election."""


class EventParseError(PollcastError):
    """An event expression does not match the event grammar."""

    def __init__(self, message, token=None):
        self.token = token
        super().__init__(message)


class EstimationError(PollcastError):
    """A probability could not be estimated, e.g. every draw was degenerate."""
