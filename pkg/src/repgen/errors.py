"""Shared exception types."""


class ConfigError(Exception):
    """A generator, collection, or search configuration was rejected."""


class ScenarioError(Exception):
    """A scenario document failed validation.

    Messages are path-qualified ("generator.alpha: expected ...") so a user
    can locate the offending field without a stack trace.
    """

    def __init__(self, path: str, message: str):
        self.path = path
        self.message = message
        super().__init__(f"{path}: {message}")


class InvariantViolation(RuntimeError):
    """An internal impossibility was reached; carries a diagnostic snapshot."""

    def __init__(self, message: str, snapshot=None):
        self.snapshot = snapshot
        super().__init__(message)
