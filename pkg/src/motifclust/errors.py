"""Exception hierarchy. Each class maps to one CLI exit code."""


class MotifClustError(Exception):
    exit_code = 1


class GraphParseError(MotifClustError):
    exit_code = 2

    def __init__(self, message: str, lineno: int = 0):
        super().__init__(message)
        self.lineno = lineno


class GraphValidationError(MotifClustError):
    exit_code = 2


class ConfigError(MotifClustError):
    exit_code = 3


class ResourceGuardError(MotifClustError):
    """Raised when an input exceeds a documented size ceiling."""

    exit_code = 4


class LPUnsolvedError(MotifClustError):
    exit_code = 5

    def __init__(self, message: str, status: str = "unsolved"):
        super().__init__(message)
        self.status = status
