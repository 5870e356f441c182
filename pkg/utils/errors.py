# utils/errors.py - Exception hierarchy shared by every package

class FusionError(Exception):
    """Base class for all toolkit errors. `exit_code` is what the CLI returns."""
    exit_code = 6


class ConfigError(FusionError):
    exit_code = 3


class DataError(FusionError):
    exit_code = 4


class ParseError(DataError):
    """Malformed input file; `line` is the 1-based file line (header = 1)."""

    def __init__(self, message, path=None, line=None):
        self.path = path
        self.line = line
        where = ""
        if path is not None:
            where = f"{path}"
            if line is not None:
                where += f":{line}"
            where += ": "
        super().__init__(f"{where}{message}")


class ValidationError(DataError, ValueError):
    pass


class DomainError(DataError, ValueError):
    """Value outside the mathematical domain of an operation (log of <= 0 etc)."""


class InsufficientDataError(FusionError):
    exit_code = 5


class EmptyPanelError(InsufficientDataError):
    pass


class StageError(FusionError):
    """Factor pipeline operation called out of stage order."""


class DimensionError(FusionError, ValueError):
    pass


class UndefinedMetricError(FusionError):
    pass
