class CremojiError(Exception):
    """Base class for every error raised by cremoji."""


class TableError(CremojiError, ValueError):
    """A resource file could not be parsed.

    ``path`` and ``line`` point at the offending row when known.
    """

    def __init__(self, message, path=None, line=None):
        self.path = path
        self.line = line
        where = ""
        if path is not None:
            where = f"{path}:{line}: " if line is not None else f"{path}: "
        elif line is not None:
            where = f"line {line}: "
        super().__init__(where + message)


class DataError(CremojiError, ValueError):
    """Input data violates a documented precondition."""


class UndefinedError(CremojiError, ArithmeticError):
    """A statistic is undefined for the given input (zero variance, p_e == 1, ...)."""
