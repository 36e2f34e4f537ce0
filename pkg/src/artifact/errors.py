"""Exception types shared across the package."""


class ArtifactError(Exception):
    """Base class for every error raised by this package."""


class InvalidLiteral(ArtifactError, ValueError):
    pass


class UnmappedVariable(ArtifactError, KeyError):
    pass


class VariableAbsent(ArtifactError, ValueError):
    pass


class EmptySetError(ArtifactError, ValueError):
    pass


class IterationCapExceeded(ArtifactError, RuntimeError):
    """Renaming failed to reach a fixpoint within the allowed rounds.

    ``trace`` holds the clause-sets produced by each round so the failure
    can be inspected.
    """

    def __init__(self, message, trace=()):
        super().__init__(message)
        self.trace = list(trace)


class RecursionCapExceeded(ArtifactError, RuntimeError):
    pass


class IndexOutOfRange(ArtifactError, IndexError):
    pass


class LengthMismatch(ArtifactError, ValueError):
    pass


class TooLarge(ArtifactError, ValueError):
    pass


class TooManyVariables(ArtifactError, ValueError):
    pass


class IncompleteAssignment(ArtifactError, ValueError):
    pass


class UnsupportedOrder(ArtifactError, ValueError):
    pass


class InfeasibleParameters(ArtifactError, ValueError):
    pass


class ParseError(ArtifactError, ValueError):
    def __init__(self, message, line=None):
        if line is not None:
            message = f"line {line}: {message}"
        super().__init__(message)
        self.line = line
