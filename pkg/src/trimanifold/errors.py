"""Exception and warning types shared across the package."""


class TriangulationError(Exception):
    """Base class for all errors raised by trimanifold."""


class EmptyInput(TriangulationError, ValueError):
    pass


class WrongFaceArity(TriangulationError, ValueError):
    pass


class FaceNotPresent(TriangulationError, KeyError):
    def __init__(self, face, message=None):
        self.face = tuple(face)
        super().__init__(message or f"face {self.face} is not in the complex")

    def __str__(self):
        return self.args[0]


class NotMaximal(TriangulationError, ValueError):
    pass


class NotAManifold(TriangulationError, ValueError):
    pass


class UnsupportedDimension(TriangulationError, ValueError):
    pass


class ParityViolation(TriangulationError, ValueError):
    """Invariants that no closed surface can have (e.g. orientable with odd Euler characteristic)."""


class InvalidMove(TriangulationError, ValueError):
    """A Pachner move whose precondition fails.

    ``blocking`` holds the face that makes the move illegal, when there is one
    (for instance the edge ``{c, d}`` that already exists for a 2-2 move).
    """

    def __init__(self, message, blocking=None):
        super().__init__(message)
        self.blocking = tuple(blocking) if blocking is not None else None


class InvalidParameter(TriangulationError, ValueError):
    pass


class IsolatedNode(TriangulationError, ValueError):
    pass


class EmptyTrain(TriangulationError, ValueError):
    pass


class ParseError(TriangulationError, ValueError):
    def __init__(self, message, line=None):
        self.line = line
        if line is not None:
            message = f"line {line}: {message}"
        super().__init__(message)


class ValidationError(TriangulationError, ValueError):
    def __init__(self, message, line=None, record_id=None):
        self.line = line
        self.record_id = record_id
        if line is not None:
            message = f"line {line}: {message}"
        super().__init__(message)


class DuplicateTopFace(UserWarning):
    """The same vertex set was listed more than once; the copies were collapsed."""


class TargetUnreachable(UserWarning):
    """Balancing ran out of rounds before every class met its target.

    ``shortfall`` maps each class label to the number of missing records.
    """

    def __init__(self, shortfall):
        self.shortfall = dict(shortfall)
        parts = ", ".join(f"{k}: {v}" for k, v in sorted(self.shortfall.items()))
        super().__init__(f"targets not reached after all rounds ({parts})")
