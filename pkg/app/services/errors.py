"""Domain exceptions shared by the services, the CLI and the HTTP routes."""


class PosetError(ValueError):
    """Invalid poset input or an unmet precondition on a poset."""


class NaturalityViolation(PosetError):
    pass


class OutOfRange(PosetError):
    pass


class HeightTooSmall(PosetError):
    pass


class HeightTooLarge(PosetError):
    pass


class PosetParseError(PosetError):
    def __init__(self, message, line=None):
        self.line = line
        if line is not None:
            message = f"line {line}: {message}"
        super().__init__(message)


class OverflowUnrepresentable(ArithmeticError):
    """Exact elimination exceeded the coefficient budget; use randomized mode."""


class ResourceBound(RuntimeError):
    pass


class ReductionDiverged(RuntimeError):
    pass
