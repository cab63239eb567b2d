"""Exception hierarchy shared by all nullcone modules."""


class NullconeError(Exception):
    """Base class for all library errors."""


class DomainError(NullconeError):
    """Evaluation outside the mathematical domain (log/sqrt/atanh, a(t) <= 0)."""


class BranchDomainError(DomainError):
    """Point outside the branch domain of a defining function or chart."""


class ScaleFactorError(DomainError):
    """Scale factor non-positive (or undefined) at a point of actual use."""


class ChartDegeneracyError(NullconeError):
    """Chart Jacobian loses rank (e.g. on the sphere-coordinate axis)."""


class SingularSeparationError(NullconeError):
    """Two-point kernel requested at (or too close to) y.y' = 0."""


class StepSizeError(NullconeError):
    """Finite-difference levels disagree beyond the accepted threshold."""


class ParseError(NullconeError):
    """Syntax error in a scale-factor expression; carries the byte offset."""

    def __init__(self, message: str, offset: int):
        super().__init__(f"{message} (offset {offset})")
        self.offset = offset


class UnknownFunctionError(ParseError):
    """Unknown function name in a scale-factor expression."""

    def __init__(self, name: str, offset: int):
        super().__init__(f"unknown function '{name}'", offset)
        self.name = name


class ConfigError(NullconeError):
    """Invalid CLI/config input, rejected before any computation."""
