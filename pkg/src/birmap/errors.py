"""Exception hierarchy shared by every birmap module."""


class BirmapError(Exception):
    """Base class for all errors raised by birmap."""


class ParseError(BirmapError, ValueError):
    """Malformed scalar or expression text."""


class DomainError(BirmapError, ValueError):
    """An operation was applied outside its mathematical domain."""


class NotDivisibleError(DomainError):
    """Exact division was requested but a nonzero remainder exists."""


class InvariantViolation(BirmapError, ValueError):
    """A value does not satisfy the invariants of its type."""


class NotBirationalError(DomainError):
    """The parameter tuple fails a birationality clause."""

    def __init__(self, violated):
        self.violated = list(violated)
        super().__init__("map is not birational; violated: " + "; ".join(self.violated))


class DegenerateCompositionError(DomainError):
    """All components of a composition vanish identically."""


class IndeterminatePointError(DomainError):
    """A projective map was evaluated at one of its indeterminacy points."""

    def __init__(self, point):
        self.point = point
        super().__init__(f"{point} is an indeterminacy point")


class InconclusiveFitError(DomainError):
    """Too few terms to certify a minimal linear recurrence."""


class OutOfScopeError(BirmapError, ValueError):
    """The parameter tuple lies outside the classified (degenerate) families."""


class UnsupportedCaseError(BirmapError, ValueError):
    """No normal form or fibration catalog exists for this sub-case."""


class ConfigError(BirmapError, ValueError):
    """A job configuration file is missing, unreadable or malformed."""
