from __future__ import annotations


class LtlpostError(Exception):
    pass


class FormulaSyntaxError(LtlpostError, ValueError):
    def __init__(self, message: str, position: int | None = None):
        self.position = position
        where = f" at position {position}" if position is not None else ""
        super().__init__(f"{message}{where}")


class PreconditionError(LtlpostError, ValueError):
    """An operation was called outside its documented input domain."""


class FragmentError(PreconditionError):
    """A formula uses a connective or temporal operator outside the declared fragment."""


class ResourceLimitError(LtlpostError, RuntimeError):
    """A configured work limit was exceeded before the procedure finished."""


class InvariantViolation(LtlpostError, AssertionError):
    """An internal self-check failed; this indicates a bug rather than bad input."""


class SynthesisNotFound(LtlpostError):
    """Bounded search ended without a result.  This is inconclusive, not a proof of nonexistence."""
