"""Exception types shared across the library."""


class LanfaError(Exception):
    """Base class for all errors raised by this library."""


class DimensionError(LanfaError):
    """Operands have incompatible shapes or lengths."""


class DomainError(LanfaError):
    """A function was evaluated outside its domain."""


class ParameterError(LanfaError):
    """An argument violates a documented precondition."""


class SolverError(LanfaError):
    """An iterative solver failed to converge."""


class SingularShiftError(LanfaError):
    """A shifted system (T - zI) is singular or numerically singular.

    Carries the shift and its distance to the nearest eigenvalue of T so
    callers can report the failure instead of hiding it.
    """

    def __init__(self, shift, nearest_distance=None):
        self.shift = shift
        self.nearest_distance = nearest_distance
        msg = f"shift {shift} is (numerically) an eigenvalue of T"
        if nearest_distance is not None:
            msg += f" (distance to nearest eigenvalue: {nearest_distance})"
        super().__init__(msg)
