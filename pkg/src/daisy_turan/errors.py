"""Exception types shared across the package."""


class InvalidInputError(ValueError):
    """Malformed arguments: wrong set sizes, bad permutations, out-of-range ranks."""


class ResourceRefusal(RuntimeError):
    """The requested instance exceeds the desk-scale bounds."""


class InfeasibleError(RuntimeError):
    """A constraint system has no feasible solution (e.g. an empty hitting constraint)."""


class BoundViolation(AssertionError):
    """A computed value contradicts a closed-form bound; signals a solver or formula bug."""
