"""Exception types shared across the package."""


class ProjBoundsError(Exception):
    """Base class for every error raised by projbounds."""


class InputError(ProjBoundsError):
    """Malformed argument: wrong shape, non-finite entries, or an
    out-of-range parameter."""


class ContainmentError(ProjBoundsError):
    """A required subspace containment does not hold."""


class DegenerateError(ProjBoundsError):
    """The operation is undefined on a degenerate instance, i.e. when
    every subspace equals the common intersection."""


class InfeasibleError(ProjBoundsError):
    """Affine subspaces with empty intersection."""
