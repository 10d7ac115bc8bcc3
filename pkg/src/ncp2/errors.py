"""Exception hierarchy shared by every module.

The CLI maps these onto exit codes: ``InvalidInput`` -> 2,
``WorkspaceCapExceeded`` -> 3, ``InternalInconsistency`` -> 4.
"""


class Ncp2Error(Exception):
    """Base class for all library errors."""


class InvalidInput(Ncp2Error, ValueError):
    pass


class FieldMismatch(InvalidInput):
    """Two scalars from different fields met in one computation."""


class UnsupportedField(InvalidInput):
    """The requested operation needs a field property this field lacks."""


class DimensionMismatch(InvalidInput):
    pass


class CyclicQuiver(InvalidInput):
    pass


class DegenerateInput(InvalidInput):
    """Input lies on a locus where the construction is undefined."""


class PencilDegenerate(DegenerateInput):
    """Parameter is a base point of the Hesse pencil."""


class SingularCurve(DegenerateInput):
    """Group law requested on a singular cubic."""


class NoDeterminantalCurve(DegenerateInput):
    """det M(x) vanishes identically."""


class NotGeometric(DegenerateInput):
    pass


class WorkspaceCapExceeded(Ncp2Error):
    pass


class InternalInconsistency(Ncp2Error):
    pass


class Inconclusive(Ncp2Error):
    """Finite-field scans over different primes disagree."""
