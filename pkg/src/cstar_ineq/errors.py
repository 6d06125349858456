"""Exception hierarchy shared by every module of the package."""


class CStarIneqError(Exception):
    """Base class for all errors raised by :mod:`cstar_ineq`."""


class DimensionError(CStarIneqError, ValueError):
    """Operand shapes are incompatible."""


class SymmetryError(CStarIneqError, ValueError):
    """A Hermitian matrix was required."""


class NumericalError(CStarIneqError, ArithmeticError):
    """An iterative routine failed to converge or a consistency check failed."""


class DomainError(CStarIneqError, ValueError):
    """A scalar function is undefined somewhere it is evaluated."""


class NegativityError(DomainError):
    """A fractional power was requested for a matrix with negative spectrum."""


class StateError(CStarIneqError, ValueError):
    """A density matrix is not positive or does not have unit trace."""


class PreconditionError(CStarIneqError, ValueError):
    """A checker was called on inputs outside the hypotheses of its theorem."""


class ReproductionError(CStarIneqError, AssertionError):
    """A published numerical value could not be reproduced."""


class UsageError(CStarIneqError, ValueError):
    """A request is malformed (bad family, bad range, bad file)."""
