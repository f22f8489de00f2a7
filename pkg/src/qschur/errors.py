"""Exception types shared across the package."""


class QSchurError(Exception):
    """Base class for all package-specific errors."""


class NotDivisible(QSchurError):
    """Exact Laurent division left a nonzero remainder."""


class OddExponent(QSchurError):
    """Evaluation at v^2 = q hit an odd exponent."""


class NoFit(QSchurError):
    """Sample data is inconsistent with the requested fit degree."""


class TooLarge(QSchurError):
    """An enumeration exceeded its configured cap."""


class UnsupportedShape(QSchurError):
    """Left factor matches no known multiplication formula."""


class Incompatible(QSchurError):
    """Operands disagree on field, size, basis, or row/column sums."""


class ChainInfeasible(QSchurError):
    """Triangular factor chain forced a negative diagonal entry."""


class NoStabilization(QSchurError):
    """Shifted-product samples do not stabilize at any tried degree."""


class AnsatzFailure(QSchurError):
    """Limit-product samples do not fit a finite sum of weighted symbols."""
