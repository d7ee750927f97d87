"""Exception types shared across the library."""


class UrysohnError(Exception):
    """Base class for all library errors."""


class ShapeError(UrysohnError):
    """Input has the wrong shape (non-square matrix, length mismatch)."""


class ParameterError(UrysohnError):
    """Parameter out of range or inconsistent parameter combination."""


class NotAdmissible(UrysohnError):
    """Vector fails the admissibility inequalities.

    Carries the first violating pair and which inequality failed.
    """

    def __init__(self, message, pair=None, which=None):
        super().__init__(message)
        self.pair = pair
        self.which = which  # "lipschitz" | "sum" | "positivity"


class SpaceMismatch(UrysohnError):
    """Operands are defined over different metric spaces."""


class NotSubgroup(UrysohnError):
    """Claimed subgroup is not contained in the ambient group."""


class NotIsometryGroup(UrysohnError):
    """Element set is not a group of isometries of the given space."""


class DegenerateVector(UrysohnError):
    """Seed vector duplicates the distance profile of an existing point."""


class BudgetExceeded(UrysohnError):
    """Search or closure ran out of its point budget.

    ``partial`` holds whatever verified partial state was built.
    """

    def __init__(self, message, partial=None):
        super().__init__(message)
        self.partial = partial


class ChainConstructionFailure(UrysohnError):
    """Billiard chain search failed on inputs it should handle; a defect."""
