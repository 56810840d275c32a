"""Exception and warning types shared across the package."""


class LinAlgError(Exception):
    """Base class for all numerical errors raised by this package."""


class DimensionMismatch(LinAlgError):
    """Operands have incompatible or out-of-contract shapes."""


class RankDeficient(LinAlgError):
    """Columns are numerically dependent (orthonormalization pivot collapsed)."""


class NotPositiveDefinite(LinAlgError):
    """Cholesky pivot failure: the matrix is not (numerically) SPD."""


class NoConvergence(LinAlgError):
    """An iterative kernel exhausted its sweep budget above threshold."""


class NotUnit(LinAlgError):
    """A direction argument is not a unit vector."""


class ConditionViolated(LinAlgError):
    """The initial basis violates the rank condition rank(U0^T Ud) = d.

    Raised when the projected Gram matrix X X^T loses positive definiteness,
    which is the hard symptom of starting orthogonal to the leading invariant
    subspace.
    """


class WindowAtFloor(LinAlgError):
    """A rate-fit window contains errors at the numerical noise floor."""


class SelfCheckFailed(LinAlgError):
    """A built-in runtime identity check disagreed beyond tolerance."""


class ConditionWarning(UserWarning):
    """Advisory: the initial basis looks rank-deficient against the oracle."""
