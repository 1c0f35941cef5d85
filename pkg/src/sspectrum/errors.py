"""Exception hierarchy shared by all modules.

The CLI maps these onto exit codes: InputError -> 2, PreconditionError
(and subclasses) -> 3, NumericError (and subclasses) -> 4.
"""


class CalculusError(Exception):
    """Base class for all library errors."""


class InputError(CalculusError):
    """Malformed file, schema violation or unusable configuration."""


class PreconditionError(CalculusError):
    """An operation was called outside its stated domain."""


class CommutationError(PreconditionError):
    """Operator components fail the pairwise commutation invariant."""


class IntrinsicError(PreconditionError):
    """A stem required to be intrinsic has non-real coefficients."""


class GeometryError(PreconditionError):
    """Contour geometry violates separation or enclosure requirements."""


class HypothesisError(PreconditionError):
    """Operator violates the hypotheses the requested construction needs."""


class DivergenceError(PreconditionError):
    """Series evaluation requested outside its convergence domain."""


class NumericError(CalculusError):
    """Numerical linear algebra failed beyond recovery."""


class SingularMatrixError(NumericError):
    """Gaussian elimination met a pivot below the condition threshold."""

    def __init__(self, message, pivot_index=None, batch_index=None):
        super().__init__(message)
        self.pivot_index = pivot_index
        self.batch_index = batch_index


class EigenvalueError(NumericError):
    """The dense eigenvalue iteration did not converge."""
