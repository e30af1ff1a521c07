"""Exception and warning classes raised by viscodual."""


class ViscoDualError(Exception):
    """Base class for all viscodual errors."""


class ValidationError(ViscoDualError, ValueError):
    """Input violates a model or spectrum invariant."""


class NonpositiveRate(ValidationError):
    pass


class NegativeWeight(ValidationError):
    pass


class NonFinite(ValidationError):
    pass


class DomainError(ViscoDualError, ValueError):
    """Argument outside the domain of an evaluation."""


class GridError(ViscoDualError, ValueError):
    """Sample grid is non-uniform, too short, or otherwise unusable."""


class ZeroFunction(ViscoDualError, ValueError):
    """A function that must not vanish identically does."""


class NumericalError(ViscoDualError, ArithmeticError):
    """Base class for failures of the numerical machinery."""


class BracketFailure(NumericalError):
    """A sign-change bracket for a root could not be established."""


class SingularTransform(NumericalError):
    """A Laplace transform value is non-positive or non-finite where it must not be."""


class PrecisionLoss(RuntimeWarning):
    """Estimated relative error of a computed residue exceeds the engine tolerance."""


class SchemaError(ValidationError):
    """Material file does not match the expected JSON schema."""
