"""Exception hierarchy.

Every error carries a stable ``name`` used by the CLI in its reports.
"""


class MagtorError(Exception):
    @property
    def name(self):
        return type(self).__name__


class ValidationError(MagtorError):
    """A system violates one of its structural invariants."""


class MetricNotSymmetric(ValidationError):
    pass


class MetricNotPositiveDefinite(ValidationError):
    pass


class MagneticNotSkew(ValidationError):
    pass


class MagneticNotInteger(ValidationError):
    pass


class MagneticDegenerate(ValidationError):
    pass


class DimensionMismatch(ValidationError):
    pass


class PairingFailure(MagtorError):
    pass


class NotPerfectSquare(MagtorError):
    pass


class DegenerateInput(MagtorError):
    pass


class OrientationReversed(MagtorError):
    """No determinant +1 witness exists for the requested normal form.

    ``factors`` and ``transform`` hold the factors and a determinant -1
    witness, so callers that accept GL(2m, Z) can still use them.
    """

    def __init__(self, message, factors=None, transform=None):
        super().__init__(message)
        self.factors = factors
        self.transform = transform


class NonIntegralVolume(MagtorError):
    pass


class CutoffTooSmall(MagtorError):
    pass


class InsufficientCutoff(MagtorError):
    pass


class InconsistentSpectrum(MagtorError):
    pass


class NotSymplectic(MagtorError):
    pass


class SingularTransform(MagtorError):
    pass


class BoundTooLarge(MagtorError):
    pass


class SchemaError(MagtorError):
    pass
