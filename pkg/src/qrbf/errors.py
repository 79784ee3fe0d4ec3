"""Exception types shared across the package."""


class SingularMatrix(ArithmeticError):
    """Raised when LU elimination meets a pivot below the singularity threshold.

    ``duplicates`` holds index pairs of coincident RBF centers when the
    caller was able to identify them.
    """

    def __init__(self, message, duplicates=()):
        super().__init__(message)
        self.duplicates = tuple(duplicates)


class DimensionMismatch(ValueError):
    pass


class LengthMismatch(ValueError):
    pass


class ParameterOutOfRange(ValueError):
    pass


class AntipodalInputs(ValueError):
    """The two rotations are half a turn apart, so the shortest arc is not unique."""


class IdentityRotation(ValueError):
    """Rotation angle is ~0 and the axis is undefined."""


class NearPiAngle(ValueError):
    """Rotation angle is ~pi and the skew-symmetric part carries no axis information."""
