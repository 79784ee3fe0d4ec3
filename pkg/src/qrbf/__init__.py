"""Radial basis function interpolation for scalars and rotations.

Quaternions are blended in their tangent space: each orientation is mapped
to R^3 with the quaternion logarithm, interpolated like any other vector
channel, and mapped back with the exponential.
"""

from qrbf.errors import (
    AntipodalInputs,
    DimensionMismatch,
    IdentityRotation,
    LengthMismatch,
    NearPiAngle,
    ParameterOutOfRange,
    SingularMatrix,
)
from qrbf.rbf import FittedSolver, Kernel, distance, distance_matrix, evaluate, fit, kernel_eval
from qrbf.solver import (
    ChannelLayout,
    PoseKey,
    PoseSample,
    PoseSet,
    QFittedSolver,
    hemisphere_align,
    qrbf_eval,
    qrbf_fit,
    weighted_blend,
)

__version__ = "0.1.0"

__all__ = [
    "AntipodalInputs",
    "ChannelLayout",
    "DimensionMismatch",
    "FittedSolver",
    "IdentityRotation",
    "Kernel",
    "LengthMismatch",
    "NearPiAngle",
    "ParameterOutOfRange",
    "PoseKey",
    "PoseSample",
    "PoseSet",
    "QFittedSolver",
    "SingularMatrix",
    "distance",
    "distance_matrix",
    "evaluate",
    "fit",
    "hemisphere_align",
    "kernel_eval",
    "qrbf_eval",
    "qrbf_fit",
    "weighted_blend",
]
