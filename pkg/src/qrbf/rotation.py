"""Rotation representations and conversions.

Conventions
-----------
- Quaternions are scalar-first ``[w, x, y, z]`` float arrays of shape (4,).
- ``quat_log`` returns the half-angle tangent vector ``(theta/2) * axis`` so
  that ``quat_exp`` is its literal inverse.
- Euler orders are strings such as ``"xyz"``: the first letter is the first
  rotation applied to the point, so ``"xyz"`` is the matrix ``Rz @ Ry @ Rx``.
- Matrices act on column vectors, right-handed frame.
"""

from __future__ import annotations

import math
from dataclasses import dataclass

import numpy as np

from qrbf.errors import AntipodalInputs, IdentityRotation, NearPiAngle, ParameterOutOfRange

IDENTITY = np.array([1.0, 0.0, 0.0, 0.0])
ROTATION_ORDERS = ("xyz", "xzy", "yxz", "yzx", "zxy", "zyx")
AXES = {"x": np.array([1.0, 0.0, 0.0]), "y": np.array([0.0, 1.0, 0.0]), "z": np.array([0.0, 0.0, 1.0])}

SMALL_ANGLE = 1e-6
ANGLE_EPS = 1e-6
ANTIPODAL_DOT = 1e-9


@dataclass(frozen=True)
class EulerAngles:
    angle_x: float
    angle_y: float
    angle_z: float
    order: str = "xyz"

    def __post_init__(self):
        if self.order not in ROTATION_ORDERS:
            raise ValueError(f"unknown rotation order {self.order!r}; expected one of {ROTATION_ORDERS}")
        if not all(math.isfinite(a) for a in (self.angle_x, self.angle_y, self.angle_z)):
            raise ValueError("Euler angles must be finite")

    def angle(self, axis: str) -> float:
        return {"x": self.angle_x, "y": self.angle_y, "z": self.angle_z}[axis]


@dataclass(frozen=True)
class AxisAngle:
    axis: np.ndarray
    angle: float

    def __post_init__(self):
        axis = np.asarray(self.axis, dtype=np.float64)
        n = np.linalg.norm(axis)
        if not np.isfinite(n) or abs(n - 1.0) > 1e-9:
            raise ValueError(f"axis must have unit length, got norm {n}")
        if not 0.0 <= self.angle <= math.pi:
            raise ValueError(f"angle must lie in [0, pi], got {self.angle}")
        object.__setattr__(self, "axis", axis)


# -- quaternion basics -------------------------------------------------------

def unit_quaternion(q) -> np.ndarray:
    q = np.asarray(q, dtype=np.float64).reshape(4)
    n = np.linalg.norm(q)
    if not np.isfinite(n) or n == 0.0:
        raise ValueError(f"cannot normalize quaternion {q}")
    return q / n


def quat_conj(q) -> np.ndarray:
    q = np.asarray(q, dtype=np.float64)
    return np.array([q[0], -q[1], -q[2], -q[3]])


def quat_mul(a, b) -> np.ndarray:
    """Hamilton product ``a * b``, re-normalized."""
    aw, ax, ay, az = a
    bw, bx, by, bz = b
    out = np.array([
        aw * bw - ax * bx - ay * by - az * bz,
        aw * bx + ax * bw + ay * bz - az * by,
        aw * by - ax * bz + ay * bw + az * bx,
        aw * bz + ax * by - ay * bx + az * bw,
    ])
    return out / np.linalg.norm(out)


def quat_from_axis_angle(axis, angle: float) -> np.ndarray:
    axis = np.asarray(axis, dtype=np.float64)
    axis = axis / np.linalg.norm(axis)
    half = 0.5 * angle
    return np.concatenate(([math.cos(half)], math.sin(half) * axis))


def quat_axis(axis: str, angle: float) -> np.ndarray:
    """Quaternion for a rotation about a principal axis ``'x'``, ``'y'`` or ``'z'``."""
    return quat_from_axis_angle(AXES[axis], angle)


def rotation_angle(q) -> float:
    """Rotation angle in [0, pi] of the rotation represented by ``q``."""
    q = np.asarray(q, dtype=np.float64)
    return 2.0 * math.atan2(float(np.linalg.norm(q[1:])), abs(float(q[0])))


def angle_between(a, b) -> float:
    """Angle in [0, pi] of the relative rotation taking ``a`` to ``b``."""
    return rotation_angle(quat_mul(quat_conj(a), b))


def same_rotation(a, b, atol: float = 1e-9) -> bool:
    """True when ``a`` and ``b`` agree componentwise up to global sign."""
    a = np.asarray(a, dtype=np.float64)
    b = np.asarray(b, dtype=np.float64)
    return bool(np.allclose(a, b, rtol=0, atol=atol) or np.allclose(a, -b, rtol=0, atol=atol))


def quat_log(q) -> np.ndarray:
    q = np.asarray(q, dtype=np.float64)
    if q[0] < 0.0:
        q = -q
    w = float(q[0])
    v = q[1:]
    s = float(np.linalg.norm(v))
    if s < SMALL_ANGLE:
        # atan(s/w)/s = 1/w - s^2/(3 w^3) + O(s^4)
        return v * (1.0 / w - s * s / (3.0 * w ** 3))
    return v * (math.atan2(s, w) / s)


def quat_exp(v) -> np.ndarray:
    v = np.asarray(v, dtype=np.float64).reshape(3)
    if not np.all(np.isfinite(v)):
        raise ValueError("tangent vector must be finite")
    n = float(np.linalg.norm(v))
    if n < SMALL_ANGLE:
        out = np.concatenate(([1.0 - 0.5 * n * n], v * (1.0 - n * n / 6.0)))
        return out / np.linalg.norm(out)
    return np.concatenate(([math.cos(n)], v * (math.sin(n) / n)))


def quat_pow(q, t: float) -> np.ndarray:
    return quat_exp(t * quat_log(q))


# -- interpolation -----------------------------------------------------------

def _check_t(t: float) -> None:
    if not 0.0 <= t <= 1.0:
        raise ParameterOutOfRange(f"interpolation parameter must lie in [0, 1], got {t}")


def lerp(x0, x1, t: float) -> np.ndarray:
    _check_t(t)
    x0 = np.asarray(x0, dtype=np.float64)
    x1 = np.asarray(x1, dtype=np.float64)
    if x0.shape != x1.shape:
        raise ValueError(f"shape mismatch {x0.shape} vs {x1.shape}")
    return (1.0 - t) * x0 + t * x1


def _aligned_pair(q0, q1):
    q0 = unit_quaternion(q0)
    q1 = unit_quaternion(q1)
    d = float(np.dot(q0, q1))
    if d < 0.0:
        q1, d = -q1, -d
    if d < ANTIPODAL_DOT:
        raise AntipodalInputs("rotations are pi apart; the interpolation path is ambiguous")
    return q0, q1


def slerp(q0, q1, t: float) -> np.ndarray:
    """Spherical linear interpolation in sine-quotient form."""
    _check_t(t)
    q0, q1 = _aligned_pair(q0, q1)
    # angle on S^3, stable for both small and large separations
    phi = 2.0 * math.atan2(float(np.linalg.norm(q1 - q0)), float(np.linalg.norm(q1 + q0)))
    if phi < SMALL_ANGLE:
        out = (1.0 - t) * q0 + t * q1
        return out / np.linalg.norm(out)
    s = math.sin(phi)
    out = q0 * (math.sin((1.0 - t) * phi) / s) + q1 * (math.sin(t * phi) / s)
    return out / np.linalg.norm(out)


def slerp_power(q0, q1, t: float) -> np.ndarray:
    """Slerp as ``q0 (q0^-1 q1)^t``."""
    _check_t(t)
    q0, q1 = _aligned_pair(q0, q1)
    return quat_mul(q0, quat_pow(quat_mul(quat_conj(q0), q1), t))


# -- matrices ----------------------------------------------------------------

def rot_matrix_axis(axis: str, angle: float) -> np.ndarray:
    c, s = math.cos(angle), math.sin(angle)
    if axis == "x":
        return np.array([[1.0, 0.0, 0.0], [0.0, c, -s], [0.0, s, c]])
    if axis == "y":
        return np.array([[c, 0.0, s], [0.0, 1.0, 0.0], [-s, 0.0, c]])
    if axis == "z":
        return np.array([[c, -s, 0.0], [s, c, 0.0], [0.0, 0.0, 1.0]])
    raise ValueError(f"unknown axis {axis!r}")


def apply_rotation(r, p) -> np.ndarray:
    return np.asarray(r, dtype=np.float64) @ np.asarray(p, dtype=np.float64)


def sequential_rotations(e: EulerAngles, p) -> list[tuple[str, np.ndarray]]:
    """Apply the three principal rotations of ``e`` one at a time.

    Returns ``(axis, point_after_rotation)`` for each step, in application order.
    """
    steps = []
    p = np.asarray(p, dtype=np.float64)
    for axis in e.order:
        p = apply_rotation(rot_matrix_axis(axis, e.angle(axis)), p)
        steps.append((axis, p))
    return steps


def compose_euler(e: EulerAngles) -> np.ndarray:
    r = np.eye(3)
    for axis in e.order:
        r = rot_matrix_axis(axis, e.angle(axis)) @ r
    return r


def euler_to_quat_sequence(e: EulerAngles) -> np.ndarray:
    q = IDENTITY.copy()
    for axis in e.order:
        q = quat_mul(quat_axis(axis, e.angle(axis)), q)
    return q


def rodrigues(axis, angle: float) -> np.ndarray:
    n1, n2, n3 = np.asarray(axis, dtype=np.float64) / np.linalg.norm(axis)
    c, s = math.cos(angle), math.sin(angle)
    k = 1.0 - c
    return np.array([
        [c + n1 * n1 * k, n1 * n2 * k - s * n3, n1 * n3 * k + s * n2],
        [n2 * n1 * k + s * n3, c + n2 * n2 * k, n2 * n3 * k - s * n1],
        [n3 * n1 * k - s * n2, n3 * n2 * k + s * n1, c + n3 * n3 * k],
    ])


def axis_angle_from_matrix(r, default_axis=None, allow_near_pi: bool = True) -> AxisAngle:
    """Recover axis and angle from a rotation matrix.

    The axis comes from the skew-symmetric part ``R - R^T`` and the angle from
    the trace. Near ``theta = 0`` the axis is undefined: ``IdentityRotation`` is
    raised unless ``default_axis`` is given. Near ``theta = pi`` the skew part
    vanishes and the axis is taken from the dominant column of ``(R + I) / 2``
    instead; pass ``allow_near_pi=False`` to get ``NearPiAngle`` there.
    """
    r = np.asarray(r, dtype=np.float64)
    skew = r - r.T
    abc = np.array([skew[2, 1], skew[0, 2], skew[1, 0]])
    d = float(np.linalg.norm(abc))
    cos_t = (np.trace(r) - 1.0) / 2.0
    # atan2 of (sin, cos) is better conditioned than arccos near 0 and pi
    theta = math.atan2(0.5 * d, cos_t)
    if theta < ANGLE_EPS:
        if default_axis is None:
            raise IdentityRotation("rotation angle is ~0; axis undefined")
        return AxisAngle(np.asarray(default_axis, dtype=np.float64) / np.linalg.norm(default_axis), theta)
    if theta > math.pi - ANGLE_EPS:
        if not allow_near_pi:
            raise NearPiAngle("rotation angle is ~pi; skew-symmetric part is degenerate")
        b = 0.5 * (r + np.eye(3))
        col = b[:, int(np.argmax(np.linalg.norm(b, axis=0)))]
        axis = col / np.linalg.norm(col)
        if np.dot(axis, abc) < 0.0:
            axis = -axis
        return AxisAngle(axis, min(theta, math.pi))
    return AxisAngle(abc / d, theta)


def quat_to_matrix(q) -> np.ndarray:
    w, x, y, z = unit_quaternion(q)
    return np.array([
        [1 - 2 * (y * y + z * z), 2 * (x * y - w * z), 2 * (x * z + w * y)],
        [2 * (x * y + w * z), 1 - 2 * (x * x + z * z), 2 * (y * z - w * x)],
        [2 * (x * z - w * y), 2 * (y * z + w * x), 1 - 2 * (x * x + y * y)],
    ])


def matrix_to_quat(r) -> np.ndarray:
    """Largest-pivot (Shepperd) conversion; result has ``w >= 0``."""
    r = np.asarray(r, dtype=np.float64)
    tr = np.trace(r)
    diag = np.diag(r)
    k = int(np.argmax([tr, *diag]))
    if k == 0:
        s = 2.0 * math.sqrt(1.0 + tr)
        q = np.array([0.25 * s, (r[2, 1] - r[1, 2]) / s, (r[0, 2] - r[2, 0]) / s, (r[1, 0] - r[0, 1]) / s])
    elif k == 1:
        s = 2.0 * math.sqrt(1.0 + r[0, 0] - r[1, 1] - r[2, 2])
        q = np.array([(r[2, 1] - r[1, 2]) / s, 0.25 * s, (r[0, 1] + r[1, 0]) / s, (r[0, 2] + r[2, 0]) / s])
    elif k == 2:
        s = 2.0 * math.sqrt(1.0 + r[1, 1] - r[0, 0] - r[2, 2])
        q = np.array([(r[0, 2] - r[2, 0]) / s, (r[0, 1] + r[1, 0]) / s, 0.25 * s, (r[1, 2] + r[2, 1]) / s])
    else:
        s = 2.0 * math.sqrt(1.0 + r[2, 2] - r[0, 0] - r[1, 1])
        q = np.array([(r[1, 0] - r[0, 1]) / s, (r[0, 2] + r[2, 0]) / s, (r[1, 2] + r[2, 1]) / s, 0.25 * s])
    q = q / np.linalg.norm(q)
    return -q if q[0] < 0.0 else q
