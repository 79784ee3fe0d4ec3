"""Quaternion RBF solver.

Orientation samples are expressed relative to a base orientation ``q_e``,
mapped to R^3 with :func:`~qrbf.rotation.quat_log` and interpolated as
ordinary columns by :mod:`qrbf.rbf`. Evaluation maps each interpolated
tangent triple back through ``q_e * exp(.)``.
"""

from __future__ import annotations

from dataclasses import dataclass, field

import numpy as np

from qrbf import rbf
from qrbf.errors import DimensionMismatch, LengthMismatch
from qrbf.rotation import IDENTITY, quat_conj, quat_exp, quat_log, quat_mul, unit_quaternion


def hemisphere_align(reference, q) -> np.ndarray:
    """Return ``q`` or ``-q``, whichever lies on the same side of the 3-sphere as ``reference``."""
    q = np.asarray(q, dtype=np.float64)
    return q if float(np.dot(reference, q)) >= 0.0 else -q


def _tangent(q_e, q) -> np.ndarray:
    q = hemisphere_align(q_e, unit_quaternion(q))
    return quat_log(quat_mul(quat_conj(q_e), q))


def weighted_blend(q_e, weights, quats) -> np.ndarray:
    """Blend quaternions as ``q_e exp(sum_i w_i log(q_e^-1 q_i))``."""
    weights = np.asarray(weights, dtype=np.float64).ravel()
    if len(quats) == 0 or len(weights) != len(quats):
        raise LengthMismatch(f"{len(weights)} weights for {len(quats)} quaternions")
    q_e = unit_quaternion(q_e)
    v = sum(w * _tangent(q_e, q) for w, q in zip(weights, quats))
    return quat_mul(q_e, quat_exp(v))


@dataclass(frozen=True)
class PoseKey:
    """Driver coordinates: either plain values or an orientation."""

    values: np.ndarray | None = None
    orientation: np.ndarray | None = None

    def __post_init__(self):
        if (self.values is None) == (self.orientation is None):
            raise ValueError("a pose key holds exactly one of values or orientation")
        if self.values is not None:
            vals = np.atleast_1d(np.asarray(self.values, dtype=np.float64))
            if vals.ndim != 1 or not np.all(np.isfinite(vals)):
                raise ValueError("key values must be a finite 1-D vector")
            object.__setattr__(self, "values", vals)
        else:
            object.__setattr__(self, "orientation", unit_quaternion(self.orientation))

    @property
    def kind(self) -> str:
        return "vector" if self.values is not None else "quaternion"

    def encode(self) -> np.ndarray:
        if self.values is not None:
            return self.values
        return quat_log(self.orientation)


@dataclass(frozen=True)
class PoseSample:
    orientations: tuple = ()
    scalars: tuple = ()

    def __post_init__(self):
        object.__setattr__(self, "orientations", tuple(unit_quaternion(q) for q in self.orientations))
        object.__setattr__(self, "scalars", tuple(float(s) for s in self.scalars))


@dataclass(frozen=True)
class ChannelLayout:
    """Output columns: ``3 * n_quaternions`` tangent columns, then ``n_scalars``."""

    n_quaternions: int
    n_scalars: int

    @property
    def width(self) -> int:
        return 3 * self.n_quaternions + self.n_scalars

    @classmethod
    def of(cls, sample: PoseSample) -> "ChannelLayout":
        return cls(len(sample.orientations), len(sample.scalars))


@dataclass(frozen=True)
class PoseSet:
    keys: tuple
    samples: tuple
    kernel: rbf.Kernel = field(default_factory=rbf.Kernel)
    base_orientation: np.ndarray = field(default_factory=lambda: IDENTITY.copy())

    def __post_init__(self):
        object.__setattr__(self, "keys", tuple(self.keys))
        object.__setattr__(self, "samples", tuple(self.samples))
        object.__setattr__(self, "base_orientation", unit_quaternion(self.base_orientation))
        if len(self.keys) < 1:
            raise DimensionMismatch("a pose set needs at least one pose")
        if len(self.keys) != len(self.samples):
            raise DimensionMismatch(f"{len(self.keys)} keys but {len(self.samples)} samples")
        if len({k.kind for k in self.keys}) != 1:
            raise DimensionMismatch("keys mix vector and quaternion encodings")
        if len({k.encode().size for k in self.keys}) != 1:
            raise DimensionMismatch("keys have inconsistent lengths")
        if len({ChannelLayout.of(s) for s in self.samples}) != 1:
            raise DimensionMismatch("samples have inconsistent channel layouts")
        if ChannelLayout.of(self.samples[0]).width == 0:
            raise DimensionMismatch("samples carry no output channels")

    @property
    def layout(self) -> ChannelLayout:
        return ChannelLayout.of(self.samples[0])

    @property
    def key_kind(self) -> str:
        return self.keys[0].kind

    def key_matrix(self) -> np.ndarray:
        return np.vstack([k.encode() for k in self.keys])

    def sample_matrix(self) -> np.ndarray:
        q_e = self.base_orientation
        rows = []
        for s in self.samples:
            tangents = [_tangent(q_e, q) for q in s.orientations]
            rows.append(np.concatenate([*tangents, np.asarray(s.scalars, dtype=np.float64)]))
        return np.vstack(rows)


@dataclass(frozen=True)
class QFittedSolver:
    inner: rbf.FittedSolver
    layout: ChannelLayout
    base_orientation: np.ndarray
    key_kind: str = "vector"

    def __post_init__(self):
        if self.layout.width != self.inner.out_dim:
            raise DimensionMismatch("layout width does not match the weight matrix")

    def __call__(self, key) -> PoseSample:
        return qrbf_eval(self, key)


def qrbf_fit(poses: PoseSet, lam: float = 0.0) -> QFittedSolver:
    inner = rbf.fit(poses.key_matrix(), poses.sample_matrix(), poses.kernel, lam)
    return QFittedSolver(inner, poses.layout, poses.base_orientation, poses.key_kind)


def _encode_query(solver: QFittedSolver, key) -> np.ndarray:
    if not isinstance(key, PoseKey):
        key = PoseKey(values=key)
    if key.kind != solver.key_kind:
        raise DimensionMismatch(f"solver expects {solver.key_kind} keys, got {key.kind}")
    enc = key.encode()
    if enc.size != solver.inner.key_dim:
        raise DimensionMismatch(f"key has dimension {enc.size}, solver expects {solver.inner.key_dim}")
    return enc


def qrbf_eval(solver: QFittedSolver, key) -> PoseSample:
    """Interpolate all channels at ``key`` (a :class:`PoseKey` or a plain vector)."""
    row = rbf.evaluate(solver.inner, _encode_query(solver, key))
    n_q = solver.layout.n_quaternions
    quats = [quat_mul(solver.base_orientation, quat_exp(row[3 * i:3 * i + 3])) for i in range(n_q)]
    return PoseSample(tuple(quats), tuple(row[3 * n_q:]))
