"""JSON file formats for pose sets and fitted solvers.

All quaternions on disk are scalar-first ``[w, x, y, z]``. Floats are written
with Python's shortest round-trip repr, so a save/load cycle is bit-exact.
"""

from __future__ import annotations

import json
from pathlib import Path

import numpy as np

from qrbf.errors import DimensionMismatch
from qrbf.rbf import FittedSolver, Kernel
from qrbf.solver import ChannelLayout, PoseKey, PoseSample, PoseSet, QFittedSolver

FORMAT_VERSION = 1
# inputs further than this from unit norm are treated as malformed, not drift
QUAT_NORM_TOL = 1e-3


class FormatError(ValueError):
    pass


def _quat(raw, where: str) -> np.ndarray:
    try:
        q = np.asarray(raw, dtype=np.float64)
    except (TypeError, ValueError) as exc:
        raise FormatError(f"{where}: not a numeric quaternion") from exc
    if q.shape != (4,) or not np.all(np.isfinite(q)):
        raise FormatError(f"{where}: expected 4 finite numbers [w, x, y, z]")
    n = float(np.linalg.norm(q))
    if abs(n - 1.0) > QUAT_NORM_TOL:
        raise FormatError(f"{where}: quaternion norm {n:.6g} is not within {QUAT_NORM_TOL} of 1")
    return q / n


def _kernel(raw) -> Kernel:
    if not isinstance(raw, dict):
        raise FormatError("kernel: expected an object with 'type' and 'epsilon'")
    try:
        return Kernel(raw.get("type", "polyharmonic"), float(raw.get("epsilon", 1.0)))
    except (TypeError, ValueError) as exc:
        raise FormatError(f"kernel: {exc}") from exc


def parse_pose_set(doc: dict) -> PoseSet:
    if not isinstance(doc, dict):
        raise FormatError("pose file must contain a JSON object")
    for name in ("keys", "samples"):
        if not isinstance(doc.get(name), list):
            raise FormatError(f"missing list field {name!r}")
    kernel = _kernel(doc.get("kernel", {}))
    base = _quat(doc["base_orientation"], "base_orientation") if "base_orientation" in doc else None

    keys = []
    for i, k in enumerate(doc["keys"]):
        kind = k.get("type") if isinstance(k, dict) else None
        try:
            if kind == "vector":
                keys.append(PoseKey(values=np.asarray(k["values"], dtype=np.float64)))
            elif kind == "quaternion":
                keys.append(PoseKey(orientation=_quat(k["wxyz"], f"keys[{i}]")))
            else:
                raise FormatError(f"keys[{i}]: type must be 'vector' or 'quaternion'")
        except (KeyError, TypeError, ValueError) as exc:
            if isinstance(exc, FormatError):
                raise
            raise FormatError(f"keys[{i}]: {exc}") from exc

    samples = []
    for i, s in enumerate(doc["samples"]):
        if not isinstance(s, dict):
            raise FormatError(f"samples[{i}]: expected an object")
        quats = [_quat(q, f"samples[{i}].quaternions[{j}]") for j, q in enumerate(s.get("quaternions", []))]
        try:
            scalars = [float(v) for v in s.get("scalars", [])]
        except (TypeError, ValueError) as exc:
            raise FormatError(f"samples[{i}].scalars: {exc}") from exc
        samples.append(PoseSample(tuple(quats), tuple(scalars)))

    if len(keys) != len(samples):
        raise FormatError(f"count mismatch: {len(keys)} keys but {len(samples)} samples")
    try:
        extra = {} if base is None else {"base_orientation": base}
        return PoseSet(tuple(keys), tuple(samples), kernel, **extra)
    except DimensionMismatch as exc:
        raise FormatError(str(exc)) from exc


def load_pose_set(path) -> PoseSet:
    try:
        doc = json.loads(Path(path).read_text())
    except json.JSONDecodeError as exc:
        raise FormatError(f"{path}: invalid JSON ({exc})") from exc
    return parse_pose_set(doc)


def pose_set_to_dict(poses: PoseSet) -> dict:
    keys = []
    for k in poses.keys:
        if k.kind == "vector":
            keys.append({"type": "vector", "values": k.values.tolist()})
        else:
            keys.append({"type": "quaternion", "wxyz": k.orientation.tolist()})
    return {
        "kernel": {"type": poses.kernel.kind, "epsilon": poses.kernel.epsilon},
        "base_orientation": poses.base_orientation.tolist(),
        "keys": keys,
        "samples": [
            {"quaternions": [q.tolist() for q in s.orientations], "scalars": list(s.scalars)}
            for s in poses.samples
        ],
    }


def solver_to_dict(solver: QFittedSolver) -> dict:
    inner = solver.inner
    return {
        "format_version": FORMAT_VERSION,
        "kernel": {"type": inner.kernel.kind, "epsilon": inner.kernel.epsilon},
        "regularization": inner.regularization,
        "key_type": solver.key_kind,
        "keys": inner.keys.tolist(),
        "weights": inner.weights.tolist(),
        "layout": {"quaternions": solver.layout.n_quaternions, "scalars": solver.layout.n_scalars},
        "base_orientation": solver.base_orientation.tolist(),
    }


def solver_from_dict(doc: dict) -> QFittedSolver:
    try:
        if doc.get("format_version") != FORMAT_VERSION:
            raise FormatError(f"unsupported solver format_version {doc.get('format_version')!r}")
        inner = FittedSolver(
            _kernel(doc["kernel"]),
            np.asarray(doc["keys"], dtype=np.float64),
            np.asarray(doc["weights"], dtype=np.float64),
            float(doc.get("regularization", 0.0)),
        )
        layout = ChannelLayout(int(doc["layout"]["quaternions"]), int(doc["layout"]["scalars"]))
        base = np.asarray(doc["base_orientation"], dtype=np.float64)
        return QFittedSolver(inner, layout, base, doc.get("key_type", "vector"))
    except (KeyError, TypeError, ValueError, IndexError) as exc:
        if isinstance(exc, FormatError):
            raise
        raise FormatError(f"malformed solver file: {exc}") from exc


def save_solver(solver: QFittedSolver, path) -> None:
    Path(path).write_text(json.dumps(solver_to_dict(solver), indent=1) + "\n")


def load_solver(path) -> QFittedSolver:
    try:
        doc = json.loads(Path(path).read_text())
    except json.JSONDecodeError as exc:
        raise FormatError(f"{path}: invalid JSON ({exc})") from exc
    return solver_from_dict(doc)
