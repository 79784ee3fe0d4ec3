"""Synthetic clavicle/scapula pose set used for regression tests and demos.

Nine poses: neutral plus the eight neighbours of a 3 x 3 grid of clavicle
directions (back/mid/front x down/mid/up). Keys are clavicle-end positions
on a sphere of radius ``CLAVICLE_LENGTH`` around the sternal joint; each
sample is a scapula orientation that follows the clavicle with a hand-tuned
coupling. The numbers are made up: they stand in for an artist's corrective
poses, not for anatomical measurements.

Frame: x lateral, y up, z forward.
"""

from __future__ import annotations

import json
import math
from importlib import resources

import numpy as np

from qrbf.rbf import Kernel
from qrbf.rotation import quat_axis, quat_mul
from qrbf.solver import PoseKey, PoseSample, PoseSet

CLAVICLE_LENGTH = 1.0
PROTRACTION = {"Back": -math.radians(25.0), "Mid": 0.0, "Front": math.radians(25.0)}
ELEVATION = {"Down": -math.radians(15.0), "Mid": 0.0, "Up": math.radians(30.0)}
BUNDLED_FILE = "scapula_poses.json"


def clavicle_end(protraction: float, elevation: float) -> np.ndarray:
    # elevate about the forward axis, then swing about the vertical axis
    x = CLAVICLE_LENGTH * math.cos(elevation)
    y = CLAVICLE_LENGTH * math.sin(elevation)
    return np.array([x * math.cos(protraction), y, -x * math.sin(protraction)])


def scapula_orientation(protraction: float, elevation: float) -> np.ndarray:
    rest = quat_axis("x", math.radians(-8.0))
    upward = quat_axis("z", 1.3 * elevation)
    wing = quat_axis("y", 0.9 * protraction)
    tilt = quat_axis("x", 0.6 * protraction * elevation + 0.2 * elevation)
    return quat_mul(wing, quat_mul(upward, quat_mul(tilt, rest)))


def pose_names() -> list[str]:
    names = []
    for fb in PROTRACTION:
        for ud in ELEVATION:
            names.append("Neutral" if (fb, ud) == ("Mid", "Mid") else fb + ud)
    return names


def scapula_pose_set(kernel: Kernel | None = None) -> PoseSet:
    keys, samples = [], []
    for fb, a in PROTRACTION.items():
        for ud, e in ELEVATION.items():
            keys.append(PoseKey(values=clavicle_end(a, e)))
            samples.append(PoseSample((scapula_orientation(a, e),)))
    return PoseSet(tuple(keys), tuple(samples), kernel or Kernel("polyharmonic", 1.0))


def bundled_scapula_path():
    return resources.files("qrbf") / "data" / BUNDLED_FILE


def load_bundled_scapula() -> PoseSet:
    from qrbf.io import parse_pose_set

    return parse_pose_set(json.loads(bundled_scapula_path().read_text()))
