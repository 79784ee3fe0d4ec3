"""Drive the synthetic scapula rig along a clavicle path and print the result.

Fits the quaternion RBF solver on the bundled 9-pose set, sweeps the
clavicle from back-down to front-up, and prints the scapula orientation
(rotation angle and axis) next to the orientation the pose generator would
have produced at the same clavicle position.
"""

import argparse
import math

import numpy as np

from qrbf.datasets import ELEVATION, PROTRACTION, clavicle_end, load_bundled_scapula, scapula_orientation
from qrbf.rbf import Kernel
from qrbf.rotation import angle_between, quat_log
from qrbf.solver import PoseSet, qrbf_eval, qrbf_fit


def main():
    parser = argparse.ArgumentParser(description=__doc__)
    parser.add_argument("--steps", type=int, default=12)
    parser.add_argument("--kernel", default="polyharmonic")
    parser.add_argument("--epsilon", type=float, default=1.0)
    parser.add_argument("--lambda", dest="lam", type=float, default=0.0)
    args = parser.parse_args()

    poses = load_bundled_scapula()
    poses = PoseSet(poses.keys, poses.samples, Kernel(args.kernel, args.epsilon), poses.base_orientation)
    solver = qrbf_fit(poses, args.lam)

    print(f"{'s':>5} {'angle deg':>10} {'axis':>28} {'gap to generator deg':>22}")
    for s in np.linspace(0.0, 1.0, args.steps + 1):
        a = (1 - s) * PROTRACTION["Back"] + s * PROTRACTION["Front"]
        e = (1 - s) * ELEVATION["Down"] + s * ELEVATION["Up"]
        q = qrbf_eval(solver, clavicle_end(a, e)).orientations[0]
        v = quat_log(q)
        angle = 2 * np.linalg.norm(v)
        axis = v / np.linalg.norm(v) if angle > 0 else v
        gap = angle_between(q, scapula_orientation(a, e))
        print(f"{s:5.2f} {math.degrees(angle):10.4f} {np.array2string(axis, precision=4):>28} {math.degrees(gap):22.4f}")


if __name__ == "__main__":
    main()
