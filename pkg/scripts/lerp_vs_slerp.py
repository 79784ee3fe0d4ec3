"""Compare normalized lerp with slerp between two rotations.

Prints, per t, the squared norm of the raw lerp point, the rotation angle
covered by normalized lerp and by slerp. Slerp's angle grows linearly in t;
normalized lerp's does not.
"""

import argparse
import math

import numpy as np

from qrbf.rotation import IDENTITY, angle_between, lerp, quat_axis, slerp


def main():
    parser = argparse.ArgumentParser(description=__doc__)
    parser.add_argument("--angle", type=float, default=150.0, help="separation in degrees")
    parser.add_argument("--steps", type=int, default=10)
    args = parser.parse_args()

    q0, q1 = IDENTITY, quat_axis("z", math.radians(args.angle))
    print(f"{'t':>5} {'|lerp|^2':>10} {'nlerp deg':>10} {'slerp deg':>10}")
    for t in np.linspace(0.0, 1.0, args.steps + 1):
        p = lerp(q0, q1, t)
        nl = p / np.linalg.norm(p)
        print(f"{t:5.2f} {p @ p:10.6f} {math.degrees(angle_between(q0, nl)):10.4f} "
              f"{math.degrees(angle_between(q0, slerp(q0, q1, t))):10.4f}")


if __name__ == "__main__":
    main()
