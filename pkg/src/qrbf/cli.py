"""Command-line interface: ``qrbf {fit,eval,blend,gimbal-demo,kernels}``.

Exit codes: 0 success, 1 input or usage error, 2 singular system.
"""

from __future__ import annotations

import argparse
import math
import sys

import numpy as np

from qrbf import io, linalg, rbf
from qrbf.errors import SingularMatrix
from qrbf.rotation import IDENTITY, ROTATION_ORDERS, EulerAngles, sequential_rotations
from qrbf.solver import PoseKey, qrbf_eval, qrbf_fit, weighted_blend

EXIT_OK, EXIT_INPUT, EXIT_NUMERIC = 0, 1, 2
GIMBAL_POINT = (1.0, 1.0, 1.0)


class UsageError(ValueError):
    pass


def _floats(text: str, n: int | None = None) -> np.ndarray:
    try:
        vals = np.array([float(t) for t in text.split(",")])
    except ValueError as exc:
        raise UsageError(f"cannot parse {text!r} as comma-separated numbers") from exc
    if n is not None and vals.size != n:
        raise UsageError(f"expected {n} comma-separated numbers, got {vals.size} in {text!r}")
    if not np.all(np.isfinite(vals)):
        raise UsageError(f"non-finite value in {text!r}")
    return vals


def _fmt(v: float, digits: int = 9) -> str:
    return f"{v + 0.0:.{digits}g}"


def _quat_arg(text: str) -> np.ndarray:
    q = _floats(text, 4)
    n = float(np.linalg.norm(q))
    if abs(n - 1.0) > io.QUAT_NORM_TOL:
        raise UsageError(f"quaternion {text!r} has norm {n:.6g}; expected unit [w,x,y,z]")
    return q / n


def gimbal_table(order: str) -> list[tuple[str, np.ndarray]]:
    half_pi = math.pi / 2
    return sequential_rotations(EulerAngles(half_pi, half_pi, half_pi, order), GIMBAL_POINT)


def kernel_table(r: float, epsilon: float = 1.0) -> list[tuple[str, float]]:
    """Every kernel formula at ``(r, epsilon)``.

    The polyharmonic family has an odd (``r^k``) and an even (``r^k ln r``)
    branch; both are listed, using orders ``epsilon`` and ``epsilon + 1`` when
    ``epsilon`` is a positive integer and orders 1 and 2 otherwise.
    """
    rows = []
    for kind in ("gaussian", "multiquadric", "inverse_quadratic", "inverse_multiquadric"):
        rows.append((kind, rbf.kernel_eval(rbf.Kernel(kind, epsilon), r)))
    base = int(epsilon) if float(epsilon).is_integer() else 1
    for order in (base, base + 1):
        rows.append((f"polyharmonic({order})", rbf.kernel_eval(rbf.Kernel("polyharmonic", order), r)))
    rows.append(("thinplate", rbf.kernel_eval(rbf.Kernel("thinplate", epsilon), r)))
    return rows


def cmd_fit(args) -> int:
    poses = io.load_pose_set(args.input)
    solver = qrbf_fit(poses, args.lam)
    inner = solver.inner
    d = rbf.distance_matrix(inner.keys, inner.kernel) + args.lam * np.eye(inner.n_keys)
    io.save_solver(solver, args.output)
    print(f"K={inner.n_keys} N={inner.key_dim} M={inner.out_dim}")
    print(f"condition_estimate(D)={linalg.condition_estimate(d):.6e}")
    print(f"wrote {args.output}")
    return EXIT_OK


def cmd_eval(args) -> int:
    solver = io.load_solver(args.solver)
    if args.key_quat is not None:
        key = PoseKey(orientation=_quat_arg(args.key_quat))
    elif args.key is not None:
        key = PoseKey(values=_floats(args.key))
    else:
        raise UsageError("one of --key or --key-quat is required")
    out = qrbf_eval(solver, key)
    for i, q in enumerate(out.orientations):
        print(f"quaternion[{i}] " + " ".join(_fmt(c) for c in q))
    for i, s in enumerate(out.scalars):
        print(f"scalar[{i}] {_fmt(s)}")
    return EXIT_OK


def cmd_blend(args) -> int:
    if not args.pair:
        raise UsageError("at least one --pair <weight>:<w,x,y,z> is required")
    weights, quats = [], []
    for p in args.pair:
        w, sep, q = p.partition(":")
        if not sep:
            raise UsageError(f"malformed pair {p!r}; expected <weight>:<w,x,y,z>")
        weights.append(_floats(w, 1)[0])
        quats.append(_quat_arg(q))
    base = _quat_arg(args.base) if args.base else IDENTITY
    q = weighted_blend(base, weights, quats)
    print(" ".join(_fmt(c) for c in q))
    return EXIT_OK


def cmd_gimbal_demo(args) -> int:
    start = ", ".join(_fmt(c, 12) for c in GIMBAL_POINT)
    for order in ROTATION_ORDERS:
        cells = []
        for axis, p in gimbal_table(order):
            vec = ", ".join(_fmt(round(c, 12), 12) for c in p)
            cells.append(f"R{axis}(pi/2) -> ({vec})")
        print(f"order {'->'.join(order)}: ({start}) | " + " | ".join(cells))
    return EXIT_OK


def cmd_kernels(args) -> int:
    if not (args.r >= 0 and math.isfinite(args.r)):
        raise UsageError("--r must be a finite nonnegative number")
    if not (args.epsilon > 0 and math.isfinite(args.epsilon)):
        raise UsageError("--epsilon must be positive")
    print(f"r={_fmt(args.r)} epsilon={_fmt(args.epsilon)}")
    for name, value in kernel_table(args.r, args.epsilon):
        print(f"{name:<22} {_fmt(value, 17)}")
    return EXIT_OK


def build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(prog="qrbf", description=__doc__.splitlines()[0])
    sub = parser.add_subparsers(dest="command", required=True)

    p = sub.add_parser("fit", help="fit a solver from a pose-set JSON file")
    p.add_argument("-i", "--input", required=True)
    p.add_argument("-o", "--output", required=True)
    p.add_argument("--lambda", dest="lam", type=float, default=0.0, help="Tikhonov regularization (default 0)")
    p.set_defaults(func=cmd_fit)

    p = sub.add_parser("eval", help="evaluate a fitted solver at one key")
    p.add_argument("-s", "--solver", required=True)
    p.add_argument("--key", help="comma-separated key values (use --key=-1,2 for negatives)")
    p.add_argument("--key-quat", help="quaternion key as w,x,y,z")
    p.set_defaults(func=cmd_eval)

    p = sub.add_parser("blend", help="weighted tangent-space blend of quaternions")
    p.add_argument("--base", help="base orientation w,x,y,z (default identity)")
    p.add_argument("--pair", action="append", default=[], help="<weight>:<w,x,y,z>, repeatable")
    p.set_defaults(func=cmd_blend)

    p = sub.add_parser("gimbal-demo", help="rotate (1,1,1) by pi/2 about each axis in all six orders")
    p.set_defaults(func=cmd_gimbal_demo)

    p = sub.add_parser("kernels", help="tabulate every RBF kernel at a distance")
    p.add_argument("--r", type=float, required=True)
    p.add_argument("--epsilon", type=float, default=1.0)
    p.set_defaults(func=cmd_kernels)
    return parser


def main(argv=None) -> int:
    parser = build_parser()
    try:
        args = parser.parse_args(argv)
    except SystemExit as exc:
        return EXIT_OK if exc.code == 0 else EXIT_INPUT
    try:
        return args.func(args)
    except SingularMatrix as exc:
        print(f"error: singular system: {exc}", file=sys.stderr)
        return EXIT_NUMERIC
    except (ValueError, OSError) as exc:
        print(f"error: {exc}", file=sys.stderr)
        return EXIT_INPUT


if __name__ == "__main__":
    sys.exit(main())
