import json
import math
import subprocess
import sys

import numpy as np
import pytest

from qrbf import io
from qrbf.cli import gimbal_table, kernel_table, main
from qrbf.datasets import load_bundled_scapula, pose_names, scapula_pose_set
from qrbf.rotation import IDENTITY, angle_between, quat_axis, same_rotation
from qrbf.solver import PoseKey, qrbf_eval, qrbf_fit

C45, S45 = math.cos(math.pi / 4), math.sin(math.pi / 4)
Z_QUARTER = [C45, 0.0, 0.0, S45]


def two_key_doc():
    return {
        "kernel": {"type": "polyharmonic", "epsilon": 1},
        "keys": [{"type": "vector", "values": [0.0]}, {"type": "vector", "values": [1.0]}],
        "samples": [
            {"quaternions": [[1, 0, 0, 0]], "scalars": [0.0]},
            {"quaternions": [Z_QUARTER], "scalars": [2.0]},
        ],
    }


@pytest.fixture
def pose_file(tmp_path):
    path = tmp_path / "poses.json"
    path.write_text(json.dumps(two_key_doc()))
    return path


def run(capsys, *argv):
    code = main(list(argv))
    out, err = capsys.readouterr()
    return code, out, err


# -- pose file parsing -------------------------------------------------------

def test_parse_pose_set_defaults():
    poses = io.parse_pose_set(two_key_doc())
    np.testing.assert_array_equal(poses.base_orientation, IDENTITY)
    assert poses.kernel.kind == "polyharmonic"
    assert poses.layout.n_quaternions == 1 and poses.layout.n_scalars == 1


def test_quaternions_are_renormalized_within_tolerance():
    doc = two_key_doc()
    doc["samples"][0]["quaternions"] = [[1.0005, 0, 0, 0]]
    poses = io.parse_pose_set(doc)
    np.testing.assert_array_equal(poses.samples[0].orientations[0], IDENTITY)


@pytest.mark.parametrize(
    "mutate, fragment",
    [
        (lambda d: d["samples"][0].update(quaternions=[[1.01, 0, 0, 0]]), "norm"),
        (lambda d: d["keys"].append({"type": "vector", "values": [2.0]}), "count mismatch"),
        (lambda d: d["keys"][0].update(type="euler"), "type must be"),
        (lambda d: d.update(kernel={"type": "cubic"}), "kernel"),
        (lambda d: d["keys"][1].update(values=[1.0, 2.0]), "inconsistent"),
        (lambda d: d["samples"][1].update(scalars=[]), "layout"),
        (lambda d: d.pop("samples"), "samples"),
    ],
)
def test_parse_errors(mutate, fragment):
    doc = two_key_doc()
    mutate(doc)
    with pytest.raises(io.FormatError, match=fragment):
        io.parse_pose_set(doc)


def test_pose_set_dict_roundtrip():
    poses = scapula_pose_set()
    again = io.parse_pose_set(json.loads(json.dumps(io.pose_set_to_dict(poses))))
    for a, b in zip(poses.keys, again.keys):
        np.testing.assert_array_equal(a.values, b.values)
    for a, b in zip(poses.samples, again.samples):
        np.testing.assert_array_equal(a.orientations[0], b.orientations[0])


# -- solver files ------------------------------------------------------------

def test_solver_roundtrip_bit_exact(tmp_path, rng):
    solver = qrbf_fit(scapula_pose_set())
    path = tmp_path / "solver.json"
    io.save_solver(solver, path)
    loaded = io.load_solver(path)
    np.testing.assert_array_equal(loaded.inner.weights, solver.inner.weights)
    np.testing.assert_array_equal(loaded.inner.keys, solver.inner.keys)
    for v in rng.uniform(-1, 1, size=(20, 3)):
        np.testing.assert_array_equal(qrbf_eval(loaded, v).orientations[0], qrbf_eval(solver, v).orientations[0])


def test_solver_file_fields(tmp_path):
    path = tmp_path / "s.json"
    io.save_solver(qrbf_fit(io.parse_pose_set(two_key_doc())), path)
    doc = json.loads(path.read_text())
    assert doc["format_version"] == io.FORMAT_VERSION
    assert doc["layout"] == {"quaternions": 1, "scalars": 1}
    assert doc["key_type"] == "vector"
    assert doc["base_orientation"] == [1.0, 0.0, 0.0, 0.0]
    assert np.array(doc["weights"]).shape == (2, 4)


def test_solver_file_version_checked(tmp_path):
    doc = io.solver_to_dict(qrbf_fit(io.parse_pose_set(two_key_doc())))
    doc["format_version"] = 99
    with pytest.raises(io.FormatError):
        io.solver_from_dict(doc)


# -- bundled dataset ---------------------------------------------------------

def test_bundled_file_matches_generator():
    bundled = load_bundled_scapula()
    fresh = scapula_pose_set()
    assert len(bundled.keys) == 9
    assert len(pose_names()) == 9 and "Neutral" in pose_names()
    for a, b in zip(bundled.keys, fresh.keys):
        np.testing.assert_allclose(a.values, b.values, atol=1e-15)
    for a, b in zip(bundled.samples, fresh.samples):
        assert same_rotation(a.orientations[0], b.orientations[0], atol=1e-15)


def test_dataset_keys_on_sphere():
    for k in scapula_pose_set().keys:
        assert np.linalg.norm(k.values) == pytest.approx(1.0, abs=1e-15)


# -- cli: fit / eval ---------------------------------------------------------

def test_cli_fit_and_eval(capsys, pose_file, tmp_path):
    solver_path = tmp_path / "solver.json"
    code, out, _ = run(capsys, "fit", "-i", str(pose_file), "-o", str(solver_path))
    assert code == 0
    assert "K=2 N=1 M=4" in out
    assert "condition_estimate(D)=1.000000e+00" in out
    assert solver_path.exists()

    code, out, _ = run(capsys, "eval", "-s", str(solver_path), "--key", "0.5")
    assert code == 0
    lines = out.splitlines()
    q = np.array([float(v) for v in lines[0].split()[1:]])
    assert same_rotation(q, quat_axis("z", math.pi / 4), atol=1e-9)
    assert lines[1] == "scalar[0] 1"

    code, out, _ = run(capsys, "eval", "-s", str(solver_path), "--key", "1")
    q = np.array([float(v) for v in out.splitlines()[0].split()[1:]])
    assert same_rotation(q, Z_QUARTER, atol=1e-9)


def test_cli_eval_prints_nine_significant_digits(capsys, pose_file, tmp_path):
    solver_path = tmp_path / "solver.json"
    run(capsys, "fit", "-i", str(pose_file), "-o", str(solver_path))
    _, out, _ = run(capsys, "eval", "-s", str(solver_path), "--key", "0.5")
    assert out.splitlines()[0] == "quaternion[0] 0.923879533 0 0 0.382683432"


def test_cli_eval_wrong_key_length(capsys, pose_file, tmp_path):
    solver_path = tmp_path / "solver.json"
    run(capsys, "fit", "-i", str(pose_file), "-o", str(solver_path))
    code, _, err = run(capsys, "eval", "-s", str(solver_path), "--key", "0.5,0.5")
    assert code == 1 and "dimension" in err
    code, _, _ = run(capsys, "eval", "-s", str(solver_path), "--key-quat", "1,0,0,0")
    assert code == 1
    code, _, _ = run(capsys, "eval", "-s", str(solver_path))
    assert code == 1


def test_cli_eval_quaternion_keys(capsys, tmp_path):
    doc = {
        "keys": [{"type": "quaternion", "wxyz": [1, 0, 0, 0]}, {"type": "quaternion", "wxyz": Z_QUARTER}],
        "samples": [{"scalars": [0.0]}, {"scalars": [1.0]}],
    }
    (tmp_path / "p.json").write_text(json.dumps(doc))
    assert main(["fit", "-i", str(tmp_path / "p.json"), "-o", str(tmp_path / "s.json")]) == 0
    capsys.readouterr()
    code, out, _ = run(capsys, "eval", "-s", str(tmp_path / "s.json"), "--key-quat", ",".join(map(str, Z_QUARTER)))
    assert code == 0 and out.strip() == "scalar[0] 1"


def test_cli_fit_count_mismatch(capsys, tmp_path):
    doc = two_key_doc()
    doc["keys"].append({"type": "vector", "values": [2.0]})
    (tmp_path / "bad.json").write_text(json.dumps(doc))
    code, _, err = run(capsys, "fit", "-i", str(tmp_path / "bad.json"), "-o", str(tmp_path / "s.json"))
    assert code == 1
    assert "3 keys but 2 samples" in err
    assert not (tmp_path / "s.json").exists()


def test_cli_fit_duplicated_keys(capsys, tmp_path):
    doc = two_key_doc()
    doc["keys"][1]["values"] = [0.0]
    (tmp_path / "dup.json").write_text(json.dumps(doc))
    code, _, err = run(capsys, "fit", "-i", str(tmp_path / "dup.json"), "-o", str(tmp_path / "s.json"))
    assert code == 2
    assert "duplicated keys 0=1" in err


def test_cli_fit_missing_or_invalid_input(capsys, tmp_path):
    code, _, _ = run(capsys, "fit", "-i", str(tmp_path / "nope.json"), "-o", str(tmp_path / "s.json"))
    assert code == 1
    (tmp_path / "broken.json").write_text("{not json")
    code, _, err = run(capsys, "fit", "-i", str(tmp_path / "broken.json"), "-o", str(tmp_path / "s.json"))
    assert code == 1 and "invalid JSON" in err


def test_cli_fit_lambda(capsys, pose_file, tmp_path):
    code, _, _ = run(capsys, "fit", "-i", str(pose_file), "-o", str(tmp_path / "s.json"), "--lambda", "0.1")
    assert code == 0
    assert io.load_solver(tmp_path / "s.json").inner.regularization == 0.1


# -- cli: blend, kernels, gimbal ---------------------------------------------

def parse_quat(out):
    return np.array([float(v) for v in out.split()])


def test_cli_blend(capsys):
    code, out, _ = run(capsys, "blend", "--pair", f"1.0:{','.join(map(str, Z_QUARTER))}")
    assert code == 0 and same_rotation(parse_quat(out), Z_QUARTER, atol=1e-9)

    code, out, _ = run(capsys, "blend", "--pair", "0.5:1,0,0,0", "--pair", f"0.5:{','.join(map(str, Z_QUARTER))}")
    assert same_rotation(parse_quat(out), quat_axis("z", math.pi / 4), atol=1e-9)

    x, y = quat_axis("x", math.pi / 2), quat_axis("y", math.pi / 2)
    code, out, _ = run(capsys, "blend", "--pair", "0.5:" + ",".join(map(str, x)), "--pair", "0.5:" + ",".join(map(str, y)))
    assert out.strip() == "0.849710492 0.372821727 0.372821727 0"


def test_cli_blend_with_base(capsys):
    base = quat_axis("x", 1.0)
    code, out, _ = run(capsys, "blend", "--base", ",".join(map(str, base)), "--pair", "0:" + ",".join(map(str, Z_QUARTER)))
    assert code == 0 and angle_between(parse_quat(out), base) < 1e-8


@pytest.mark.parametrize("argv", [["blend"], ["blend", "--pair", "0.5"], ["blend", "--pair", "0.5:1,0,0"], ["blend", "--pair", "a:1,0,0,0"]])
def test_cli_blend_errors(capsys, argv):
    assert run(capsys, *argv)[0] == 1


def test_kernel_table_values():
    at0 = dict(kernel_table(0.0, 1.0))
    assert at0 == {
        "gaussian": 1.0, "multiquadric": 1.0, "inverse_quadratic": 1.0, "inverse_multiquadric": 1.0,
        "polyharmonic(1)": 0.0, "polyharmonic(2)": 0.0, "thinplate": 0.0,
    }
    at1 = dict(kernel_table(1.0, 1.0))
    assert at1["gaussian"] == math.exp(-1) and at1["thinplate"] == 0.0
    assert dict(kernel_table(2.0, 1.0))["polyharmonic(1)"] == 2.0
    assert len(kernel_table(0.5, 0.3)) == 7


def test_cli_kernels(capsys):
    code, out, _ = run(capsys, "kernels", "--r", "2")
    assert code == 0
    rows = dict(line.split() for line in out.splitlines()[1:])
    assert float(rows["polyharmonic(1)"]) == 2.0
    assert float(rows["gaussian"]) == math.exp(-4)
    assert run(capsys, "kernels", "--r=-1")[0] == 1


def test_gimbal_table_helper():
    steps = gimbal_table("zyx")
    np.testing.assert_allclose([p for _, p in steps], [(-1, 1, 1), (1, 1, 1), (1, -1, 1)], atol=1e-12)


def test_cli_gimbal_demo(capsys):
    code, out, _ = run(capsys, "gimbal-demo")
    assert code == 0
    lines = out.splitlines()
    assert len(lines) == 6
    assert lines[0] == "order x->y->z: (1, 1, 1) | Rx(pi/2) -> (1, -1, 1) | Ry(pi/2) -> (1, -1, -1) | Rz(pi/2) -> (1, 1, -1)"
    assert lines[2] == "order y->x->z: (1, 1, 1) | Ry(pi/2) -> (1, 1, -1) | Rx(pi/2) -> (1, 1, 1) | Rz(pi/2) -> (-1, 1, 1)"
    assert lines[5] == "order z->y->x: (1, 1, 1) | Rz(pi/2) -> (-1, 1, 1) | Ry(pi/2) -> (1, 1, 1) | Rx(pi/2) -> (1, -1, 1)"


def test_gimbal_demo_is_byte_identical_across_processes():
    cmd = [sys.executable, "-m", "qrbf", "gimbal-demo"]
    first = subprocess.run(cmd, capture_output=True, check=True).stdout
    second = subprocess.run(cmd, capture_output=True, check=True).stdout
    assert first == second and first.count(b"\n") == 6


def test_usage_errors(capsys):
    assert run(capsys)[0] == 1
    assert run(capsys, "frobnicate")[0] == 1
    assert run(capsys, "--help")[0] == 0
