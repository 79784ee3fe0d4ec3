"""Vector-valued radial basis function interpolation.

Given K keys ``T`` (K x N) and samples ``S`` (K x M), fitting solves
``(D + lam I) W = S`` where ``D[i, j] = phi(|T_i - T_j|)``. Evaluating at a
query row ``L`` returns ``xi @ W`` with ``xi[i] = phi(|L - T_i|)``.

No polynomial tail is appended, so conditionally positive definite kernels
(polyharmonic, thinplate) rely on the distance matrix alone being
invertible. That holds for distinct keys with the linear kernel but can fail
for others on unlucky layouts.
"""

from __future__ import annotations

import math
from dataclasses import dataclass

import numpy as np

from qrbf import linalg
from qrbf.errors import DimensionMismatch, SingularMatrix

KERNEL_KINDS = (
    "gaussian",
    "multiquadric",
    "inverse_quadratic",
    "inverse_multiquadric",
    "polyharmonic",
    "thinplate",
)


@dataclass(frozen=True)
class Kernel:
    kind: str = "polyharmonic"
    epsilon: float = 1.0

    def __post_init__(self):
        if self.kind not in KERNEL_KINDS:
            raise ValueError(f"unknown kernel {self.kind!r}; expected one of {KERNEL_KINDS}")
        if not (math.isfinite(self.epsilon) and self.epsilon > 0):
            raise ValueError(f"epsilon must be positive, got {self.epsilon}")
        if self.kind == "polyharmonic" and float(self.epsilon) != int(self.epsilon):
            raise ValueError(f"polyharmonic order must be a positive integer, got {self.epsilon}")

    def __call__(self, r):
        return kernel_eval(self, r)


def kernel_eval(k: Kernel, r):
    """Evaluate the kernel at distance(s) ``r >= 0``. Accepts scalars or arrays."""
    r_arr = np.asarray(r, dtype=np.float64)
    if np.any(r_arr < 0):
        raise ValueError("distances must be nonnegative")
    eps = k.epsilon
    if k.kind == "gaussian":
        out = np.exp(-((eps * r_arr) ** 2))
    elif k.kind == "multiquadric":
        out = np.sqrt(1.0 + (eps * r_arr) ** 2)
    elif k.kind == "inverse_quadratic":
        out = 1.0 / (1.0 + (eps * r_arr) ** 2)
    elif k.kind == "inverse_multiquadric":
        out = 1.0 / np.sqrt(1.0 + (eps * r_arr) ** 2)
    elif k.kind == "polyharmonic":
        order = int(eps)
        if order % 2:
            out = r_arr ** order
        else:
            out = _rlogr(r_arr, order)
    else:
        out = _rlogr(r_arr, 2)
    return float(out) if out.ndim == 0 else out


def _rlogr(r: np.ndarray, power: int) -> np.ndarray:
    # r^p ln r -> 0 as r -> 0
    safe = np.where(r > 0, r, 1.0)
    return np.where(r > 0, safe ** power * np.log(safe), 0.0)


def distance(u, v) -> float:
    u = np.asarray(u, dtype=np.float64).ravel()
    v = np.asarray(v, dtype=np.float64).ravel()
    if u.shape != v.shape:
        raise DimensionMismatch(f"vectors have lengths {u.size} and {v.size}")
    return float(np.sqrt(np.sum((u - v) ** 2)))


def _pairwise(a: np.ndarray, b: np.ndarray) -> np.ndarray:
    diff = a[:, None, :] - b[None, :, :]
    return np.sqrt(np.sum(diff * diff, axis=-1))


def distance_matrix(t, k: Kernel) -> np.ndarray:
    t = linalg.as_matrix(t)
    r = _pairwise(t, t)
    # exact symmetry and an exact phi(0) diagonal
    r = 0.5 * (r + r.T)
    np.fill_diagonal(r, 0.0)
    return np.asarray(kernel_eval(k, r), dtype=np.float64).reshape(r.shape)


@dataclass(frozen=True)
class FittedSolver:
    kernel: Kernel
    keys: np.ndarray
    weights: np.ndarray
    regularization: float = 0.0

    def __post_init__(self):
        if self.keys.shape[0] != self.weights.shape[0]:
            raise DimensionMismatch("weights and keys must have the same number of rows")
        self.keys.setflags(write=False)
        self.weights.setflags(write=False)

    @property
    def n_keys(self) -> int:
        return self.keys.shape[0]

    @property
    def key_dim(self) -> int:
        return self.keys.shape[1]

    @property
    def out_dim(self) -> int:
        return self.weights.shape[1]

    def __call__(self, query):
        return evaluate(self, query)


def duplicate_rows(t: np.ndarray) -> list[tuple[int, int]]:
    pairs = []
    for i in range(t.shape[0]):
        for j in range(i + 1, t.shape[0]):
            if np.array_equal(t[i], t[j]):
                pairs.append((i, j))
    return pairs


def fit(t, s, k: Kernel | None = None, lam: float = 0.0) -> FittedSolver:
    """Solve for the K x M weight matrix. ``lam`` adds Tikhonov damping."""
    k = k or Kernel()
    t = linalg.as_matrix(t)
    s = linalg.as_matrix(s)
    if t.shape[0] != s.shape[0]:
        raise DimensionMismatch(f"{t.shape[0]} keys but {s.shape[0]} samples")
    if lam < 0 or not math.isfinite(lam):
        raise ValueError(f"regularization must be a nonnegative finite number, got {lam}")
    d = distance_matrix(t, k)
    if lam:
        d = d + lam * np.eye(d.shape[0])
    try:
        w = linalg.lu_solve(d, s)
    except SingularMatrix as exc:
        dups = duplicate_rows(t)
        msg = str(exc)
        if dups:
            msg = "duplicated keys " + ", ".join(f"{i}={j}" for i, j in dups) + f" ({msg})"
        raise SingularMatrix(msg, duplicates=dups) from exc
    return FittedSolver(k, t, w, float(lam))


def evaluate(solver: FittedSolver, query) -> np.ndarray:
    """Interpolate at one query row (shape (N,)) or a batch (shape (Q, N))."""
    q = np.asarray(query, dtype=np.float64)
    single = q.ndim == 1
    q = np.atleast_2d(q)
    if q.ndim != 2 or q.shape[1] != solver.key_dim:
        raise DimensionMismatch(f"query has dimension {q.shape[-1]}, solver expects {solver.key_dim}")
    xi = np.asarray(kernel_eval(solver.kernel, _pairwise(q, solver.keys))).reshape(q.shape[0], -1)
    out = xi @ solver.weights
    return out[0] if single else out
