"""Dense LU factorization with partial pivoting.

Matrices are plain 2-D float64 numpy arrays; :func:`as_matrix` enforces the
shape and finiteness constraints at the boundary.
"""

from __future__ import annotations

from dataclasses import dataclass

import numpy as np

from qrbf.errors import DimensionMismatch, SingularMatrix

# relative to max|A|
SINGULAR_RTOL = 1e-12


def as_matrix(a) -> np.ndarray:
    """Return ``a`` as a finite 2-D float64 array (a copy)."""
    m = np.array(a, dtype=np.float64)
    if m.ndim == 1:
        m = m.reshape(-1, 1)
    if m.ndim != 2 or m.shape[0] < 1 or m.shape[1] < 1:
        raise DimensionMismatch(f"expected a non-empty 2-D matrix, got shape {m.shape}")
    if not np.all(np.isfinite(m)):
        raise ValueError("matrix entries must be finite")
    return m


@dataclass(frozen=True)
class LUFactorization:
    """PA = LU packed in one array; ``perm[i]`` is the source row of row i."""

    lu: np.ndarray
    perm: np.ndarray

    @property
    def n(self) -> int:
        return self.lu.shape[0]

    def solve(self, b) -> np.ndarray:
        b = as_matrix(b)
        if b.shape[0] != self.n:
            raise DimensionMismatch(f"right-hand side has {b.shape[0]} rows, system has {self.n}")
        x = b[self.perm].copy()
        lu = self.lu
        # forward substitution, unit lower triangle
        for i in range(1, self.n):
            x[i] -= lu[i, :i] @ x[:i]
        for i in range(self.n - 1, -1, -1):
            x[i] -= lu[i, i + 1:] @ x[i + 1:]
            x[i] /= lu[i, i]
        return x


def lu_factor(a) -> LUFactorization:
    a = as_matrix(a)
    n, m = a.shape
    if n != m:
        raise DimensionMismatch(f"matrix must be square, got {a.shape}")
    lu = a.copy()
    perm = np.arange(n)
    tol = SINGULAR_RTOL * np.max(np.abs(a))
    for k in range(n):
        p = k + int(np.argmax(np.abs(lu[k:, k])))
        pivot = lu[p, k]
        if abs(pivot) <= tol or pivot == 0.0:
            raise SingularMatrix(f"pivot {abs(pivot):.3e} at column {k} below threshold {tol:.3e}")
        if p != k:
            lu[[k, p]] = lu[[p, k]]
            perm[[k, p]] = perm[[p, k]]
        lu[k + 1:, k] /= pivot
        lu[k + 1:, k + 1:] -= np.outer(lu[k + 1:, k], lu[k, k + 1:])
    return LUFactorization(lu, perm)


def lu_solve(a, b) -> np.ndarray:
    """Solve ``a @ x = b`` for a square ``a`` and a K x M right-hand side."""
    return lu_factor(a).solve(b)


def condition_estimate(a) -> float:
    """1-norm condition number ``|A|_1 |A^-1|_1``; ``inf`` for singular ``a``.

    The inverse is formed explicitly from the LU factors, which is cheap at
    the sizes pose sets reach.
    """
    a = as_matrix(a)
    try:
        fac = lu_factor(a)
    except SingularMatrix:
        return float("inf")
    inv = fac.solve(np.eye(fac.n))
    # >= 1 exactly in real arithmetic; rounding can land just below
    return max(1.0, float(_norm1(a) * _norm1(inv)))


def _norm1(a: np.ndarray) -> float:
    return float(np.max(np.sum(np.abs(a), axis=0)))
