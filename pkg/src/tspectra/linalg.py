"""Small dense LU solves (complex and real) at context precision.

These back the Vandermonde extrapolation system and the cosine
interpolation system.  Partial pivoting with an explicit relative
singularity threshold: a pivot smaller than eps * ||A||_inf raises
:class:`SingularMatrix` instead of silently amplifying noise.
"""

from __future__ import annotations

import numpy as np

from .precision import PrecisionContext

__all__ = ["SingularMatrix", "lu_solve", "real_solve", "solve_columns"]


class SingularMatrix(Exception):
    """A pivot fell below eps * ||A||_inf during elimination."""

    def __init__(self, step: int, pivot_abs, threshold):
        self.step = step
        self.pivot_abs = pivot_abs
        self.threshold = threshold
        super().__init__(
            f"singular system: |pivot| = {float(pivot_abs):.3e} < "
            f"{float(threshold):.3e} at elimination step {step}"
        )


def _norm_inf(A: np.ndarray):
    return max(sum(abs(x) for x in row) for row in A)


def _solve_multi(A: np.ndarray, B: np.ndarray, ctx: PrecisionContext) -> np.ndarray:
    """LU with partial pivoting; B has one column per right-hand side."""
    n = A.shape[0]
    A = A.copy()
    B = B.copy()
    with ctx.activate():
        threshold = ctx.eps * _norm_inf(A)
        for k in range(n):
            p = max(range(k, n), key=lambda i: abs(A[i, k]))
            pivot = abs(A[p, k])
            if pivot < threshold or pivot == 0:
                raise SingularMatrix(k, pivot, threshold)
            if p != k:
                A[[k, p], :] = A[[p, k], :]
                B[[k, p], :] = B[[p, k], :]
            for i in range(k + 1, n):
                m = A[i, k] / A[k, k]
                if m != 0:
                    A[i, k + 1 :] = A[i, k + 1 :] - m * A[k, k + 1 :]
                    B[i, :] = B[i, :] - m * B[k, :]
        X = B
        for i in range(n - 1, -1, -1):
            if i + 1 < n:
                X[i, :] = X[i, :] - A[i, i + 1 :] @ X[i + 1 :, :]
            X[i, :] = X[i, :] / A[i, i]
    return X


def _as_matrix(A, ctx: PrecisionContext, to_complex: bool) -> np.ndarray:
    rows = len(A)
    make = ctx.complex if to_complex else ctx.real
    out = np.empty((rows, len(A[0]) if rows else 0), dtype=ctx.dtype if to_complex else (np.float64 if ctx.is_double else object))
    for i, row in enumerate(A):
        for j, x in enumerate(row):
            out[i, j] = make(x)
    return out


def lu_solve(A, b, ctx: PrecisionContext) -> np.ndarray:
    """Solve the square complex system A x = b.

    A is any nested sequence or ndarray of complex-convertible entries;
    returns a length-n vector of context-precision complex scalars.
    """
    M = _as_matrix(A, ctx, to_complex=True)
    n = M.shape[0]
    if M.shape != (n, n) or len(b) != n or n < 1:
        raise ValueError("need a square n>=1 system with matching right-hand side")
    B = np.empty((n, 1), dtype=M.dtype)
    for i, x in enumerate(b):
        B[i, 0] = ctx.complex(x)
    return _solve_multi(M, B, ctx)[:, 0]


def real_solve(A, b, ctx: PrecisionContext) -> np.ndarray:
    """Solve the square real system A x = b (real specialization of lu_solve)."""
    M = _as_matrix(A, ctx, to_complex=False)
    n = M.shape[0]
    if M.shape != (n, n) or len(b) != n or n < 1:
        raise ValueError("need a square n>=1 system with matching right-hand side")
    B = np.empty((n, 1), dtype=M.dtype)
    for i, x in enumerate(b):
        B[i, 0] = ctx.real(x)
    return _solve_multi(M, B, ctx)[:, 0]


def solve_columns(A: np.ndarray, B: np.ndarray, ctx: PrecisionContext) -> np.ndarray:
    """Solve A X = B column-wise for matrix right-hand sides (same pivoting)."""
    if A.shape[0] != A.shape[1] or A.shape[0] != B.shape[0]:
        raise ValueError("shape mismatch")
    return _solve_multi(A, B, ctx)
