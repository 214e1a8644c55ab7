"""Dense Toeplitz matrices T_n(f) = [fhat_{i-j}] from a Laurent symbol.

Dense storage is deliberate: the QR eigensolver destroys bandedness in its
first sweep and the sizes in use fit comfortably in memory.
"""

from __future__ import annotations

from typing import IO

import numpy as np

from .precision import PrecisionContext
from .symbols import LaurentSymbol

__all__ = ["build_toeplitz", "write_matrix_csv"]


def build_toeplitz(sym: LaurentSymbol, n: int, ctx: PrecisionContext) -> np.ndarray:
    """The n x n matrix with entry (i, j) = fhat_{i-j} (1-based indices).

    Positive offsets fill subdiagonals (first column fhat_0, fhat_1, ...),
    negative offsets fill superdiagonals (first row fhat_0, fhat_-1, ...).
    """
    if n < 1:
        raise ValueError("matrix dimension must be >= 1")
    A = ctx.complex_zeros((n, n))
    for k in sorted(sym.coeffs):
        if abs(k) >= n:
            continue
        value = sym.realize(k, ctx)
        # offset k occupies entries (i, j) with i - j = k
        if k >= 0:
            rows = np.arange(k, n)
            cols = np.arange(0, n - k)
        else:
            rows = np.arange(0, n + k)
            cols = np.arange(-k, n)
        A[rows, cols] = value
    return A


def write_matrix_csv(A: np.ndarray, stream: IO[str], ctx: PrecisionContext) -> None:
    """Debug dump: one row per line, entries as "re,im" pairs."""
    for row in A:
        cells = []
        for z in row:
            cells.append(ctx.format_real(z.real))
            cells.append(ctx.format_real(z.imag))
        stream.write(",".join(cells) + "\n")
