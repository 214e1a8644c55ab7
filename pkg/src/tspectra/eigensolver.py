"""All eigenvalues of a dense complex matrix at configurable precision.

The algorithm is the classical dense chain: optional Parlett-Reinsch
balancing (radix-2 diagonal similarity, exact in binary floating point),
unitary Householder reduction to upper Hessenberg form, then implicitly
shifted single-shift QR iteration in complex arithmetic with Wilkinson
shifts.  A subdiagonal entry h[i+1,i] is deflated to zero once

    |h[i+1,i]| <= deflation_tol * (|h[i,i]| + |h[i+1,i+1]|),

with deflation_tol equal to the context eps, so the same code drives both
the 53-bit path (numpy complex128, vectorized row/column updates) and the
arbitrary-precision path (gmpy2 scalars in numpy object arrays).

Double precision is famously untrustworthy for non-normal Toeplitz
matrices: the 53-bit entry point exists precisely to reproduce those
pseudospectral eigenvalue clouds next to the high-precision truth.
"""

from __future__ import annotations

import math
from dataclasses import dataclass

import numpy as np

from .precision import DOUBLE, PrecisionContext, RealScalar

__all__ = ["EigResult", "NoConvergence", "eigenvalues", "eigenvalues_at_double"]

_EXCEPTIONAL_EVERY = 10  # ad-hoc shift after this many stalled sweeps
_MAXITER_FACTOR = 30  # sweep cap per deflation step, times n


@dataclass
class EigResult:
    """Unordered eigenvalues plus solver diagnostics."""

    values: np.ndarray
    iterations: int
    deflation_tol: RealScalar


class NoConvergence(Exception):
    """QR iteration exceeded its sweep cap; carries the partial result.

    ``partial.values`` holds the eigenvalues deflated so far followed by
    the diagonal of the still-active block (unconverged).
    """

    def __init__(self, message: str, partial: EigResult):
        self.partial = partial
        super().__init__(message)


def _balance(A: np.ndarray, ctx: PrecisionContext) -> None:
    """Parlett-Reinsch balancing in place.

    Scale factors are powers of two, so the similarity is exact in binary
    floating point and the balanced matrix is deterministic.
    """
    n = A.shape[0]
    radix = 2
    converged = False
    while not converged:
        converged = True
        for i in range(n):
            r = sum(abs(A[i, j]) for j in range(n) if j != i)
            c = sum(abs(A[j, i]) for j in range(n) if j != i)
            if r == 0 or c == 0:
                continue
            total = c + r
            f = 1.0
            g = r / radix
            while c < g:
                f *= radix
                c *= radix * radix
            g = r * radix
            while c > g:
                f /= radix
                c /= radix * radix
            if (c + r) / f < 0.95 * total:
                converged = False
                A[i, :] *= 1.0 / f
                A[:, i] *= f


def _hessenberg(A: np.ndarray, ctx: PrecisionContext) -> None:
    """Unitary similarity reduction to upper Hessenberg form, in place."""
    n = A.shape[0]
    rzero = ctx.real(0)
    for k in range(n - 2):
        x = A[k + 1 :, k]
        nx2 = sum((abs(v) ** 2 for v in x), rzero)
        if nx2 == 0:
            continue
        nx = ctx.sqrt(nx2) if not ctx.is_double else nx2**0.5
        pivot = x[0]
        ap = abs(pivot)
        phase = pivot / ap if ap != 0 else ctx.complex(1)
        alpha = -phase * nx
        v = x.copy()
        v[0] = v[0] - alpha
        vn2 = sum((abs(u) ** 2 for u in v), rzero)
        if vn2 == 0:
            continue
        tau = 2 / vn2
        vc = np.conjugate(v)
        w = vc @ A[k + 1 :, k:]
        A[k + 1 :, k:] -= tau * np.outer(v, w)
        u = A[:, k + 1 :] @ v
        A[:, k + 1 :] -= tau * np.outer(u, vc)
        A[k + 1, k] = alpha
        A[k + 2 :, k] = ctx.complex(0)


def _givens(x, y, ctx: PrecisionContext):
    """(c, s) with c real such that [[c, s], [-conj(s), c]] @ [x, y] = [r, 0]."""
    ax = abs(x)
    ay = abs(y)
    if ay == 0:
        return ctx.real(1), ctx.complex(0)
    if ax == 0:
        return ctx.real(0), np.conjugate(y) / ay
    r = math.hypot(ax, ay) if ctx.is_double else ctx.sqrt(ax * ax + ay * ay)
    return ax / r, (x / ax) * (np.conjugate(y) / r)


def _wilkinson_shift(a, b, c, d, ctx: PrecisionContext):
    """Eigenvalue of [[a, b], [c, d]] closest to d."""
    t = (a - d) / 2
    disc = ctx.csqrt(t * t + b * c)
    d1 = t + disc
    d2 = t - disc
    denom = d1 if abs(d1) >= abs(d2) else d2
    if denom == 0:
        return d
    return d - (b * c) / denom


def _qr_iterate(H: np.ndarray, ctx: PrecisionContext):
    """Eigenvalues of an upper Hessenberg matrix by implicit single-shift QR."""
    n = H.shape[0]
    eps = ctx.eps
    zero = ctx.complex(0)
    cap = _MAXITER_FACTOR * n
    total = 0
    step_iters = 0
    stall = 0
    hi = n - 1
    while hi >= 0:
        if hi == 0:
            hi -= 1
            continue
        # scan up for a deflatable subdiagonal within [0..hi]
        lo = hi
        while lo > 0:
            sd = abs(H[lo, lo - 1])
            if sd <= eps * (abs(H[lo - 1, lo - 1]) + abs(H[lo, lo])):
                H[lo, lo - 1] = zero
                break
            lo -= 1
        if lo == hi:
            hi -= 1
            step_iters = 0
            stall = 0
            continue
        if step_iters >= cap:
            result = EigResult(values=_diag_copy(H, ctx), iterations=total, deflation_tol=eps)
            raise NoConvergence(
                f"eigenvalue {hi} not converged after {step_iters} sweeps (cap {cap})",
                result,
            )
        stall += 1
        if stall % _EXCEPTIONAL_EVERY == 0:
            mu = H[hi, hi] + 0.75 * abs(H[hi, hi - 1])
        else:
            mu = _wilkinson_shift(H[hi - 1, hi - 1], H[hi - 1, hi], H[hi, hi - 1], H[hi, hi], ctx)
        # implicit single-shift sweep on the active block [lo..hi]
        x = H[lo, lo] - mu
        y = H[lo + 1, lo]
        for k in range(lo, hi):
            c, s = _givens(x, y, ctx)
            sc = np.conjugate(s)
            left = max(k - 1, lo)
            xr = H[k, left : hi + 1].copy()
            yr = H[k + 1, left : hi + 1].copy()
            H[k, left : hi + 1] = c * xr + s * yr
            H[k + 1, left : hi + 1] = c * yr - sc * xr
            bottom = min(k + 2, hi)
            xc = H[lo : bottom + 1, k].copy()
            yc = H[lo : bottom + 1, k + 1].copy()
            H[lo : bottom + 1, k] = c * xc + sc * yc
            H[lo : bottom + 1, k + 1] = c * yc - s * xc
            if k > lo:
                H[k + 1, k - 1] = zero
            if k < hi - 1:
                x = H[k + 1, k]
                y = H[k + 2, k]
        total += 1
        step_iters += 1
    return _diag_copy(H, ctx), total


def _diag_copy(H: np.ndarray, ctx: PrecisionContext) -> np.ndarray:
    out = np.empty(H.shape[0], dtype=ctx.dtype)
    for i in range(H.shape[0]):
        out[i] = H[i, i]
    return out


def _coerce(A, ctx: PrecisionContext) -> np.ndarray:
    """Copy A into a fresh array of the context's scalar kind."""
    A = np.asarray(A)
    n = A.shape[0]
    if A.ndim != 2 or A.shape[1] != n or n < 1:
        raise ValueError("need a square matrix of dimension >= 1")
    if ctx.is_double and A.dtype != object:
        return A.astype(np.complex128, copy=True)
    out = np.empty((n, n), dtype=ctx.dtype)
    for i in range(n):
        for j in range(n):
            out[i, j] = ctx.complex(A[i, j] if not ctx.is_double else complex(A[i, j]))
    return out


def eigenvalues(A, ctx: PrecisionContext, balance: bool = True) -> EigResult:
    """All n roots of det(A - lambda I), unordered, at context precision.

    Balancing is on by default; it is exact (radix-2 scaling) yet
    consequential for strongly non-normal inputs, so callers can disable it
    reproducibly.  Raises :class:`NoConvergence` carrying a partial result
    if any eigenvalue exceeds the sweep cap.
    """
    with ctx.activate():
        H = _coerce(A, ctx)
        if balance:
            _balance(H, ctx)
        _hessenberg(H, ctx)
        values, iterations = _qr_iterate(H, ctx)
    return EigResult(values=values, iterations=iterations, deflation_tol=ctx.eps)


def eigenvalues_at_double(A, balance: bool = True) -> EigResult:
    """The same algorithm pinned to 53 bits.

    For strongly non-normal Toeplitz matrices the output lands near the
    pseudospectrum rather than the spectrum, which is exactly what this
    entry point is for.
    """
    A = np.asarray(A)
    if A.dtype == object:
        n = A.shape[0]
        B = np.empty((n, n), dtype=np.complex128)
        for i in range(n):
            for j in range(n):
                z = A[i, j]
                B[i, j] = complex(float(z.real), float(z.imag))
        A = B
    return eigenvalues(A, DOUBLE, balance=balance)
