"""Recovering the spectral function from expansion data.

Three capabilities built on the c_0 samples produced by the expansion fit:

* cosine-series recovery of the Fourier coefficients of the spectral
  function (an n0 x n0 trigonometric interpolation solve, applied to the
  real and imaginary sample vectors separately),
* "perfect" sampling grids xi with g(xi_j) equal to a prescribed
  eigenvalue component, used for visualization,
* the root curves of b(z) = g(theta) where b is the symbol as a Laurent
  polynomial in z — the candidate reparametrizations of the unit circle
  that map the symbol onto the spectral function.
"""

from __future__ import annotations

import csv
from dataclasses import dataclass
from typing import IO, Callable, List, Optional, Sequence

import numpy as np

from .eigensolver import eigenvalues
from .expansion import ExpansionTable, make_grid
from .linalg import solve_columns
from .precision import ComplexScalar, PrecisionContext, RealScalar
from .symbols import LaurentSymbol

__all__ = [
    "FourierRecovery",
    "GammaCurves",
    "NoBracket",
    "recover_fourier",
    "recover_spectral_function",
    "evaluate_g_tilde",
    "perfect_grid",
    "gamma_curves",
    "write_fourier_csv",
    "read_fourier_csv",
    "write_gamma_csv",
]


class NoBracket(Exception):
    """No scanned monotone interval brackets the requested target value."""


def _abs2(z):
    re_, im_ = z.real, z.imag
    return re_ * re_ + im_ * im_


@dataclass
class FourierRecovery:
    """Cosine-series coefficients of the recovered spectral function.

    ghat_re[k] and ghat_im[k] are the coefficients of the real and
    imaginary component series  ghat_0 + 2 sum_k ghat_k cos(k theta).
    noise_floor estimates the accuracy limit of the run: the distance of
    ghat_0 from the nearest integer when it sits within 1e-3 of one
    (coefficients below it are numerical noise), else None.
    """

    ghat_re: np.ndarray
    ghat_im: np.ndarray
    n0: int
    precision_bits: int
    noise_floor: Optional[RealScalar]


def _cosine_matrix(n0: int, ctx: PrecisionContext) -> np.ndarray:
    grid = make_grid(n0, ctx)
    G = ctx.real_zeros((n0, n0))
    with ctx.activate():
        one = ctx.real(1)
        for i in range(n0):
            G[i, 0] = one
            for j in range(1, n0):
                G[i, j] = 2 * ctx.cos(j * grid.thetas[i])
    return G


def recover_fourier(c0: Sequence, ctx: PrecisionContext) -> np.ndarray:
    """Solve the cosine interpolation system on the canonical grid.

    ``c0`` holds real samples of one spectral-function component on
    theta_{j,n0}; the result holds the n0 leading cosine coefficients.
    """
    n0 = len(c0)
    if n0 < 1:
        raise ValueError("need at least one sample")
    G = _cosine_matrix(n0, ctx)
    B = ctx.real_zeros((n0, 1))
    for i, x in enumerate(c0):
        B[i, 0] = ctx.real(x)
    return solve_columns(G, B, ctx)[:, 0]


def recover_spectral_function(c0_complex: Sequence, ctx: PrecisionContext) -> FourierRecovery:
    """Apply recover_fourier to the real and imaginary parts of c_0."""
    n0 = len(c0_complex)
    ghat_re = recover_fourier([z.real for z in c0_complex], ctx)
    ghat_im = recover_fourier([z.imag for z in c0_complex], ctx)
    with ctx.activate():
        g0 = ghat_re[0]
        nearest = ctx.real(round(float(g0)))
        dist = abs(g0 - nearest)
        floor = dist if dist <= 1e-3 else None
    return FourierRecovery(ghat_re=ghat_re, ghat_im=ghat_im, n0=n0, precision_bits=ctx.bits, noise_floor=floor)


def recovery_from_table(table: ExpansionTable, ctx: Optional[PrecisionContext] = None) -> FourierRecovery:
    """Convenience: recover from row 0 of an expansion table."""
    ctx = ctx or PrecisionContext(table.precision_bits)
    return recover_spectral_function(list(table.c[0, :]), ctx)


def evaluate_g_tilde(rec: FourierRecovery, theta, ctx: PrecisionContext) -> ComplexScalar:
    """ghat_0 + 2 sum_k ghat_k cos(k theta), real and imaginary series combined."""
    with ctx.activate():
        t = ctx.real(theta)
        acc_re = ctx.real(rec.ghat_re[0])
        acc_im = ctx.real(rec.ghat_im[0])
        for k in range(1, rec.n0):
            ck = ctx.cos(k * t)
            acc_re = acc_re + 2 * ctx.real(rec.ghat_re[k]) * ck
            acc_im = acc_im + 2 * ctx.real(rec.ghat_im[k]) * ck
        return ctx.complex(acc_re, acc_im)


def perfect_grid(
    g_component: Callable,
    targets: Sequence,
    ctx: PrecisionContext,
    scan_points: int = 1024,
) -> np.ndarray:
    """Angles xi with g_component(xi_j) = targets[j], found by bisection.

    The component function is scanned on ``scan_points`` equispaced angles
    in (0, pi); sign changes of the sampled slope split the scan into
    monotone pieces, each bracketing at most one root per target.  When
    several pieces contain the target, the root nearest the canonical node
    theta_{j,n} (n = len(targets)) wins, matching the usual xi ~ theta
    alignment.  Raises :class:`NoBracket` if no piece brackets a target.
    """
    n = len(targets)
    if n < 1:
        raise ValueError("need at least one target")
    with ctx.activate():
        pi = ctx.pi()
        denom = ctx.real(scan_points + 1)
        scan_t = [(i * pi) / denom for i in range(1, scan_points + 1)]
        scan_g = [ctx.real(g_component(t)) for t in scan_t]
        # split into maximal monotone runs
        runs = []
        start = 0
        direction = 0
        for i in range(1, scan_points):
            step = scan_g[i] - scan_g[i - 1]
            d = 1 if step > 0 else (-1 if step < 0 else 0)
            if direction == 0:
                direction = d
            elif d != 0 and d != direction:
                runs.append((start, i - 1))
                start = i - 1
                direction = d
        runs.append((start, scan_points - 1))
        node_grid = make_grid(n, ctx)
        out = np.empty(n, dtype=(np.float64 if ctx.is_double else object))
        for j, tv in enumerate(targets, start=1):
            v = ctx.real(tv)
            roots = []
            for a, b in runs:
                ga = scan_g[a] - v
                gb = scan_g[b] - v
                if ga == 0:
                    roots.append(scan_t[a])
                    continue
                if gb == 0:
                    roots.append(scan_t[b])
                    continue
                if (ga < 0) == (gb < 0):
                    continue
                lo_t, hi_t = scan_t[a], scan_t[b]
                lo_s = ga < 0
                # bisect to floating resolution
                for _ in range(ctx.bits + 8):
                    mid = (lo_t + hi_t) / 2
                    if mid == lo_t or mid == hi_t:
                        break
                    fm = ctx.real(g_component(mid)) - v
                    if fm == 0:
                        lo_t = hi_t = mid
                        break
                    if (fm < 0) == lo_s:
                        lo_t = mid
                    else:
                        hi_t = mid
                roots.append((lo_t + hi_t) / 2)
            if not roots:
                raise NoBracket(f"target {float(v)} (index {j}) not attained on the scanned range")
            node = node_grid.thetas[j - 1]
            out[j - 1] = min(roots, key=lambda r: abs(r - node))
    return out


@dataclass
class GammaCurves:
    """Root curves gamma_k: for each angle, the d roots of b(z) = g(theta).

    branches has shape (d, len(thetas)); branch b traced over theta by
    nearest-neighbor continuation from the previous angle.
    """

    thetas: np.ndarray
    branches: np.ndarray


def gamma_curves(sym: LaurentSymbol, g_samples: Sequence, ctx: PrecisionContext) -> GammaCurves:
    """Roots of z^{K_min} (b(z) - g_j) for each sample, chained into branches.

    The polynomial has degree K_min + K_max (the symbol band width); its
    roots come from the companion-matrix eigenvalues computed by the same
    QR solver as everything else.  Branches start at the first angle
    sorted by argument and follow by greedy nearest-neighbor matching.
    """
    kmin = sym.band_lower
    kmax = sym.band_upper
    d = kmin + kmax
    if d < 1:
        raise ValueError("symbol must have at least one nonzero off-diagonal coefficient")
    n0 = len(g_samples)
    grid = make_grid(n0, ctx)
    branches = np.empty((d, n0), dtype=ctx.dtype)
    with ctx.activate():
        lead = sym.realize(kmax, ctx)
        for j in range(n0):
            gj = ctx.complex(g_samples[j])
            # coefficient of z^m in z^kmin (b(z) - gj), m = 0..d
            coeffs = [sym.realize(m - kmin, ctx) for m in range(d + 1)]
            coeffs[kmin] = coeffs[kmin] - gj
            if kmax == 0:
                lead = coeffs[d]
            if abs(lead) == 0:
                raise ValueError("leading polynomial coefficient vanished; cannot take roots")
            companion = ctx.complex_zeros((d, d))
            for i in range(1, d):
                companion[i, i - 1] = ctx.complex(1)
            for i in range(d):
                companion[i, d - 1] = -coeffs[i] / lead
            roots = list(eigenvalues(companion, ctx).values)
            if j == 0:
                import math as _math

                def arg(z):
                    return _math.atan2(float(z.imag), float(z.real))

                roots.sort(key=lambda z: (arg(z), z.real, z.imag))
                for b in range(d):
                    branches[b, 0] = roots[b]
            else:
                pairs = []
                for b in range(d):
                    prev = branches[b, j - 1]
                    for ridx, r in enumerate(roots):
                        pairs.append((_abs2(r - prev), r.real, r.imag, b, ridx))
                pairs.sort()
                used_b = [False] * d
                used_r = [False] * d
                assigned = 0
                for _, _, _, b, ridx in pairs:
                    if used_b[b] or used_r[ridx]:
                        continue
                    used_b[b] = True
                    used_r[ridx] = True
                    branches[b, j] = roots[ridx]
                    assigned += 1
                    if assigned == d:
                        break
    return GammaCurves(thetas=grid.thetas, branches=branches)


def write_fourier_csv(rec: FourierRecovery, stream: IO[str]) -> None:
    ctx = PrecisionContext(rec.precision_bits)
    stream.write("k,ghat_re,ghat_im\n")
    for k in range(rec.n0):
        stream.write(f"{k},{ctx.format_real(rec.ghat_re[k])},{ctx.format_real(rec.ghat_im[k])}\n")


def read_fourier_csv(stream: IO[str], precision_bits: int) -> FourierRecovery:
    ctx = PrecisionContext(precision_bits)
    reader = csv.reader(stream)
    header = next(reader)
    if header[:3] != ["k", "ghat_re", "ghat_im"]:
        raise ValueError("not a Fourier recovery CSV")
    re_vals: List = []
    im_vals: List = []
    for row in reader:
        if not row:
            continue
        re_vals.append(ctx.parse_real(row[1]))
        im_vals.append(ctx.parse_real(row[2]))
    n0 = len(re_vals)
    gre = np.empty(n0, dtype=(np.float64 if ctx.is_double else object))
    gim = np.empty(n0, dtype=(np.float64 if ctx.is_double else object))
    gre[:] = re_vals
    gim[:] = im_vals
    with ctx.activate():
        g0 = gre[0]
        nearest = ctx.real(round(float(g0)))
        dist = abs(g0 - nearest)
        floor = dist if dist <= 1e-3 else None
    return FourierRecovery(ghat_re=gre, ghat_im=gim, n0=n0, precision_bits=precision_bits, noise_floor=floor)


def write_gamma_csv(curves: GammaCurves, stream: IO[str], ctx: PrecisionContext) -> None:
    stream.write("branch,theta,z_re,z_im\n")
    d, n0 = curves.branches.shape
    for b in range(d):
        for j in range(n0):
            z = curves.branches[b, j]
            stream.write(
                f"{b},{ctx.format_real(curves.thetas[j])},"
                f"{ctx.format_real(z.real)},{ctx.format_real(z.imag)}\n"
            )
