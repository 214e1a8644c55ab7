"""Matrix-less extraction of the eigenvalue expansion functions.

Given any consistently ordered eigenvalue source, the expansion

    lambda_j(T_n)  ~  sum_{k=0..alpha}  c_k(theta_{j,n}) h^k,      h = 1/(n+1)

is fitted from alpha+1 moderate sizes n_k = 2^k (n0+1) - 1.  The size
doubling is what makes this work: index 2^k j of the n_k grid lands
exactly on theta_{j,n0}, so each grid point contributes one small
Vandermonde system in h, solved at working precision.  Row 0 of the
result samples the spectral function itself; higher rows are the
correction functions.
"""

from __future__ import annotations

import csv
import warnings
from concurrent.futures import ThreadPoolExecutor
from dataclasses import dataclass
from typing import IO, Callable, List, Sequence

import numpy as np

from .eigensolver import eigenvalues
from .linalg import solve_columns
from .ordering import OrderedSpectrum, OrderingStrategy, order
from .precision import PrecisionContext, RealScalar
from .symbols import LaurentSymbol
from .toeplitz import build_toeplitz

__all__ = [
    "Grid",
    "ExpansionTable",
    "EigSourceError",
    "TargetTooSmall",
    "make_grid",
    "compute_expansion",
    "interp_extrap_eigs",
    "symbol_eig_source",
    "write_expansion_csv",
    "read_expansion_csv",
]


class EigSourceError(Exception):
    """The eigenvalue source broke its contract (wrong count, wrong type)."""


class TargetTooSmall(ValueError):
    """Requested size below the table's base size n0."""


@dataclass(frozen=True)
class Grid:
    """Canonical sampling grid theta_{j,n} = j pi / (n+1), j = 1..n."""

    n: int
    thetas: np.ndarray
    h: RealScalar


def make_grid(n: int, ctx: PrecisionContext) -> Grid:
    """Build the canonical grid; one fixed evaluation order (j*pi then /(n+1))
    so equal angles on nested grids are bitwise equal."""
    if n < 1:
        raise ValueError("grid size must be >= 1")
    with ctx.activate():
        pi = ctx.pi()
        denom = ctx.real(n + 1)
        thetas = np.empty(n, dtype=(np.float64 if ctx.is_double else object))
        for j in range(1, n + 1):
            thetas[j - 1] = (j * pi) / denom
        h = ctx.real(1) / denom
    return Grid(n=n, thetas=thetas, h=h)


@dataclass
class ExpansionTable:
    """(alpha+1) x n0 samples of the expansion functions on theta_{j,n0}.

    Row k holds c_k(theta_{j,n0}) as complex scalars (real part = the
    real-spectrum expansion, imaginary part = the imaginary one).
    """

    n0: int
    alpha: int
    c: np.ndarray
    sizes_used: List[int]
    precision_bits: int


def expansion_sizes(n0: int, alpha: int) -> List[int]:
    return [(2**k) * (n0 + 1) - 1 for k in range(alpha + 1)]


def symbol_eig_source(sym: LaurentSymbol, strategy: OrderingStrategy, balance: bool = True) -> Callable:
    """The standard source: build T_n(f), solve, order."""

    def source(n: int, ctx: PrecisionContext) -> OrderedSpectrum:
        A = build_toeplitz(sym, n, ctx)
        result = eigenvalues(A, ctx, balance=balance)
        return order(result.values, strategy, ctx)

    return source


def compute_expansion(
    n0: int,
    alpha: int,
    eig_source: Callable,
    ctx: PrecisionContext,
    max_workers: int = 1,
) -> ExpansionTable:
    """Fit the expansion functions from sizes n_k = 2^k (n0+1) - 1.

    ``eig_source(n, ctx)`` must return an OrderedSpectrum (or plain
    sequence) of exactly n eigenvalues in a consistent order.  The
    alpha+1 solves are independent; ``max_workers`` > 1 runs them in
    threads, with results assembled by index so the table is identical
    regardless of scheduling.
    """
    if alpha < 0:
        raise ValueError("alpha must be >= 0")
    if n0 < alpha + 1:
        raise ValueError(f"n0 must be at least alpha+1 = {alpha + 1}, got {n0}")
    if alpha > 4:
        warnings.warn(
            "alpha > 4: the h-power Vandermonde system becomes badly conditioned; "
            "raise the working precision accordingly",
            stacklevel=2,
        )
    sizes = expansion_sizes(n0, alpha)

    def fetch(nk: int) -> np.ndarray:
        spectrum = eig_source(nk, ctx)
        values = spectrum.values if isinstance(spectrum, OrderedSpectrum) else np.asarray(spectrum)
        if len(values) != nk:
            raise EigSourceError(f"eig source returned {len(values)} values for n = {nk}")
        return values

    if max_workers > 1:
        with ThreadPoolExecutor(max_workers=max_workers) as pool:
            spectra = list(pool.map(fetch, sizes))
    else:
        spectra = [fetch(nk) for nk in sizes]

    with ctx.activate():
        E = ctx.complex_zeros((alpha + 1, n0))
        hs = []
        for k, (nk, values) in enumerate(zip(sizes, spectra)):
            step = 2**k
            for j in range(1, n0 + 1):
                E[k, j - 1] = ctx.complex(values[step * j - 1])
            hs.append(ctx.real(1) / ctx.real(nk + 1))
        V = ctx.complex_zeros((alpha + 1, alpha + 1))
        for i in range(alpha + 1):
            p = ctx.real(1)
            for j in range(alpha + 1):
                V[i, j] = ctx.complex(p)
                p = p * hs[i]
        C = solve_columns(V, E, ctx)
    return ExpansionTable(n0=n0, alpha=alpha, c=C, sizes_used=sizes, precision_bits=ctx.bits)


def _lagrange_eval(xs: Sequence, ys: Sequence, x, ctx: PrecisionContext):
    total = ctx.real(0)
    for i in range(len(xs)):
        term = ys[i]
        for m in range(len(xs)):
            if m != i:
                term = term * ((x - xs[m]) / (xs[i] - xs[m]))
        total = total + term
    return total


def interp_extrap_eigs(table: ExpansionTable, n: int, ctx: PrecisionContext) -> OrderedSpectrum:
    """Approximate the ordered spectrum at an arbitrary size n >= n0.

    Each expansion function is carried from theta_{j,n0} to theta_{j,n} by
    local Lagrange interpolation (degree min(alpha+1, 4), window clamped at
    the boundaries, separately for real and imaginary parts), then the
    h-power series is summed with h = 1/(n+1).  Angles that land exactly
    on table nodes bypass interpolation.
    """
    if n < table.n0:
        raise TargetTooSmall(f"target size {n} is below the table base n0 = {table.n0}")
    n0 = table.n0
    degree = min(table.alpha + 1, 4)
    npts = min(degree + 1, n0)
    base = make_grid(n0, ctx)
    target = make_grid(n, ctx)
    with ctx.activate():
        rows_re = [[z.real for z in table.c[k, :]] for k in range(table.alpha + 1)]
        rows_im = [[z.imag for z in table.c[k, :]] for k in range(table.alpha + 1)]
        out = np.empty(n, dtype=ctx.dtype)
        for j in range(1, n + 1):
            theta = target.thetas[j - 1]
            # exact node hit: j (n0+1) == i (n+1) in integers
            num = j * (n0 + 1)
            if num % (n + 1) == 0 and 1 <= num // (n + 1) <= n0:
                i0 = num // (n + 1) - 1
                ck_re = [rows_re[k][i0] for k in range(table.alpha + 1)]
                ck_im = [rows_im[k][i0] for k in range(table.alpha + 1)]
            else:
                # nearest node index, computed in exact integer arithmetic
                center = (2 * num + (n + 1)) // (2 * (n + 1))
                left = min(max(center - npts // 2, 1), n0 - npts + 1)
                window = range(left - 1, left - 1 + npts)
                xs = [base.thetas[i] for i in window]
                ck_re = []
                ck_im = []
                for k in range(table.alpha + 1):
                    ck_re.append(_lagrange_eval(xs, [rows_re[k][i] for i in window], theta, ctx))
                    ck_im.append(_lagrange_eval(xs, [rows_im[k][i] for i in window], theta, ctx))
            acc_re = ctx.real(0)
            acc_im = ctx.real(0)
            hp = ctx.real(1)
            for k in range(table.alpha + 1):
                acc_re = acc_re + ck_re[k] * hp
                acc_im = acc_im + ck_im[k] * hp
                hp = hp * target.h
            out[j - 1] = ctx.complex(acc_re, acc_im)
    return OrderedSpectrum(values=out, strategy=f"interp_extrap[alpha={table.alpha}]", n=n)


def write_expansion_csv(table: ExpansionTable, stream: IO[str]) -> None:
    """CSV with header theta,c0_re,c0_im,...,c{alpha}_re,c{alpha}_im."""
    ctx = PrecisionContext(table.precision_bits)
    grid = make_grid(table.n0, ctx)
    header = ["theta"]
    for k in range(table.alpha + 1):
        header += [f"c{k}_re", f"c{k}_im"]
    stream.write(",".join(header) + "\n")
    for j in range(table.n0):
        row = [ctx.format_real(grid.thetas[j])]
        for k in range(table.alpha + 1):
            row.append(ctx.format_real(table.c[k, j].real))
            row.append(ctx.format_real(table.c[k, j].imag))
        stream.write(",".join(row) + "\n")


def read_expansion_csv(stream: IO[str], precision_bits: int) -> ExpansionTable:
    """Inverse of write_expansion_csv at a stated precision."""
    ctx = PrecisionContext(precision_bits)
    reader = csv.reader(stream)
    header = next(reader)
    if not header or header[0] != "theta" or len(header) < 3 or len(header) % 2 == 0:
        raise ValueError("not an expansion table CSV")
    alpha = (len(header) - 1) // 2 - 1
    rows = [r for r in reader if r]
    n0 = len(rows)
    c = ctx.complex_zeros((alpha + 1, n0))
    for j, row in enumerate(rows):
        for k in range(alpha + 1):
            c[k, j] = ctx.complex(ctx.parse_real(row[1 + 2 * k]), ctx.parse_real(row[2 + 2 * k]))
    return ExpansionTable(n0=n0, alpha=alpha, c=c, sizes_used=expansion_sizes(n0, alpha), precision_bits=precision_bits)
