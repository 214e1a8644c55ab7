"""Consistent eigenvalue orderings as the matrix dimension varies.

An asymptotic expansion of lambda_j across sizes only makes sense if "the
j-th eigenvalue" means the same thing at every size.  Monotone spectra can
simply be sorted by a component; spectra tracing a curve in the complex
plane need chain ordering (start at the origin, repeatedly hop to the
nearest unused eigenvalue) or matching against symbol samples.  All ties
break lexicographically by (Re, Im) so every strategy is a deterministic
function of the input multiset.
"""

from __future__ import annotations

from dataclasses import dataclass
from typing import Optional, Sequence

import numpy as np

from .precision import ComplexScalar, PrecisionContext
from .symbols import LaurentSymbol, evaluate

__all__ = [
    "OrderingStrategy",
    "OrderedSpectrum",
    "order",
    "REAL_ASC",
    "IMAG_ASC",
    "IMAG_DESC",
    "CHAIN_FROM_ORIGIN",
    "nearest_to_symbol",
    "STRATEGY_KINDS",
]

STRATEGY_KINDS = ("real_asc", "imag_asc", "imag_desc", "chain_from_origin", "nearest_to_symbol")


@dataclass(frozen=True)
class OrderingStrategy:
    """A deterministic rule mapping an eigenvalue multiset to a sequence."""

    kind: str
    symbol: Optional[LaurentSymbol] = None

    def __post_init__(self):
        if self.kind not in STRATEGY_KINDS:
            raise ValueError(f"unknown ordering kind {self.kind!r}")
        if self.kind == "nearest_to_symbol" and self.symbol is None:
            raise ValueError("nearest_to_symbol needs the symbol to match against")

    def describe(self) -> str:
        return self.kind


REAL_ASC = OrderingStrategy("real_asc")
IMAG_ASC = OrderingStrategy("imag_asc")
IMAG_DESC = OrderingStrategy("imag_desc")
CHAIN_FROM_ORIGIN = OrderingStrategy("chain_from_origin")


def nearest_to_symbol(sym: LaurentSymbol) -> OrderingStrategy:
    return OrderingStrategy("nearest_to_symbol", sym)


@dataclass
class OrderedSpectrum:
    """Eigenvalues in a consistent order, tagged with how they were ordered.

    ``subset_indices`` stays None for full-spectrum strategies; a custom
    eigenvalue source tracking only part of the spectrum can mark which
    ordered positions its values occupy.
    """

    values: np.ndarray
    strategy: str
    n: int
    subset_indices: Optional[np.ndarray] = None


def _abs2(z) -> object:
    re_, im_ = z.real, z.imag
    return re_ * re_ + im_ * im_


def _chain_from_origin(values: list) -> list:
    # presort makes the result independent of input permutation even
    # through exact distance ties
    rest = sorted(values, key=lambda z: (z.real, z.imag))
    out = []
    seed = min(range(len(rest)), key=lambda i: (_abs2(rest[i]), rest[i].real, rest[i].imag))
    out.append(rest.pop(seed))
    while rest:
        last = out[-1]
        nxt = min(range(len(rest)), key=lambda i: (_abs2(rest[i] - last), rest[i].real, rest[i].imag))
        out.append(rest.pop(nxt))
    return out


def _nearest_to_symbol(values: list, sym: LaurentSymbol, ctx: PrecisionContext) -> list:
    """Greedy globally-minimal assignment of eigenvalues to symbol samples."""
    n = len(values)
    pi = ctx.pi()
    samples = [evaluate(sym, (j * pi) / (n + 1), ctx) for j in range(1, n + 1)]
    pairs = []
    for i, lam in enumerate(values):
        for j, fj in enumerate(samples):
            pairs.append((_abs2(lam - fj), lam.real, lam.imag, i, j))
    pairs.sort()
    taken_value = [False] * n
    taken_slot = [False] * n
    slot_of = [0] * n
    assigned = 0
    for _, _, _, i, j in pairs:
        if taken_value[i] or taken_slot[j]:
            continue
        taken_value[i] = True
        taken_slot[j] = True
        slot_of[j] = i
        assigned += 1
        if assigned == n:
            break
    return [values[slot_of[j]] for j in range(n)]


def order(values: Sequence[ComplexScalar], strategy: OrderingStrategy, ctx: Optional[PrecisionContext] = None) -> OrderedSpectrum:
    """Arrange an eigenvalue multiset according to the strategy.

    The output is always a permutation of the input.  ``ctx`` is required
    only for nearest_to_symbol (it evaluates the symbol on the canonical
    grid at that precision).
    """
    vals = list(values)
    if not vals:
        raise ValueError("cannot order an empty spectrum")
    kind = strategy.kind
    if kind == "real_asc":
        out = sorted(vals, key=lambda z: (z.real, z.imag))
    elif kind == "imag_asc":
        out = sorted(vals, key=lambda z: (z.imag, z.real))
    elif kind == "imag_desc":
        out = sorted(vals, key=lambda z: (-z.imag, z.real))
    elif kind == "chain_from_origin":
        out = _chain_from_origin(vals)
    else:
        if ctx is None:
            raise ValueError("nearest_to_symbol ordering needs a PrecisionContext")
        out = _nearest_to_symbol(vals, strategy.symbol, ctx)
    arr = np.empty(len(out), dtype=(np.complex128 if isinstance(out[0], complex) else object))
    arr[:] = out
    return OrderedSpectrum(values=arr, strategy=strategy.describe(), n=len(out))
