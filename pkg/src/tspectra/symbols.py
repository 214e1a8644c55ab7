"""Banded Laurent symbols: the generating functions of Toeplitz matrices.

A symbol is a finite map offset -> Fourier coefficient,

    f(theta) = sum_k  fhat_k * exp(i k theta),

stored exactly as pairs of rationals so that the same symbol can be
realized at any working precision.  The canonical text form is

    entry (";" entry)*        entry := INT ":" SIGNED_DECIMAL ("+"|"-") DECIMAL "i"

for example ``"0:2+0i; 1:-1+0i; -1:-2+1i"``.
"""

from __future__ import annotations

import re
from dataclasses import dataclass, field
from fractions import Fraction
from typing import Callable, Dict, Mapping, Tuple

import numpy as np

from .precision import ComplexScalar, PrecisionContext, RealScalar

__all__ = [
    "LaurentSymbol",
    "SampledCurve",
    "ParseError",
    "DuplicateOffset",
    "parse_symbol",
    "format_symbol",
    "evaluate",
    "evaluate_in_z",
    "real_part_symbol",
    "imag_part_symbol",
    "preset",
    "PRESET_NAMES",
    "tridiagonal_spectral_function",
    "sample_symbol",
]


class ParseError(ValueError):
    """Symbol text rejected; carries the 0-based character position."""

    def __init__(self, position: int, reason: str):
        self.position = position
        self.reason = reason
        super().__init__(f"symbol parse error at position {position}: {reason}")


class DuplicateOffset(ParseError):
    def __init__(self, position: int, offset: int):
        self.offset = offset
        ParseError.__init__(self, position, f"duplicate offset {offset}")


Coeff = Tuple[Fraction, Fraction]


@dataclass(frozen=True)
class LaurentSymbol:
    """Finite Laurent polynomial with exact rational coefficients.

    ``coeffs[k] = (re, im)`` is the coefficient of exp(i k theta).  Offsets
    with zero coefficient are not stored (except optionally k = 0).
    band_lower is the largest |k| among negative offsets, band_upper the
    largest positive offset.
    """

    coeffs: Mapping[int, Coeff] = field(default_factory=dict)

    @staticmethod
    def from_dict(raw: Mapping[int, object]) -> "LaurentSymbol":
        """Build from {offset: number} with int/float/Fraction/complex values."""
        clean: Dict[int, Coeff] = {}
        for k, v in raw.items():
            if isinstance(v, tuple):
                re_, im_ = v
            elif isinstance(v, complex):
                re_, im_ = v.real, v.imag
            else:
                re_, im_ = v, 0
            c = (Fraction(re_), Fraction(im_))
            if c != (0, 0) or k == 0:
                clean[int(k)] = c
        return LaurentSymbol(clean)

    @property
    def band_lower(self) -> int:
        return max((-k for k in self.coeffs if k < 0 and self.coeffs[k] != (0, 0)), default=0)

    @property
    def band_upper(self) -> int:
        return max((k for k in self.coeffs if k > 0 and self.coeffs[k] != (0, 0)), default=0)

    @property
    def is_rctp(self) -> bool:
        """Real cosine trigonometric polynomial: real coefficients, even in k."""
        for k, (re_, im_) in self.coeffs.items():
            if im_ != 0:
                return False
            if self.coeffs.get(-k, (Fraction(0), Fraction(0)))[0] != re_:
                return False
        return True

    def coefficient(self, k: int) -> Coeff:
        return self.coeffs.get(k, (Fraction(0), Fraction(0)))

    def realize(self, k: int, ctx: PrecisionContext) -> ComplexScalar:
        re_, im_ = self.coefficient(k)
        return ctx.complex(re_, im_)


@dataclass(frozen=True)
class SampledCurve:
    """A complex-valued curve sampled on strictly increasing angles in (0, pi)."""

    thetas: np.ndarray
    values: np.ndarray

    def __post_init__(self):
        if len(self.thetas) != len(self.values):
            raise ValueError("thetas and values must have equal length")
        if any(b <= a for a, b in zip(self.thetas, self.thetas[1:])):
            raise ValueError("thetas must be strictly increasing")


_INT_RE = re.compile(r"[+-]?\d+")
_DEC_RE = re.compile(r"[+-]?(\d+(\.\d*)?|\.\d+)")
_UNSIGNED_DEC_RE = re.compile(r"(\d+(\.\d*)?|\.\d+)")


class _Scanner:
    def __init__(self, text: str):
        self.text = text
        self.pos = 0

    def skip_ws(self):
        while self.pos < len(self.text) and self.text[self.pos].isspace():
            self.pos += 1

    def expect(self, literal: str):
        self.skip_ws()
        if not self.text.startswith(literal, self.pos):
            raise ParseError(self.pos, f"expected {literal!r}")
        self.pos += len(literal)

    def take(self, pattern: re.Pattern, what: str) -> str:
        self.skip_ws()
        m = pattern.match(self.text, self.pos)
        if not m:
            raise ParseError(self.pos, f"expected {what}")
        self.pos = m.end()
        return m.group(0)

    def peek_sign(self) -> str:
        self.skip_ws()
        if self.pos < len(self.text) and self.text[self.pos] in "+-":
            ch = self.text[self.pos]
            self.pos += 1
            return ch
        raise ParseError(self.pos, "expected '+' or '-' before imaginary part")

    def at_end(self) -> bool:
        self.skip_ws()
        return self.pos >= len(self.text)


def _decimal_to_fraction(text: str) -> Fraction:
    return Fraction(text)  # exact: Fraction accepts decimal strings


def parse_symbol(text: str) -> LaurentSymbol:
    """Parse the canonical symbol grammar; exact decimal coefficients."""
    sc = _Scanner(text)
    coeffs: Dict[int, Coeff] = {}
    while True:
        off_pos = sc.pos
        offset = int(sc.take(_INT_RE, "integer offset"))
        sc.expect(":")
        re_part = _decimal_to_fraction(sc.take(_DEC_RE, "decimal real part"))
        sign = sc.peek_sign()
        im_text = sc.take(_UNSIGNED_DEC_RE, "decimal imaginary part")
        sc.expect("i")
        im_part = _decimal_to_fraction(im_text)
        if sign == "-":
            im_part = -im_part
        if offset in coeffs:
            raise DuplicateOffset(off_pos, offset)
        coeffs[offset] = (re_part, im_part)
        if sc.at_end():
            break
        sc.expect(";")
        if sc.at_end():
            raise ParseError(sc.pos, "expected entry after ';'")
    clean = {k: c for k, c in coeffs.items() if c != (0, 0) or k == 0}
    if not clean and coeffs:
        clean = {0: (Fraction(0), Fraction(0))}
    return LaurentSymbol(clean)


def _fraction_to_decimal(x: Fraction) -> str:
    """Exact decimal rendering; only denominators 2^a * 5^b are representable."""
    num, den = x.numerator, x.denominator
    shift = 0
    d = den
    for p, step in ((2, 5), (5, 2)):
        while d % p == 0:
            d //= p
            num *= step
            shift += 1
    if d != 1:
        raise ValueError(f"{x} has no finite decimal expansion")
    s = str(abs(num)).rjust(shift + 1, "0")
    sign = "-" if num < 0 else ""
    if shift == 0:
        return sign + s
    return f"{sign}{s[:-shift]}.{s[-shift:]}"


def format_symbol(sym: LaurentSymbol) -> str:
    """Canonical text form; parse_symbol(format_symbol(s)) round-trips exactly."""
    parts = []
    for k in sorted(sym.coeffs):
        re_, im_ = sym.coeffs[k]
        im_str = _fraction_to_decimal(abs(im_))
        sign = "-" if im_ < 0 else "+"
        parts.append(f"{k}:{_fraction_to_decimal(re_)}{sign}{im_str}i")
    return "; ".join(parts) if parts else "0:0+0i"


def evaluate(sym: LaurentSymbol, theta, ctx: PrecisionContext) -> ComplexScalar:
    """f(theta) = sum_k fhat_k (cos k theta + i sin k theta) at context precision."""
    with ctx.activate():
        t = ctx.real(theta)
        acc = ctx.complex(0, 0)
        for k in sorted(sym.coeffs):
            c = sym.realize(k, ctx)
            kt = k * t
            acc = acc + c * ctx.complex(ctx.cos(kt), ctx.sin(kt))
        return acc


def evaluate_in_z(sym: LaurentSymbol, z, ctx: PrecisionContext) -> ComplexScalar:
    """The symbol as a Laurent polynomial b(z) = sum_k fhat_k z^k.

    On the unit circle z = exp(i theta) this equals evaluate(sym, theta).
    z must be nonzero when the symbol has negative offsets.
    """
    with ctx.activate():
        w = ctx.complex(z)
        acc = ctx.complex(0)
        for k in sorted(sym.coeffs):
            acc = acc + sym.realize(k, ctx) * w**k
        return acc


def real_part_symbol(sym: LaurentSymbol) -> LaurentSymbol:
    """Coefficient-wise real part: r with fhat_k = rhat_k + i mhat_k."""
    return LaurentSymbol({k: (re_, Fraction(0)) for k, (re_, im_) in sym.coeffs.items() if re_ != 0 or k == 0})


def imag_part_symbol(sym: LaurentSymbol) -> LaurentSymbol:
    """Coefficient-wise imaginary part (a real-coefficient symbol)."""
    return LaurentSymbol({k: (im_, Fraction(0)) for k, (re_, im_) in sym.coeffs.items() if im_ != 0 or k == 0})


PRESET_NAMES = ("example1", "example2", "example3", "example4")

_PRESETS = {
    # complex tridiagonal, spectrum described by a different function g
    "example1": {1: -1, 0: 2, -1: -2 + 1j},
    # complex symmetric pentadiagonal: 2cos(t) - 2cos(2t) + i(6 - 8cos(t) + 2cos(2t))
    "example2": {0: 6j, 1: 1 - 4j, -1: 1 - 4j, 2: -1 + 1j, -2: -1 + 1j},
    # complex symmetric heptadiagonal: 2cos(t) - 2cos(2t) + i(2cos(2t) - 2cos(3t))
    "example3": {1: 1, -1: 1, 2: -1 + 1j, -2: -1 + 1j, 3: -1j, -3: -1j},
    # Grcar: non-normal, real banded
    "example4": {1: -1, 0: 1, -1: 1, -2: 1, -3: 1},
}


def preset(name: str) -> LaurentSymbol:
    """One of the four built-in example symbols."""
    try:
        raw = _PRESETS[name]
    except KeyError:
        raise ValueError(f"unknown preset {name!r}; choose from {PRESET_NAMES}") from None
    return LaurentSymbol.from_dict(raw)


def tridiagonal_spectral_function(sym: LaurentSymbol, ctx: PrecisionContext) -> Callable:
    """Closed-form spectral function of a tridiagonal symbol.

    For f with band (1,1) the eigenvalues of T_n(f) are exactly
    g(theta_{j,n}) with g(theta) = fhat_0 + 2 sqrt(fhat_1) sqrt(fhat_-1) cos(theta),
    using principal square roots of each factor separately (this branch
    choice matches the sign of the expanded coefficients for the example1
    preset, where ghat_{+-1} ~ -1.45534669 + 0.34356075i).
    """
    if sym.band_lower > 1 or sym.band_upper > 1:
        raise ValueError("closed form requires a tridiagonal symbol")
    a0 = sym.realize(0, ctx)
    ghat1 = ctx.csqrt(sym.realize(1, ctx)) * ctx.csqrt(sym.realize(-1, ctx))

    def g(theta) -> ComplexScalar:
        with ctx.activate():
            return a0 + 2 * ghat1 * ctx.cos(ctx.real(theta))

    return g


def sample_symbol(sym: LaurentSymbol, thetas, ctx: PrecisionContext) -> SampledCurve:
    """Evaluate the symbol on an increasing angle grid."""
    ts = np.array([ctx.real(t) for t in thetas], dtype=(np.float64 if ctx.is_double else object))
    vals = np.array([evaluate(sym, t, ctx) for t in ts], dtype=ctx.dtype)
    return SampledCurve(ts, vals)
