"""Configurable floating-point precision: contexts, scalar constructors, formatting.

Every numeric operation in this package takes an explicit
:class:`PrecisionContext`.  A context with ``bits == 53`` maps onto native
IEEE doubles (Python ``float`` / ``complex``, numpy ``float64`` /
``complex128``); any other precision maps onto MPFR/MPC scalars via gmpy2,
stored in numpy object arrays.  Results therefore depend only on the inputs
and the context, never on ambient interpreter state.
"""

from __future__ import annotations

import math
from contextlib import contextmanager
from dataclasses import dataclass
from fractions import Fraction
from typing import Union

import gmpy2
import numpy as np

__all__ = [
    "PrecisionContext",
    "RealScalar",
    "ComplexScalar",
    "DOUBLE",
]

# Scalar types produced under a context.  bits == 53 uses the native kinds,
# anything else the gmpy2 kinds; arithmetic is closed within each kind.
RealScalar = Union[float, gmpy2.mpfr]
ComplexScalar = Union[complex, gmpy2.mpc]

_LOG10_2 = math.log10(2.0)


@dataclass(frozen=True)
class PrecisionContext:
    """Binary working precision plus the tolerances derived from it.

    ``bits`` is the significand precision; 53 selects the native double
    path.  ``eps`` is 2**(1 - bits), the classical unit roundoff times two,
    computed exactly.
    """

    bits: int

    def __post_init__(self):
        if not isinstance(self.bits, int) or self.bits < 24:
            raise ValueError(f"precision must be an integer >= 24 bits, got {self.bits!r}")

    # ---- derived constants -------------------------------------------------

    @property
    def is_double(self) -> bool:
        return self.bits == 53

    @property
    def eps(self) -> RealScalar:
        if self.is_double:
            return 2.0 ** (1 - self.bits)
        return gmpy2.exp2(gmpy2.mpfr(1 - self.bits, precision=self.bits))

    @property
    def decimal_digits(self) -> int:
        return math.ceil(self.bits * _LOG10_2)

    # ---- scalar constructors ----------------------------------------------

    def real(self, x) -> RealScalar:
        """Realize x (int, float, str, Fraction, mpfr) at this precision."""
        if self.is_double:
            if isinstance(x, str):
                return float(x)
            if isinstance(x, Fraction):
                return x.numerator / x.denominator
            return float(x)
        return gmpy2.mpfr(x, precision=self.bits)

    def complex(self, re, im=0) -> ComplexScalar:
        """Realize a complex scalar; re may itself be complex when im is 0."""
        if isinstance(re, (complex, gmpy2.mpc)):
            if not (isinstance(im, int) and im == 0):
                raise ValueError("im must be omitted when re is already complex")
            if self.is_double:
                return complex(re)
            return gmpy2.mpc(re, precision=(self.bits, self.bits))
        if self.is_double:
            return complex(self.real(re), self.real(im))
        return gmpy2.mpc(self.real(re), self.real(im), precision=(self.bits, self.bits))

    def pi(self) -> RealScalar:
        if self.is_double:
            return math.pi
        with self.activate():
            return gmpy2.const_pi()

    # ---- scalar functions (usable outside an activated block) --------------

    def cos(self, x: RealScalar) -> RealScalar:
        if self.is_double:
            return math.cos(x)
        with self.activate():
            return gmpy2.cos(x)

    def sin(self, x: RealScalar) -> RealScalar:
        if self.is_double:
            return math.sin(x)
        with self.activate():
            return gmpy2.sin(x)

    def sqrt(self, x: RealScalar) -> RealScalar:
        if self.is_double:
            return math.sqrt(x)
        with self.activate():
            return gmpy2.sqrt(x)

    def csqrt(self, z: ComplexScalar) -> ComplexScalar:
        """Principal complex square root."""
        if self.is_double:
            import cmath

            return cmath.sqrt(z)
        with self.activate():
            return gmpy2.sqrt(self.complex(z))

    # ---- array helpers ------------------------------------------------------

    @property
    def dtype(self):
        return np.complex128 if self.is_double else object

    def complex_zeros(self, shape) -> np.ndarray:
        if self.is_double:
            return np.zeros(shape, dtype=np.complex128)
        out = np.empty(shape, dtype=object)
        out[...] = gmpy2.mpc(0, precision=(self.bits, self.bits))
        return out

    def real_zeros(self, shape) -> np.ndarray:
        if self.is_double:
            return np.zeros(shape, dtype=np.float64)
        out = np.empty(shape, dtype=object)
        out[...] = gmpy2.mpfr(0, precision=self.bits)
        return out

    # ---- ambient-precision scope --------------------------------------------

    @contextmanager
    def activate(self):
        """Make gmpy2 arithmetic round at this context's precision.

        The gmpy2 context is thread-local, so concurrent solves under
        different PrecisionContexts do not interfere.  A no-op on the
        double path.
        """
        if self.is_double:
            yield
            return
        saved = gmpy2.get_context()
        gmpy2.set_context(gmpy2.context(precision=self.bits))
        try:
            yield
        finally:
            gmpy2.set_context(saved)

    # ---- decimal serialization ----------------------------------------------

    def format_real(self, x) -> str:
        """Decimal string with decimal_digits + 2 significant digits.

        Decimal strings (never binary floats) are the on-disk number format,
        so outputs can be compared across precisions and re-read exactly
        enough to reproduce a run bitwise.
        """
        ndig = self.decimal_digits + 2
        if self.is_double:
            return f"{float(x):.{ndig - 1}e}"
        digits, exp, _ = gmpy2.digits(gmpy2.mpfr(x, precision=self.bits), 10, ndig)
        sign = ""
        if digits.startswith("-"):
            sign, digits = "-", digits[1:]
        if digits.rstrip("0") == "":
            return f"{sign}0.0e+00"
        mantissa = digits[0] + "." + (digits[1:] or "0")
        return f"{sign}{mantissa}e{exp - 1:+03d}"

    def parse_real(self, s: str) -> RealScalar:
        return self.real(s.strip())


DOUBLE = PrecisionContext(53)
