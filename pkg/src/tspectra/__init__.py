"""tspectra: matrix-less approximation of complex Toeplitz spectra.

Given a banded Laurent symbol (or any consistently ordered eigenvalue
source), this package extracts the asymptotic eigenvalue expansion
functions from a handful of small matrices, reconstructs the spectral
function from its cosine Fourier series, and analyzes complex Toeplitz
spectra at any requested floating-point precision.
"""

from .precision import DOUBLE, ComplexScalar, PrecisionContext, RealScalar
from .linalg import SingularMatrix, lu_solve, real_solve
from .symbols import (
    DuplicateOffset,
    LaurentSymbol,
    ParseError,
    PRESET_NAMES,
    SampledCurve,
    evaluate,
    evaluate_in_z,
    format_symbol,
    imag_part_symbol,
    parse_symbol,
    preset,
    real_part_symbol,
    sample_symbol,
    tridiagonal_spectral_function,
)
from .toeplitz import build_toeplitz, write_matrix_csv
from .eigensolver import EigResult, NoConvergence, eigenvalues, eigenvalues_at_double
from .ordering import (
    CHAIN_FROM_ORIGIN,
    IMAG_ASC,
    IMAG_DESC,
    REAL_ASC,
    OrderedSpectrum,
    OrderingStrategy,
    nearest_to_symbol,
    order,
)
from .expansion import (
    EigSourceError,
    ExpansionTable,
    Grid,
    TargetTooSmall,
    compute_expansion,
    interp_extrap_eigs,
    make_grid,
    read_expansion_csv,
    symbol_eig_source,
    write_expansion_csv,
)
from .reconstruction import (
    FourierRecovery,
    GammaCurves,
    NoBracket,
    evaluate_g_tilde,
    gamma_curves,
    perfect_grid,
    read_fourier_csv,
    recover_fourier,
    recover_spectral_function,
    recovery_from_table,
    write_fourier_csv,
    write_gamma_csv,
)

__version__ = "0.1.0"

__all__ = [
    "DOUBLE",
    "PrecisionContext",
    "RealScalar",
    "ComplexScalar",
    "SingularMatrix",
    "lu_solve",
    "real_solve",
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
    "sample_symbol",
    "tridiagonal_spectral_function",
    "build_toeplitz",
    "write_matrix_csv",
    "EigResult",
    "NoConvergence",
    "eigenvalues",
    "eigenvalues_at_double",
    "OrderingStrategy",
    "OrderedSpectrum",
    "order",
    "REAL_ASC",
    "IMAG_ASC",
    "IMAG_DESC",
    "CHAIN_FROM_ORIGIN",
    "nearest_to_symbol",
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
    "FourierRecovery",
    "GammaCurves",
    "NoBracket",
    "recover_fourier",
    "recover_spectral_function",
    "recovery_from_table",
    "evaluate_g_tilde",
    "perfect_grid",
    "gamma_curves",
    "write_fourier_csv",
    "read_fourier_csv",
    "write_gamma_csv",
]
