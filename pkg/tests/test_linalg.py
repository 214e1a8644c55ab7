import numpy as np
import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

from tspectra import PrecisionContext, SingularMatrix, lu_solve, real_solve

from .conftest import max_cdist


def test_identity_scale_case(ctx53):
    x = lu_solve([[1]], [7], ctx53)
    assert x[0] == 7


def test_diagonal_case(ctx53):
    x = lu_solve([[2, 0], [0, 4]], [2, 8], ctx53)
    assert list(x) == [1, 2]


def test_hand_elimination_case(ctx53):
    # x1 + x2 = 3, x1 - x2 = 1  ->  (2, 1) by elimination
    x = lu_solve([[1, 1], [1, -1]], [3, 1], ctx53)
    assert max_cdist(ctx53, x, [2, 1]) < 1e-15


def test_real_solve_trivials(ctx53):
    assert real_solve([[1]], [0], ctx53)[0] == 0
    x = real_solve([[1, 0], [0, 1]], [0.375, -2.5], ctx53)
    assert list(x) == [0.375, -2.5]


def test_real_solve_cramer_case(ctx53):
    # det = 3; x = ((4*2 - 1*5)/3, (2*5 - 1*4)/3) = (1, 2)
    x = real_solve([[2, 1], [1, 2]], [4, 5], ctx53)
    assert max(abs(v) for v in (x[0] - 1, x[1] - 2)) < 1e-15


def test_singular_raises(ctx53):
    with pytest.raises(SingularMatrix):
        lu_solve([[0, 0], [0, 0]], [1, 1], ctx53)
    with pytest.raises(SingularMatrix):
        real_solve([[1, 1], [1, 1]], [1, 2], ctx53)


def test_high_precision_path(ctx128):
    x = lu_solve([[1, 1], [1, -1]], [3, 1], ctx128)
    assert max_cdist(ctx128, x, [2, 1]) < 1e-37
    assert x[0].precision == (128, 128)


def _residual_ok(A, b, x, ctx):
    n = len(b)
    with ctx.activate():
        r = max(abs(sum(ctx.complex(A[i][j]) * x[j] for j in range(n)) - ctx.complex(b[i])) for i in range(n))
        norm_a = max(sum(abs(ctx.complex(v)) for v in row) for row in A)
        norm_x = max(abs(v) for v in x)
        norm_b = max(abs(ctx.complex(v)) for v in b)
        bound = 64 * n * ctx.eps * (norm_a * norm_x + norm_b)
        return float(r) <= float(bound)


@settings(max_examples=40, deadline=None)
@given(
    n=st.integers(1, 8),
    data=st.data(),
    bits=st.sampled_from([53, 128]),
)
def test_residual_bound_on_well_conditioned_systems(n, data, bits):
    ctx = PrecisionContext(bits)
    scal = st.integers(-8, 8)
    A = [[complex(data.draw(scal), data.draw(scal)) for _ in range(n)] for _ in range(n)]
    for i in range(n):
        A[i][i] += 10 * n  # diagonal dominance keeps the system well conditioned
    b = [complex(data.draw(scal), data.draw(scal)) for _ in range(n)]
    x = lu_solve(A, b, ctx)
    assert _residual_ok(A, b, x, ctx)


def test_doubling_bits_changes_result_within_coarse_bound():
    # exactly representable system; the 53-bit answer must sit within the
    # 53-bit residual bound of the 106-bit answer
    A = [[3, 1, 0], [1, 4, 2], [0, 2, 5]]
    b = [1, -2, 7]
    lo, hi = PrecisionContext(53), PrecisionContext(106)
    x_lo = lu_solve(A, b, lo)
    x_hi = lu_solve(A, b, hi)
    diff = max_cdist(hi, x_lo, x_hi)
    with lo.activate():
        norm_a = 7.0
        norm_x = max(abs(v) for v in x_lo)
        norm_b = 7.0
        bound = 64 * 3 * lo.eps * (norm_a * norm_x + norm_b)
    assert diff <= float(bound)
