import cmath
import math
from concurrent.futures import ThreadPoolExecutor

import numpy as np
import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

import tspectra.eigensolver as es
from tspectra import (
    NoConvergence,
    PrecisionContext,
    build_toeplitz,
    eigenvalues,
    eigenvalues_at_double,
    make_grid,
    parse_symbol,
    preset,
    tridiagonal_spectral_function,
)

from .conftest import by_real_imag, max_cdist, multiset_distance


def norm_inf(A, ctx):
    with ctx.activate():
        return float(max(sum(abs(ctx.complex(v)) for v in row) for row in np.asarray(A)))


def check_trace(A, values, ctx):
    n = len(values)
    with ctx.activate():
        tr_a = sum(ctx.complex(A[i, i]) for i in range(n))
        tr_v = sum(ctx.complex(v) for v in values)
        bound = n * 64 * ctx.eps * norm_inf(A, ctx)
        assert float(abs(tr_a - tr_v)) <= float(bound)


def test_scalar_matrix(ctx53, ctx128):
    assert eigenvalues(np.array([[2.0 + 0j]]), ctx53).values[0] == 2
    r = eigenvalues(build_toeplitz(parse_symbol("0:2+0i"), 1, ctx128), ctx128)
    assert r.values[0] == 2
    assert eigenvalues_at_double(np.array([[2.0 + 0j]])).values[0] == 2


def test_grcar_two_by_two_quadratic_roots(ctx53):
    # det([[1-l, 1], [-1, 1-l]]) = (1-l)^2 + 1 -> l = 1 +- i
    r = eigenvalues(np.array([[1, 1], [-1, 1]], dtype=complex), ctx53)
    assert multiset_distance(ctx53, r.values, [1 + 1j, 1 - 1j]) < 1e-15


def test_tridiagonal_closed_form_paper_instance(ctx53):
    # sub = -1, super = -2: eigenvalues 2 + 2 sqrt(2) cos(j pi / 5)
    sym = parse_symbol("0:2+0i; 1:-1+0i; -1:-2+0i")
    A = build_toeplitz(sym, 4, ctx53)
    r = eigenvalues(A, ctx53)
    exact = [2 + 2 * math.sqrt(2) * math.cos(j * math.pi / 5) for j in range(1, 5)]
    assert multiset_distance(ctx53, r.values, exact) < 1e-14
    check_trace(A, r.values, ctx53)


def test_hermitian_tridiagonal_at_double(ctx53):
    sym = parse_symbol("0:2+0i; 1:-1+0i; -1:-1+0i")
    A = build_toeplitz(sym, 3, ctx53)
    r = eigenvalues_at_double(A)
    exact = [2 - 2 * math.cos(j * math.pi / 4) for j in range(1, 4)]
    assert multiset_distance(ctx53, r.values, exact) < 1e-14


@settings(max_examples=12, deadline=None)
@given(
    a0=st.complex_numbers(max_magnitude=4, allow_nan=False, allow_infinity=False),
    a1=st.complex_numbers(min_magnitude=0.25, max_magnitude=4, allow_nan=False, allow_infinity=False),
    am1=st.complex_numbers(min_magnitude=0.25, max_magnitude=4, allow_nan=False, allow_infinity=False),
    n=st.integers(2, 64),
)
def test_tridiagonal_oracle_family(a0, a1, am1, n):
    # closed form a0 + 2 sqrt(a1 am1) cos(theta_j) as a multiset
    ctx = PrecisionContext(53)
    A = np.zeros((n, n), dtype=complex)
    for i in range(n):
        A[i, i] = a0
        if i + 1 < n:
            A[i + 1, i] = a1
            A[i, i + 1] = am1
    r = eigenvalues(A, ctx)
    s = cmath.sqrt(a1 * am1)
    exact = [a0 + 2 * s * math.cos(j * math.pi / (n + 1)) for j in range(1, n + 1)]
    tol = 1e3 * float(ctx.eps) * norm_inf(A, ctx)
    assert multiset_distance(ctx, r.values, exact) <= tol
    check_trace(A, r.values, ctx)


def test_tridiagonal_oracle_high_precision(ctx128):
    sym = preset("example1")
    n = 24
    A = build_toeplitz(sym, n, ctx128)
    r = eigenvalues(A, ctx128)
    g = tridiagonal_spectral_function(sym, ctx128)
    grid = make_grid(n, ctx128)
    exact = [g(t) for t in grid.thetas]
    tol = 1e3 * float(ctx128.eps) * norm_inf(A, ctx128)
    assert multiset_distance(ctx128, r.values, exact) <= tol
    check_trace(A, r.values, ctx128)


@pytest.mark.parametrize("n", [8, 24, 64])
def test_grcar_conjugate_pair_closure(n, ctx53):
    A = build_toeplitz(preset("example4"), n, ctx53)
    r = eigenvalues(A, ctx53)
    conj = [v.conjugate() for v in r.values]
    tol = 1e3 * float(ctx53.eps) * norm_inf(A, ctx53)
    assert multiset_distance(ctx53, r.values, conj) <= tol


def test_hermitian_input_real_spectrum(ctx53):
    rng = np.random.default_rng(7)
    n = 20
    M = rng.standard_normal((n, n)) + 1j * rng.standard_normal((n, n))
    H = (M + M.conj().T) / 2
    r = eigenvalues(H, ctx53)
    bound = 64 * n * float(ctx53.eps) * norm_inf(H, ctx53)
    assert max(abs(v.imag) for v in r.values) <= bound


def test_matches_lapack_on_random_dense(ctx53):
    rng = np.random.default_rng(3)
    n = 40
    M = rng.standard_normal((n, n)) + 1j * rng.standard_normal((n, n))
    mine = eigenvalues(M, ctx53).values
    ref = np.linalg.eigvals(M)
    assert multiset_distance(ctx53, mine, ref) < 1e-11


def test_deterministic_across_threads(ctx128):
    A = build_toeplitz(preset("example3"), 16, ctx128)

    def solve(_):
        return eigenvalues(A, ctx128).values

    with ThreadPoolExecutor(max_workers=4) as pool:
        results = list(pool.map(solve, range(4)))
    base = results[0]
    for other in results[1:]:
        assert all(a == b for a, b in zip(base, other))


def test_iteration_diagnostics_surface(ctx53):
    r = eigenvalues(build_toeplitz(preset("example2"), 12, ctx53), ctx53)
    assert r.iterations > 0
    assert r.deflation_tol == ctx53.eps


def test_no_convergence_carries_partial(monkeypatch, ctx53):
    monkeypatch.setattr(es, "_MAXITER_FACTOR", 0)
    A = build_toeplitz(preset("example2"), 6, ctx53)
    with pytest.raises(NoConvergence) as err:
        eigenvalues(A, ctx53)
    assert len(err.value.partial.values) == 6


def test_balance_flag_is_reproducible(ctx53):
    A = build_toeplitz(preset("example4"), 12, ctx53)
    v1 = eigenvalues(A, ctx53, balance=False).values
    v2 = eigenvalues(A, ctx53, balance=False).values
    assert all(a == b for a, b in zip(v1, v2))


def test_double_precision_cloud_departs_from_truth():
    # the 53-bit solve of the 1000x1000 complex tridiagonal must deviate
    # from the closed-form spectrum by far more than its backward error
    ctx = PrecisionContext(53)
    sym = preset("example1")
    n = 1000
    A = build_toeplitz(sym, n, ctx)
    psi = eigenvalues_at_double(A).values
    g = tridiagonal_spectral_function(sym, ctx)
    grid = make_grid(n, ctx)
    exact = np.array([complex(g(t)) for t in grid.thetas])
    vals = np.array([complex(v) for v in psi])
    min_dist = np.abs(vals[:, None] - exact[None, :]).min(axis=1)
    threshold = 10 * float(ctx.eps) * norm_inf(A, ctx)
    assert min_dist.max() > threshold
