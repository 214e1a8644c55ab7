import itertools
import math
import random

import numpy as np
import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

from tspectra import (
    CHAIN_FROM_ORIGIN,
    IMAG_ASC,
    IMAG_DESC,
    REAL_ASC,
    OrderingStrategy,
    PrecisionContext,
    build_toeplitz,
    eigenvalues,
    nearest_to_symbol,
    order,
    preset,
)

from .conftest import max_cdist, multiset_distance


def chain_by_definition(values):
    """Independent oracle: the chain order simulated directly from its
    definition (seed = min |z|, then repeatedly nearest to the last),
    with lexicographic tie-breaks."""
    rest = list(values)
    out = []
    key = lambda z: (abs(z) ** 2, z.real, z.imag)
    first = min(rest, key=key)
    rest.remove(first)
    out.append(first)
    while rest:
        last = out[-1]
        nxt = min(rest, key=lambda z: (abs(z - last) ** 2, z.real, z.imag))
        rest.remove(nxt)
        out.append(nxt)
    return out


def satisfies_greedy(perm, pool):
    """Predicate form of the chain definition, checkable on any arrangement."""
    rest = list(pool)
    if perm[0] != min(rest, key=lambda z: (abs(z) ** 2, z.real, z.imag)):
        return False
    rest.remove(perm[0])
    for prev, cur in zip(perm, perm[1:]):
        best = min(rest, key=lambda z: (abs(z - prev) ** 2, z.real, z.imag))
        if cur != best:
            return False
        rest.remove(cur)
    return True


def test_chain_spec_example(ctx53):
    values = [3 + 0j, 1 + 0.1j, 0.5 + 0j, 2.9 + 0.05j]
    got = order(values, CHAIN_FROM_ORIGIN, ctx53)
    assert list(got.values) == [0.5 + 0j, 1 + 0.1j, 2.9 + 0.05j, 3 + 0j]
    # brute force over all 4! arrangements: exactly one satisfies the
    # greedy definition, and it is the one produced
    matches = [p for p in itertools.permutations(values) if satisfies_greedy(p, values)]
    assert len(matches) == 1
    assert list(matches[0]) == list(got.values)


def test_real_asc_trivial(ctx53):
    got = order([5 + 0j, -1 + 0j, 2 + 0j], REAL_ASC, ctx53)
    assert list(got.values) == [-1, 2, 5]


def test_sort_tie_breaks(ctx53):
    vals = [1 + 2j, 1 - 1j, 0 + 2j]
    assert list(order(vals, REAL_ASC, ctx53).values) == [2j, 1 - 1j, 1 + 2j]
    assert list(order(vals, IMAG_ASC, ctx53).values) == [1 - 1j, 2j, 1 + 2j]
    assert list(order(vals, IMAG_DESC, ctx53).values) == [2j, 1 + 2j, 1 - 1j]


def test_chain_equals_nearest_to_symbol_on_heptadiagonal(ctx53):
    sym = preset("example3")
    A = build_toeplitz(sym, 10, ctx53)
    vals = eigenvalues(A, ctx53).values
    chained = order(vals, CHAIN_FROM_ORIGIN, ctx53)
    matched = order(vals, nearest_to_symbol(sym), ctx53)
    assert max_cdist(ctx53, chained.values, matched.values) == 0.0


def test_strategy_validation():
    with pytest.raises(ValueError):
        OrderingStrategy("descending_modulus")
    with pytest.raises(ValueError):
        OrderingStrategy("nearest_to_symbol")
    with pytest.raises(ValueError):
        order([], REAL_ASC)


def test_nearest_to_symbol_requires_context():
    with pytest.raises(ValueError):
        order([1 + 0j], nearest_to_symbol(preset("example3")))


complex_lists = st.lists(
    st.complex_numbers(max_magnitude=50, allow_nan=False, allow_infinity=False),
    min_size=1,
    max_size=24,
)


@settings(max_examples=50, deadline=None)
@given(values=complex_lists, seed=st.integers(0, 2**16))
def test_output_is_permutation_and_chain_is_shuffle_invariant(values, seed):
    ctx = PrecisionContext(53)
    shuffled = list(values)
    random.Random(seed).shuffle(shuffled)
    for strat in (REAL_ASC, IMAG_ASC, IMAG_DESC, CHAIN_FROM_ORIGIN):
        out = order(values, strat, ctx)
        assert multiset_distance(ctx, out.values, values) == 0.0
        out_shuffled = order(shuffled, strat, ctx)
        assert list(out.values) == list(out_shuffled.values)


@settings(max_examples=25, deadline=None)
@given(values=complex_lists)
def test_chain_matches_definition_oracle(values):
    ctx = PrecisionContext(53)
    got = order(values, CHAIN_FROM_ORIGIN, ctx)
    assert list(got.values) == chain_by_definition(values)


def test_nearest_to_symbol_is_bijective_assignment(ctx53):
    sym = preset("example2")
    A = build_toeplitz(sym, 12, ctx53)
    vals = eigenvalues(A, ctx53).values
    out = order(vals, nearest_to_symbol(sym), ctx53)
    assert multiset_distance(ctx53, out.values, vals) == 0.0
    assert out.strategy == "nearest_to_symbol"


def test_consistency_under_size_doubling(ctx53):
    # ordered eigenvalue j at size n converges to eigenvalue 2j at 2n+1
    sym = preset("example2")
    sizes = [24, 49, 99, 199]
    spectra = {}
    for n in sizes:
        vals = eigenvalues(build_toeplitz(sym, n, ctx53), ctx53).values
        spectra[n] = order(vals, IMAG_ASC, ctx53).values
    gaps = []
    for n_small, n_big in zip(sizes, sizes[1:]):
        worst = max(
            abs(spectra[n_small][j - 1] - spectra[n_big][2 * j - 1])
            for j in range(1, n_small + 1)
        )
        gaps.append(worst)
    assert gaps[0] > gaps[1] > gaps[2]


def test_ordered_spectrum_metadata(ctx53):
    out = order([1 + 1j, 0j], REAL_ASC, ctx53)
    assert out.n == 2
    assert out.subset_indices is None
    assert out.strategy == "real_asc"
