"""Shared helpers: context-safe distance measurement and sorting."""

import pytest

from tspectra import PrecisionContext


def cdist(ctx: PrecisionContext, a, b) -> float:
    """|a - b| computed under the context (never at ambient precision)."""
    with ctx.activate():
        return float(abs(ctx.complex(a) - ctx.complex(b)))


def max_cdist(ctx: PrecisionContext, xs, ys) -> float:
    assert len(xs) == len(ys)
    return max(cdist(ctx, a, b) for a, b in zip(xs, ys))


def by_real_imag(values):
    return sorted(values, key=lambda z: (z.real, z.imag))


def multiset_distance(ctx: PrecisionContext, xs, ys) -> float:
    """Max pairwise distance after canonical sorting; 'same multiset up to tol'."""
    return max_cdist(ctx, by_real_imag(list(xs)), by_real_imag(list(ys)))


@pytest.fixture
def ctx53():
    return PrecisionContext(53)


@pytest.fixture
def ctx128():
    return PrecisionContext(128)
