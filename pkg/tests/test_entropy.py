import math

import numpy as np
import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

from bosonic_tradeoff.entropy import g_entropy, g_inverse, von_neumann_entropy
from bosonic_tradeoff.errors import DomainError

from conftest import g_inverse_bisect, g_mp


def test_g_at_zero_is_exactly_zero():
    assert g_entropy(0.0) == 0.0
    assert g_entropy(0) == 0.0


def test_g_of_one_is_two():
    assert g_entropy(1.0) == 2.0


def test_g_of_200_matches_extended_precision():
    # frozen from the 50-digit closed form
    assert g_entropy(200.0) == pytest.approx(9.090151972019712, abs=1e-13)
    assert g_entropy(200.0) == pytest.approx(g_mp(200), abs=1e-13)


@pytest.mark.parametrize("n", [1e-300, 1e-12, 1e-6, 0.3, 1.0, 7.5, 150.0, 1e4, 1e9, 1e15])
def test_g_matches_oracle_across_scales(n):
    # n + 1 must stay distinct from 1 in the oracle, hence the working precision
    assert g_entropy(n) == pytest.approx(g_mp(n, dps=400), rel=1e-13, abs=1e-300)


def test_g_is_vectorized():
    ns = np.array([0.0, 1.0, 50.0, 150.0])
    out = g_entropy(ns)
    assert out.shape == ns.shape
    np.testing.assert_allclose(out, [g_mp(x) for x in ns], atol=1e-13)


@pytest.mark.parametrize("bad", [-1.0, -1e-300, math.nan, math.inf])
def test_g_rejects_bad_input(bad):
    with pytest.raises(DomainError):
        g_entropy(bad)


def test_g_monotone_and_concave_on_grid():
    grid = np.concatenate([np.linspace(1e-6, 1, 200), np.logspace(0, 6, 400)[1:]])
    vals = g_entropy(grid)
    assert np.all(np.diff(vals) > 0)
    # second divided differences on a nonuniform grid
    x0, x1, x2 = grid[:-2], grid[1:-1], grid[2:]
    y0, y1, y2 = vals[:-2], vals[1:-1], vals[2:]
    dd = ((y2 - y1) / (x2 - x1) - (y1 - y0) / (x1 - x0)) / (x2 - x0)
    assert np.all(dd <= 1e-12)


def test_large_n_asymptote():
    n = np.logspace(2, 12, 30)
    rearranged = np.log2(n + 1) + n * np.log1p(1 / n) / math.log(2)
    np.testing.assert_allclose(g_entropy(n), rearranged, rtol=1e-14)
    gap = g_entropy(n) - np.log2(math.e * n)
    assert np.all(np.diff(np.abs(gap)) < 0)
    assert abs(gap[-1]) < 1e-11


def test_g_inverse_examples():
    assert g_inverse(0.0) == 0.0
    assert g_inverse(2.0) == pytest.approx(1.0, rel=1e-12)
    n5 = g_inverse(5.0)
    assert n5 == pytest.approx(g_inverse_bisect(5.0), rel=1e-10)
    assert n5 == pytest.approx(11.275681866300384, rel=1e-10)
    assert g_entropy(n5) == pytest.approx(5.0, abs=1e-12)


def test_g_inverse_rejects_negative():
    with pytest.raises(DomainError):
        g_inverse(-0.1)


def test_g_inverse_roundtrip_log_grid():
    for h in np.logspace(-6, math.log10(60), 80):
        assert abs(g_entropy(g_inverse(h)) - h) < 1e-9


@settings(max_examples=200, deadline=None)
@given(st.floats(min_value=1e-6, max_value=60.0))
def test_g_inverse_roundtrip_property(h):
    n = g_inverse(h)
    assert n >= 0
    assert abs(g_entropy(n) - h) <= 1e-9


@settings(max_examples=200, deadline=None)
@given(st.floats(min_value=0.0, max_value=1e6), st.floats(min_value=1e-6, max_value=1e6))
def test_g_strictly_increasing_property(a, rel):
    # steps below the float resolution of g itself cannot be resolved
    b = a * (1 + rel) + rel
    assert g_entropy(a) < g_entropy(b)


def test_von_neumann_entropy_basics():
    assert von_neumann_entropy(np.eye(2) / 2) == pytest.approx(1.0)
    assert von_neumann_entropy(np.diag([1.0, 0.0])) == 0.0
    # tiny negative noise is clamped
    assert von_neumann_entropy(np.diag([1.0 + 1e-13, -1e-13])) == pytest.approx(0.0, abs=1e-11)
    with pytest.raises(DomainError):
        von_neumann_entropy(np.diag([1.1, -0.1]))


def test_thermal_spectrum_entropy_matches_g():
    nbar = 2.0
    n = np.arange(400)
    p = nbar**n / (nbar + 1) ** (n + 1)
    assert von_neumann_entropy(np.diag(p)) == pytest.approx(g_entropy(nbar), abs=1e-12)
