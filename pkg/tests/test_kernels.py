"""Both kernel backends against the independent oracles."""

import math

import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

import oracles
from disparity_audit import kernels


def test_backend_selected():
    assert kernels.BACKEND in ("cython", "python")


@pytest.mark.parametrize("x", [0.0, 1.0, 5.0])
def test_q_exponential(backend, x):
    assert backend.upper_gamma_q(1.0, x) == pytest.approx(math.exp(-x), rel=1e-12)


def test_q_half_is_erfc(backend):
    assert backend.upper_gamma_q(0.5, 1.0) == pytest.approx(0.15729920705028513066, rel=1e-13)


@pytest.mark.parametrize("s", [0.1, 0.5, 3.0, 50.0])
def test_q_at_zero(backend, s):
    assert backend.upper_gamma_q(s, 0.0) == 1.0


S_GRID = [0.05, 0.5, 1.0, 1.5, 2.5, 7.0, 12.5, 25.0, 49.5, 50.0]
X_GRID = [1e-6, 0.01, 0.5, 1.0, 2.0, 5.0, 10.0, 24.0, 26.0, 49.0, 51.0, 75.0, 150.0, 300.0, 500.0]


@pytest.mark.parametrize("s", S_GRID)
def test_q_matches_mpmath(backend, s):
    for x in X_GRID:
        expected = oracles.upper_gamma_q(s, x)
        assert backend.upper_gamma_q(s, x) == pytest.approx(expected, rel=1e-10), (s, x)


@settings(max_examples=300, deadline=None)
@given(st.floats(0.01, 50.0), st.floats(0.0, 500.0))
def test_q_random_matches_mpmath(s, x):
    from disparity_audit import _pykernels

    expected = oracles.upper_gamma_q(s, x)
    assert _pykernels.upper_gamma_q(s, x) == pytest.approx(expected, rel=1e-10, abs=1e-300)
    assert kernels.upper_gamma_q(s, x) == pytest.approx(expected, rel=1e-10, abs=1e-300)


def test_q_monotone_in_x(backend):
    for s in (0.5, 3.0, 20.0):
        values = [backend.upper_gamma_q(s, x / 4) for x in range(0, 400)]
        assert all(a >= b for a, b in zip(values, values[1:]))


@pytest.mark.parametrize(
    "cells, expected",
    [((5, 0, 0, 5), 2 / 252), ((0, 5, 0, 5), 1.0), ((3, 7, 5, 5), 2729 / 4199)],
)
def test_fisher_fixtures(backend, cells, expected):
    _, p = backend.fisher_two_sided(*cells)
    assert p == pytest.approx(expected, abs=1e-12)


def test_fisher_point_probability(backend):
    p_obs, _ = backend.fisher_two_sided(5, 0, 0, 5)
    assert p_obs == pytest.approx(1 / 252, rel=1e-12)


@settings(max_examples=300, deadline=None)
@given(st.tuples(*[st.integers(0, 15)] * 4).filter(lambda c: sum(c) > 0))
def test_fisher_random_matches_enumeration(cells):
    from disparity_audit import _pykernels

    expected = float(oracles.fisher_two_sided_exact(*cells))
    assert _pykernels.fisher_two_sided(*cells)[1] == pytest.approx(expected, abs=1e-10)
    assert kernels.fisher_two_sided(*cells)[1] == pytest.approx(expected, abs=1e-10)


def _compiled():
    try:
        from disparity_audit import _ckernels
    except ImportError:
        pytest.skip("extension not built")
    return _ckernels


def test_backends_bit_identical_on_large_tables():
    from disparity_audit import _pykernels

    c = _compiled()
    for cells in [(300, 200, 250, 260), (1000, 5, 990, 30), (40, 2000, 70, 1900), (425, 575, 500, 500)]:
        assert c.fisher_two_sided(*cells) == _pykernels.fisher_two_sided(*cells)
        expected = float(oracles.fisher_two_sided_exact(*cells))
        assert c.fisher_two_sided(*cells)[1] == pytest.approx(expected, rel=1e-12)


@settings(max_examples=300, deadline=None)
@given(st.tuples(*[st.integers(0, 400)] * 4).filter(lambda c: sum(c) > 0), st.floats(0.01, 60.0), st.floats(0.0, 600.0))
def test_backends_bit_identical(cells, s, x):
    # goldens are rendered to 12 digits, so the two backends must not drift at all
    from disparity_audit import _pykernels

    c = _compiled()
    assert c.fisher_two_sided(*cells) == _pykernels.fisher_two_sided(*cells)
    assert c.upper_gamma_q(s, x) == _pykernels.upper_gamma_q(s, x)


def test_falls_back_without_extension(monkeypatch):
    import importlib
    import sys

    monkeypatch.setitem(sys.modules, "disparity_audit._ckernels", None)
    try:
        reloaded = importlib.reload(kernels)
        assert reloaded.BACKEND == "python"
        assert reloaded.fisher_two_sided(5, 0, 0, 5)[1] == pytest.approx(2 / 252)
    finally:
        monkeypatch.undo()
        importlib.reload(kernels)
