import numpy as np
import pytest

from weylspec.errors import DomainError
from weylspec.quadrature import PanelGrid, cumulative_from_right


def test_polynomial_exactness():
    # 21 Lobatto nodes per panel integrate polynomials up to degree 39
    grid = PanelGrid(np.array([2.0]))
    for k in (0, 1, 3, 7, 16):
        val = grid.integrate(grid.x ** k)
        assert abs(val - 2.0 ** (k + 1) / (k + 1)) < 1e-13 * 2.0 ** (k + 1)


def test_cumulative_matches_integrate():
    grid = PanelGrid(np.array([0.5, 1.0, 3.0]))
    f = np.exp(-grid.x)
    cum = grid.cumulative(f)
    assert abs(cum[-1] - grid.integrate(f)) < 1e-14
    # antiderivative of exp(-x) from the bottom of the ladder
    want = np.exp(-grid.x[0]) - np.exp(-grid.x)
    assert np.max(np.abs(cum - want)) < 1e-13


def test_cumulative_from_right():
    grid = PanelGrid(np.array([1.0, 2.0]))
    f = np.ones_like(grid.x)
    tail = cumulative_from_right(grid, f)
    want = grid.x[-1] - grid.x
    assert np.max(np.abs(tail - want)) < 1e-13


def test_at_points_smooth():
    # extraction only at constructor points; they are exact grid nodes
    pts = np.array([0.3, 0.77, 1.5, 2.0])
    grid = PanelGrid(pts)
    f = np.sin(grid.x)
    got = grid.at_points(grid.cumulative(f), pts)
    want = np.cos(grid.x[0]) - np.cos(pts)
    assert np.max(np.abs(got - want)) < 1e-12


def test_ladder_reaches_small_x():
    grid = PanelGrid(np.array([1.0]), n_geo=40)
    assert grid.x[0] < 2.0 ** -39
    assert np.all(np.diff(grid.x) > 0)


def test_index_lookup():
    pts = np.array([0.25, 1.0, 1.75])
    grid = PanelGrid(pts)
    for p in pts:
        assert abs(grid.x[grid.index[float(p)]] - p) < 1e-14


def test_rejects_nonpositive():
    with pytest.raises(DomainError):
        PanelGrid(np.array([0.0, 1.0]))
    with pytest.raises(DomainError):
        PanelGrid(np.array([-1.0]))
