"""Generalized eigenfunction transforms and the measures they pair with.

Oracles: direct kernel quadrature for the forward map, the closed
Gaussian-type transform pair of the pure inverse-square model, exact
free-model densities for Parseval, and closed matrix densities for the
interior machinery.  Grids are geometric in lambda where the density has
an endpoint power, so Simpson keeps its order.
"""

import math

import numpy as np
import pytest
from scipy.integrate import quad

from weylspec import models
from weylspec.errors import DomainError, ModelError
from weylspec.transform import (TransformVector, bridge_density,
                                forward_transform, inverse_transform,
                                omega_density, parseval_check,
                                stone_crosscheck, transform_grid)

FREE = models.free_halfline()
BESSEL = models.bessel(1.5)
BUMP = lambda x: np.exp(-((x - 2.0) ** 2) * 4.0)
LAMGRID = np.geomspace(1e-6, 150.0, 301)


class TestGrid:
    def test_shape(self):
        g = transform_grid((0.0, 5.0), 400.0)
        assert len(g) % 2 == 1
        assert g[0] == 0.0 and g[-1] == 5.0
        assert len(g) >= 1201

    def test_resolution_grows_with_lambda(self):
        lo = transform_grid((0.0, 40.0), 4.0)
        hi = transform_grid((0.0, 40.0), 4000.0)
        assert len(hi) > len(lo)


class TestForward:
    def test_free_matches_kernel_quadrature(self):
        lams = np.array([0.5, 1.0, 2.0, 4.0])
        tv = forward_transform(FREE, BUMP, (1e-9, 5.0), lams, alpha=0.0)
        assert tv.mode == "boundary"
        for lam, c in zip(tv.lams, tv.coeffs):
            rl = math.sqrt(lam)
            want = quad(lambda x: math.sin(rl * x) / rl * BUMP(x),
                        0.0, 5.0, limit=200)[0]
            assert abs(c - want) < 1e-9

    def test_weber_pair(self):
        h, hhat, _ = models.weber_transform_pair(1.5)
        lams = np.linspace(0.05, 8.0, 9)
        tv = forward_transform(BESSEL, h, (0.0, 12.0), lams,
                               normalization="entire")
        assert tv.mode == "singular"
        assert np.max(np.abs(tv.coeffs - hhat(lams))) < 1e-12

    def test_normalization_guard(self):
        with pytest.raises(ModelError):
            forward_transform(BESSEL, BUMP, (0.0, 2.0), [1.0],
                              normalization="weird")

    def test_entire_needs_inverse_square_family(self):
        with pytest.raises(ModelError):
            forward_transform(models.free_fullline(), BUMP, (0.0, 2.0),
                              [1.0], mode="singular",
                              normalization="entire")

    def test_boundary_needs_regular_endpoint(self):
        with pytest.raises(ModelError):
            forward_transform(BESSEL, BUMP, (0.0, 2.0), [1.0],
                              mode="boundary")

    def test_support_must_respect_endpoint(self):
        with pytest.raises(DomainError):
            forward_transform(FREE, BUMP, (-1.0, 2.0), [1.0],
                              mode="boundary")


class TestParsevalAndInverse:
    def test_free_parseval(self):
        lhs, rhs = parseval_check(FREE, BUMP, (1e-9, 5.0), LAMGRID,
                                  lambda l: math.sqrt(l) / math.pi,
                                  alpha=0.0)
        assert abs(lhs - rhs) < 1e-4 * lhs

    def test_free_round_trip(self):
        tv = forward_transform(FREE, BUMP, (1e-9, 5.0), LAMGRID, alpha=0.0)
        xs = np.array([1.0, 2.0, 2.7])
        rec = inverse_transform(FREE, tv, xs,
                                lambda l: math.sqrt(l) / math.pi)
        assert np.max(np.abs(rec - BUMP(xs))) < 1e-4

    def test_fullline_interior_parseval(self):
        # exact interior matrix densities of the translation-invariant
        # operator: (1/(2 pi sqrt(l)), 0, sqrt(l)/(2 pi))
        ff = models.free_fullline()
        hb = lambda x: np.exp(-((x - 0.5) ** 2) * 2.0)
        dens = lambda l: (1.0 / (2.0 * math.pi * math.sqrt(l)), 0.0,
                          math.sqrt(l) / (2.0 * math.pi))
        grid = np.geomspace(1e-8, 150.0, 321)
        lhs, rhs = parseval_check(ff, hb, (-6.0, 7.0), grid, dens, x0=0.0)
        assert abs(lhs - rhs) < 1e-3 * lhs
        # lhs really is the Gaussian norm
        assert abs(lhs - math.sqrt(math.pi / 4.0)) < 1e-6


class TestMatrixDensities:
    def test_omega_matches_closed(self):
        lams = np.array([1.0, 2.0])
        got = omega_density(BESSEL, lams)
        for i, lam in enumerate(lams):
            want = models.bessel_omega_density(1.5, lam)
            assert max(abs(got[k][i] - want[k]) for k in range(3)) < 1e-8

    def test_bridge_routes(self):
        lams = np.array([0.5, 1.0, 2.0])
        direct = bridge_density(BESSEL, lams, route="direct")
        projected = bridge_density(BESSEL, lams, route="projected")
        assert np.max(np.abs(direct - lams ** 1.5 / 2.0)) < 1e-8
        assert np.max(np.abs(direct - projected)) < 1e-8

    def test_bridge_route_names(self):
        with pytest.raises(ModelError):
            bridge_density(BESSEL, np.array([1.0]), route="sideways")


class TestStone:
    def test_free_small_case(self):
        out = stone_crosscheck(FREE, BUMP, (1e-9, 5.0), (0.5, 2.0),
                               weights=("one",), alpha=0.0,
                               n_lam=11, n_support=201)
        a, b = out["one"]
        assert abs(a - b) < 1e-5 * abs(a)


class TestVector:
    def test_fields(self):
        tv = forward_transform(FREE, BUMP, (1e-9, 5.0),
                               np.array([1.0, 2.0]), alpha=0.3)
        assert isinstance(tv, TransformVector)
        assert tv.alpha == 0.3
        assert tv.coeffs.shape == (2,)
        it = forward_transform(models.free_fullline(), BUMP, (-3.0, 5.0),
                               np.array([1.0, 2.0]), x0=0.0)
        assert it.mode == "interior"
        assert it.coeffs.shape == (2, 2)
        assert it.x0 == 0.0
