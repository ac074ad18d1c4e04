"""Boundary-value extraction and measure reconstruction machinery.

Closed m-functions of the free half line drive everything: their
densities, point masses and interval masses are elementary, so each
extractor is checked against exact numbers rather than against another
numerical route.
"""

import math

import numpy as np
import pytest
from scipy.integrate import quad

from weylspec import models
from weylspec.errors import DomainError
from weylspec.herglotz import (EPS_SCHEDULE, ac_density, measure_interval,
                               point_mass, property_report,
                               representation_residual, spectral_measure)

M0 = lambda z: models.free_m_alpha(z, 0.0)
M4 = lambda z: models.free_m_alpha(z, math.pi / 4)
LAMS = np.array([0.5, 1.0, 2.0, 4.0])


class TestSchedule:
    def test_needs_three_offsets(self):
        with pytest.raises(DomainError):
            ac_density(M0, LAMS, eps_schedule=(1e-2, 5e-3))

    def test_needs_halving(self):
        with pytest.raises(DomainError):
            ac_density(M0, LAMS, eps_schedule=(1e-2, 5e-3, 3e-3))

    def test_needs_decreasing(self):
        with pytest.raises(DomainError):
            ac_density(M0, LAMS, eps_schedule=(5e-3, 1e-2, 2e-2))


class TestDensity:
    def test_free_dirichlet_like(self):
        est, err = ac_density(M0, LAMS, return_error=True)
        assert np.max(np.abs(est - np.sqrt(LAMS) / math.pi)) < 1e-9
        assert np.all(err < 1e-8)

    def test_free_rotated(self):
        est = ac_density(M4, LAMS)
        want = models.free_density_alpha(LAMS, math.pi / 4)
        assert np.max(np.abs(est - want)) < 1e-7

    def test_extrapolation_beats_raw(self):
        # the raw eps = 1e-2 row is off by ~1e-5 here; the extrapolated
        # value must be orders of magnitude closer
        raw = np.array([M0(l + 1e-2j).imag / math.pi for l in LAMS])
        est = ac_density(M0, LAMS)
        want = np.sqrt(LAMS) / math.pi
        assert np.max(np.abs(raw - want)) > 1e-6
        assert np.max(np.abs(est - want)) < 1e-9


class TestPointMass:
    def test_eigenvalue_mass(self):
        assert abs(point_mass(M4, -1.0) - 4.0) < 1e-10

    def test_no_ghost_mass(self):
        assert abs(point_mass(M0, -1.0)) < 1e-12


class TestInterval:
    def test_free_interval(self):
        got = measure_interval(M0, 1.0, 4.0)
        want = (2.0 / 3.0) * 7.0 / math.pi
        assert abs(got - want) < 1e-5


class TestSpectralMeasure:
    def test_atoms_and_mass(self):
        sm = spectral_measure(M4, 0.5, 4.0, n=60,
                              atom_candidates=(-1.0, -2.0))
        assert len(sm.atoms) == 1
        loc, mass = sm.atoms[0]
        assert loc == -1.0 and abs(mass - 4.0) < 1e-9
        want = quad(lambda l: models.free_density_alpha(l, math.pi / 4),
                    0.5, 4.0, limit=200)[0]
        assert abs(sm.interval_mass(0.5, 4.0) - want) < 1e-5
        with_atom = sm.interval_mass(-1.5, 4.0)
        assert abs(with_atom - (want + 4.0)) < 1e-5

    def test_density_grid(self):
        sm = spectral_measure(M0, 0.5, 4.0, n=40)
        want = np.sqrt(sm.grid) / math.pi
        assert np.max(np.abs(sm.density - want)) < 1e-8
        assert sm.atoms == []


class TestPropertyReport:
    def test_exact_herglotz_passes(self):
        rep = property_report(M0, LAMS)
        assert rep["conjugate_symmetry"] < 1e-12
        assert rep["eps_im_min"] >= 0.0
        assert rep["density_min"] >= 0.0
        # eps * m(lambda + i eps) stays bounded along the schedule
        assert rep["eps_m_scaled"] < 0.1

    def test_keys_stable(self):
        rep = property_report(M4, LAMS)
        assert set(rep) == {"conjugate_symmetry", "eps_m_scaled",
                            "eps_re_trend", "eps_im_min", "density_min"}


class TestRepresentation:
    def test_free_residual(self):
        res = representation_residual(
            M0, 2 + 1j, lambda l: np.sqrt(l) / math.pi,
            lam_hi=1e7, tail=(1.0 / math.pi, 0.5))
        assert res < 1e-10

    def test_with_atom_and_decaying_tail(self):
        res = representation_residual(
            M4, 2 + 1j, lambda l: models.free_density_alpha(l, math.pi / 4),
            lam_hi=1e7, tail=(2.0 / math.pi, -0.5), atoms=((-1.0, 4.0),))
        assert res < 1e-10

    def test_rejects_real_z(self):
        with pytest.raises(DomainError):
            representation_residual(M0, 2.0, lambda l: np.sqrt(l) / math.pi,
                                    lam_hi=1e6)

    def test_rejects_non_herglotz_tail(self):
        with pytest.raises(DomainError):
            representation_residual(M0, 1j, lambda l: np.sqrt(l) / math.pi,
                                    lam_hi=1e6, tail=(1.0, 1.0))


def test_default_schedule_halves():
    steps = np.asarray(EPS_SCHEDULE)
    assert np.allclose(steps[1:] / steps[:-1], 0.5, rtol=1e-12)
