"""m-functions, Green's functions and resolvents against closed forms.

The free and pure inverse-square models have exact reference data in
weylspec.models, so almost everything here is a two-route comparison;
the one frozen number (perturbed singular m) was pinned from a converged
run whose probe spread and route agreement are checked alongside it.
"""

import math

import numpy as np
import pytest
from scipy.integrate import quad

from weylspec import models
from weylspec.errors import (BranchCutError, DomainError, InconsistencyError,
                             ModelError, PoleError, RotationPoleSignal,
                             SingularEndpointError)
from weylspec.mfunctions import (greens_function, halfline_m,
                                 interior_m_pair, matrix_m, resolvent_apply,
                                 rotate_m, singular_m, weyl_l2_minus,
                                 weyl_l2_plus)

FREE = models.free_halfline()
BESSEL = models.bessel(1.5)
PERTURBED = models.perturbed_bessel(1.5, "exp(-x)")


class TestHalflineM:
    def test_matches_closed_form(self):
        for z in (1j, 2 + 1j, -1 + 0.5j, 0.5 + 0.25j):
            for a in (0.0, 0.3, math.pi / 4):
                got = halfline_m(FREE, z, alpha=a)
                assert abs(got - models.free_m_alpha(z, a)) < 1e-9

    def test_pole_detected(self):
        # alpha = pi/4 has its eigenvalue at -1
        with pytest.raises(PoleError):
            halfline_m(FREE, -1.0 + 0j, alpha=math.pi / 4)

    def test_rejects_singular_endpoint(self):
        with pytest.raises(SingularEndpointError):
            halfline_m(BESSEL, 1j)

    def test_tabulated_uses_default_alpha(self):
        xs = np.linspace(0.0, 6.0, 25)
        m = models.tabulated(xs, np.exp(-xs), alpha=0.2)
        assert halfline_m(m, 1j) == halfline_m(m, 1j, alpha=0.2)


class TestRotation:
    def test_identity_with_closed_form(self):
        m0 = models.free_m_alpha(2 + 1j, 0.0)
        got = rotate_m(m0, 0.3)
        assert abs(got - models.free_m_alpha(2 + 1j, 0.3)) < 1e-12

    def test_group_composition(self):
        m0 = models.free_m_alpha(1j, 0.0)
        one = rotate_m(rotate_m(m0, 0.2), 0.1)
        assert abs(one - rotate_m(m0, 0.3)) < 1e-12

    def test_pole_signal(self):
        with pytest.raises(RotationPoleSignal):
            rotate_m(-1.0, math.pi / 4)


class TestSingularM:
    def test_pure_matches_closed_form(self):
        for z in (2 + 1j, -1 + 0.5j, 0.3 + 0.2j):
            got = singular_m(BESSEL, z)
            want = models.bessel_singular_m(1.5, z)
            assert abs(got - want) < 1e-8 * max(1.0, abs(want))

    def test_perturbed_frozen(self):
        got, spread = singular_m(PERTURBED, 2 + 1j, return_spread=True)
        assert abs(got - (-1.05345911310848 + 0.8385632102560441j)) < 1e-8
        assert spread < 1e-8

    def test_routes_agree(self):
        a = singular_m(PERTURBED, 2 + 1j, route="wronskian")
        b = singular_m(PERTURBED, 2 + 1j, route="ratio")
        assert abs(a - b) < 1e-10

    def test_bad_route(self):
        with pytest.raises(ModelError):
            singular_m(BESSEL, 1j, route="direct")

    def test_spread_guard_fires(self):
        with pytest.raises(InconsistencyError):
            singular_m(PERTURBED, 2 + 1j, spread_tol=1e-16)

    def test_rejects_regular_endpoint(self):
        with pytest.raises(SingularEndpointError):
            singular_m(FREE, 1j)

    def test_coupling_scales_square(self):
        m2 = singular_m(models.bessel(1.5, coupling=2.0), 2 + 1j)
        m1 = singular_m(BESSEL, 2 + 1j)
        assert abs(m2 / m1 - 4.0) < 1e-9


class TestInteriorPair:
    def test_bessel_pair(self):
        gm, gp = interior_m_pair(BESSEL, 1j)
        mm, mp_ = models.bessel_m_interior(1.5, 1j)
        assert abs(gm - mm) < 1e-9
        assert abs(gp - mp_) < 1e-9

    def test_on_axis_rejected(self):
        # inverse-square far field seeds from below the cut and must
        # refuse real positive z; boundary values go through lambda+i*eps
        with pytest.raises(BranchCutError):
            interior_m_pair(BESSEL, 4.0 + 0j, x0=1.0)

    def test_matrix_fullline(self):
        got = matrix_m(models.free_fullline(), 1j, x0=0.0)
        want = models.free_m_matrix(1j)
        assert max(abs(a - b) for a, b in zip(got, want)) < 1e-9

    def test_matrix_bessel(self):
        mm, mp_ = models.bessel_m_interior(1.5, 1j)
        den = mm - mp_
        want = (1.0 / den, 0.5 * (mm + mp_) / den, mm * mp_ / den)
        got = matrix_m(BESSEL, 1j)
        assert max(abs(a - b) for a, b in zip(got, want)) < 1e-9


class TestGreens:
    def test_free_closed_form(self):
        for (x, y) in ((1.0, 2.0), (2.0, 1.0), (0.5, 0.5)):
            got = greens_function(FREE, 1j, x, y, alpha=0.0)
            want = models.free_greens(1j, x, y, alpha=0.0)
            assert abs(got - want) < 1e-9

    def test_bessel_closed_form(self):
        got = greens_function(BESSEL, 1j, 0.7, 1.3)
        assert abs(got - models.bessel_greens(1.5, 1j, 0.7, 1.3)) < 1e-10

    def test_symmetric(self):
        a = greens_function(PERTURBED, 1j, 0.6, 1.4)
        b = greens_function(PERTURBED, 1j, 1.4, 0.6)
        assert abs(a - b) < 1e-10 * max(1.0, abs(a))


class TestResolvent:
    def test_against_kernel_quadrature(self):
        z = 1j
        h = lambda x: np.exp(-((x - 1.5) ** 2))
        xs_out = np.array([0.5, 1.5, 3.0])
        got = resolvent_apply(FREE, z, h, (1e-8, 8.0), xs_out, alpha=0.0)
        for x, g in zip(xs_out, got):
            re = quad(lambda y: (models.free_greens(z, x, y) * h(y)).real,
                      1e-10, 8.0, limit=200)[0]
            im = quad(lambda y: (models.free_greens(z, x, y) * h(y)).imag,
                      1e-10, 8.0, limit=200)[0]
            assert abs(g - (re + 1j * im)) < 1e-4

    def test_support_reaching_singular_endpoint(self):
        # the log-derivative goes like -(gamma+1/2)/x near 0, so the first
        # panels of the exponent integral span decades; a plain trapezoid
        # there flushes the decaying solution to exact zero
        h = lambda x: np.exp(-((x - 2.0) ** 2) * 4.0)
        g = resolvent_apply(BESSEL, 0.5 + 1e-2j, h, (1e-6, 5.0),
                            np.array([2.0]))
        want = 0.614554570482 + 0.366797528316j   # kernel quadrature
        assert abs(g[0] - want) < 1e-4 * abs(want)


class TestL2Identities:
    def test_free(self):
        z = 2 + 1j
        integral, expected = weyl_l2_plus(FREE, z, x0=1.0)
        assert abs(integral - expected) < 5e-5 * abs(expected)
        integral, expected = weyl_l2_minus(FREE, z, x0=1.0, alpha=0.0)
        assert abs(integral - expected) < 1e-6 * abs(expected)

    def test_bessel(self):
        z = 2 + 1j
        integral, expected = weyl_l2_plus(BESSEL, z, x0=1.0)
        assert abs(integral - expected) < 5e-5 * abs(expected)
        integral, expected = weyl_l2_minus(BESSEL, z, x0=1.0)
        assert abs(integral - expected) < 2e-4 * abs(expected)

    def test_needs_complex_z(self):
        with pytest.raises(DomainError):
            weyl_l2_plus(FREE, 4.0)
        with pytest.raises(DomainError):
            weyl_l2_minus(FREE, 4.0)

    def test_fullline_has_no_left_integral(self):
        with pytest.raises(ModelError):
            weyl_l2_minus(models.free_fullline(), 1j, x0=0.0)
