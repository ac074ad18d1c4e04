"""Special-function layer against elementary closed forms and scipy.

Half-integer orders have elementary expressions, so most oracles here are
self-contained; scipy.special appears only as an independent cross-check
and never inside the library.
"""

import math

import numpy as np
import pytest
import scipy.special as sps

from weylspec.errors import (BranchCutError, DomainError, PoleError,
                             UnsupportedRegimeError)
from weylspec.specialfn import (BesselOrder, bessel_j_real, bessel_y_integer,
                                cut_log, cut_power, digamma_int,
                                entire_bessel, entire_second_kind_integer,
                                gamma_real, hankel_combination, sqrt_upper)

EULER_GAMMA = 0.5772156649015329


def eb_plus_32(z, x):
    # z^{-3/4} sqrt(x) J_{3/2}(sqrt(z) x), assembled branch-free
    w = np.sqrt(complex(z)) * x
    return x * x * math.sqrt(2.0 / math.pi) * (np.sin(w) / w ** 3
                                               - np.cos(w) / w ** 2)


def eb_minus_32(z, x):
    w = np.sqrt(complex(z)) * x
    return math.sqrt(2.0 / math.pi) / x * (-np.cos(w) - w * np.sin(w))


class TestBranches:
    def test_cut_power_above_axis(self):
        # just above the positive axis the cut power is the real power
        v = cut_power(2.0 + 1e-14j, 1.5)
        assert abs(v - 2.0 ** 1.5) < 1e-12

    def test_cut_power_below_axis(self):
        # approaching from below picks up e^{2 pi i gamma}
        v = cut_power(2.0 - 1e-14j, 0.5)
        want = math.sqrt(2.0) * np.exp(1j * math.pi)
        assert abs(v - want) < 1e-7

    def test_cut_log_negative_axis(self):
        v = cut_log(-3.0 + 0j)
        assert abs(v - (math.log(3.0) + 1j * math.pi)) < 1e-14

    def test_sqrt_upper_negative(self):
        assert abs(sqrt_upper(-4.0 + 0j) - 2j) < 1e-15

    def test_sqrt_upper_on_cut_rejected(self):
        with pytest.raises(BranchCutError):
            sqrt_upper(4.0 + 0j, limit_from_above=False)

    def test_sqrt_upper_limit_from_above(self):
        # the default reads lambda > 0 as lambda + i0
        assert abs(sqrt_upper(4.0) - 2.0) < 1e-15

    def test_sqrt_upper_halfplane(self):
        for z in (1 + 1j, -2 + 0.5j, 3 - 2j):
            r = sqrt_upper(z)
            assert r.imag >= 0.0
            assert abs(r * r - z) < 1e-14 * abs(z)


class TestGamma:
    def test_values(self):
        assert abs(gamma_real(1.0) - 1.0) < 1e-15
        assert abs(gamma_real(0.5) - math.sqrt(math.pi)) < 1e-14
        assert abs(gamma_real(2.5) - 1.3293403881791370) < 1e-14

    def test_against_scipy(self):
        for g in (1.1, 3.7, 10.25, 17.0):
            assert abs(gamma_real(g) - sps.gamma(g)) < 1e-12 * sps.gamma(g)

    def test_pole(self):
        with pytest.raises(PoleError):
            gamma_real(0.0)

    def test_digamma_int(self):
        assert abs(digamma_int(1) + EULER_GAMMA) < 1e-14
        assert abs(digamma_int(3) - (-EULER_GAMMA + 1.0 + 0.5)) < 1e-14


class TestBesselOrder:
    def test_below_one_rejected(self):
        with pytest.raises(DomainError):
            BesselOrder(0.5)

    def test_integer_detected(self):
        assert BesselOrder(2.0).is_integer
        assert not BesselOrder(1.5).is_integer

    def test_near_integer_rejected(self):
        with pytest.raises(DomainError):
            BesselOrder(2.0 + 1e-12)


class TestEntireBessel:
    def test_elementary_plus(self):
        for z in (1.0 + 0j, 2 + 1j, -3 + 0.5j, 0.25 - 0.1j):
            for x in (0.3, 1.0, 2.5):
                got = entire_bessel(1, 1.5, z, x)
                assert abs(got - eb_plus_32(z, x)) < 1e-13 * max(
                    1.0, abs(got))

    def test_elementary_minus(self):
        for z in (2 + 1j, -1 + 0.3j):
            for x in (0.5, 1.5):
                got = entire_bessel(-1, 1.5, z, x)
                assert abs(got - eb_minus_32(z, x)) < 1e-13 * max(
                    1.0, abs(got))

    def test_derivative_pair(self):
        z = 2 + 1j
        v, d = entire_bessel(1, 1.5, z, 1.2, derivative=True)
        h = 1e-6
        fd = (entire_bessel(1, 1.5, z, 1.2 + h)
              - entire_bessel(1, 1.5, z, 1.2 - h)) / (2 * h)
        assert abs(d - fd) < 1e-8 * max(1.0, abs(d))

    def test_against_scipy_generic_order(self):
        # branch-independent combination, so the principal branch works
        for g in (1.25, 2.8):
            for z in (1.5 + 0.5j, -2 + 1j):
                w = np.sqrt(complex(z))
                want = w ** (-g) * math.sqrt(1.3) * sps.jv(g, w * 1.3)
                got = entire_bessel(1, g, z, 1.3)
                assert abs(got - want) < 1e-12 * max(1.0, abs(want))

    def test_large_real_argument(self):
        # sqrt(z) x = 27 is beyond the real-axis series switch
        z, x = 81.0 + 0j, 3.0
        got = entire_bessel(1, 1.5, z, x)
        assert abs(got - eb_plus_32(z, x)) < 1e-11 * abs(got)

    def test_real_j_value(self):
        assert abs(bessel_j_real(1.5, 1.0)
                   - 0.24029783912342725) < 1e-14

    def test_large_complex_rejected(self):
        with pytest.raises(UnsupportedRegimeError):
            entire_bessel(1, 1.5, 1600.0 + 900.0j, 2.0)

    def test_wronskian_identity(self):
        # W(minus, plus) in x equals 2 sin(pi g)/pi for non-integer g
        g, z = 1.5, 0.7 + 0.3j
        want = 2.0 * math.sin(math.pi * g) / math.pi
        for x in (0.4, 1.0, 2.0):
            mv, md = entire_bessel(-1, g, z, x, derivative=True)
            pv, pd = entire_bessel(1, g, z, x, derivative=True)
            assert abs((mv * pd - md * pv) - want) < 1e-12


class TestSecondKind:
    def test_y1_value(self):
        v, _ = bessel_y_integer(1, 1.0)
        assert abs(v - (-0.7812128213002887)) < 1e-13

    def test_y_against_scipy(self):
        for n in (0, 2):
            for w in (0.5, 3.0, 11.0):
                v, d = bessel_y_integer(n, w)
                assert abs(v - sps.yn(n, w)) < 1e-11
                assert abs(d - sps.yvp(n, w)) < 1e-10

    def test_entire_second_kind_wronskian(self):
        # W(second-kind combination, entire J combination) = 2/pi
        n, z = 2, 1.3 + 0.4j
        for x in (0.5, 1.0, 1.8):
            sv, sd = entire_second_kind_integer(n, z, x, derivative=True)
            pv, pd = entire_bessel(1, n, z, x, derivative=True)
            assert abs((sv * pd - sd * pv) - 2.0 / math.pi) < 1e-12

    def test_branch_free_in_z(self):
        # the log z multiple cancels the branch of Y: values just above
        # and far from the cut must agree with the series' own continuation
        n = 1
        a = entire_second_kind_integer(n, 2.0 + 1e-12j, 0.7)
        b = entire_second_kind_integer(n, 2.0 + 1e-6j, 0.7)
        assert abs(a - b) < 1e-5


class TestHankel:
    def test_elementary_halfinteger(self):
        for z in (1j, 2 + 1j, -1 + 0.5j):
            for x in (0.5, 1.0, 3.0):
                w = sqrt_upper(z) * x
                want = math.sqrt(x) * (-np.sqrt(2.0 / (np.pi * w))
                                       * np.exp(1j * w) * (1 + 1j / w))
                got = hankel_combination(1.5, z, x)
                assert abs(got - want) < 1e-11 * max(abs(want), 1e-30)

    def test_frozen_value(self):
        got = hankel_combination(1.5, 1j, 1.0)
        want = -0.5526449072545039 - 0.47224083844595266j
        assert abs(got - want) < 1e-13

    def test_asymptotic_regime(self):
        # |w| = 20 goes through the asymptotic route
        z, x = 1j * 400.0, 1.0
        w = sqrt_upper(z) * x
        want = math.sqrt(x) * (-np.sqrt(2.0 / (np.pi * w))
                               * np.exp(1j * w) * (1 + 1j / w))
        got = hankel_combination(1.5, z, x)
        assert abs(got - want) < 1e-9 * abs(want)

    def test_on_cut_rejected(self):
        with pytest.raises(BranchCutError):
            hankel_combination(1.5, 4.0 + 0j, 1.0)

    def test_decay_direction(self):
        # the combination must decay, not grow, as x increases (Im z > 0)
        a = abs(hankel_combination(1.5, 1j, 2.0))
        b = abs(hankel_combination(1.5, 1j, 8.0))
        assert b < a
