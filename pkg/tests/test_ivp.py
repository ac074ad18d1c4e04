"""Initial value machinery: fundamental systems and the Riccati route.

Frozen reference values were computed from closed forms (V = 0 solutions
are elementary; the inverse-square interior system reduces to
half-integer cylinder functions) and cross-checked against an
independent high-order integration before being pinned here.
"""

import math

import numpy as np
import pytest

from weylspec import models
from weylspec.errors import SingularEndpointError
from weylspec.ivp import (IntegratorConfig, RiccatiPath,
                          fundamental_system_interior,
                          fundamental_system_regular,
                          inverse_square_tail_init, riccati_logderivative)


class TestRegularSystem:
    def test_free_alpha0_frozen(self):
        model = models.free_halfline(alpha=0.0)
        xs = np.array([0.0, 1.0])
        phi, theta = fundamental_system_regular(model, 0.0, 1j, xs)
        assert abs(phi[1].psi
                   - (0.9916694222380014 - 0.16646827901959774j)) < 1e-9
        assert abs(theta[1].psi
                   - (0.958358132833007 - 0.49861138667283283j)) < 1e-9

    def test_free_closed_form(self):
        # alpha = 0: phi = sin(w x)/w, theta = cos(w x), w = sqrt(z)
        model = models.free_halfline()
        z = 2.0 + 1.0j
        w = np.sqrt(complex(z))
        xs = np.array([0.0, 0.5, 1.0, 2.0])
        phi, theta = fundamental_system_regular(model, 0.0, z, xs)
        for fr, x in zip(phi, xs):
            assert abs(fr.psi - np.sin(w * x) / w) < 1e-9
        for fr, x in zip(theta, xs):
            assert abs(fr.psi - np.cos(w * x)) < 1e-9

    def test_boundary_condition_satisfied(self):
        model = models.free_halfline()
        for alpha in (0.0, 0.4, math.pi / 2, 2.2):
            phi, _ = fundamental_system_regular(model, alpha, 1.5 + 0.5j,
                                                np.array([0.0, 1.0]))
            bc = (math.sin(alpha) * phi[0].dpsi
                  + math.cos(alpha) * phi[0].psi)
            assert abs(bc) < 1e-14

    def test_wronskian_one(self):
        xs = np.linspace(0.0, 30.0, 80)
        model = models.tabulated(xs, np.exp(-xs))
        phi, theta = fundamental_system_regular(model, 0.3, 2 + 1j,
                                                np.array([0.0, 3.0, 8.0]))
        for p, t in zip(phi, theta):
            w = t.psi * p.dpsi - t.dpsi * p.psi
            assert abs(w - 1.0) < 1e-9

    def test_rejects_singular_endpoint(self):
        with pytest.raises(SingularEndpointError):
            fundamental_system_regular(models.bessel(1.5), 0.0, 1j,
                                       np.array([0.0, 1.0]))


class TestInteriorSystem:
    def test_bessel_frozen(self):
        model = models.bessel(1.5)
        xs = np.array([0.5, 1.0, 2.0])
        phi, theta = fundamental_system_interior(model, 1.0, 4.0 + 0j, xs)
        assert abs(phi[0].psi - (-0.4960276621388874)) < 1e-10
        assert abs(phi[2].psi - 0.5634981571578372) < 1e-10
        assert abs(theta[0].psi - 0.885745628537149) < 1e-10
        assert abs(theta[2].psi - (-0.07997303609572681)) < 1e-10

    def test_anchor_conditions(self):
        model = models.bessel(1.5)
        phi, theta = fundamental_system_interior(model, 1.0, 2 + 1j,
                                                 np.array([1.0]))
        assert abs(phi[0].psi) < 1e-14
        assert abs(phi[0].dpsi - 1.0) < 1e-14
        assert abs(theta[0].psi - 1.0) < 1e-14
        assert abs(theta[0].dpsi) < 1e-14


class TestRiccati:
    def test_tail_init_free(self):
        # no potential tail: the logarithmic derivative is i sqrt(z)
        z = 2.0 + 1.0j
        init = inverse_square_tail_init(z, 30.0, 0.0)
        assert abs(init - 1j * np.sqrt(complex(z))) < 1e-12

    def test_tail_init_inverse_square(self):
        # with c/x^2 the first correction appears at x^-2
        z, b, c = 1j, 40.0, 2.0
        init = inverse_square_tail_init(z, b, c)
        free = inverse_square_tail_init(z, b, 0.0)
        assert abs(init - free) < 2.0 * abs(c) / b ** 2

    def test_free_logderivative(self):
        model = models.free_halfline()
        z = 2.0 + 1.0j
        got = riccati_logderivative(model, z, 40.0, 1.0,
                                    init=1j * np.sqrt(complex(z)))
        assert abs(got - 1j * np.sqrt(complex(z))) < 1e-9

    def test_path_evaluate_consistency(self):
        model = models.bessel(1.5)
        z = 2.0 + 1.0j
        out = riccati_logderivative(model, z, 40.0,
                                    0.5, init=inverse_square_tail_init(
                                        z, 40.0, 2.0),
                                    keep_path=True)
        val, path = out
        assert isinstance(path, RiccatiPath)
        assert abs(path.evaluate([0.5])[0] - val) < 1e-12
        # midpoints must satisfy the closed inverse-square answer:
        # mu = d/dx log(sqrt(x) H^(1)_g(sqrt(z) x))
        from weylspec.specialfn import hankel_combination
        for x in (0.7, 1.3, 4.0):
            hv, hd = hankel_combination(1.5, z, x, derivative=True)
            mu = path.evaluate([x])[0]
            assert abs(mu - hd / hv) < 1e-8 * max(1.0, abs(mu))

    def test_tight_config_respected(self):
        model = models.free_halfline()
        cfg = IntegratorConfig(rel_tol=1e-12, abs_tol=1e-13)
        z = 1j
        got = riccati_logderivative(model, z, 30.0, 2.0,
                                    init=1j * np.sqrt(complex(z)),
                                    config=cfg)
        assert abs(got - 1j * np.sqrt(complex(z))) < 1e-10
