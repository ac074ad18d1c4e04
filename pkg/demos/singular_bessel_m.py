"""The strongly singular endpoint: V = (g^2 - 1/4)/x^2 on (0, inf).

For g >= 1 the endpoint carries no boundary condition and the usual
m-function construction degenerates.  The generalized m-function built
against the principal solution still exists, but it is NOT a Herglotz
function any more: it grows like z^g, and for integer g it picks up a
logarithm.  The closed forms below make that loss of structure explicit.
"""

import numpy as np

from weylspec import models
from weylspec.herglotz import ac_density, property_report
from weylspec.mfunctions import singular_m

print("== noninteger order g = 3/2 ==")
bz = models.bessel(1.5)
for z in (2 + 1j, -1 + 0.5j, 10 + 1j):
    got = singular_m(bz, z)
    ref = models.bessel_singular_m(1.5, z)
    print("  z = %-8s  m~ = %12.6f%+12.6fi   rel dev %.1e"
          % (z, got.real, got.imag, abs(got - ref) / abs(ref)))

print()
print("== integer order g = 2: logarithmic branch ==")
b2 = models.bessel(2.0)
for z in (-1 + 0.3j, 2 + 1j):
    got = singular_m(b2, z)
    ref = models.bessel_singular_m(2.0, z)
    print("  z = %-8s  m~ = %12.6f%+12.6fi   dev %.1e"
          % (z, got.real, got.imag, abs(got - ref)))

print()
print("== the m-coefficient is not Herglotz here ==")
# growth: a Herglotz function obeys |m(iy)| = O(y); z^1.5 does not
for y in (4.0, 16.0, 64.0):
    print("  |m(iy)|/y at y=%-4g: %.4f" % (y, abs(singular_m(bz, y * 1j)) / y))
rep = property_report(lambda w: singular_m(bz, w), np.array([1.0, 4.0]))
print("  eps-scaled boundedness:", "%.2e" % rep["eps_m_scaled"],
      " (finite, so Stieltjes inversion still applies)")

print()
print("== but the spectral density is still positive and exact ==")
lams = np.array([0.5, 1.0, 2.0, 4.0])
dens = ac_density(lambda w: singular_m(bz, w), lams)
ref = models.bessel_singular_density(1.5, lams)
for lam, d, r in zip(lams, dens, ref):
    print("  lambda = %-4g rho = %.10f  closed %.10f" % (lam, d, r))

print()
print("== perturbation: V~ = exp(-x) on top of the singular part ==")
pb = models.perturbed_bessel(1.5, "exp(-x)")
m, spread = singular_m(pb, 2 + 1j, return_spread=True)
print("  m~(2+1i) = %.12f%+.12fi" % (m.real, m.imag))
print("  probe-point spread (consistency check): %.1e" % spread)

print()
print("== coupling rescales the measure quadratically ==")
m1 = singular_m(models.bessel(1.5, coupling=1.0), 2 + 1j)
m2 = singular_m(models.bessel(1.5, coupling=2.0), 2 + 1j)
print("  m[C=2] / m[C=1] =", abs(m2 / m1))
