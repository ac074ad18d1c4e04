"""Tour of the regular half line: V = 0 with a boundary angle at x = 0.

The m-function, its boundary density, and the negative eigenvalue that
appears once the boundary condition is rotated far enough are all known
in closed form here, so every number printed below can be checked by eye.
"""

import math

import numpy as np

from weylspec import models
from weylspec.herglotz import ac_density, point_mass, spectral_measure
from weylspec.mfunctions import halfline_m, rotate_m

free = models.free_halfline()

print("== m-function at a few spectral points (alpha = 0) ==")
for z in (1j, 2 + 1j, -1 + 0.5j):
    m_num = halfline_m(free, z, alpha=0.0)
    m_ref = models.free_m_alpha(z, 0.0)
    print("  z = %-8s  m = %.10f%+.10fi   |dev| = %.1e"
          % (z, m_num.real, m_num.imag, abs(m_num - m_ref)))

print()
print("== boundary-condition rotation ==")
# one numerical solve at alpha = 0, then pure algebra for every other angle
z = 2 + 1j
m0 = halfline_m(free, z, alpha=0.0)
for delta in (0.2, math.pi / 4, 1.0):
    rotated = rotate_m(m0, delta)
    direct = halfline_m(free, z, alpha=delta)
    print("  alpha = %-6.3f  rotated vs direct dev = %.1e"
          % (delta, abs(rotated - direct)))

print()
print("== spectral density along the essential spectrum ==")
lams = np.array([0.25, 1.0, 4.0, 16.0])
dens = ac_density(lambda w: halfline_m(free, w, alpha=0.0), lams)
for lam, d in zip(lams, dens):
    print("  lambda = %-5g rho = %.10f   exact sqrt(l)/pi = %.10f"
          % (lam, d, math.sqrt(lam) / math.pi))

print()
print("== eigenvalue below the essential spectrum at alpha = pi/4 ==")
m4 = lambda w: halfline_m(free, w, alpha=math.pi / 4)
mass = point_mass(m4, -1.0)
print("  point mass at lambda = -1: %.8f (exact 4)" % mass)

sm = spectral_measure(m4, 0.5, 4.0, n=40, atom_candidates=(-1.0, -4.0))
print("  atoms found by the sampler:", [(round(l, 6), round(w, 6))
                                        for l, w in sm.atoms])
print("  measure of [0.5, 4.0]: %.8f" % sm.interval_mass(0.5, 4.0))
