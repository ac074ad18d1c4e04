"""Eigenfunction transforms and the norm identity.

Two independent checks of the same machinery: a Gaussian-type pair whose
transform is known exactly at the singular endpoint, and a smooth bump on
the free half line pushed forward and pulled back numerically.
"""

import math

import numpy as np

from weylspec import models
from weylspec.transform import (forward_transform, inverse_transform,
                                parseval_check)

print("== closed transform pair at the singular endpoint (g = 3/2) ==")
bz = models.bessel(1.5)
h, hhat, norm_sq = models.weber_transform_pair(1.5)
lams = np.linspace(0.25, 6.0, 7)
tv = forward_transform(bz, h, (0.0, 12.0), lams, normalization="entire")
print("  lambda   computed hat     exact exp(-l/2)")
for lam, c in zip(tv.lams, tv.coeffs):
    print("  %-6g  %.12f   %.12f" % (lam, c.real, hhat(lam)))

dens = lambda l: l ** 1.5 / 2.0       # entire-normalized weight
lamgrid = np.geomspace(1e-6, 60.0, 241)
lhs, rhs = parseval_check(bz, h, (0.0, 12.0), lamgrid, dens,
                          normalization="entire")
print("  ||h||^2            = %.10f" % lhs)
print("  spectral side      = %.10f" % rhs)
print("  exact Gamma(5/2)/2 = %.10f" % norm_sq)

print()
print("== free half line: forward, Parseval, and reconstruction ==")
free = models.free_halfline()
bump = lambda x: np.exp(-((x - 2.0) ** 2) * 4.0)
rho = lambda l: math.sqrt(l) / math.pi
grid = np.geomspace(1e-6, 150.0, 301)

lhs, rhs = parseval_check(free, bump, (1e-9, 5.0), grid, rho, alpha=0.0)
print("  Parseval: %.10f vs %.10f  (rel gap %.1e)"
      % (lhs, rhs, abs(lhs - rhs) / lhs))

tv = forward_transform(free, bump, (1e-9, 5.0), grid, alpha=0.0)
xs = np.array([1.0, 1.7, 2.0, 2.4, 3.0])
rec = inverse_transform(free, tv, xs, rho)
print("  x      h(x)            reconstructed")
for x, r in zip(xs, rec):
    print("  %-5g  %.10f    %.10f" % (x, bump(x), r.real))
