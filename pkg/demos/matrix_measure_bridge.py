"""Interior reference point: 2x2 matrix measure and its scalar bridge.

At a strongly singular endpoint the boundary measure is replaced by a
matrix measure anchored at an interior point x0.  On the essential
spectrum that matrix has rank one, and projecting it onto the principal
direction recovers exactly the scalar measure of the generalized
m-function.  Both facts are checked numerically against closed forms.
"""

import numpy as np

from weylspec import models
from weylspec.transform import bridge_density, omega_density, stone_crosscheck

bz = models.bessel(1.5)
lams = np.array([0.5, 1.0, 2.0, 4.0])

print("== matrix density at x0 = 1 ==")
w00, w01, w11 = omega_density(bz, lams, x0=1.0)
print("  lambda   w00          w01          w11          det/|w|^2")
for i, lam in enumerate(lams):
    det = w00[i] * w11[i] - w01[i] ** 2
    scale = w00[i] ** 2 + 2 * w01[i] ** 2 + w11[i] ** 2
    print("  %-6g  %.8f   %.8f   %.8f   %.1e"
          % (lam, w00[i], w01[i], w11[i], det / scale))

print()
print("  closed-form check of the entries:")
for i, lam in enumerate(lams):
    ref = models.bessel_omega_density(1.5, lam, x0=1.0)
    dev = max(abs(w00[i] - ref[0]), abs(w01[i] - ref[1]),
              abs(w11[i] - ref[2]))
    print("  lambda = %-4g max entry dev %.1e" % (lam, dev))

print()
print("== bridge to the scalar measure ==")
# direct route: w00 / phi(x0)^2; projected route folds in w01 through the
# principal direction; they must agree wherever phi(x0) != 0
direct = bridge_density(bz, lams, x0=1.0, route="direct")
projected = bridge_density(bz, lams, x0=1.0, route="projected")
target = lams ** 1.5 / 2.0
print("  lambda   direct        projected     l^(3/2)/2")
for i, lam in enumerate(lams):
    print("  %-6g  %.8f   %.8f   %.8f"
          % (lam, direct[i], projected[i], target[i]))
print("  route disagreement: %.1e" % np.max(np.abs(direct - projected)))

print()
print("== spectral projection vs resolvent route ==")
h = lambda x: np.exp(-((x - 2.0) ** 2) * 4.0)
out = stone_crosscheck(bz, h, (1e-6, 5.0), (0.5, 2.0),
                       weights=("one", "lambda"), n_lam=11, n_support=201)
for weight, (a, b) in out.items():
    print("  weight %-7s transform %.8f  resolvent %.8f  rel %.1e"
          % (weight, a, b, abs(a - b) / abs(a)))
