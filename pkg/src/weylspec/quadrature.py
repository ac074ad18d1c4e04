"""Composite Chebyshev quadrature on geometrically graded panels.

The singular-endpoint iterations need cumulative integrals of functions
that behave like powers x**a near 0 (a > -1).  A fixed grid cannot resolve
that; panels shrinking geometrically toward 0 can, because on each panel
[h, 2h] the integrand is analytic with a scale comparable to the panel, so
a ~20-node Chebyshev rule converges spectrally panel by panel.

The grid bottoms out at x_max * 2**-n_geo (default n_geo = 60, i.e. about
1e-18 * x_max); the discarded sliver [0, bottom] contributes O(bottom**(1+a))
which is far below every tolerance used here.  All requested evaluation
points are panel endpoints, so results at them need no interpolation.
"""

import numpy as np
from numpy.polynomial import chebyshev as _cheb

from .errors import DomainError

_DEFAULT_NODES = 20      # polynomial degree per panel (nodes = degree + 1)
_DEFAULT_NGEO = 60

_matrix_cache = {}


def _lobatto_matrices(deg):
    """Reference nodes t in [-1,1] and the cumulative integration matrix Q:
    (Q @ v)[i] = integral_{-1}^{t_i} p(t) dt for the interpolant p of v."""
    if deg in _matrix_cache:
        return _matrix_cache[deg]
    i = np.arange(deg + 1)
    t = -np.cos(np.pi * i / deg)              # ascending Lobatto nodes
    vander = _cheb.chebvander(t, deg)         # T_k(t_i)
    analysis = np.linalg.solve(vander, np.eye(deg + 1))
    # integrate each Chebyshev mode, evaluate at nodes, subtract t=-1 value
    qmodes = np.empty((deg + 1, deg + 1))
    for k in range(deg + 1):
        coef = np.zeros(deg + 1)
        coef[k] = 1.0
        icoef = _cheb.chebint(coef)
        qmodes[:, k] = _cheb.chebval(t, icoef) - _cheb.chebval(-1.0, icoef)
    q = qmodes @ analysis
    _matrix_cache[deg] = (t, q)
    return t, q


class PanelGrid:
    """Graded panel grid on (0, x_max] with cumulative spectral integration.

    Panels: dyadic ladder x_max * 2**-j for j = n_geo..0, unioned with every
    requested point, so consecutive breakpoints never differ by more than a
    factor 2.  Values live on the global node vector self.x (ascending,
    panel endpoints shared).
    """

    def __init__(self, points, nodes_per_panel=_DEFAULT_NODES,
                 n_geo=_DEFAULT_NGEO):
        pts = np.atleast_1d(np.asarray(points, dtype=float))
        if pts.size == 0:
            raise DomainError("need at least one positive point")
        if np.any(pts <= 0.0) or not np.all(np.isfinite(pts)):
            raise DomainError("panel grid points must be positive and finite")
        x_max = float(np.max(pts))
        ladder = x_max * 2.0 ** (-np.arange(n_geo, -1, -1, dtype=float))
        bps = np.union1d(ladder, pts)
        bps = bps[bps >= ladder[0] * (1.0 - 1e-14)]
        self.breakpoints = bps
        self.x_max = x_max
        deg = nodes_per_panel
        tref, qref = _lobatto_matrices(deg)
        self._qref = qref
        self._deg = deg

        xs = []
        self._panel_slices = []
        for a, b in zip(bps[:-1], bps[1:]):
            lo = len(xs) - 1 if xs else 0
            nodes = a + (b - a) * 0.5 * (tref + 1.0)
            nodes[0], nodes[-1] = a, b
            if xs:
                xs.extend(nodes[1:])      # share the left endpoint
            else:
                xs.extend(nodes)
            self._panel_slices.append((lo, len(xs), 0.5 * (b - a)))
        self.x = np.asarray(xs)
        # indices of the requested points in self.x
        self.index = {}
        for p in pts:
            j = int(np.argmin(np.abs(self.x - p)))
            self.index[float(p)] = j

    def cumulative(self, values):
        """Cumulative integral from the grid bottom to every node.

        values: array over self.x (real or complex).  Returns same shape.
        """
        v = np.asarray(values)
        if v.shape != self.x.shape:
            raise DomainError("values must live on the grid nodes")
        out = np.empty_like(v, dtype=np.result_type(v.dtype, float))
        total = 0.0 if not np.iscomplexobj(v) else 0.0j
        for lo, hi, scale in self._panel_slices:
            seg = v[lo:hi]
            cum = scale * (self._qref @ seg)
            out[lo:hi] = total + cum
            total = out[hi - 1]
        return out

    def integrate(self, values):
        """Integral from the grid bottom to x_max."""
        return self.cumulative(values)[-1]

    def at_points(self, values, points):
        """Extract node values at requested points (must match constructor)."""
        v = np.asarray(values)
        return np.array([v[self.index[float(p)]] for p in
                         np.atleast_1d(np.asarray(points, dtype=float))])


def cumulative_from_right(grid, values):
    """Cumulative integral from each node up to x_max (complement)."""
    c = grid.cumulative(values)
    return c[-1] - c
