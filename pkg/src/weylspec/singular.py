"""Solutions near a strongly singular endpoint at x = 0.

For potentials (g^2 - 1/4)/x^2 + perturbation the principal solution
(the one square-integrable at 0) behaves like x^(1/2+g); no initial-value
integration can start there, so it is built by iterating a Volterra
integral equation on a panel grid graded toward 0.  Each iterate is a
cumulative integral of the previous one, the series converges factorially,
and every term is dominated by an explicit envelope that is monitored.

Two constructions are provided: the direct power-weight iteration for an
inverse-square leading term, and a quotient-space iteration for potentials
specified through a factorization function f (covering e.g. steeper
singularities like 1/x^3), where the natural comparison solutions are the
envelope pair eta_+- built from f alone.
"""

import math
from dataclasses import dataclass

import numpy as np
from scipy.integrate import quad

from .errors import (
    ConvergenceError,
    DegenerateReferenceError,
    DomainError,
    ModelError,
    OverflowGuardError,
    RefinementError,
)
from .ivp import (
    SolutionFrame,
    TAG_SINGULAR_COMPANION,
    TAG_SINGULAR_PRINCIPAL,
    fundamental_system_interior,
)
from .quadrature import PanelGrid
from .specialfn import BesselOrder, as_float_array

_MAX_TERMS = 40
_REL_STOP = 1.0e-14
_EXP_GUARD = 700.0


@dataclass
class SeriesDiagnostics:
    """Convergence record of a Volterra iteration."""
    terms_used: int
    final_ratio: float          # envelope of the last term / |partial sum|
    weighted_bound: float       # integral driving the factorial envelope
    term_bounds: list           # per-term envelope values at the far end
    term_magnitudes: list       # per-term actual |term| at the far end


def _resolve_vtilde(vtilde):
    if vtilde is None:
        return lambda t: np.zeros_like(t)
    if callable(vtilde):
        return vtilde
    raise ModelError("perturbation must be callable or None")


def _grid_geo(points, gamma):
    # keep x**(-2 gamma) at the grid bottom representable
    n_geo = min(60, max(12, int(250.0 / (2.0 * gamma * math.log(2.0)))))
    return PanelGrid(points, n_geo=n_geo)


def volterra_principal(gamma, vtilde, z, xs, max_terms=_MAX_TERMS,
                       rel_stop=_REL_STOP):
    """Principal solution at 0 for V = (g^2-1/4)/x^2 + vtilde(x).

    Normalization: leading behavior exactly x^(1/2+g) as x -> 0 (first
    iterate x^(1/2+g), corrections o(that)).  Iteration in the quotient
    s = value / x^(1/2+g):

        s_0 = 1
        A_k(x) = int_0^x t (vtilde(t)-z) s_{k-1}(t) dt
        B_k(x) = int_0^x t^(1+2g) (vtilde(t)-z) s_{k-1}(t) dt
        s_k = (A_k - x^(-2g) B_k) / (2g)

    Each |s_k| is bounded by (int_0^x t|vtilde - z| dt / g)^k / k!; the
    iteration stops once that envelope is below rel_stop times the sum.
    Returns (frames, diagnostics): frames carry value and x-derivative.
    """
    order = gamma if isinstance(gamma, BesselOrder) else BesselOrder(gamma)
    g = order.gamma
    z = complex(z)
    xs = as_float_array(xs)
    if xs[0] <= 0.0:
        raise DomainError("evaluation points must be positive")
    vt = _resolve_vtilde(vtilde)
    grid = _grid_geo(xs, g)
    t = grid.x
    u = np.asarray(vt(t), dtype=complex) - z
    if not np.all(np.isfinite(u)):
        raise ModelError("perturbation not finite on the grid")

    wbound = grid.cumulative(t * np.abs(u))
    if not np.all(np.isfinite(wbound)):
        raise ModelError("t*|vtilde - z| is not integrable near 0")

    t2g = t ** (2.0 * g)
    inv_t2g = t ** (-2.0 * g)
    s = np.ones_like(t, dtype=complex)
    total_s = s.copy()
    sum_a = np.zeros_like(t, dtype=complex)
    sum_b = np.zeros_like(t, dtype=complex)
    env = np.ones_like(t)
    term_bounds = [1.0]
    term_mags = [1.0]
    ratio = math.inf
    terms = 0
    for k in range(1, max_terms + 1):
        a_k = grid.cumulative(t * u * s)
        b_k = grid.cumulative(t * t2g * u * s)
        s = (a_k - inv_t2g * b_k) / (2.0 * g)
        total_s += s
        sum_a += a_k
        sum_b += b_k
        env = env * wbound / (g * k)
        term_bounds.append(float(env[-1]))
        term_mags.append(float(np.abs(s[-1])))
        terms = k
        ratio = float(env[-1] / max(abs(total_s[-1]), 1e-300))
        if ratio <= rel_stop:
            break
    else:
        raise ConvergenceError(
            "Volterra iteration: envelope ratio %.2e after %d terms"
            % (ratio, max_terms), achieved=ratio)

    xpg = t ** (0.5 + g)
    vals_grid = xpg * total_s
    dvals_grid = ((0.5 + g) * t ** (g - 0.5) * (1.0 + sum_a / (2.0 * g))
                  - (0.5 - g) * t ** (-g - 0.5) * sum_b / (2.0 * g))
    vals = grid.at_points(vals_grid, xs)
    dvals = grid.at_points(dvals_grid, xs)
    diag = SeriesDiagnostics(terms, ratio, float(wbound[-1]),
                             term_bounds, term_mags)
    frames = [SolutionFrame(float(x), complex(v), complex(dv), z,
                            TAG_SINGULAR_PRINCIPAL)
              for x, v, dv in zip(xs, vals, dvals)]
    return frames, diag


def nonprincipal_companion(potential, principal_at_anchor, z, xs,
                           config=None):
    """Companion solution with Wronskian +1 against the principal one.

    Built from the interior vanishing/unit pair (phi, theta) at the anchor
    point x0 = principal_at_anchor.x:

        companion = [u' theta - u phi] / (u^2 + u'^2)

    where (u, u') are the principal solution's value and derivative at x0.
    The denominator is a fixed complex number; if it nearly vanishes the
    anchor is unusable (DegenerateReferenceError) and the caller should
    move x0.
    """
    fr = principal_at_anchor
    u, up = complex(fr.psi), complex(fr.dpsi)
    d = u * u + up * up
    scale = max(abs(u), abs(up)) ** 2
    if abs(d) < 1e-12 * max(scale, 1e-300):
        raise DegenerateReferenceError(
            "companion anchor degenerate at x0=%g: |u^2+u'^2| = %.2e"
            % (fr.x, abs(d)))
    xs = as_float_array(xs)
    phi, theta = fundamental_system_interior(potential, fr.x, z, xs, config)
    out = []
    for p, th in zip(phi, theta):
        val = (up * th.psi - u * p.psi) / d
        dval = (up * th.dpsi - u * p.dpsi) / d
        out.append(SolutionFrame(p.x, val, dval, complex(z),
                                 TAG_SINGULAR_COMPANION))
    return out


# ---------------------------------------------------------------------------
# factorization route

@dataclass
class FactorizedPotential:
    """Potential given through a factorization function f:

        V = f''/f + f^-4 + vtilde

    with f, f' locally absolutely continuous, f > 0 on (0, x0], f in L^2
    at 0, and f^-2 not integrable at 0 (that divergence is what pins the
    limit-point character).  f, fprime, fsecond, vtilde are callables;
    vtilde may be None.
    """
    f: object
    fprime: object
    fsecond: object
    vtilde: object = None
    x0: float = 1.0

    def __post_init__(self):
        if self.x0 <= 0:
            raise ModelError("x0 must be positive")
        for name in ("f", "fprime", "fsecond"):
            if not callable(getattr(self, name)):
                raise ModelError("%s must be callable" % name)
        f = self.f
        val, _ = quad(lambda t: float(f(t)) ** 2, 0.0, min(1.0, self.x0),
                      limit=200)
        if not math.isfinite(val):
            raise ModelError("f is not square-integrable at 0")
        # limit-point probe: int f^-2 over (h, x0) should diverge as h -> 0;
        # integrate in s = log t (smooth for power-law f) on two shrinking
        # windows and require the deeper one to keep adding mass
        def g(s):
            t = math.exp(s)
            return t / float(f(t)) ** 2
        top = min(1.0, self.x0)
        lo = quad(g, math.log(1e-8), math.log(top), limit=200)[0]
        hi = quad(g, math.log(1e-12), math.log(1e-8), limit=200)[0]
        if hi < 0.5:
            raise ModelError(
                "int f^-2 appears convergent at 0 (added %.3g below 1e-8); "
                "not in the strongly singular limit-point class" % hi)
        self._tail_mass = lo + hi

    def evaluate(self, x):
        x = np.asarray(x, dtype=float)
        f = np.asarray(self.f(x), dtype=float)
        v = np.asarray(self.fsecond(x), dtype=float) / f + f ** -4.0
        if self.vtilde is not None:
            v = v + np.asarray(self.vtilde(x), dtype=float)
        return v if v.shape else float(v)


def envelope_pair(fp, xs):
    """The comparison pair eta_+-(x) = 2^(-1/2) f(x) exp(+-I(x)) with
    I(x) = int_x^x0 f(t)^-2 dt.  Exact Wronskian W(eta_+, eta_-) = 1.

    Raises OverflowGuardError when |I| > 700: the raw exponentials would
    overflow and callers must work with ratios instead.
    Returns (plus_frames, minus_frames); z is not involved (stored as 0).
    """
    xs = as_float_array(xs)
    if xs[0] <= 0:
        raise DomainError("evaluation points must be positive")
    out_p, out_m = [], []
    for x in xs:
        # integrate in s = log t: f^-2 blows up at 0 and a t-variable quad
        # misses the boundary layer entirely when x << x0
        ival, _ = quad(lambda s: math.exp(s) / float(fp.f(math.exp(s))) ** 2,
                       math.log(x), math.log(fp.x0), limit=200)
        if abs(ival) > _EXP_GUARD:
            raise OverflowGuardError(
                "exponent I(%g) = %.3g beyond the overflow guard; "
                "evaluate ratios, not raw exponentials" % (x, ival))
        fv = float(fp.f(x))
        fpv = float(fp.fprime(x))
        root2 = math.sqrt(2.0)
        ep = fv / root2 * math.exp(ival)
        em = fv / root2 * math.exp(-ival)
        dep = ep * (fpv / fv - fv ** -2.0)
        dem = em * (fpv / fv + fv ** -2.0)
        out_p.append(SolutionFrame(float(x), ep, dep, 0j, "envelope_plus"))
        out_m.append(SolutionFrame(float(x), em, dem, 0j, "envelope_minus"))
    return out_p, out_m


def _decayed_cumulative(grid, values, rate_cum, rate_density):
    """W(x) = int_0^x values(t) exp(rate_cum(t) - rate_cum(x)) dt with
    rate_cum nondecreasing, evaluated stably panel by panel (exponents are
    re-anchored at each panel start, so nothing large is exponentiated).

    W solves W' = values - rate_density * W.  The boosted-cumulative form
    is exact but its integrand spans e^mass across the panel, and the
    panel's polynomial quadrature only resolves that up to mass ~12.
    Stiffer panels take the quasi-static solution values/rate_density plus
    the relaxing boundary mismatch; its relative error is O(1/mass), and
    such panels sit deep in the graded region where W itself is tiny.
    """
    v = np.asarray(values)
    out = np.empty_like(v, dtype=complex)
    w_left = 0.0j
    for lo, hi, scale in grid._panel_slices:
        seg_rate = rate_cum[lo:hi]
        local = seg_rate - seg_rate[0]
        if local[-1] > 12.0:
            damp = np.exp(-np.minimum(local, 745.0))
            quasi = v[lo:hi] / rate_density[lo:hi]
            out[lo:hi] = quasi + (w_left - quasi[0]) * damp
        else:
            boosted = v[lo:hi] * np.exp(local)
            cum = scale * (grid._qref @ boosted)
            out[lo:hi] = np.exp(-local) * (w_left + cum)
        w_left = out[hi - 1]
    return out


def factorized_principal(fp, z, xs, max_terms=_MAX_TERMS, rel_stop=_REL_STOP):
    """Principal solution for a FactorizedPotential, normalized so that
    value / eta_-(x) -> 1 as x -> 0.

    Iteration in the quotient v = value / eta_-:

        v_0 = 1
        v_k(x) = int_0^x (f(t)^2/2) (1 - e^{-2 I(t,x)}) (vtilde - z) v_{k-1} dt

    with I(t,x) = int_t^x f^-2.  The kernel splits into a plain cumulative
    integral and an exponentially damped one, both evaluated on the graded
    panel grid; the damped part never exponentiates anything large.  The
    factorial envelope uses int_0^x (f^2/2)|vtilde - z|.

    Returns (frames, diagnostics); frames carry value and x-derivative.
    """
    z = complex(z)
    xs = as_float_array(xs)
    if xs[0] <= 0:
        raise DomainError("evaluation points must be positive")
    pts = np.union1d(xs, [fp.x0])
    grid = PanelGrid(pts)
    t = grid.x
    fv = np.asarray(fp.f(t), dtype=float)
    if np.any(fv <= 0):
        raise ModelError("f must be positive on (0, x0]")
    f2 = fv * fv
    finv2 = 1.0 / f2
    vt = _resolve_vtilde(fp.vtilde)
    u = np.asarray(vt(t), dtype=complex) - z

    f2_cum = grid.cumulative(f2 * np.abs(u)) * 0.5
    if not np.all(np.isfinite(f2_cum)):
        raise ModelError("f^2 |vtilde - z| not integrable near 0")
    rate = 2.0 * grid.cumulative(finv2)

    v = np.ones_like(t, dtype=complex)
    v_total = v.copy()
    w_total = np.zeros_like(t, dtype=complex)
    env = np.ones_like(t)
    term_bounds = [1.0]
    term_mags = [1.0]
    ratio = math.inf
    terms = 0
    rate_density = 2.0 * finv2
    for k in range(1, max_terms + 1):
        q = f2 * u * v
        p_k = grid.cumulative(q)
        w_k = _decayed_cumulative(grid, q, rate, rate_density)
        v = 0.5 * (p_k - w_k)
        v_total += v
        w_total += w_k
        env = env * f2_cum / k
        term_bounds.append(float(env[-1]))
        term_mags.append(float(np.abs(v[-1])))
        terms = k
        ratio = float(env[-1] / max(abs(v_total[-1]), 1e-300))
        if ratio <= rel_stop:
            break
    else:
        raise ConvergenceError(
            "factorized iteration: envelope ratio %.2e after %d terms"
            % (ratio, max_terms), achieved=ratio)

    # eta_- on the grid, re-anchored at x0 (a grid point by construction);
    # below x0 the exponent only damps (underflow to 0 is the right limit),
    # above x0 it grows and must respect the overflow guard
    i_x0 = grid.index[float(fp.x0)]
    rate_to_x0 = 0.5 * (rate[i_x0] - rate)       # I(x, x0), sign per side
    if float(-np.min(rate_to_x0)) > _EXP_GUARD:
        raise OverflowGuardError("eta_- exponent beyond the overflow guard "
                                 "on this grid; shrink the evaluation range")
    eta_m = fv / math.sqrt(2.0) * np.exp(-np.minimum(rate_to_x0, 745.0))
    deta_over_eta = np.asarray(fp.fprime(t), dtype=float) / fv + finv2
    vprime = finv2 * w_total
    vals_grid = eta_m * v_total
    dvals_grid = eta_m * (deta_over_eta * v_total + vprime)

    # square-integrability certificate near 0: cumulative of |phi|^2 up to
    # the smallest requested point must be dominated by its top dyadic rungs
    l2norm = _decayed_cumulative(grid, f2 * np.abs(v_total) ** 2, rate,
                                 rate_density)
    probe = grid.index[float(xs[0])]
    if probe > 0 and not np.isfinite(abs(l2norm[probe])):
        raise RefinementError("L2 mass near 0 did not stabilize")

    vals = grid.at_points(vals_grid, xs)
    dvals = grid.at_points(dvals_grid, xs)
    diag = SeriesDiagnostics(terms, ratio, float(f2_cum[-1]),
                             term_bounds, term_mags)
    frames = [SolutionFrame(float(x), complex(vv), complex(dv), z,
                            TAG_SINGULAR_PRINCIPAL)
              for x, vv, dv in zip(xs, vals, dvals)]
    return frames, diag
