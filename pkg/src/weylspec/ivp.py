"""Initial-value integration for -psi'' + V psi = z psi.

Three entry points: fundamental systems anchored at a regular endpoint
(boundary-condition pair) or at an interior point (vanishing/unit pair),
and a log-derivative Riccati integrator for the solution square-integrable
at +infinity.  The Riccati form m = psi'/psi is used for anything that
decays: integrating psi itself toward the decay direction is exponentially
unstable, while its log-derivative is an attractor.

Near a zero of psi the log-derivative blows up; the integrator then swaps
to the reciprocal chart n = 1/m (n' = 1 - (V - z) n^2), which is regular
through the pole, and swaps back once |m| is moderate again.
"""

import math
from dataclasses import dataclass, field

import numpy as np
from scipy.integrate import solve_ivp

from .errors import (
    ConvergenceError,
    DomainError,
    ModelError,
    PoleCrossingError,
    SingularEndpointError,
)
from .specialfn import as_float_array, sqrt_upper

TAG_BC_SOLUTION = "bc_solution"          # satisfies the boundary condition
TAG_BC_COMPANION = "bc_companion"        # Wronskian partner of the above
TAG_ANCHOR_VANISHING = "anchor_vanishing"  # zero value, unit slope at anchor
TAG_ANCHOR_UNIT = "anchor_unit"            # unit value, zero slope at anchor
TAG_WEYL_PLUS = "weyl_plus"
TAG_WEYL_MINUS = "weyl_minus"
TAG_SINGULAR_PRINCIPAL = "singular_principal"
TAG_SINGULAR_COMPANION = "singular_companion"


@dataclass
class IntegratorConfig:
    """Tolerances and method for the ODE engine."""
    rel_tol: float = 1.0e-10
    abs_tol: float = 1.0e-12
    max_step: float = math.inf
    method: str = "DOP853"

    def __post_init__(self):
        for name, val in (("rel_tol", self.rel_tol), ("abs_tol", self.abs_tol)):
            if not (1.0e-14 < val < 1.0e-2):
                raise DomainError("%s must lie in (1e-14, 1e-2), got %g"
                                  % (name, val))
        if self.max_step <= 0:
            raise DomainError("max_step must be positive")


_DEFAULT_CONFIG = IntegratorConfig()


@dataclass
class SolutionFrame:
    """Value and derivative of one solution at one point."""
    x: float
    psi: complex
    dpsi: complex
    z: complex
    tag: str = ""

    def logderivative(self):
        if self.psi == 0:
            raise PoleCrossingError("solution vanishes at x=%g" % self.x,
                                    location=self.x)
        return self.dpsi / self.psi


def _potential_callable(potential):
    """Accept a model object (with .evaluate) or a bare callable."""
    if hasattr(potential, "evaluate"):
        return potential.evaluate
    if callable(potential):
        return potential
    raise ModelError("potential must be a model or a callable")


def _check_grid_interior(potential, xs):
    if hasattr(potential, "left_endpoint") and \
            potential.left_endpoint == "strongly_singular":
        a = getattr(potential, "domain_start", 0.0)
        if xs[0] <= a:
            raise SingularEndpointError(
                "grid touches the singular endpoint x=%g" % a)


def _integrate_linear(vfun, z, y0, x_from, xs, config):
    """Integrate the first-order system for (psi, psi') [optionally two
    solutions stacked] from x_from through the points xs (sorted away from
    x_from).  Returns array (len(y0), len(xs))."""
    z = complex(z)

    def rhs(t, y):
        v = vfun(t)
        out = np.empty_like(y)
        out[0::2] = y[1::2]
        out[1::2] = (v - z) * y[0::2]
        return out

    if len(xs) == 0:
        return np.empty((len(y0), 0), dtype=complex)
    out = np.empty((len(y0), len(xs)), dtype=complex)
    inside = np.isclose(xs, x_from, rtol=0.0, atol=1e-13)
    todo = ~inside
    out[:, inside] = np.asarray(y0, dtype=complex)[:, None]
    if np.any(todo):
        tgt = xs[todo]
        sol = solve_ivp(rhs, (x_from, tgt[-1] if tgt[-1] != x_from else x_from),
                        np.asarray(y0, dtype=complex),
                        method=config.method, t_eval=tgt,
                        rtol=config.rel_tol, atol=config.abs_tol,
                        max_step=config.max_step, dense_output=False)
        if not sol.success:
            raise ConvergenceError("IVP integration failed: %s" % sol.message)
        out[:, todo] = sol.y
    return out


def _frames(xs, ys, dys, z, tag):
    return [SolutionFrame(float(x), complex(p), complex(dp), complex(z), tag)
            for x, p, dp in zip(xs, ys, dys)]


def fundamental_system_regular(potential, alpha, z, xs, config=None):
    """Boundary-condition pair at the regular endpoint a = xs[0].

    The first solution satisfies sin(alpha) psi'(a) + cos(alpha) psi(a) = 0
    with (psi, psi')(a) = (-sin alpha, cos alpha); the companion starts at
    (cos alpha, sin alpha).  Their Wronskian is exactly 1 and is monitored
    against integration drift.  Returns (bc_frames, companion_frames).
    """
    config = config or _DEFAULT_CONFIG
    xs = as_float_array(xs)
    vfun = _potential_callable(potential)
    if hasattr(potential, "left_endpoint") and \
            potential.left_endpoint != "regular":
        raise SingularEndpointError(
            "boundary-condition pair needs a regular endpoint; "
            "this potential is strongly singular there")
    a = xs[0]
    sa, ca = math.sin(alpha), math.cos(alpha)
    y0 = [-sa, ca, ca, sa]
    ys = _integrate_linear(vfun, z, y0, a, xs, config)
    _check_wronskian(ys, config)
    phi = _frames(xs, ys[0], ys[1], z, TAG_BC_SOLUTION)
    theta = _frames(xs, ys[2], ys[3], z, TAG_BC_COMPANION)
    return phi, theta


def fundamental_system_interior(potential, x0, z, xs, config=None):
    """Vanishing/unit pair anchored at the interior point x0:
    phi(x0) = 0, phi'(x0) = 1; theta(x0) = 1, theta'(x0) = 0.

    The grid may extend toward a singular endpoint but must not touch it.
    Returns (vanishing_frames, unit_frames) ordered like xs.
    """
    config = config or _DEFAULT_CONFIG
    xs = as_float_array(xs)
    x0 = float(x0)
    vfun = _potential_callable(potential)
    _check_grid_interior(potential, xs)
    y0 = [0.0, 1.0, 1.0, 0.0]
    left = xs[xs < x0]
    right = xs[xs >= x0]
    cols = np.empty((4, len(xs)), dtype=complex)
    if len(left):
        ysl = _integrate_linear(vfun, z, y0, x0, left[::-1], config)
        cols[:, :len(left)] = ysl[:, ::-1]
    if len(right):
        cols[:, len(left):] = _integrate_linear(vfun, z, y0, x0, right, config)
    _check_wronskian(cols, config)
    phi = _frames(xs, cols[0], cols[1], z, TAG_ANCHOR_VANISHING)
    theta = _frames(xs, cols[2], cols[3], z, TAG_ANCHOR_UNIT)
    return phi, theta


def _check_wronskian(cols, config):
    # W(theta, phi) = theta phi' - theta' phi, exactly 1 at the anchor
    w = cols[2] * cols[1] - cols[3] * cols[0]
    drift = float(np.max(np.abs(w - 1.0))) if w.size else 0.0
    if drift > 10.0 * config.rel_tol:
        raise ConvergenceError(
            "Wronskian drift %.2e exceeds 10*rel_tol" % drift,
            achieved=drift)


# ---------------------------------------------------------------------------
# Riccati log-derivative integration

@dataclass
class RiccatiPath:
    """Dense log-derivative m(t) = psi'(t)/psi(t) along [min, max].

    Stores the chart segments produced by the integrator so callers can
    evaluate m on any grid inside the integration range (used for stable
    reconstruction of psi itself through exp of the integral of m).
    """
    segments: list = field(default_factory=list)   # (t_hi, t_lo, sol, chart)
    value: complex = 0j

    def evaluate(self, ts):
        ts = np.atleast_1d(np.asarray(ts, dtype=float))
        out = np.empty(len(ts), dtype=complex)
        filled = np.zeros(len(ts), dtype=bool)
        for t_hi, t_lo, sol, chart in self.segments:
            lo, hi = min(t_lo, t_hi), max(t_lo, t_hi)
            mask = (~filled) & (ts >= lo - 1e-12) & (ts <= hi + 1e-12)
            if not np.any(mask):
                continue
            tt = np.clip(ts[mask], lo, hi)
            vals = sol(tt)[0]
            out[mask] = 1.0 / vals if chart == "n" else vals
            filled[mask] = True
        if not np.all(filled):
            raise DomainError("points outside the integrated range")
        return out


def inverse_square_tail_init(z, b, c, p=2, nterms=8):
    """Far-field log-derivative for V ~ c * x**-p (p >= 2 integer):
    m(b) = i sqrt(z) + sum_{q>=2} a_q b^-q with the recursion
    a_q = [c*delta_{q,p} + (q-1) a_{q-1} - sum_{l=1}^{q-1} a_l a_{q-l}]
          / (2 i sqrt(z)),  a_1 = 0.
    """
    p = int(p)
    if p < 2:
        raise DomainError("tail power must be >= 2")
    root = sqrt_upper(z, limit_from_above=False)
    denom = 2j * root
    coeffs = {1: 0.0j}
    for q in range(2, nterms + 1):
        s = sum(coeffs[l] * coeffs[q - l] for l in range(1, q))
        val = ((c if q == p else 0.0) + (q - 1) * coeffs[q - 1] - s) / denom
        coeffs[q] = val
    m = 1j * root
    for q in range(2, nterms + 1):
        m += coeffs[q] * b ** (-q)
    return m


def riccati_logderivative(potential, z, b, x_target, init=None, config=None,
                          keep_path=False):
    """Integrate m' = (V - z) - m^2 from x=b to x=x_target.

    init defaults to i*sqrt(z) (upper-half-plane root), the free-decay
    log-derivative; callers with known potential tails should pass the
    tail-corrected value from inverse_square_tail_init.  Integrating toward
    the endpoint is the stable direction for the decaying solution.

    Near a pole of m the reciprocal chart n = 1/m takes over (hysteresis
    band keeps the swaps finite).  Returns the value at x_target, or a
    (value, RiccatiPath) pair with keep_path=True.
    """
    config = config or _DEFAULT_CONFIG
    vfun = _potential_callable(potential)
    z = complex(z)
    if init is None:
        init = 1j * sqrt_upper(z, limit_from_above=False) \
            if not (z.imag == 0.0 and z.real >= 0.0) else 1j * math.sqrt(z.real)
    scale = max(1.0, abs(sqrt_upper(z))) if not (z.imag == 0.0 and z.real >= 0.0) \
        else max(1.0, math.sqrt(abs(z.real)))
    r_out = 10.0 * scale          # m-chart abandoned beyond this
    r_back = 2.0 * scale          # n-chart abandoned once |m| back below this

    def rhs_m(t, y):
        return np.array([(vfun(t) - z) - y[0] * y[0]])

    def rhs_n(t, y):
        return np.array([1.0 - (vfun(t) - z) * y[0] * y[0]])

    def ev_m(t, y):
        return abs(y[0]) - r_out

    def ev_n(t, y):
        return abs(y[0]) - 1.0 / r_back

    ev_m.terminal = True
    ev_n.terminal = True

    t_cur = float(b)
    y_cur = complex(init)
    chart = "m"
    path = RiccatiPath()
    for _ in range(200):
        rhs = rhs_m if chart == "m" else rhs_n
        ev = ev_m if chart == "m" else ev_n
        sol = solve_ivp(rhs, (t_cur, x_target), np.array([y_cur], dtype=complex),
                        method=config.method, events=ev,
                        rtol=config.rel_tol, atol=config.abs_tol,
                        max_step=config.max_step, dense_output=True)
        if not sol.success:
            raise PoleCrossingError(
                "Riccati integration failed near x=%.6g: %s"
                % (sol.t[-1], sol.message), location=float(sol.t[-1]))
        path.segments.append((t_cur, float(sol.t[-1]), sol.sol, chart))
        if sol.status == 1:                       # event: swap charts
            t_cur = float(sol.t_events[0][0])
            y_ev = complex(sol.y_events[0][0][0])
            y_cur = 1.0 / y_ev
            chart = "n" if chart == "m" else "m"
            continue
        y_end = complex(sol.y[0, -1])
        value = 1.0 / y_end if chart == "n" else y_end
        path.value = value
        if keep_path:
            return value, path
        return value
    raise ConvergenceError("Riccati chart swapping did not settle "
                           "(200 swaps); z too close to spectrum?")
