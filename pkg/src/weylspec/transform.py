"""Generalized eigenfunction transforms and their consistency checks.

Three transform kinds share one interface:

  boundary   scalar transform against the boundary-condition solution at a
             regular left endpoint, paired with the half-line m-function
             measure;
  singular   scalar transform against the principal solution at a strongly
             singular endpoint (canonical normalization by default), paired
             with the generalized m-function measure;
  interior   two-component transform against the interior anchored pair,
             paired with the 2x2 matrix measure.

The x-integrals use Simpson on a grid sized to the fastest oscillation
(quarter wavelength pi/(2 sqrt(lam_max)) resolved several times over).

The bridge between the interior matrix picture and the singular scalar
one is also here: the scalar density equals the (0,0) matrix density
divided by the squared principal solution at the anchor, and a second
route through the (0,1) entry must agree with it.  Cross-checks of
spectral projections compute the same quadratic form through the
transform side and through boundary values of the resolvent; the two
routes share no code beyond the potential itself.
"""

import math
from dataclasses import dataclass

import numpy as np
from scipy.integrate import simpson

from .errors import DomainError, ModelError
from .herglotz import EPS_SCHEDULE, ac_density
from .ivp import fundamental_system_interior, fundamental_system_regular
from .mfunctions import (_principal_frames, halfline_m, matrix_m,
                         resolvent_apply, singular_m)
from .models import LEFT_REGULAR, PotentialModel


def transform_grid(support, lam_max, n_min=1201):
    """Simpson grid on the support interval resolving oscillation at the
    largest spectral parameter requested."""
    s0, s1 = float(support[0]), float(support[1])
    if not s0 < s1:
        raise DomainError("empty support interval")
    span = s1 - s0
    n_osc = int(span * math.sqrt(max(lam_max, 1.0)) * 16.0 / math.pi) + 1
    n = max(int(n_min), n_osc)
    if n % 2 == 0:
        n += 1
    return np.linspace(s0, s1, n)


def _eval_on(h, xs):
    try:
        vals = np.asarray(h(xs), dtype=complex)
        if vals.shape != xs.shape:
            raise TypeError
    except TypeError:
        vals = np.array([complex(h(float(x))) for x in xs])
    return vals


def _entire_ratio(model):
    # canonical principal = ratio * entire-normalized principal
    if model.family != "bessel":
        raise ModelError("entire normalization is only defined for the "
                         "pure inverse-square family")
    order = model.gamma
    if order.is_integer:
        return math.pi / (2.0 * model.coupling)
    return math.pi / (2.0 * model.coupling * math.sin(math.pi * order.gamma))


@dataclass
class TransformVector:
    """Transform samples on a real spectral grid.

    coeffs has shape (n,) for the scalar modes and (n, 2) for the
    interior mode (components ordered unit-value, unit-slope).
    """
    lams: np.ndarray
    coeffs: np.ndarray
    mode: str
    normalization: str = "canonical"
    x0: float = None
    alpha: float = None


def _resolve_mode(model, mode):
    if mode != "auto":
        return mode
    if model.family == "free_fullline":
        return "interior"
    if model.left_endpoint == LEFT_REGULAR:
        return "boundary"
    return "singular"


def _principal_on(model, lam, xs, normalization, config):
    frames, _ = _principal_frames(model, complex(lam), xs, config=config)
    vals = np.array([f.psi for f in frames])
    dvals = np.array([f.dpsi for f in frames])
    if normalization == "entire":
        r = _entire_ratio(model)
        vals, dvals = vals / r, dvals / r
    elif normalization != "canonical":
        raise ModelError("unknown normalization %r" % (normalization,))
    return vals, dvals


def forward_transform(model, h, support, lams, mode="auto",
                      normalization="canonical", x0=None, alpha=None,
                      n_x=None, config=None):
    """Sample the generalized eigenfunction transform of h.

    h is a callable supported on [s0, s1] = support; lams is the real
    spectral grid.  The kernel solutions are integrated fresh at every
    grid point, so cost scales with len(lams).
    """
    lams = np.atleast_1d(np.asarray(lams, dtype=float))
    mode = _resolve_mode(model, mode)
    s0, s1 = float(support[0]), float(support[1])
    if mode == "singular" and s0 <= 0.0:
        s0 = max(s0, 1e-9)          # kernel vanishes like x^(g+1/2) anyway
    grid = transform_grid((s0, s1), float(np.max(lams)),
                          n_min=(n_x or 1201))
    hvals = _eval_on(h, grid)

    if mode == "singular":
        coeffs = np.empty(len(lams), dtype=complex)
        for i, lam in enumerate(lams):
            vals, _ = _principal_on(model, lam, grid, normalization, config)
            coeffs[i] = simpson(vals * hvals, x=grid)
        return TransformVector(lams, coeffs, mode, normalization)

    if mode == "boundary":
        if model.left_endpoint != LEFT_REGULAR:
            raise ModelError("boundary transform needs a regular endpoint")
        a = model.domain_start
        if alpha is None:
            alpha = model.alpha_default
        if s0 < a:
            raise DomainError("support extends past the endpoint")
        if s0 > a:
            approach = np.linspace(a, s0, 201)[:-1]
        else:
            approach = np.empty(0)
        xs_full = np.concatenate([approach, grid])
        coeffs = np.empty(len(lams), dtype=complex)
        for i, lam in enumerate(lams):
            phi, _ = fundamental_system_regular(model, alpha, complex(lam),
                                                xs_full, config=config)
            vals = np.array([f.psi for f in phi[len(approach):]])
            coeffs[i] = simpson(vals * hvals, x=grid)
        return TransformVector(lams, coeffs, mode, "canonical",
                               alpha=float(alpha))

    if mode == "interior":
        x0 = float(x0 if x0 is not None else model.x0)
        coeffs = np.empty((len(lams), 2), dtype=complex)
        for i, lam in enumerate(lams):
            phi, theta = fundamental_system_interior(model, x0, complex(lam),
                                                     grid, config=config)
            tv = np.array([f.psi for f in theta])
            pv = np.array([f.psi for f in phi])
            coeffs[i, 0] = simpson(tv * hvals, x=grid)
            coeffs[i, 1] = simpson(pv * hvals, x=grid)
        return TransformVector(lams, coeffs, mode, "canonical", x0=x0)

    raise ModelError("unknown transform mode %r" % (mode,))


def inverse_transform(model, tv, xs, density, config=None):
    """Reconstruct a function from transform samples and a density.

    density maps lam to the scalar spectral density for the scalar modes
    and to the triple (w00, w01, w11) for the interior mode.  The lam
    integral is Simpson on tv.lams, so the samples must already resolve
    the measure.
    """
    xs = np.asarray(xs, dtype=float)
    lams = tv.lams
    acc = np.zeros((len(lams), len(xs)), dtype=complex)
    if tv.mode in ("singular", "boundary"):
        w = np.array([float(density(l)) for l in lams])
        if tv.mode == "boundary":
            # the kernel is pinned to the endpoint, not to xs[0]
            a = model.domain_start
            if xs[0] > a:
                approach = np.linspace(a, xs[0], 201)[:-1]
            else:
                approach = np.empty(0)
            xs_full = np.concatenate([approach, xs])
        for i, lam in enumerate(lams):
            if tv.mode == "singular":
                vals, _ = _principal_on(model, lam, xs, tv.normalization,
                                        config)
            else:
                phi, _ = fundamental_system_regular(
                    model, tv.alpha, complex(lam), xs_full, config=config)
                vals = np.array([f.psi for f in phi[len(approach):]])
            acc[i] = vals * tv.coeffs[i] * w[i]
    elif tv.mode == "interior":
        for i, lam in enumerate(lams):
            w00, w01, w11 = density(lam)
            phi, theta = fundamental_system_interior(
                model, tv.x0, complex(lam), xs, config=config)
            tvv = np.array([f.psi for f in theta])
            pvv = np.array([f.psi for f in phi])
            c0, c1 = tv.coeffs[i]
            acc[i] = (tvv * (w00 * c0 + w01 * c1)
                      + pvv * (w01 * c0 + w11 * c1))
    else:
        raise ModelError("unknown transform mode %r" % (tv.mode,))
    return np.array([complex(simpson(acc[:, j], x=lams))
                     for j in range(len(xs))])


def parseval_check(model, h, support, lams, density, **kwargs):
    """Both sides of the norm identity: returns (lhs, rhs) with
    lhs = ||h||^2 over the support and rhs the spectral-side quadratic
    form against the given density (scalar or matrix, per mode)."""
    tv = forward_transform(model, h, support, lams, **kwargs)
    grid = transform_grid(support, float(np.max(tv.lams)))
    hv = _eval_on(h, grid)
    lhs = float(simpson(np.abs(hv) ** 2, x=grid))
    if tv.mode == "interior":
        vals = np.empty(len(tv.lams))
        for i, lam in enumerate(tv.lams):
            w00, w01, w11 = density(lam)
            c0, c1 = tv.coeffs[i]
            q = (w00 * abs(c0) ** 2 + 2.0 * w01 * (c0 * np.conj(c1)).real
                 + w11 * abs(c1) ** 2)
            vals[i] = float(np.real(q))
    else:
        vals = np.array([float(density(l)) * abs(c) ** 2
                         for l, c in zip(tv.lams, tv.coeffs)])
    rhs = float(simpson(vals, x=tv.lams))
    return lhs, rhs


def omega_density(model, lams, x0=None, alpha=None,
                  eps_schedule=EPS_SCHEDULE, config=None):
    """Densities of the 2x2 interior matrix measure at the points lams,
    extracted from boundary values of the matrix m-function."""
    x0 = float(x0 if x0 is not None else model.x0)

    def comp(k):
        return ac_density(
            lambda z: matrix_m(model, z, x0=x0, alpha=alpha,
                               config=config)[k],
            lams, eps_schedule)
    return comp(0), comp(1), comp(2)


def bridge_density(model, lams, x0=None, route="direct",
                   normalization="entire", alpha=None,
                   eps_schedule=EPS_SCHEDULE, config=None,
                   small_tol=1e-6):
    """Scalar spectral density recovered from the interior matrix measure.

    route "direct":    w00 / principal(lam, x0)^2
    route "projected": (m_minus * w01 + w00) / (val^2 + slope^2) with
                       m_minus = slope/val, using the off-diagonal entry.

    Both are exact identities; running them on independently extrapolated
    matrix entries makes their agreement a meaningful consistency check.
    Points where the principal solution at x0 is numerically tiny
    (relative size below small_tol) are rejected rather than divided by.
    """
    x0 = float(x0 if x0 is not None else model.x0)
    lams = np.atleast_1d(np.asarray(lams, dtype=float))
    w00, w01, _ = omega_density(model, lams, x0=x0, alpha=alpha,
                                eps_schedule=eps_schedule, config=config)
    out = np.empty(len(lams))
    for i, lam in enumerate(lams):
        vals, dvals = _principal_on(model, lam, np.array([x0]),
                                    normalization, config)
        v, d = vals[0].real, dvals[0].real
        if abs(v) < small_tol * math.hypot(v, d):
            raise DomainError("principal solution too small at the anchor "
                              "for lam=%g; move x0 off its zero" % lam)
        if route == "direct":
            out[i] = w00[i] / v ** 2
        elif route == "projected":
            out[i] = ((d / v) * w01[i] + w00[i]) / (v * v + d * d)
        else:
            raise ModelError("unknown bridge route %r" % (route,))
    return out


def stone_crosscheck(model, h, support, interval, weights=("one", "lambda"),
                     alpha=None, n_lam=21, n_support=401,
                     eps_schedule=(1e-2, 5e-3, 2.5e-3), config=None):
    """Spectral projection quadratic forms by two disjoint routes.

    For each weight F (F = 1 or F = lam) computes
    int_interval F(lam) d<E(lam) h, h> once through the transform side
    (|hat h|^2 against the extrapolated scalar density) and once through
    boundary values of the resolvent quadratic form.  Returns
    {weight: (transform_value, resolvent_value)}.

    Both routes share the same Simpson grid on the interval, so grid
    coarseness cancels in the comparison; the physics does not.
    """
    lo, hi = float(interval[0]), float(interval[1])
    if not lo < hi:
        raise DomainError("empty spectral interval")
    n_lam = int(n_lam) | 1
    lams = np.linspace(lo, hi, n_lam)

    # route 1: transform + extrapolated density
    if model.left_endpoint == LEFT_REGULAR:
        tv = forward_transform(model, h, support, lams, mode="boundary",
                               alpha=alpha, config=config)
        m_fun = lambda z: halfline_m(model, z, alpha=alpha, config=config)
    else:
        tv = forward_transform(model, h, support, lams, mode="singular",
                               config=config)
        m_fun = lambda z: singular_m(model, z, config=config)
    dens_t = ac_density(m_fun, lams)
    base_t = dens_t * np.abs(tv.coeffs) ** 2

    # route 2: resolvent boundary values
    s0, s1 = float(support[0]), float(support[1])
    xs = np.linspace(s0, s1, int(n_support) | 1)
    hv = _eval_on(h, xs)
    eps = tuple(eps_schedule)
    q = np.empty((len(eps), n_lam))
    for j, e in enumerate(eps):
        for i, lam in enumerate(lams):
            g = resolvent_apply(model, complex(lam, e), h, (s0, s1), xs,
                                alpha=alpha, config=config)
            q[j, i] = complex(simpson(g * np.conj(hv), x=xs)).imag / math.pi
    r1 = 2.0 * q[1:] - q[:-1]
    base_r = (4.0 * r1[1:] - r1[:-1]) / 3.0 if len(r1) >= 2 else r1
    base_r = base_r[-1]

    out = {}
    for w in weights:
        if w == "one":
            fw = np.ones_like(lams)
        elif w == "lambda":
            fw = lams
        else:
            raise ModelError("unknown weight %r" % (w,))
        out[w] = (float(simpson(fw * base_t, x=lams)),
                  float(simpson(fw * base_r, x=lams)))
    return out
