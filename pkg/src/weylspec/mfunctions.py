"""Weyl m-functions, Green's functions, and resolvent application.

Orientation: everything square-integrable at the right end is represented
by the Riccati logarithmic derivative of the decaying solution, started
from a far-field inverse-power tail and integrated inward; everything
tied to the left end comes from the boundary fundamental system (regular
endpoint) or the principal solution (strongly singular endpoint).
m-functions are then Wronskian ratios at the requested reference point.

The far-field placement is validated empirically: the start is doubled
until two consecutive starts agree, so a perturbation that still matters
at the first start only costs another doubling instead of a wrong answer.
"""

import math

import numpy as np

from .errors import (
    ConvergenceError,
    DomainError,
    InconsistencyError,
    ModelError,
    PoleError,
    RotationPoleSignal,
    SingularEndpointError,
)
from .ivp import (
    TAG_SINGULAR_PRINCIPAL,
    IntegratorConfig,
    SolutionFrame,
    fundamental_system_regular,
    inverse_square_tail_init,
    riccati_logderivative,
)
from .models import (
    LEFT_REGULAR,
    LEFT_SINGULAR,
    bessel_companion_values,
    bessel_principal_scale,
)
from .singular import (
    factorized_principal,
    nonprincipal_companion,
    volterra_principal,
)
from .specialfn import as_float_array, entire_bessel, gamma_real, sqrt_upper

_ACCEPT_ABS = 1.0e-8
_ACCEPT_REL = 1.0e-6
_B_CAP = 5200.0


def _far_start(z, x_target):
    rz = abs(sqrt_upper(complex(z)))
    b0 = max(24.0, 2.0 * x_target)
    if rz < 0.2:
        # tail series needs |sqrt(z)| b well above 1
        b0 = max(b0, min(200.0, 5.0 / max(rz, 0.025)))
    return b0


def riccati_weyl(model, z, x_target, config=None, keep_path=False, b0=None):
    """Logarithmic derivative at x_target of the solution decaying at
    +infinity, far field placed by doubling until stable.

    Returns the complex value, or the full inward path with keep_path
    (then the value is path.value).  Raises ConvergenceError when doubling
    the start still moves the answer at the cap.
    """
    z = complex(z)
    if x_target <= 0.0 and model.left_endpoint == LEFT_SINGULAR:
        raise DomainError("target must be inside (0, infinity)")
    c, p = model.tail
    b = b0 if b0 is not None else _far_start(z, x_target)
    prev = None
    result = None
    while b <= _B_CAP:
        if c != 0.0:
            init = inverse_square_tail_init(z, b, c, p)
        else:
            init = 1j * sqrt_upper(z)
        result = riccati_logderivative(model, z, b, x_target, init=init,
                                       config=config, keep_path=keep_path)
        if keep_path:
            val, result = result[0], result[1]
        else:
            val = result
        if prev is not None and abs(val - prev) <= max(
                _ACCEPT_ABS, _ACCEPT_REL * abs(val)):
            return result
        prev = val
        b *= 2.0
    raise ConvergenceError(
        "far-field start unstable up to b=%g (last move %.2e)"
        % (b / 2.0, abs(val - prev) if prev is not None else math.inf),
        achieved=abs(val - prev) if prev is not None else None)


def halfline_m(model, z, alpha=None, config=None):
    """Boundary m-function at a regular left endpoint with angle alpha:
    the decaying solution is psi = theta_alpha + m phi_alpha."""
    if model.left_endpoint != LEFT_REGULAR:
        raise SingularEndpointError(
            "boundary m-function needs a regular endpoint; use singular_m "
            "for the strongly singular class")
    if alpha is None:
        alpha = model.alpha_default
    mu = riccati_weyl(model, z, model.domain_start, config=config)
    ca, sa = math.cos(alpha), math.sin(alpha)
    den = ca + mu * sa
    # mu itself is only good to ~1e-10 relative, so a denominator below
    # that scale is numerically indistinguishable from an eigenvalue hit
    if abs(den) < 1e-9 * (abs(mu) + 1.0):
        raise PoleError("z is (numerically) an eigenvalue of the "
                        "alpha boundary problem")
    return (mu * ca - sa) / den


def rotate_m(m, delta):
    """m-function for the boundary angle alpha + delta from the one at
    alpha; a near-vanishing denominator is a genuine eigenvalue of the
    rotated problem and is signaled, not hidden."""
    m = complex(m)
    cd, sd = math.cos(delta), math.sin(delta)
    den = cd + sd * m
    if abs(den) < 1e-14 * (abs(m) + 1.0):
        raise RotationPoleSignal(
            "rotated boundary condition has an eigenvalue here "
            "(denominator %.2e)" % abs(den))
    return (-sd + cd * m) / den


def _principal_frames(model, z, xs, config=None, scaled=True):
    """Principal (left square-integrable) solution frames at xs for a
    strongly singular model, in canonical normalization when available."""
    if model.family == "bessel":
        # pure inverse-square: the closed special function already has a
        # large-argument path, where the iterated construction would need
        # O(|z| x^2) terms
        g = model.gamma.gamma
        mult = 2.0 ** g * gamma_real(1.0 + g)
        if scaled:
            mult *= bessel_principal_scale(model.gamma, model.coupling)
        frames = []
        for x in as_float_array(xs):
            v, d = entire_bessel(1, model.gamma, z, float(x),
                                 derivative=True)
            frames.append(SolutionFrame(float(x), mult * v, mult * d, z,
                                        TAG_SINGULAR_PRINCIPAL))
        return frames, None
    if model.family == "perturbed_bessel":
        frames, diag = volterra_principal(model.gamma, model.vtilde, z, xs)
        if scaled:
            s = bessel_principal_scale(model.gamma, model.coupling)
            frames = [SolutionFrame(f.x, s * f.psi, s * f.dpsi, f.z, f.tag)
                      for f in frames]
        return frames, diag
    if model.family == "factorized":
        return factorized_principal(model.fp, z, xs)
    raise ModelError("no principal-solution construction for family %r"
                     % model.family)


def _left_frames(model, z, xs, alpha=None, config=None):
    """Frames of the solution selected by the left end (boundary
    condition, principal solution, or full-line decay)."""
    xs = as_float_array(xs)
    if model.left_endpoint == LEFT_SINGULAR:
        frames, _ = _principal_frames(model, z, xs, config=config)
        return frames
    if model.family == "free_fullline":
        rz = sqrt_upper(complex(z))
        out = []
        for x in xs:
            v = np.exp(-1j * rz * x)
            out.append(SolutionFrame(float(x), complex(v), complex(-1j * rz * v),
                                     complex(z), "left_decaying"))
        return out
    if alpha is None:
        alpha = model.alpha_default
    grid = np.union1d(xs, [model.domain_start])
    phi, _ = fundamental_system_regular(model, alpha, z, grid, config=config)
    by_x = {fr.x: fr for fr in phi}
    return [by_x[float(x)] for x in xs]


def interior_m_pair(model, z, x0=None, alpha=None, config=None):
    """(m_-, m_+) at the interior reference point: logarithmic derivatives
    of the left-selected and right-decaying solutions."""
    x0 = float(x0 if x0 is not None else model.x0)
    if model.left_endpoint == LEFT_REGULAR and x0 <= model.domain_start:
        raise DomainError("reference point left of the domain")
    fr = _left_frames(model, z, [x0], alpha=alpha, config=config)[0]
    if abs(fr.psi) < 1e-280:
        raise PoleError("left solution vanishes at the reference point")
    m_minus = fr.dpsi / fr.psi
    m_plus = riccati_weyl(model, z, x0, config=config)
    return m_minus, m_plus


def matrix_m(model, z, x0=None, alpha=None, config=None):
    """Interior 2x2 m-matrix (M00, M01, M11) at the reference point,
    assembled from the pair (m_-, m_+)."""
    mm, mp = interior_m_pair(model, z, x0=x0, alpha=alpha, config=config)
    d = mm - mp
    if abs(d) < 1e-14 * (abs(mm) + abs(mp) + 1.0):
        raise PoleError("m_- and m_+ coincide; z looks like an eigenvalue")
    return 1.0 / d, 0.5 * (mm + mp) / d, mm * mp / d


def singular_m(model, z, probes=(0.5, 1.0, 2.0), route="wronskian",
               config=None, spread_tol=1.0e-6, return_spread=False):
    """Generalized m-function at a strongly singular left endpoint.

    Built as the Wronskian ratio of (companion, decaying) against
    (decaying, principal); the ratio is point-independent, so it is
    evaluated at several probe multiples of the reference point and the
    spread is a live consistency check (InconsistencyError beyond
    spread_tol).  route="ratio" rearranges the same data through the
    interior pair (m_-, m_+) instead of raw Wronskians.

    For the pure inverse-square family the companion is the closed
    entire one, so the result carries the canonical normalization; for
    perturbed and factorized models the companion is constructed
    numerically from the interior fundamental system anchored at x0.
    """
    if model.left_endpoint != LEFT_SINGULAR:
        raise SingularEndpointError("singular m-function needs a strongly "
                                    "singular endpoint")
    if route not in ("wronskian", "ratio"):
        raise ModelError("route must be 'wronskian' or 'ratio'")
    z = complex(z)
    x0 = float(model.x0)
    xs = sorted({float(p) * x0 for p in probes} | {x0})
    if xs[0] <= 0.0:
        raise DomainError("probe points must be positive")

    phis, _ = _principal_frames(model, z, xs, config=config)
    if model.family == "bessel":
        thetas = [bessel_companion_values(model.gamma, z, x,
                                          coupling=model.coupling)
                  for x in xs]
    else:
        anchor = phis[xs.index(x0)]
        cframes = nonprincipal_companion(model, anchor, z, xs, config=config)
        thetas = [(fr.psi, fr.dpsi) for fr in cframes]

    path = riccati_weyl(model, z, xs[0], config=config, keep_path=True)
    mus = path.evaluate(xs)

    vals = []
    for fr, (tv, td), mu in zip(phis, thetas, mus):
        pv, pd = fr.psi, fr.dpsi
        if route == "wronskian":
            den = pd - pv * mu
            if abs(den) < 1e-280:
                raise PoleError("decaying and principal solutions parallel "
                                "at a probe point")
            vals.append((tv * mu - td) / den)
        else:
            if abs(pv) < 1e-280:
                raise PoleError("principal solution vanishes at a probe")
            mminus = pd / pv
            if abs(mminus - mu) < 1e-280:
                raise PoleError("m_- equals the decaying log-derivative")
            vals.append(((tv / pv) * mu - td / pv) / (mminus - mu))

    scale = max(max(abs(v) for v in vals), 1.0)
    spread = max(abs(a - b) for a in vals for b in vals)
    if spread > spread_tol * scale:
        raise InconsistencyError(
            "probe values of the singular m-function disagree "
            "(spread %.2e at scale %.2e)" % (spread, scale),
            spread=spread / scale)
    if return_spread:
        return vals[xs.index(x0)], spread / scale
    return vals[xs.index(x0)]


def greens_function(model, z, x, y, alpha=None, config=None):
    """Green's function G(z; x, y): product of the left-selected and the
    right-decaying solutions over their Wronskian."""
    z = complex(z)
    lo, hi = (float(x), float(y)) if x <= y else (float(y), float(x))
    if model.left_endpoint != LEFT_REGULAR and lo <= 0.0:
        raise DomainError("arguments must be positive")
    frames = _left_frames(model, z, [lo, hi], alpha=alpha, config=config)
    mu = riccati_weyl(model, z, hi, config=config)
    den = frames[1].dpsi - mu * frames[1].psi     # W(psi_+, phi) at hi
    if abs(den) < 1e-14 * (abs(frames[1].dpsi) + abs(mu * frames[1].psi)):
        raise PoleError("Wronskian numerically zero: z at an eigenvalue")
    return frames[0].psi / den


def resolvent_apply(model, z, h, support, xs_out, n_nodes=2000, alpha=None,
                    config=None):
    """Apply (H - z)^-1 to a function h supported on [s0, s1] = support,
    returning values at xs_out.

    g(x) = [psi_+(x) int_{s0}^{x} phi h + phi(x) int_{x}^{s1} psi_+ h] / W
    with phi the left-selected solution; psi_+ is reconstructed from its
    logarithmic derivative as exp(int mu), which never overflows where the
    resolvent is wanted.
    """
    z = complex(z)
    s0, s1 = float(support[0]), float(support[1])
    if not s0 < s1:
        raise DomainError("support must be a nonempty interval")
    xs_out = as_float_array(xs_out)
    if model.left_endpoint == LEFT_SINGULAR and (s0 <= 0 or xs_out[0] <= 0):
        raise DomainError("support and outputs must be positive")

    lo_all = min(s0, float(xs_out[0]))
    hi_all = max(s1, float(xs_out[-1]))
    nodes = np.union1d(np.linspace(lo_all, hi_all, int(n_nodes)),
                       np.linspace(s0, s1, int(n_nodes)))
    nodes = np.union1d(nodes, xs_out)
    frames = _left_frames(model, z, nodes, alpha=alpha, config=config)
    phi = np.array([fr.psi for fr in frames])

    path = riccati_weyl(model, z, float(nodes[0]), config=config,
                        keep_path=True)
    mu = path.evaluate(nodes)
    if model.left_endpoint == LEFT_SINGULAR:
        # trapezoid in log x: mu ~ -c/x at the endpoint, so mu*x is flat
        # there and the rule stays exact even when a panel spans decades;
        # the plain trapezoid would put ~|mu[0]|*dx in the first exponent
        # step and silently flush psi to zero
        steps = 0.5 * (mu[1:] * nodes[1:] + mu[:-1] * nodes[:-1]) \
            * np.diff(np.log(nodes))
    else:
        steps = 0.5 * (mu[1:] + mu[:-1]) * np.diff(nodes)
    expo = np.concatenate([[0.0j], np.cumsum(steps)])
    psi = np.exp(expo)                            # psi_+(nodes[0]) = 1
    wr = frames[0].dpsi - mu[0] * frames[0].psi   # W(psi_+, phi)
    if abs(wr) < 1e-14 * (abs(frames[0].dpsi) + abs(mu[0] * frames[0].psi)):
        raise PoleError("Wronskian numerically zero: z at an eigenvalue")

    hv = np.asarray(h(nodes), dtype=complex)
    hv[(nodes < s0) | (nodes > s1)] = 0.0
    # s0 and s1 are nodes, so every panel is fully in or out of the
    # support; zeroing the outside panels keeps h's edges exact
    panel_in = (nodes[:-1] >= s0 - 1e-12) & (nodes[1:] <= s1 + 1e-12)

    def cumtrap(vals):
        seg = 0.5 * (vals[1:] + vals[:-1]) * np.diff(nodes)
        seg = np.where(panel_in, seg, 0.0)
        return np.concatenate([[0.0j], np.cumsum(seg)])

    i_lo = cumtrap(phi * hv)                      # int_{s0}^{x} phi h
    i_hi_all = cumtrap(psi * hv)
    i_hi = i_hi_all[-1] - i_hi_all                # int_{x}^{s1} psi_+ h
    g = (psi * i_lo + phi * i_hi) / wr

    idx = np.searchsorted(nodes, xs_out)
    return g[idx]


# ---------------------------------------------------------------------------
# local Weyl-disk identities (square-integrability made quantitative)

def weyl_l2_plus(model, z, x0=None, config=None, n_nodes=4000):
    """(integral, expected): int_{x0}^inf |psi_+|^2 with psi_+(x0) = 1
    against Im m_+(x0) / Im z; valid off the real axis."""
    z = complex(z)
    if z.imag == 0.0:
        raise DomainError("identity needs Im z != 0")
    x0 = float(x0 if x0 is not None else model.x0)
    path = riccati_weyl(model, z, x0, config=config, keep_path=True)
    b = path.segments[0][0]
    xs = np.linspace(x0, b, int(n_nodes))
    re_mu = np.real(path.evaluate(xs))
    cum = np.concatenate([[0.0], np.cumsum(
        (re_mu[1:] + re_mu[:-1]) * np.diff(xs))])   # 2 * int Re mu
    dens = np.exp(cum)
    integral = float(np.sum(0.5 * (dens[1:] + dens[:-1]) * np.diff(xs)))
    decay = 2.0 * sqrt_upper(z).imag
    integral += float(dens[-1]) / decay             # tail beyond b
    expected = path.value.imag / z.imag
    return integral, expected


def weyl_l2_minus(model, z, x0=None, alpha=None, config=None, n_nodes=3000):
    """(integral, expected): int_a^{x0} |psi_-|^2 with psi_-(x0) = 1
    against -Im m_-(x0) / Im z, psi_- the left-selected solution."""
    z = complex(z)
    if z.imag == 0.0:
        raise DomainError("identity needs Im z != 0")
    x0 = float(x0 if x0 is not None else model.x0)
    if model.left_endpoint == LEFT_REGULAR:
        xs = np.linspace(model.domain_start, x0, int(n_nodes))
        xs[0] = model.domain_start
    elif model.left_endpoint == LEFT_SINGULAR:
        xs = np.geomspace(x0 * 1e-8, x0, int(n_nodes))
    else:
        raise ModelError("full-line models have no left boundary integral")
    frames = _left_frames(model, z, xs, alpha=alpha, config=config)
    vals = np.array([fr.psi for fr in frames])
    last = frames[-1]
    dens = np.abs(vals) ** 2 / abs(last.psi) ** 2
    integral = float(np.sum(0.5 * (dens[1:] + dens[:-1]) * np.diff(xs)))
    if model.left_endpoint == LEFT_SINGULAR:
        # bottom sliver: |psi|^2 ~ x^(1+2g) type growth from zero
        integral += float(dens[0]) * xs[0] / 2.0
    m_minus = last.dpsi / last.psi
    expected = -m_minus.imag / z.imag
    return integral, expected
