"""Spectral data from boundary values of m-functions.

Everything here treats an m-function as a black box z -> m(z) sampled
just above the real axis.  Densities, interval masses, and point masses
come from the offset families Im m(lambda + i eps) with a halving eps
schedule, combined by Richardson extrapolation; the weights assume the
exact factor-two halving, which is checked rather than trusted.

The same routines serve the classical Herglotz case and the generalized
(non-Herglotz) m-functions of strongly singular endpoints: nothing below
uses global Herglotz structure, only boundary behavior, which is exactly
what remains true in the singular class.
"""

import math
from dataclasses import dataclass, field

import numpy as np
from scipy.integrate import quad, simpson

from .errors import DomainError, ModelError

EPS_SCHEDULE = (1.0e-2, 5.0e-3, 2.5e-3, 1.25e-3)


def _checked_schedule(eps_schedule):
    eps = tuple(float(e) for e in eps_schedule)
    if len(eps) < 3:
        raise DomainError("need at least 3 offsets for extrapolation")
    for a, b in zip(eps, eps[1:]):
        if not (a > b > 0.0):
            raise DomainError("offsets must decrease toward 0")
        if abs(a / b - 2.0) > 1e-9:
            raise DomainError("offset schedule must halve exactly "
                              "(Richardson weights assume ratio 2)")
    return eps


def ac_density(m_fun, lams, eps_schedule=EPS_SCHEDULE, return_error=False):
    """Absolutely continuous spectral density at the points lams.

    Samples Im m(lambda + i eps)/pi down the eps schedule and removes the
    O(eps) and O(eps^2) boundary-layer errors by two Richardson stages.
    With return_error=True also returns the last-stage movement as an
    error estimate per point.
    """
    eps = _checked_schedule(eps_schedule)
    lams = np.atleast_1d(np.asarray(lams, dtype=float))
    rows = np.array([[m_fun(complex(l, e)).imag / math.pi for l in lams]
                     for e in eps])
    r1 = 2.0 * rows[1:] - rows[:-1]
    r2 = (4.0 * r1[1:] - r1[:-1]) / 3.0
    est = r2[-1]
    err = np.abs(r2[-1] - r2[-2]) if len(r2) >= 2 else np.abs(r2[-1] - r1[-1])
    if return_error:
        return est, err
    return est


def point_mass(m_fun, location, eps_schedule=EPS_SCHEDULE):
    """Mass of the spectral measure at a single point.

    eps * Im m(location + i eps) converges to the mass with an even error
    expansion, so the Richardson stages remove eps^2 and eps^4.  A clean
    zero (no atom) comes out at roundoff size, not exactly 0.
    """
    eps = _checked_schedule(eps_schedule)
    w = np.array([e * m_fun(complex(location, e)).imag for e in eps])
    r1 = (4.0 * w[1:] - w[:-1]) / 3.0
    if len(r1) >= 2:
        r2 = (16.0 * r1[1:] - r1[:-1]) / 15.0
        return float(r2[-1])
    return float(r1[-1])


def measure_interval(m_fun, lo, hi, eps_schedule=EPS_SCHEDULE,
                     quad_limit=200):
    """Spectral mass of the interval (lo, hi).

    Integrates Im m(. + i eps)/pi over the interval per offset and removes
    the O(eps) endpoint smearing by one Richardson stage.  Endpoints
    sitting exactly on an atom will split its mass; keep them off atoms.
    """
    eps = _checked_schedule(eps_schedule)
    if not lo < hi:
        raise DomainError("empty interval")
    vals = []
    for e in eps:
        re = quad(lambda l: m_fun(complex(l, e)).imag, lo, hi,
                  limit=quad_limit)[0]
        vals.append(re / math.pi)
    vals = np.asarray(vals)
    r1 = 2.0 * vals[1:] - vals[:-1]
    return float(r1[-1])


@dataclass
class SpectralMeasure:
    """Sampled spectral measure: a.c. density on a grid plus atoms."""
    grid: np.ndarray
    density: np.ndarray
    density_error: np.ndarray
    atoms: list = field(default_factory=list)     # (location, mass)

    def interval_mass(self, lo, hi):
        """Mass of (lo, hi) from the stored samples (Simpson on the grid
        restriction plus atoms strictly inside)."""
        mask = (self.grid >= lo) & (self.grid <= hi)
        if int(np.count_nonzero(mask)) < 3:
            raise DomainError("too few grid points inside the interval")
        total = float(simpson(self.density[mask], x=self.grid[mask]))
        for loc, mass in self.atoms:
            if lo < loc < hi:
                total += mass
        return total


def spectral_measure(m_fun, lmin, lmax, n=200, eps_schedule=EPS_SCHEDULE,
                     atom_candidates=(), atom_floor=1e-6):
    """Sample the spectral measure on [lmin, lmax] with n points.

    atom_candidates are locations (typically negative) probed with
    point_mass; masses below atom_floor are treated as numerically zero
    and dropped.
    """
    if not lmin < lmax:
        raise DomainError("need lmin < lmax")
    grid = np.linspace(lmin, lmax, int(n))
    dens, err = ac_density(m_fun, grid, eps_schedule, return_error=True)
    atoms = []
    for loc in atom_candidates:
        mass = point_mass(m_fun, loc, eps_schedule)
        if mass > atom_floor:
            atoms.append((float(loc), float(mass)))
    return SpectralMeasure(grid=grid, density=dens, density_error=err,
                           atoms=atoms)


def property_report(m_fun, lams, eps_schedule=EPS_SCHEDULE,
                    z_samples=(2.0 + 1.0j, 0.5 + 0.25j, -1.0 + 0.5j)):
    """Boundary-behavior scorecard for a (possibly generalized) m-function.

    Returns quantitative values; thresholds belong to the caller:
      conjugate_symmetry  max |m(conj z) - conj m(z)| over z_samples
      eps_m_scaled        max eps |m| at the smallest offset (boundedness)
      eps_re_trend        ratio of max |eps Re m| smallest/largest offset
                          (should drop ~ like eps if eps Re m -> 0)
      eps_im_min          min eps Im m at the smallest offset (>= -tol
                          means no negative mass)
      density_min         min extrapolated density over lams
    """
    eps = _checked_schedule(eps_schedule)
    lams = np.atleast_1d(np.asarray(lams, dtype=float))
    conj_err = 0.0
    for z in z_samples:
        z = complex(z)
        conj_err = max(conj_err,
                       abs(m_fun(z.conjugate()) - m_fun(z).conjugate()))
    first = np.array([m_fun(complex(l, eps[0])) for l in lams])
    last = np.array([m_fun(complex(l, eps[-1])) for l in lams])
    re_first = float(np.max(np.abs(eps[0] * first.real)))
    re_last = float(np.max(np.abs(eps[-1] * last.real)))
    dens = ac_density(m_fun, lams, eps_schedule)
    return {
        "conjugate_symmetry": float(conj_err),
        "eps_m_scaled": float(np.max(eps[-1] * np.abs(last))),
        "eps_re_trend": re_last / re_first if re_first > 0.0 else 0.0,
        "eps_im_min": float(np.min(eps[-1] * last.imag)),
        "density_min": float(np.min(dens)),
    }


def representation_residual(m_fun, z, density_fun, lam_hi, tail=None,
                            atoms=(), n=6000, lam_lo=1e-8):
    """Residual of the additive representation of a Herglotz function:

        m(z) = Re m(i) + sum_atoms + int [1/(l - z) - l/(1 + l^2)] w(l) dl

    with the density integral carried to lam_hi on a log grid and, when
    tail=(A, s) describes w(l) ~ A l^s beyond, closed asymptotic tail
    terms A z L^(s-1)/(1-s) + A (1+z^2) L^(s-2)/(2-s) appended.  A small
    residual certifies density, atoms, and normalization jointly.
    """
    z = complex(z)
    if z.imag == 0.0:
        raise DomainError("test point must be off the real axis")
    const = m_fun(1j).real
    grid = np.geomspace(lam_lo, lam_hi, int(n))
    w = np.asarray(density_fun(grid), dtype=float)
    integrand = w * (1.0 / (grid - z) - grid / (1.0 + grid * grid))
    # Simpson in log lambda: dl = l dln(l)
    val = complex(
        simpson(integrand.real * grid, x=np.log(grid))
        + 1j * simpson(integrand.imag * grid, x=np.log(grid)))
    for loc, mass in atoms:
        val += mass * (1.0 / (loc - z) - loc / (1.0 + loc * loc))
    if tail is not None:
        amp, s = float(tail[0]), float(tail[1])
        if s >= 1.0:
            raise DomainError("tail exponent must be below 1")
        val += amp * z * lam_hi ** (s - 1.0) / (1.0 - s)
        val += amp * (1.0 + z * z) * lam_hi ** (s - 2.0) / (2.0 - s)
    return abs(m_fun(z) - (const + val))
