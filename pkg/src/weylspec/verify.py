"""Self-checks against closed forms and cross-route consistency.

Each check returns a CheckResult whose parts are (label, measured, bound)
triples; a check passes when every measured value is within its bound.
Bounds are the contract, not aspirations: they are set where the methods
are expected to live, and a regression that pushes a value past one is a
real failure, not noise.

Checks come in suites (regular endpoint, singular endpoint, transforms,
measure extraction) plus the acceptance list used by the test suite and
the command-line verifier.
"""

import math
import time
from dataclasses import dataclass, field

import numpy as np

from . import herglotz, models, transform
from .mfunctions import (halfline_m, rotate_m, singular_m, weyl_l2_minus,
                         weyl_l2_plus)
from .singular import nonprincipal_companion, volterra_principal


@dataclass
class CheckResult:
    name: str
    passed: bool
    parts: list = field(default_factory=list)
    seconds: float = 0.0

    def line(self):
        status = "PASS" if self.passed else "FAIL"
        det = "; ".join("%s %.3e (bound %.1e)" % p for p in self.parts)
        return "%s %-26s %s  [%.1fs]" % (status, self.name, det,
                                         self.seconds)


def _finish(name, parts, t0):
    ok = all(m <= b for _, m, b in parts)
    return CheckResult(name=name, passed=ok, parts=parts,
                       seconds=time.time() - t0)


def check_free_m():
    """Half-line m-function for V = 0 against the closed form, plus a
    per-evaluation time budget."""
    t0 = time.time()
    model = models.free_halfline(alpha=0.0)
    zs = (2.0 + 1.0j, 1j, -1.0 + 0.5j, 9.0 + 0.1j)
    dev = max(abs(halfline_m(model, z) - models.free_m_alpha(z, 0.0))
              for z in zs)
    t1 = time.time()
    halfline_m(model, 3.0 + 0.7j)
    per_call = time.time() - t1
    return _finish("free-m-closed-form",
                   [("max deviation", dev, 1e-6),
                    ("seconds per call", per_call, 1.0)], t0)


def check_rotation():
    """Boundary-condition rotation of a computed m-function against the
    directly computed one at the rotated condition."""
    t0 = time.time()
    worst = 0.0
    cases = [(models.free_halfline(), 0.3, 0.8),
             (models.tabulated(np.linspace(0.0, 30.0, 600),
                               np.exp(-np.linspace(0.0, 30.0, 600))),
              0.0, 0.45)]
    for model, a0, a1 in cases:
        for z in (2.0 + 1.0j, -0.5 + 0.25j):
            rotated = rotate_m(halfline_m(model, z, alpha=a0), a1 - a0)
            direct = halfline_m(model, z, alpha=a1)
            worst = max(worst, abs(rotated - direct))
    return _finish("bc-rotation", [("max deviation", worst, 1e-8)], t0)


def check_weyl_identity():
    """Square integrals of the Weyl solutions against Im m / Im z on both
    sides of an interior reference point."""
    t0 = time.time()
    parts = []
    z = 1.0 + 1.0j
    free = models.free_halfline(alpha=0.0)
    for label, fn in (("free right", weyl_l2_plus),
                      ("free left", weyl_l2_minus)):
        got, want = fn(free, z, x0=1.0)
        parts.append((label, abs(got - want) / abs(want), 1e-4))
    bess = models.bessel(1.5)
    got, want = weyl_l2_plus(bess, z, x0=1.0)
    parts.append(("singular right", abs(got - want) / abs(want), 1e-4))
    got, want = weyl_l2_minus(bess, z, x0=1.0)
    parts.append(("singular left", abs(got - want) / abs(want), 1e-4))
    xs = np.linspace(0.0, 34.0, 700)
    tab = models.tabulated(xs, np.exp(-xs), alpha=0.2)
    got, want = weyl_l2_plus(tab, z, x0=1.0)
    parts.append(("decaying right", abs(got - want) / abs(want), 1e-4))
    return _finish("weyl-disc-identity", parts, t0)


def check_point_mass():
    """Eigenvalue mass below the continuum for the boundary condition
    that produces one, and its absence for one that does not."""
    t0 = time.time()
    withpole = models.free_halfline(alpha=math.pi / 4)
    mass = herglotz.point_mass(lambda z: halfline_m(withpole, z), -1.0)
    nopole = models.free_halfline(alpha=3 * math.pi / 4)
    ghost = herglotz.point_mass(lambda z: halfline_m(nopole, z), -1.0)
    return _finish("boundary-point-mass",
                   [("mass deviation", abs(mass - 4.0), 1e-3),
                    ("spurious mass", abs(ghost), 1e-3)], t0)


def check_singular_closed():
    """Generalized m-function of the pure inverse-square model against
    its closed form at non-integer orders."""
    t0 = time.time()
    worst = 0.0
    for g in (1.5, 2.5):
        model = models.bessel(g)
        for z in (2.0 + 1.0j, -1.0 + 0.5j, 0.3 + 0.2j):
            got = singular_m(model, z)
            want = models.bessel_singular_m(g, z)
            worst = max(worst, abs(got - want) / abs(want))
    return _finish("singular-m-closed-form",
                   [("max relative deviation", worst, 1e-5)], t0)


def check_integer_order():
    """Integer order, where the closed form carries a logarithm instead
    of a fractional power."""
    t0 = time.time()
    model = models.bessel(2.0)
    worst = 0.0
    for z in (-1.0 + 0.3j, 2.0 + 1.0j, 0.5 + 0.5j):
        got = singular_m(model, z)
        want = models.bessel_singular_m(2.0, z)
        worst = max(worst, abs(got - want) / (1.0 + abs(want)))
    return _finish("integer-order-limit",
                   [("max deviation", worst, 1e-4)], t0)


def check_density_inversion():
    """Spectral density extracted from boundary values of the computed
    generalized m-function against the closed density."""
    t0 = time.time()
    model = models.bessel(1.5)
    lams = np.array([0.5, 1.0, 2.0, 4.0])
    dens = herglotz.ac_density(lambda z: singular_m(model, z), lams)
    want = models.bessel_singular_density(1.5, lams)
    worst = float(np.max(np.abs(dens - want) / want))
    return _finish("density-inversion",
                   [("max relative deviation", worst, 1e-3)], t0)


def check_matrix_density():
    """Densities of the interior 2x2 matrix measure against closed forms,
    and the rank-one property of the extrapolated matrix."""
    t0 = time.time()
    model = models.bessel(1.5)
    lams = np.array([0.5, 1.0, 2.0, 4.0])
    w00, w01, w11 = transform.omega_density(model, lams, x0=1.0)
    closed = np.array([models.bessel_omega_density(1.5, l, 1.0)
                       for l in lams])
    err = max(float(np.max(np.abs(w00 - closed[:, 0]))),
              float(np.max(np.abs(w01 - closed[:, 1]))),
              float(np.max(np.abs(w11 - closed[:, 2]))))
    dets = np.abs(w00 * w11 - w01 ** 2)
    norms = w00 ** 2 + 2.0 * w01 ** 2 + w11 ** 2
    return _finish("matrix-measure-density",
                   [("max entry deviation", err, 1e-3),
                    ("rank-one defect", float(np.max(dets / norms)), 1e-8)],
                   t0)


def check_bridge():
    """Scalar density recovered from the matrix measure through the
    principal solution at the anchor: closed-form value and agreement of
    the two independent recovery routes."""
    t0 = time.time()
    model = models.bessel(1.5)
    lams = np.array([0.5, 1.0, 2.0, 4.0])
    direct = transform.bridge_density(model, lams, x0=1.0, route="direct")
    projected = transform.bridge_density(model, lams, x0=1.0,
                                         route="projected")
    target = 0.5 * lams ** 1.5
    return _finish(
        "matrix-scalar-bridge",
        [("closed-form deviation",
          float(np.max(np.abs(direct - target) / target)), 1e-3),
         ("route disagreement",
          float(np.max(np.abs(direct - projected) / np.abs(direct))), 1e-8)],
        t0)


def check_weber_parseval():
    """Norm identity for a transform pair known in closed form."""
    t0 = time.time()
    g = 1.5
    model = models.bessel(g)
    h, _, norm_sq = models.weber_transform_pair(g)
    lams = np.linspace(1e-6, 60.0, 241)
    lhs, rhs = transform.parseval_check(
        model, h, (0.0, 12.0), lams,
        density=lambda l: 0.5 * l ** g,
        mode="singular", normalization="entire")
    return _finish("weber-parseval",
                   [("lhs vs exact", abs(lhs - norm_sq), 1e-3),
                    ("rhs vs exact", abs(rhs - norm_sq), 1e-3),
                    ("two sides", abs(lhs - rhs), 1e-3)], t0)


def check_series_discipline():
    """Construction discipline for the perturbed singular model: the
    iteration's a-priori envelope really bounds its terms, the companion
    Wronskian holds, and probe points agree on the m-function."""
    t0 = time.time()
    vt = lambda x: np.exp(-x)
    model = models.perturbed_bessel(1.5, vt)
    z = 2.0 + 1.0j
    xs = [0.5, 1.0, 2.0]
    frames, diag = volterra_principal(1.5, vt, z, np.asarray(xs))
    mags = np.asarray(diag.term_magnitudes)
    bounds = np.asarray(diag.term_bounds)
    envelope_ratio = float(np.max(mags / bounds))
    anchor = frames[xs.index(1.0)]
    cframes = nonprincipal_companion(model, anchor, z, np.asarray(xs))
    wdev = max(abs(c.psi * f.dpsi - c.dpsi * f.psi - 1.0)
               for c, f in zip(cframes, frames))
    _, spread = singular_m(model, z, return_spread=True)
    return _finish("series-discipline",
                   [("envelope ratio", envelope_ratio, 1.0 + 1e-12),
                    ("companion wronskian", wdev, 1e-8),
                    ("probe spread", spread, 1e-6)], t0)


def check_projection_crosscheck():
    """Spectral projection quadratic forms through the transform side and
    through resolvent boundary values, on two intervals and two weights,
    for a regular and a strongly singular model."""
    t0 = time.time()
    parts = []
    cases = [
        ("free", models.free_halfline(alpha=0.0), (1.0, 2.0),
         lambda x: np.where((x >= 1) & (x <= 2),
                            np.sin(np.pi * (x - 1.0)) ** 2, 0.0)),
        ("singular", models.bessel(1.5), (0.5, 1.5),
         lambda x: np.where((x >= 0.5) & (x <= 1.5),
                            np.sin(np.pi * (x - 0.5)) ** 2, 0.0)),
    ]
    for label, model, support, h in cases:
        for interval in ((0.0, 1.0), (1.0, 4.0)):
            out = transform.stone_crosscheck(model, h, support, interval)
            for w, (ia, ib) in out.items():
                rel = abs(ia - ib) / max(abs(ia), abs(ib), 1e-30)
                parts.append(("%s (%g,%g] %s" % (label, *interval, w),
                              rel, 1e-3))
    parts.append(("seconds total", time.time() - t0, 60.0))
    return _finish("projection-crosscheck", parts, t0)


def check_boundary_properties():
    """Boundary-behavior scorecard of the generalized m-function: the
    structural facts that survive the loss of the Herglotz property."""
    t0 = time.time()
    model = models.bessel(1.5)
    rep = herglotz.property_report(
        lambda z: singular_m(model, z), np.array([0.5, 1.0, 2.0]))
    pert = models.perturbed_bessel(1.5, lambda x: np.exp(-x))
    conj_p = max(abs(singular_m(pert, np.conj(z))
                     - np.conj(singular_m(pert, z)))
                 for z in (2.0 + 1.0j, 0.5 + 0.25j))
    return _finish(
        "boundary-behavior",
        [("conjugate symmetry", rep["conjugate_symmetry"], 1e-8),
         ("perturbed conjugate symmetry", conj_p, 1e-8),
         ("scaled boundedness", rep["eps_m_scaled"], 0.1),
         ("scaled real trend", rep["eps_re_trend"], 0.3),
         ("negative mass", -rep["eps_im_min"], 1e-6),
         ("density negativity", -rep["density_min"], 1e-9)], t0)


def check_coupling_scaling():
    """Quadratic coupling-constant scaling of the generalized m-function
    and its density."""
    t0 = time.time()
    base = models.bessel(1.5)
    doubled = models.bessel(1.5, coupling=2.0)
    z = 2.0 + 1.0j
    ratio = singular_m(doubled, z) / singular_m(base, z)
    lams = np.array([2.0])
    d1 = herglotz.ac_density(lambda w: singular_m(base, w), lams)[0]
    d4 = herglotz.ac_density(lambda w: singular_m(doubled, w), lams)[0]
    return _finish("coupling-scaling",
                   [("m ratio vs 4", abs(ratio - 4.0), 1e-8),
                    ("density ratio vs 4", abs(d4 / d1 - 4.0), 1e-6)], t0)


def check_measure_samplers():
    """The measure-extraction samplers on closed-form m-functions, where
    every answer is known exactly."""
    t0 = time.time()
    a = math.pi / 4
    m0 = lambda z: models.free_m_alpha(z, 0.0)
    m4 = lambda z: models.free_m_alpha(z, a)
    lams = np.array([0.5, 1.0, 2.0, 4.0])
    dens = herglotz.ac_density(m0, lams)
    dev_d = float(np.max(np.abs(dens - np.sqrt(lams) / math.pi)))
    mass = herglotz.point_mass(m4, -1.0)
    got = herglotz.measure_interval(m0, 0.5, 2.0)
    want = (2.0 / (3 * math.pi)) * (2.0 ** 1.5 - 0.5 ** 1.5)
    r0 = herglotz.representation_residual(
        m0, 2.0 + 1.0j, lambda l: np.sqrt(l) / math.pi, 1e6,
        tail=(1.0 / math.pi, 0.5))
    r4 = herglotz.representation_residual(
        m4, 2.0 + 1.0j,
        lambda l: np.sqrt(l) / (math.pi * (np.cos(a) ** 2
                                           + l * np.sin(a) ** 2)),
        1e6, tail=(1.0 / (math.pi * math.sin(a) ** 2), -0.5),
        atoms=[(-1.0, 4.0)])
    return _finish("measure-samplers",
                   [("density deviation", dev_d, 1e-7),
                    ("point mass deviation", abs(mass - 4.0), 1e-9),
                    ("interval mass deviation", abs(got - want), 1e-6),
                    ("representation residual", r0, 1e-10),
                    ("representation with atom", r4, 1e-10)], t0)


ACCEPTANCE = (
    check_free_m,
    check_rotation,
    check_weyl_identity,
    check_point_mass,
    check_singular_closed,
    check_integer_order,
    check_density_inversion,
    check_matrix_density,
    check_bridge,
    check_weber_parseval,
    check_series_discipline,
    check_projection_crosscheck,
    check_boundary_properties,
    check_coupling_scaling,
)

SUITES = {
    "regular": (check_free_m, check_rotation, check_weyl_identity,
                check_point_mass),
    "singular": (check_singular_closed, check_integer_order,
                 check_density_inversion, check_series_discipline,
                 check_boundary_properties, check_coupling_scaling),
    "transforms": (check_matrix_density, check_bridge,
                   check_weber_parseval, check_projection_crosscheck),
    "herglotz": (check_measure_samplers,),
}


def run_suite(name):
    if name == "all":
        seen, out = set(), []
        for fns in SUITES.values():
            for fn in fns:
                if fn not in seen:
                    seen.add(fn)
                    out.append(fn())
        return out
    if name not in SUITES:
        raise KeyError("unknown suite %r" % (name,))
    return [fn() for fn in SUITES[name]]


def run_acceptance():
    return [fn() for fn in ACCEPTANCE]
