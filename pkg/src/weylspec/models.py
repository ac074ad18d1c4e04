"""Built-in potential models and their closed-form reference data.

The inverse-square family (g^2 - 1/4)/x^2 is the exactly solvable anchor:
m-coefficients, spectral densities, the interior matrix measure and the
Green's function all have closed forms, collected here so that every
numerical route in the package can be tested end to end against one model.
The free potential plays the same role for a regular endpoint.

Models are lightweight descriptions (family tag, potential callable,
endpoint classification, far-field tail) consumed by the solver layers;
the closed forms are plain functions, kept separate so the numerical
routes never call them by accident.
"""

import cmath
import json
import math
import re
from dataclasses import dataclass, field

import numpy as np
from scipy.interpolate import PchipInterpolator

from .errors import DomainError, ModelError, PoleError
from .singular import FactorizedPotential
from .specialfn import (
    BesselOrder,
    bessel_j_real,
    bessel_y_integer,
    cut_log,
    cut_power,
    entire_bessel,
    entire_second_kind_integer,
    gamma_real,
    hankel_combination,
    sqrt_upper,
)

LEFT_REGULAR = "regular"
LEFT_SINGULAR = "strongly_singular"
LEFT_LIMIT_POINT = "limit_point"


@dataclass(frozen=True)
class PotentialModel:
    """A 1d Schrodinger potential with the metadata the solvers need.

    tail = (c, p) describes V ~ c * x^-p as x -> infinity and seeds the
    far-field start of the logarithmic-derivative integration; x0 is the
    default interior reference point for two-sided constructions.
    """
    name: str
    family: str
    evaluate: object                  # vectorized V(x)
    domain_start: float
    left_endpoint: str
    gamma: object = None              # BesselOrder for the singular families
    coupling: float = 1.0
    vtilde: object = None
    x0: float = 1.0
    tail: tuple = (0.0, 2)
    fp: object = None                 # FactorizedPotential when applicable
    alpha_default: float = 0.0


# ---------------------------------------------------------------------------
# expression parser for model files (no eval, fixed grammar)

_TOKEN = re.compile(
    r"\s*(?:(?P<num>(?:\d+\.?\d*|\.\d+)(?:[eE][+-]?\d+)?)"
    r"|(?P<name>[A-Za-z_][A-Za-z_0-9]*)"
    r"|(?P<op>\*\*|[-+*/^(),]))")

_FUNCS = {
    "exp": np.exp, "ln": np.log, "log": np.log, "sqrt": np.sqrt,
    "sin": np.sin, "cos": np.cos, "tan": np.tan,
    "sinh": np.sinh, "cosh": np.cosh, "tanh": np.tanh, "abs": np.abs,
}
_CONSTS = {"pi": math.pi, "e": math.e}


def _tokenize(text):
    out = []
    pos = 0
    while pos < len(text):
        m = _TOKEN.match(text, pos)
        if m is None or m.end() == pos:
            rest = text[pos:].strip()
            if not rest:
                break
            raise ModelError("cannot parse expression near %r" % rest[:12])
        if m.group("num") is not None:
            out.append(("num", float(m.group("num"))))
        elif m.group("name") is not None:
            out.append(("name", m.group("name")))
        else:
            op = m.group("op")
            out.append(("op", "^" if op == "**" else op))
        pos = m.end()
    out.append(("end", None))
    return out


class _ExprParser:
    def __init__(self, tokens):
        self.toks = tokens
        self.i = 0

    def peek(self):
        return self.toks[self.i]

    def take(self, kind=None, value=None):
        tok = self.toks[self.i]
        if kind is not None and tok[0] != kind:
            raise ModelError("expected %s, got %r" % (kind, tok[1]))
        if value is not None and tok[1] != value:
            raise ModelError("expected %r, got %r" % (value, tok[1]))
        self.i += 1
        return tok

    def parse(self):
        fn = self.sum_()
        if self.peek()[0] != "end":
            raise ModelError("trailing input in expression: %r"
                             % (self.peek()[1],))
        return fn

    def sum_(self):
        fn = self.product()
        while self.peek() == ("op", "+") or self.peek() == ("op", "-"):
            op = self.take()[1]
            rhs = self.product()
            lhs = fn
            if op == "+":
                fn = lambda x, a=lhs, b=rhs: a(x) + b(x)
            else:
                fn = lambda x, a=lhs, b=rhs: a(x) - b(x)
        return fn

    def product(self):
        fn = self.unary()
        while self.peek() == ("op", "*") or self.peek() == ("op", "/"):
            op = self.take()[1]
            rhs = self.unary()
            lhs = fn
            if op == "*":
                fn = lambda x, a=lhs, b=rhs: a(x) * b(x)
            else:
                fn = lambda x, a=lhs, b=rhs: a(x) / b(x)
        return fn

    def unary(self):
        if self.peek() == ("op", "-"):
            self.take()
            inner = self.unary()
            return lambda x, a=inner: -a(x)
        if self.peek() == ("op", "+"):
            self.take()
            return self.unary()
        return self.power()

    def power(self):
        base = self.atom()
        if self.peek() == ("op", "^"):
            self.take()
            expo = self.unary()       # right associative, unary minus ok
            return lambda x, a=base, b=expo: a(x) ** b(x)
        return base

    def atom(self):
        kind, value = self.peek()
        if kind == "num":
            self.take()
            return lambda x, v=value: np.full_like(np.asarray(x, float), v)
        if kind == "name":
            self.take()
            if value == "x":
                return lambda x: np.asarray(x, dtype=float)
            if value in _CONSTS:
                v = _CONSTS[value]
                return lambda x, v=v: np.full_like(np.asarray(x, float), v)
            if value in _FUNCS:
                f = _FUNCS[value]
                self.take("op", "(")
                inner = self.sum_()
                self.take("op", ")")
                return lambda x, f=f, a=inner: f(a(x))
            raise ModelError("unknown name %r in expression" % value)
        if (kind, value) == ("op", "("):
            self.take()
            inner = self.sum_()
            self.take("op", ")")
            return inner
        raise ModelError("unexpected token %r" % (value,))


def parse_expression(text):
    """Compile an arithmetic expression in x into a vectorized callable.

    Supported: numbers, x, pi, e, + - * / ^ (or **), parentheses, and
    exp ln log sqrt sin cos tan sinh cosh tanh abs.
    """
    if not isinstance(text, str) or not text.strip():
        raise ModelError("expression must be a nonempty string")
    return _ExprParser(_tokenize(text)).parse()


# ---------------------------------------------------------------------------
# model builders

def _as_vtilde(vtilde):
    if vtilde is None or callable(vtilde):
        return vtilde
    if isinstance(vtilde, str):
        return parse_expression(vtilde)
    raise ModelError("vtilde must be callable, an expression string, or None")


def free_halfline(alpha=0.0, name="free"):
    """V = 0 on (0, inf) with a regular boundary condition at 0."""
    return PotentialModel(
        name=name, family="free",
        evaluate=lambda x: np.zeros_like(np.asarray(x, dtype=float)),
        domain_start=0.0, left_endpoint=LEFT_REGULAR,
        alpha_default=float(alpha))


def free_fullline(name="free_fullline"):
    """V = 0 on the whole line; both ends limit point."""
    return PotentialModel(
        name=name, family="free_fullline",
        evaluate=lambda x: np.zeros_like(np.asarray(x, dtype=float)),
        domain_start=-math.inf, left_endpoint=LEFT_LIMIT_POINT)


def bessel(gamma, coupling=1.0, x0=1.0, name=None):
    """V = (g^2 - 1/4)/x^2, strongly singular at 0 for g >= 1.

    coupling rescales the normalization of the principal solution (value
    1/coupling times the canonical one), which scales the singular
    m-function and its spectral measure by coupling^2.
    """
    order = gamma if isinstance(gamma, BesselOrder) else BesselOrder(gamma)
    cg = order.gamma ** 2 - 0.25
    if coupling <= 0.0:
        raise ModelError("coupling must be positive")

    def ev(x):
        xa = np.asarray(x, dtype=float)
        if np.any(xa <= 0.0):
            raise DomainError("potential evaluated at x <= 0")
        return cg / (xa * xa)

    return PotentialModel(
        name=name or ("bessel_g%g" % order.gamma), family="bessel",
        evaluate=ev, domain_start=0.0, left_endpoint=LEFT_SINGULAR,
        gamma=order, coupling=float(coupling), x0=float(x0), tail=(cg, 2))


def perturbed_bessel(gamma, vtilde, coupling=1.0, x0=1.0, name=None):
    """V = (g^2 - 1/4)/x^2 + vtilde(x) with vtilde integrable against x
    near 0 and decaying faster than x^-2 at infinity."""
    order = gamma if isinstance(gamma, BesselOrder) else BesselOrder(gamma)
    cg = order.gamma ** 2 - 0.25
    vt = _as_vtilde(vtilde)
    if vt is None:
        raise ModelError("perturbed model needs a perturbation; "
                         "use the pure model otherwise")

    def ev(x):
        xa = np.asarray(x, dtype=float)
        if np.any(xa <= 0.0):
            raise DomainError("potential evaluated at x <= 0")
        return cg / (xa * xa) + np.asarray(vt(xa), dtype=float)

    return PotentialModel(
        name=name or ("perturbed_bessel_g%g" % order.gamma),
        family="perturbed_bessel", evaluate=ev, domain_start=0.0,
        left_endpoint=LEFT_SINGULAR, gamma=order, coupling=float(coupling),
        vtilde=vt, x0=float(x0), tail=(cg, 2))


def inverse_cube(x0=1.0, name="inverse_cube"):
    """V = 1/x^3: steeper than inverse square, handled through the
    factorization f = x^(3/4) (so f''/f + f^-4 reproduces 1/x^3 up to an
    inverse-square remainder carried as the perturbation)."""
    fp = FactorizedPotential(
        f=lambda x: np.asarray(x, dtype=float) ** 0.75,
        fprime=lambda x: 0.75 * np.asarray(x, dtype=float) ** -0.25,
        fsecond=lambda x: -(3.0 / 16.0) * np.asarray(x, dtype=float) ** -1.25,
        vtilde=lambda x: (3.0 / 16.0) * np.asarray(x, dtype=float) ** -2.0,
        x0=float(x0))

    def ev(x):
        xa = np.asarray(x, dtype=float)
        if np.any(xa <= 0.0):
            raise DomainError("potential evaluated at x <= 0")
        return xa ** -3.0

    return PotentialModel(
        name=name, family="factorized", evaluate=ev, domain_start=0.0,
        left_endpoint=LEFT_SINGULAR, x0=float(x0), tail=(1.0, 3), fp=fp)


def factorized(f, fprime, fsecond, vtilde=None, x0=1.0, tail=(0.0, 2),
               name="factorized"):
    """General factorization-defined singular model; see
    singular.FactorizedPotential for the admissibility checks."""
    fp = FactorizedPotential(f=f, fprime=fprime, fsecond=fsecond,
                             vtilde=_as_vtilde(vtilde), x0=float(x0))
    return PotentialModel(
        name=name, family="factorized", evaluate=fp.evaluate,
        domain_start=0.0, left_endpoint=LEFT_SINGULAR, x0=float(x0),
        tail=tuple(tail), fp=fp)


def tabulated(xs, vs, alpha=0.0, name="tabulated"):
    """Potential given by samples, monotone-cubic interpolated, zero
    beyond the last sample; regular endpoint at the first sample."""
    xs = np.asarray(xs, dtype=float)
    vs = np.asarray(vs, dtype=float)
    if xs.ndim != 1 or xs.shape != vs.shape or xs.size < 4:
        raise ModelError("need matching 1d arrays with at least 4 samples")
    if np.any(np.diff(xs) <= 0.0):
        raise ModelError("sample points must be strictly increasing")
    interp = PchipInterpolator(xs, vs, extrapolate=False)
    lo, hi = float(xs[0]), float(xs[-1])

    def ev(x):
        xa = np.asarray(x, dtype=float)
        if np.any(xa < lo - 1e-9):
            raise DomainError("potential evaluated left of the domain")
        out = np.where(xa > hi, 0.0, interp(np.clip(xa, lo, hi)))
        return np.asarray(out, dtype=float)

    return PotentialModel(
        name=name, family="tabulated", evaluate=ev, domain_start=lo,
        left_endpoint=LEFT_REGULAR, x0=max(1.0, lo + 1.0),
        alpha_default=float(alpha))


MODEL_FAMILIES = {
    "free": free_halfline,
    "free_fullline": free_fullline,
    "bessel": bessel,
    "perturbed_bessel": perturbed_bessel,
    "inverse_cube": inverse_cube,
    "tabulated": tabulated,
}


def build_model(family, **params):
    if family not in MODEL_FAMILIES:
        raise ModelError("unknown model family %r (known: %s)"
                         % (family, ", ".join(sorted(MODEL_FAMILIES))))
    if "C" in params:                  # accepted alias
        params["coupling"] = params.pop("C")
    try:
        return MODEL_FAMILIES[family](**params)
    except TypeError as exc:
        raise ModelError("bad parameters for %r: %s" % (family, exc))


def load_model_file(path):
    """Build a model from a JSON file: {"family": ..., parameters...}.

    vtilde may be an expression string in x; tabulated models pass xs/vs
    arrays.  Unknown keys are rejected rather than ignored.
    """
    with open(path) as fh:
        try:
            data = json.load(fh)
        except ValueError as exc:
            raise ModelError("model file is not valid JSON: %s" % exc)
    if not isinstance(data, dict) or "family" not in data:
        raise ModelError('model file needs a "family" key')
    family = data.pop("family")
    return build_model(family, **data)


# ---------------------------------------------------------------------------
# closed forms: free potential, regular endpoint at 0

def free_m_alpha(z, alpha=0.0):
    """Half-line m-function of V = 0 with boundary angle alpha at 0."""
    rz = sqrt_upper(complex(z))
    ca, sa = math.cos(alpha), math.sin(alpha)
    den = ca + 1j * rz * sa
    # relative guard: this close to the eigenvalue the quotient has lost
    # its digits to cancellation and a reference value would be noise
    if abs(den) < 1e-13 * max(abs(ca), abs(rz) * abs(sa)):
        raise PoleError("z is the boundary-condition eigenvalue")
    return (1j * rz * ca - sa) / den


def free_density_alpha(lam, alpha=0.0):
    """Spectral density of the free half line at lambda > 0."""
    la = np.asarray(lam, dtype=float)
    if np.any(la <= 0.0):
        raise DomainError("density is for lambda > 0")
    ca, sa = math.cos(alpha), math.sin(alpha)
    return np.sqrt(la) / (math.pi * (ca * ca + la * sa * sa))


def free_point_mass(alpha):
    """(location, mass) of the negative eigenvalue of the free half line,
    or None: present exactly when cot(alpha) > 0."""
    sa, ca = math.sin(alpha), math.cos(alpha)
    if abs(sa) < 1e-15 or ca / sa <= 0.0:
        return None
    cot = ca / sa
    return -cot * cot, 2.0 * cot / (sa * sa)


def free_greens(z, x, y, alpha=0.0):
    """Green's function of the free half line with boundary angle alpha."""
    z = complex(z)
    rz = sqrt_upper(z)
    lo, hi = (x, y) if x <= y else (y, x)
    if lo <= 0.0:
        raise DomainError("arguments must be positive")
    ca, sa = math.cos(alpha), math.sin(alpha)
    phi = -sa * cmath.cos(rz * lo) + ca * cmath.sin(rz * lo) / rz
    dphi = sa * rz * cmath.sin(rz * lo) + ca * cmath.cos(rz * lo)
    psi = cmath.exp(1j * rz * hi)
    # W(psi_+, phi) is x-free; evaluate where both are in hand
    psi_lo = cmath.exp(1j * rz * lo)
    wr = psi_lo * dphi - 1j * rz * psi_lo * phi
    return phi * psi / wr


def free_m_matrix(z):
    """Interior 2x2 m-matrix of the full-line free operator as a tuple
    (M00, M01, M11); the reference point drops out by translation."""
    rz = sqrt_upper(complex(z))
    return 1j / (2.0 * rz), 0.0j, 1j * rz / 2.0


# ---------------------------------------------------------------------------
# closed forms: inverse-square family

def bessel_m_interior(gamma, z, x0=1.0):
    """(m_-, m_+) at the interior reference x0 for the pure model.

    m_- is the logarithmic x-derivative of the solution vanishing at 0,
    m_+ that of the decaying solution; both via the package's own special
    functions, so only useful as a semi-closed form off the cut.
    """
    order = gamma if isinstance(gamma, BesselOrder) else BesselOrder(gamma)
    v, dv = entire_bessel(+1, order, complex(z), float(x0), derivative=True)
    if v == 0:
        raise PoleError("interior reference hits a zero of the principal "
                        "solution")
    hv, hdv = hankel_combination(order, complex(z), float(x0),
                                 derivative=True)
    return dv / v, hdv / hv


def bessel_singular_m(gamma, z, coupling=1.0, limit_from_above=True):
    """Closed form of the singular m-function of the pure inverse-square
    model, canonical principal-solution normalization times coupling."""
    order = gamma if isinstance(gamma, BesselOrder) else BesselOrder(gamma)
    z = complex(z)
    c2 = float(coupling) ** 2
    if order.is_integer:
        n = order.n
        lg = cut_log(z, limit_from_above=limit_from_above)
        return c2 * (2.0 / math.pi) * z ** n * (1j - lg / math.pi)
    g = order.gamma
    zp = cut_power(z, g, limit_from_above=limit_from_above)
    return (-c2 * (2.0 / math.pi) * math.sin(math.pi * g)
            * cmath.exp(-1j * math.pi * g) * zp)


def bessel_singular_density(gamma, lam, coupling=1.0):
    """Spectral density of the singular m-function at lambda > 0."""
    order = gamma if isinstance(gamma, BesselOrder) else BesselOrder(gamma)
    la = np.asarray(lam, dtype=float)
    if np.any(la <= 0.0):
        raise DomainError("density is for lambda > 0")
    c2 = float(coupling) ** 2
    if order.is_integer:
        return c2 * (2.0 / math.pi ** 2) * la ** order.n
    g = order.gamma
    return c2 * (2.0 / math.pi ** 2) * math.sin(math.pi * g) ** 2 * la ** g


def bessel_omega_density(gamma, lam, x0=1.0):
    """Densities (w00, w01, w11) of the interior matrix measure at
    lambda > 0; the matrix has rank one, direction (1, m_-(lambda))."""
    order = gamma if isinstance(gamma, BesselOrder) else BesselOrder(gamma)
    lam = float(lam)
    if lam <= 0.0:
        raise DomainError("density is for lambda > 0")
    x0 = float(x0)
    rl = math.sqrt(lam)
    j, jd = bessel_j_real(order.gamma, rl * x0, derivative=True)
    w00 = 0.5 * x0 * j * j
    w01 = 0.25 * (j * j + 2.0 * x0 * rl * j * jd)
    w11 = (j + 2.0 * x0 * rl * jd) ** 2 / (8.0 * x0)
    return w00, w01, w11


def bessel_greens(gamma, z, x, y):
    """Green's function of the pure inverse-square model on (0, inf)."""
    order = gamma if isinstance(gamma, BesselOrder) else BesselOrder(gamma)
    z = complex(z)
    lo, hi = (x, y) if x <= y else (y, x)
    if lo <= 0.0:
        raise DomainError("arguments must be positive")
    jl = (cut_power(z, 0.5 * order.gamma)
          * entire_bessel(+1, order, z, float(lo)))
    hv = hankel_combination(order, z, float(hi))
    return 0.5j * math.pi * jl * hv


def bessel_principal_scale(gamma, coupling=1.0):
    """Constant mapping the iteration-normalized principal solution
    (leading term exactly x^(1/2+g)) to the canonical normalization that
    the closed-form singular m-function refers to."""
    order = gamma if isinstance(gamma, BesselOrder) else BesselOrder(gamma)
    g = order.gamma
    if order.is_integer:
        base = math.pi / (2.0 ** (order.n + 1) * gamma_real(order.n + 1.0))
    else:
        base = math.pi / (2.0 * math.sin(math.pi * g)
                          * 2.0 ** g * gamma_real(1.0 + g))
    return base / float(coupling)


def bessel_companion_values(gamma, z, x0=1.0, coupling=1.0):
    """(value, derivative) at x0 of the canonical companion solution,
    unit Wronskian against the canonically normalized principal one."""
    order = gamma if isinstance(gamma, BesselOrder) else BesselOrder(gamma)
    z = complex(z)
    if order.is_integer:
        tv, td = entire_second_kind_integer(order.n, z, float(x0),
                                            derivative=True)
    else:
        tv, td = entire_bessel(-1, order, z, float(x0), derivative=True)
    c = float(coupling)
    return c * tv, c * td


def weber_transform_pair(gamma):
    """A closed transform pair for the pure model: h with hat h known.

    h(x) = x^(g + 1/2) exp(-x^2/2) has transform exp(-lambda/2) against
    the canonical entire weight, and both sides of the Parseval identity
    equal Gamma(g + 1)/2.
    """
    order = gamma if isinstance(gamma, BesselOrder) else BesselOrder(gamma)
    g = order.gamma

    def h(x):
        xa = np.asarray(x, dtype=float)
        return xa ** (g + 0.5) * np.exp(-0.5 * xa * xa)

    def hhat(lam):
        return np.exp(-0.5 * np.asarray(lam, dtype=float))

    norm_sq = 0.5 * gamma_real(g + 1.0)
    return h, hhat, norm_sq
