"""Command-line interface.

Subcommands: mfun, density, transform, green, resolvent, verify.
Exit codes: 0 success, 1 verification failure, 2 usage or model problem,
3 numerical nonconvergence.

Complex values are rendered per format: CSV splits them into re_/im_
columns, JSON nests {"re": ..., "im": ...}, text prints a+bi.
"""

import argparse
import csv
import inspect
import io
import json
import sys

import numpy as np

from . import herglotz, models, transform, verify
from .errors import (ConvergenceError, DegenerateReferenceError, DomainError,
                     InconsistencyError, ModelError, OverflowGuardError,
                     ParsevalViolationError, PoleCrossingError,
                     RotationPoleSignal, UnsupportedRegimeError,
                     WeylspecError)
from .mfunctions import (greens_function, halfline_m, resolvent_apply,
                         singular_m)
from .models import LEFT_SINGULAR, parse_expression

_USAGE_ERRORS = (ModelError, DomainError, DegenerateReferenceError)


def _parse_complex(text):
    try:
        return complex(text.strip().replace("i", "j"))
    except ValueError:
        raise ModelError("cannot parse complex number %r "
                         "(expected forms like 2, 1.5+0.5i)" % (text,))


def _parse_linspace(part):
    bits = part.split(":")
    if len(bits) != 3:
        raise ModelError("grid spec must be min:max:count, got %r" % (part,))
    lo, hi, n = float(bits[0]), float(bits[1]), int(bits[2])
    if n < 1:
        raise ModelError("grid needs at least one point")
    return np.linspace(lo, hi, n)


def _parse_zgrid(spec):
    """min:max:n for real values; two specs joined by 'x' for a
    rectangular complex grid (real part x imaginary part)."""
    parts = [p.strip() for p in spec.split("x")]
    if len(parts) == 1:
        return _parse_linspace(parts[0]).astype(complex)
    if len(parts) == 2:
        res = _parse_linspace(parts[0])
        ims = _parse_linspace(parts[1])
        return np.array([complex(r, i) for i in ims for r in res])
    raise ModelError("at most one 'x' separator in a grid spec")


def _parse_pair(text, what):
    bits = text.split(",")
    if len(bits) != 2:
        raise ModelError("%s must be two comma-separated numbers" % (what,))
    return float(bits[0]), float(bits[1])


def _parse_eps(text):
    return tuple(float(b) for b in text.split(","))


def _build_model(args):
    if getattr(args, "model_file", None):
        return models.load_model_file(args.model_file)
    family = getattr(args, "model", None)
    if not family:
        raise ModelError("no model given; use --model or --model-file")
    params = {}
    if getattr(args, "gamma", None) is not None:
        params["gamma"] = args.gamma
    if getattr(args, "coupling", None) is not None:
        params["C"] = args.coupling
    if getattr(args, "vtilde", None) is not None:
        params["vtilde"] = args.vtilde
    # alpha and x0 double as per-command options; the model builder gets
    # them only when it has such a parameter (unknown families fall
    # through so build_model can report them)
    builder = models.MODEL_FAMILIES.get(family)
    accepted = set(inspect.signature(builder).parameters) if builder else ()
    if getattr(args, "alpha", None) is not None and "alpha" in accepted:
        params["alpha"] = args.alpha
    if getattr(args, "x0", None) is not None and "x0" in accepted:
        params["x0"] = args.x0
    return models.build_model(family, **params)


def _fmt_c(c):
    return "%.12g%+.12gi" % (c.real, c.imag)


def _emit(rows, fields, args):
    """rows: list of dicts name -> float | complex."""
    fmt = args.format
    buf = io.StringIO()
    if fmt == "csv":
        cols = []
        for f in fields:
            if rows and isinstance(rows[0][f], complex):
                cols.extend(["re_" + f, "im_" + f])
            else:
                cols.append(f)
        w = csv.DictWriter(buf, fieldnames=cols)
        w.writeheader()
        for row in rows:
            flat = {}
            for f in fields:
                v = row[f]
                if isinstance(v, complex):
                    flat["re_" + f] = "%.12g" % v.real
                    flat["im_" + f] = "%.12g" % v.imag
                else:
                    flat[f] = "%.12g" % v
            w.writerow(flat)
    elif fmt == "json":
        out = []
        for row in rows:
            rec = {}
            for f in fields:
                v = row[f]
                rec[f] = ({"re": v.real, "im": v.imag}
                          if isinstance(v, complex) else v)
            out.append(rec)
        json.dump(out, buf, indent=2)
        buf.write("\n")
    elif fmt == "text":
        buf.write("  ".join(fields) + "\n")
        for row in rows:
            cells = [_fmt_c(row[f]) if isinstance(row[f], complex)
                     else "%.12g" % row[f] for f in fields]
            buf.write("  ".join(cells) + "\n")
    else:
        raise ModelError("unknown format %r" % (fmt,))
    text = buf.getvalue()
    if args.out:
        with open(args.out, "w") as fh:
            fh.write(text)
    else:
        sys.stdout.write(text)


def cmd_mfun(args):
    model = _build_model(args)
    if args.z is not None:
        zs = [_parse_complex(args.z)]
    elif args.z_grid is not None:
        zs = list(_parse_zgrid(args.z_grid))
    else:
        raise ModelError("mfun needs --z or --z-grid")
    rows = []
    for z in zs:
        z = complex(z)
        if model.left_endpoint == LEFT_SINGULAR:
            m, err = singular_m(model, z, return_spread=True)
        else:
            m = halfline_m(model, z, alpha=args.alpha)
            # far-field doubling acceptance bound, not a measured residual
            err = max(1e-8, 1e-6 * abs(m))
        rows.append({"z": z, "m": m, "err": float(err)})
    _emit(rows, ["z", "m", "err"], args)
    return 0


def cmd_density(args):
    model = _build_model(args)
    lams = np.linspace(args.lmin, args.lmax, args.n)
    eps = _parse_eps(args.eps_schedule)
    if args.kind == "scalar":
        if model.left_endpoint == LEFT_SINGULAR:
            m_fun = lambda z: singular_m(model, z)
        elif model.family == "free_fullline":
            raise ModelError("full-line model has no scalar density; "
                             "use --kind matrix")
        else:
            m_fun = lambda z: halfline_m(model, z, alpha=args.alpha)
        dens = herglotz.ac_density(m_fun, lams, eps)
        rows = [{"lambda": float(l), "rho": float(d)}
                for l, d in zip(lams, dens)]
        _emit(rows, ["lambda", "rho"], args)
    else:
        w00, w01, w11 = transform.omega_density(
            model, lams, x0=args.x0, alpha=args.alpha, eps_schedule=eps)
        rows = [{"lambda": float(l), "w00": float(a), "w01": float(b),
                 "w11": float(c), "det": float(a * c - b * b)}
                for l, a, b, c in zip(lams, w00, w01, w11)]
        _emit(rows, ["lambda", "w00", "w01", "w11", "det"], args)
    return 0


def cmd_transform(args):
    model = _build_model(args)
    h = parse_expression(args.h)
    support = _parse_pair(args.support, "--support")
    lams = np.linspace(args.lmin, args.lmax, args.n)
    tv = transform.forward_transform(model, h, support, lams,
                                     mode=args.mode, x0=args.x0,
                                     alpha=args.alpha)
    if tv.coeffs.ndim == 1:
        rows = [{"lambda": float(l), "coeff": complex(c)}
                for l, c in zip(tv.lams, tv.coeffs)]
        _emit(rows, ["lambda", "coeff"], args)
    else:
        rows = [{"lambda": float(l), "coeff0": complex(c0),
                 "coeff1": complex(c1)}
                for l, (c0, c1) in zip(tv.lams, tv.coeffs)]
        _emit(rows, ["lambda", "coeff0", "coeff1"], args)
    return 0


def cmd_green(args):
    model = _build_model(args)
    z = _parse_complex(args.z)
    if args.x_grid is not None:
        if args.y is None:
            raise ModelError("--x-grid needs a fixed --y")
        xs = _parse_linspace(args.x_grid)
        ys = [args.y] * len(xs)
    elif args.x is not None and args.y is not None:
        xs, ys = [args.x], [args.y]
    else:
        raise ModelError("green needs --x and --y, or --x-grid with --y")
    rows = [{"x": float(x), "y": float(y),
             "g": complex(greens_function(model, z, x, y, alpha=args.alpha))}
            for x, y in zip(xs, ys)]
    _emit(rows, ["x", "y", "g"], args)
    return 0


def cmd_resolvent(args):
    model = _build_model(args)
    z = _parse_complex(args.z)
    h = parse_expression(args.h)
    support = _parse_pair(args.support, "--support")
    xs = _parse_linspace(args.x_grid)
    g = resolvent_apply(model, z, h, support, xs, alpha=args.alpha)
    rows = [{"x": float(x), "g": complex(v)} for x, v in zip(xs, g)]
    _emit(rows, ["x", "g"], args)
    return 0


def cmd_verify(args):
    if args.suite == "acceptance":
        results = verify.run_acceptance()
    else:
        results = verify.run_suite(args.suite)
    lines = [r.line() for r in results]
    text = "\n".join(lines) + "\n"
    if args.out:
        with open(args.out, "w") as fh:
            fh.write(text)
    sys.stdout.write(text)
    return 0 if all(r.passed for r in results) else 1


def _add_model_flags(p):
    p.add_argument("--model", help="model family name ("
                   + ", ".join(sorted(models.MODEL_FAMILIES)) + ")")
    p.add_argument("--model-file", help="JSON model description")
    p.add_argument("--gamma", type=float, help="singularity order")
    p.add_argument("--C", dest="coupling", type=float,
                   help="coupling constant")
    p.add_argument("--alpha", type=float,
                   help="boundary condition angle at a regular endpoint")
    p.add_argument("--x0", type=float, help="interior reference point")
    p.add_argument("--vtilde", help="perturbation expression, e.g. exp(-x)")
    p.add_argument("--format", choices=("csv", "json", "text"),
                   default="csv")
    p.add_argument("--out", help="write output to this file")


def build_parser():
    ap = argparse.ArgumentParser(
        prog="weylspec",
        description="m-functions, spectral measures, and eigenfunction "
                    "transforms for half-line Schrodinger operators, "
                    "including strongly singular endpoints")
    sub = ap.add_subparsers(dest="command", required=True)

    p = sub.add_parser("mfun", help="evaluate an m-function")
    _add_model_flags(p)
    p.add_argument("--z", help="complex spectral parameter, e.g. 2+1i")
    p.add_argument("--z-grid",
                   help="min:max:n, or re-spec x im-spec for a rectangle")
    p.set_defaults(fn=cmd_mfun)

    p = sub.add_parser("density", help="spectral density on a real grid")
    _add_model_flags(p)
    p.add_argument("--lmin", type=float, required=True)
    p.add_argument("--lmax", type=float, required=True)
    p.add_argument("--n", type=int, default=50)
    p.add_argument("--kind", choices=("scalar", "matrix"), default="scalar")
    p.add_argument("--eps-schedule", default="1e-2,5e-3,2.5e-3,1.25e-3",
                   help="offsets above the axis, halving, comma separated")
    p.set_defaults(fn=cmd_density)

    p = sub.add_parser("transform",
                       help="generalized eigenfunction transform of h")
    _add_model_flags(p)
    p.add_argument("--h", required=True,
                   help="expression in x, e.g. sin(pi*(x-1))^2")
    p.add_argument("--support", required=True, help="a,b")
    p.add_argument("--lmin", type=float, required=True)
    p.add_argument("--lmax", type=float, required=True)
    p.add_argument("--n", type=int, default=50)
    p.add_argument("--mode", default="auto",
                   choices=("auto", "boundary", "singular", "interior"))
    p.set_defaults(fn=cmd_transform)

    p = sub.add_parser("green", help="Green's function values")
    _add_model_flags(p)
    p.add_argument("--z", required=True)
    p.add_argument("--x", type=float)
    p.add_argument("--y", type=float)
    p.add_argument("--x-grid", help="min:max:n for the first argument")
    p.set_defaults(fn=cmd_green)

    p = sub.add_parser("resolvent", help="apply (H - z)^-1 to h")
    _add_model_flags(p)
    p.add_argument("--z", required=True)
    p.add_argument("--h", required=True, help="expression in x")
    p.add_argument("--support", required=True, help="a,b")
    p.add_argument("--x-grid", required=True,
                   help="min:max:n output points")
    p.set_defaults(fn=cmd_resolvent)

    p = sub.add_parser("verify", help="run self-checks")
    p.add_argument("--suite", default="all",
                   choices=tuple(sorted(verify.SUITES)) + ("all",
                                                           "acceptance"))
    p.add_argument("--out", help="also write the report to this file")
    p.set_defaults(fn=cmd_verify)
    return ap


def main(argv=None):
    ap = build_parser()
    args = ap.parse_args(argv)
    try:
        return args.fn(args)
    except _USAGE_ERRORS as exc:
        print("error: %s" % exc, file=sys.stderr)
        return 2
    except (ConvergenceError, InconsistencyError, OverflowGuardError,
            ParsevalViolationError, PoleCrossingError, RotationPoleSignal,
            UnsupportedRegimeError) as exc:
        print("error: %s" % exc, file=sys.stderr)
        return 3
    except WeylspecError as exc:
        print("error: %s" % exc, file=sys.stderr)
        return 3


if __name__ == "__main__":
    sys.exit(main())
