"""Weyl m-functions, spectral measures, and eigenfunction transforms for
half-line Schrodinger operators -psi'' + V psi = z psi, including
potentials so singular at the endpoint that the m-function loses the
Herglotz property and has to be renormalized through the principal
solution.

Entry points:
    models      potential model builders and closed reference forms
    mfunctions  m-functions, Green's functions, resolvent application
    herglotz    spectral data from boundary values (densities, masses)
    transform   eigenfunction transforms and cross-checks
    verify      self-check suites
"""

from . import errors, herglotz, models, transform, verify
from .herglotz import (SpectralMeasure, ac_density, measure_interval,
                       point_mass, property_report, representation_residual,
                       spectral_measure)
from .ivp import (IntegratorConfig, SolutionFrame, fundamental_system_interior,
                  fundamental_system_regular, riccati_logderivative)
from .mfunctions import (greens_function, halfline_m, interior_m_pair,
                         matrix_m, resolvent_apply, rotate_m, singular_m,
                         weyl_l2_minus, weyl_l2_plus)
from .models import PotentialModel, build_model, load_model_file
from .singular import (FactorizedPotential, factorized_principal,
                       nonprincipal_companion, volterra_principal)
from .transform import (TransformVector, bridge_density, forward_transform,
                        inverse_transform, omega_density, parseval_check,
                        stone_crosscheck)

__version__ = "0.1.0"

__all__ = [
    "errors", "herglotz", "models", "transform", "verify",
    "SpectralMeasure", "ac_density", "measure_interval", "point_mass",
    "property_report", "representation_residual", "spectral_measure",
    "IntegratorConfig", "SolutionFrame", "fundamental_system_interior",
    "fundamental_system_regular", "riccati_logderivative",
    "greens_function", "halfline_m", "interior_m_pair", "matrix_m",
    "resolvent_apply", "rotate_m", "singular_m", "weyl_l2_minus",
    "weyl_l2_plus", "PotentialModel", "build_model", "load_model_file",
    "FactorizedPotential", "factorized_principal", "nonprincipal_companion",
    "volterra_principal", "TransformVector", "bridge_density",
    "forward_transform", "inverse_transform", "omega_density",
    "parseval_check", "stone_crosscheck", "__version__",
]
