"""Minimal-resistance convex bodies of revolution in a thermal rarefied flow.

A convex axisymmetric body of height h moves at speed V through a medium of
non-interacting particles whose thermal velocities follow a radial density.
Each particle reflects elastically off the body at most once; the package
computes the body shape minimizing the longitudinal drag, in any dimension
d >= 2, together with the pressure laws, convex envelopes, slow/fast-body
limits, and a Monte-Carlo validator.
"""

from .asymptotics import (A_CONST, LimitCoefficients, limit_coefficients,
                          limit_profile_large_V, limit_profile_small_V,
                          newton_limit_curve, small_V_pressure,
                          small_v_limit_curve)
from .backend import active_backend, numba_available, requested_backend
from .envelope import (EnvelopeAnalysis, EnvelopeComponent, build_envelope,
                       find_u_star, landmark_u0_B)
from .errors import (ConfigError, DomainError, MinresistError, NumericsError)
from .medium import (AdmissibilityReport, FlowContext, GaussianDensity,
                     MaxwellDensity, MixtureDensity, RadialDensity,
                     TabulatedDensity, density_from_csv, density_from_json,
                     flux_density, sphere_area, validate_condition_A)
from .montecarlo import McEstimate, estimate_resistance
from .pressure import (AnalyticCurve, PressureCurve, gaussian_pressure_2d,
                       gaussian_pressure_3d, pressure, pressure_derivative,
                       pressure_table_csv, pressure_tail)
from .profiles import (ArcSegment, BodyProfile, ConeSegment, SolutionKind,
                       SolveReport, check_certificate, profile_resistance)
from .solve2d import Problem2D, region_curves_2d, solve_2d
from .solve_nd import ProblemND, QTransform, compute_h_star, solve_nd

__version__ = "0.1.0"

__all__ = [
    "A_CONST", "AdmissibilityReport", "AnalyticCurve", "ArcSegment",
    "BodyProfile", "ConeSegment", "ConfigError", "DomainError",
    "EnvelopeAnalysis", "EnvelopeComponent", "FlowContext", "GaussianDensity",
    "LimitCoefficients", "MaxwellDensity", "McEstimate", "MinresistError",
    "MixtureDensity", "NumericsError", "PressureCurve", "Problem2D",
    "ProblemND", "QTransform", "RadialDensity", "SolutionKind", "SolveReport",
    "TabulatedDensity", "active_backend", "build_envelope",
    "check_certificate", "compute_h_star", "density_from_csv",
    "density_from_json", "estimate_resistance", "find_u_star", "flux_density",
    "gaussian_pressure_2d", "gaussian_pressure_3d", "landmark_u0_B",
    "limit_coefficients", "limit_profile_large_V", "limit_profile_small_V",
    "newton_limit_curve", "numba_available", "pressure",
    "pressure_derivative", "pressure_table_csv", "pressure_tail",
    "profile_resistance", "region_curves_2d", "requested_backend",
    "small_V_pressure", "small_v_limit_curve", "solve_2d", "solve_nd",
    "sphere_area", "validate_condition_A",
]
