"""Slow- and fast-body limits of the minimal-resistance problem.

For V -> 0 the pressure linearizes as p_eps(u,V) = eps*b + V*c/sqrt(1+u^2)
with moment coefficients b, c of the medium (derived for d = 2 and 3 only),
so both sides share the universal reduced curve 1/sqrt(1+u^2).  Its convex
envelope leaves zero with a chord tangent at

    a = sqrt((1 + sqrt(5))/2),   a^4 = a^2 + 1,

which fixes every small-V threshold and the limit flank angle arctan(a).
For V -> oo the front pressure approaches V^2/(1+u^2) and the rear one
vanishes, so optimal bodies converge to the classical Newton solution of
the limit curve 1/(1+u^2), scaled by V^2 and the flux density nu.
"""

import math
from dataclasses import dataclass

import numpy as np
from scipy.optimize import brentq

from .envelope import build_envelope
from .errors import DomainError
from .medium import RadialDensity
from .pressure import AnalyticCurve
from .profiles import (ArcSegment, BodyProfile, ConeSegment, SolutionKind,
                       cone_side, flat_side, two_slope_side)

__all__ = ["A_CONST", "LimitCoefficients", "limit_coefficients",
           "small_V_pressure", "limit_profile_small_V",
           "limit_profile_large_V", "newton_limit_curve",
           "small_v_limit_curve"]

# positive root of a^4 - a^2 - 1 = 0; from-zero tangency slope of the
# universal small-V curve, flank angle arctan(a) ~ 51.83 deg
A_CONST = math.sqrt((1.0 + math.sqrt(5.0)) / 2.0)


@dataclass(frozen=True)
class LimitCoefficients:
    """Two-term small-V pressure expansion p ~ eps*b + V*c/sqrt(1+u^2)."""
    d: int
    b: float
    c: float
    a: float = A_CONST


def limit_coefficients(density, d=None):
    """Moment coefficients of the small-V expansion (d = 2 or 3 only)."""
    if not isinstance(density, RadialDensity):
        raise DomainError("limit_coefficients needs a RadialDensity")
    if d is None:
        d = density.d
    d = int(d)
    if d != density.d:
        raise DomainError(f"density is d={density.d}, asked for d={d}")
    if d == 2:
        b = 0.5 * math.pi * density.moment(3)
        c = 4.0 * density.moment(2)
    elif d == 3:
        b = (2.0 * math.pi / 3.0) * density.moment(4)
        c = 2.0 * math.pi * density.moment(3)
    else:
        raise DomainError("small-V expansion is available for d in {2, 3}")
    return LimitCoefficients(d=d, b=float(b), c=float(c))


def small_V_pressure(coeffs, u, V, eps=1):
    """Two-term expansion eps*b + V*c/sqrt(1+u^2)."""
    if eps not in (1, -1):
        raise DomainError("eps must be +1 or -1")
    u = np.asarray(u, dtype=np.float64)
    out = eps * coeffs.b + V * coeffs.c / np.sqrt(1.0 + u * u)
    return float(out) if out.ndim == 0 else out


# -- universal reduced curves ------------------------------------------------

def small_v_limit_curve(umax=64.0):
    """The shared reduced pressure curve 1/sqrt(1+u^2) of the V->0 limit."""
    return AnalyticCurve(
        value_fn=lambda u: 1.0 / np.sqrt(1.0 + np.square(u)),
        slope_fn=lambda u: -np.asarray(u) / (1.0 + np.square(u)) ** 1.5,
        tail=0.0, d=2, umax=umax)


def newton_limit_curve(d, umax=64.0):
    """Front limit curve 1/(1+u^2) of the V->oo (Newton) regime."""
    return AnalyticCurve(
        value_fn=lambda u: 1.0 / (1.0 + np.square(u)),
        slope_fn=lambda u: -2.0 * np.asarray(u) / (1.0 + np.square(u)) ** 2,
        tail=0.0, d=d, umax=umax)


def _phat_bar(u):
    """Convex envelope of 1/sqrt(1+u^2): chord 1 - u/a^5, then the curve."""
    a = A_CONST
    if u <= a:
        return 1.0 - u / a ** 5
    return 1.0 / math.sqrt(1.0 + u * u)


# closed forms for the d=3 small-V flank: q = |pbar'|^{-1} of the reduced
# curve is a^5 on the chord [0,a] and (1+u^2)^{3/2}/u beyond it
def _q_small(u):
    a = A_CONST
    if u <= a:
        return a ** 5
    return (1.0 + u * u) ** 1.5 / u


_Q_SMALL_C = (A_CONST ** 6
              - A_CONST ** 2 * (4.0 + A_CONST ** 2) / 3.0
              - math.log((A_CONST ** 2 - 1.0) / A_CONST))


def _Q_small(u):
    a = A_CONST
    if u <= a:
        return a ** 5 * u
    w = math.sqrt(1.0 + u * u)
    return w * (4.0 + u * u) / 3.0 + math.log((w - 1.0) / u) + _Q_SMALL_C


def _solve_flank(h_side, q, Q, lo):
    """U with U - Q(U)/q(U) = h_side, on the curved flank past u=lo."""
    def g(u):
        return u - Q(u) / q(u) - h_side
    hi = max(lo, h_side) + 1.0
    k = 0
    while g(hi) <= 0.0:
        hi *= 1.6
        k += 1
        if k > 80:
            raise DomainError("flank solve failed to bracket")
    return brentq(g, lo * (1.0 + 1e-14), hi, xtol=1e-14, rtol=8.9e-16)


def _flank_arc(h_side, q, Q, lo, n=192):
    """Flat disk + curved flank realizing the given side depth."""
    U = _solve_flank(h_side, q, Q, lo)
    qU = q(U)
    t0 = q(0.0) / qU
    k = np.arange(n)
    u = lo + (U - lo) * 0.5 * (1.0 - np.cos(np.pi * k / (n - 1)))
    u[0], u[-1] = lo, U
    qq = np.array([q(x) for x in u])
    QQ = np.array([Q(x) for x in u])
    f = (u * qq - QQ + (Q(lo) - lo * q(lo))) / qU
    segs = [ConeSegment(0.0, t0, 0.0), ArcSegment(qq / qU, u, f - f[0])]
    return segs, U


def limit_profile_small_V(d, h, coeffs=None):
    """Limit optimal body for V -> 0 and its reduced resistance.

    Returns (BodyProfile, R_reduced) with R_reduced the coefficient of V in
    the resistance: 2 c pbar(h/2) for d=2 and 2 c (pbar(U) + Q(U)/q(U)^2)
    for d=3, both on the universal reduced curve.  The b-terms of the two
    sides cancel, so only c enters; coeffs defaults to the unit Gaussian's.
    """
    d = int(d)
    if d not in (2, 3):
        raise DomainError("the V->0 limit solution is derived for d in {2, 3}")
    if not (h > 0):
        raise DomainError("body height h must be > 0")
    if coeffs is None:
        from .medium import GaussianDensity
        coeffs = limit_coefficients(GaussianDensity(d))
    a = A_CONST

    if d == 2:
        if h < a:
            kind = SolutionKind.Trapezium
            front, rear = two_slope_side(h, 0.0, a), flat_side()
            hp, hm = h, 0.0
        elif h == a:
            kind = SolutionKind.IsoscelesTriangle
            front, rear = cone_side(h), flat_side()
            hp, hm = h, 0.0
        elif h < 2.0 * a:
            kind = SolutionKind.TriangleTrapezium
            front, rear = cone_side(a), two_slope_side(h - a, 0.0, a)
            hp, hm = a, h - a
        else:
            # the rhombus: two equal triangles glued base to base
            kind = SolutionKind.TwoTriangles
            front, rear = cone_side(0.5 * h), cone_side(0.5 * h)
            hp, hm = 0.5 * h, 0.5 * h
        R_reduced = 2.0 * coeffs.c * _phat_bar(0.5 * h)
    else:
        # symmetric pair of Newton-like bodies, each of depth h/2
        kind = SolutionKind.SecondKind
        side, U = _flank_arc(0.5 * h, _q_small, _Q_small, a)
        front = side
        rear = [ConeSegment(s.t0, s.t1, s.u) if isinstance(s, ConeSegment)
                else ArcSegment(s.t_nodes.copy(), s.u_nodes.copy(),
                                None if s.f_nodes is None else s.f_nodes.copy())
                for s in side]
        hp = hm = 0.5 * h
        r_side = _phat_bar(U) + _Q_small(U) / _q_small(U) ** 2
        R_reduced = 2.0 * coeffs.c * r_side

    profile = BodyProfile(d, hp, hm, front, rear, kind=kind)
    return profile, float(R_reduced)


def limit_profile_large_V(d, h, nu=1.0):
    """Newton's classical solution for V -> oo and its reduced resistance.

    Returns (BodyProfile, R_reduced) where R_reduced is the limit of
    R / V^2: nu times the Newton optimum of the curve 1/(1+u^2).  The rear
    side carries no pressure in this limit and stays flat.
    """
    d = int(d)
    if d < 2:
        raise DomainError("dimension must be >= 2")
    if not (h > 0):
        raise DomainError("body height h must be > 0")

    if d == 2:
        # envelope of 1/(1+u^2) leaves zero at u=1 (the 45 degree flank)
        if h < 1.0:
            kind = SolutionKind.Trapezium
            front = two_slope_side(h, 0.0, 1.0)
            R_side = 1.0 - 0.5 * h
        else:
            kind = SolutionKind.IsoscelesTriangle
            front = cone_side(h)
            R_side = 1.0 / (1.0 + h * h)
        profile = BodyProfile(2, h, 0.0, front, flat_side(), kind=kind)
        return profile, float(nu * R_side)

    from .solve_nd import QTransform, build_profile_nd
    curve = newton_limit_curve(d, umax=max(64.0, 4.0 * h + 16.0))
    env = build_envelope(curve)
    qt = QTransform(env, d)
    U = qt.solve_U(h)
    front = build_profile_nd(qt, h, U)
    profile = BodyProfile(d, h, 0.0, front, flat_side(),
                          kind=SolutionKind.FirstKind)
    return profile, float(nu * qt.r_map(U))
