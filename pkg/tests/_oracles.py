"""Test-side pressure oracle for the unit Gaussian medium.

Independent route: for a unit Gaussian the pressure reduces to the normal
cdf/pdf pair through the signed normal speed m = -eps*V/sqrt(1+u^2),

    p_eps(u, V)  = eps * [(1+m^2) Phi(-m) - m phi(m)]
    p_eps'(u, V) = 2 V u / (1+u^2)^(3/2) * [m Phi(-m) - phi(m)]

with the erfcx form taking over once m > 0 underflows the direct one.
The package never uses these expressions; its Gaussian backends integrate
angular kernels, so agreement is a genuine cross-check.
"""

import numpy as np
from scipy.special import erfcx, ndtr

_INV_SQRT2PI = 1.0 / np.sqrt(2.0 * np.pi)


def _phi(x):
    return _INV_SQRT2PI * np.exp(-0.5 * x * x)


def p_elem(u, V, eps):
    u = np.asarray(u, dtype=np.float64)
    m = -eps * V / np.sqrt(1.0 + u * u)
    direct = (1.0 + m * m) * ndtr(-m) - m * _phi(m)
    mp = np.maximum(m, 0.0)
    stable = np.exp(-0.5 * mp * mp) * (
        (1.0 + mp * mp) * 0.5 * erfcx(mp / np.sqrt(2.0)) - mp * _INV_SQRT2PI)
    out = eps * np.where(m > 0.0, stable, direct)
    return float(out) if out.ndim == 0 else out


def dp_elem(u, V, eps):
    u = np.asarray(u, dtype=np.float64)
    root = np.sqrt(1.0 + u * u)
    m = -eps * V / root
    direct = m * ndtr(-m) - _phi(m)
    mp = np.maximum(m, 0.0)
    stable = np.exp(-0.5 * mp * mp) * (
        mp * 0.5 * erfcx(mp / np.sqrt(2.0)) - _INV_SQRT2PI)
    bracket = np.where(m > 0.0, stable, direct)
    out = 2.0 * V * u / root ** 3 * bracket
    return float(out) if out.ndim == 0 else out


def p_mix(u, V, eps, terms):
    """Mixture of Gaussian terms [(mass, beta)]: sum a b^-2 p_unit(u, bV)."""
    acc = 0.0
    for a, b in terms:
        acc = acc + a / (b * b) * np.asarray(p_elem(u, b * V, eps))
    return acc


def dp_mix(u, V, eps, terms):
    acc = 0.0
    for a, b in terms:
        acc = acc + a / (b * b) * np.asarray(dp_elem(u, b * V, eps))
    return acc
