"""Numba twin of the Gaussian quadrature kernels in kernels.py.

Scalar loops over panels and nodes, same branch scheme and the same
Gauss-Legendre rule, so the two backends agree to roundoff.  Import of
this module is deferred until the numba backend is actually selected.
"""

import math

import numpy as np
from numba import njit

from .kernels import GL_X, GL_W, _LCO, _ICO

SQRT2 = math.sqrt(2.0)
C_L = math.sqrt(math.pi) / (2.0 * SQRT2)
C_I = math.sqrt(math.pi / 2.0)
PREF3 = 1.0 / (2.0 * math.pi) ** 1.5
Z_SERIES = -18.0

LCO = np.ascontiguousarray(_LCO)
ICO = np.ascontiguousarray(_ICO)
GLX = np.ascontiguousarray(GL_X)
GLW = np.ascontiguousarray(GL_W)


@njit(cache=True)
def _erfcx(x):
    # scaled complementary error function for x >= 0
    if x < 25.0:
        return math.exp(x * x) * math.erfc(x)
    inv2x2 = 0.5 / (x * x)
    term = 1.0
    s = 1.0
    for k in range(1, 9):
        term *= -(2.0 * k - 1.0) * inv2x2
        s += term
    return s / (x * math.sqrt(math.pi))


@njit(cache=True)
def _lker(z, V):
    g = math.exp(-0.5 * V * V)
    if z >= 0.0:
        ex = math.exp(0.5 * (z * z - V * V)) * (1.0 + math.erf(z / SQRT2))
        return g * (1.0 + 0.5 * z * z) + C_L * (3.0 * z + z ** 3) * ex
    if z > Z_SERIES:
        return g * (1.0 + 0.5 * z * z
                    + C_L * (3.0 * z + z ** 3) * _erfcx(-z / SQRT2))
    t = 1.0 / (z * z)
    acc = 0.0
    for i in range(LCO.size - 1, -1, -1):
        acc = acc * t + LCO[i]
    return g * t * t * acc


@njit(cache=True)
def _iker(z, V):
    g = math.exp(-0.5 * V * V)
    z2 = z * z
    if z >= 0.0:
        ex = math.exp(0.5 * (z2 - V * V)) * (1.0 + math.erf(z / SQRT2))
        return C_I * (3.0 + 6.0 * z2 + z2 * z2) * ex + g * (5.0 * z + z * z2)
    if z > Z_SERIES:
        return g * (C_I * (3.0 + 6.0 * z2 + z2 * z2) * _erfcx(-z / SQRT2)
                    + 5.0 * z + z * z2)
    t = 1.0 / z2
    acc = 0.0
    for i in range(ICO.size - 1, -1, -1):
        acc = acc * t + ICO[i]
    return g * t * t / z * acc


@njit(cache=True)
def p2d(u, V, eps, n_panels):
    out = np.empty(u.size)
    h = math.pi / n_panels
    for i in range(u.size):
        ui = u[i]
        root = math.sqrt(1.0 + ui * ui)
        acc = 0.0
        for p in range(n_panels):
            mid = -0.5 * math.pi + (p + 0.5) * h
            for k in range(16):
                tau = mid + 0.5 * h * GLX[k]
                ct = math.cos(tau)
                st = math.sin(tau)
                z = eps * V * (ct - ui * st) / root
                acc += 0.5 * h * GLW[k] * ct * ct * _lker(z, V)
        out[i] = eps / math.pi * acc
    return out


@njit(cache=True)
def dp2d(u, V, eps, n_panels):
    out = np.empty(u.size)
    h = math.pi / n_panels
    for i in range(u.size):
        ui = u[i]
        if ui == 0.0:
            out[i] = 0.0
            continue
        root2 = 1.0 + ui * ui
        root = math.sqrt(root2)
        acc = 0.0
        for p in range(n_panels):
            mid = -0.5 * math.pi + (p + 0.5) * h
            for k in range(16):
                tau = mid + 0.5 * h * GLX[k]
                ct = math.cos(tau)
                st = math.sin(tau)
                z = eps * V * (ct - ui * st) / root
                acc += 0.5 * h * GLW[k] * ct * ct * (st + ui * ct) * _iker(z, V)
        out[i] = -V / (2.0 * math.pi) * acc / root2 ** 1.5
    return out


@njit(cache=True)
def _bands3(ui, V, eps, n_panels, derivative):
    u2 = ui * ui
    root2 = 1.0 + u2
    w = ui / math.sqrt(root2)
    if w > 1.0:
        w = 1.0

    # outer band, zeta = cos(theta), theta in [0, arccos w]
    acw = math.acos(w)
    h2 = acw / n_panels
    band2 = 0.0
    for p in range(n_panels):
        mid = (p + 0.5) * h2
        for k in range(16):
            th = mid + 0.5 * h2 * GLX[k]
            zeta = math.cos(th)
            zz = zeta * zeta
            if derivative:
                J = 2.0 * math.pi * ui * (1.0 - 3.0 * zz) / (root2 * root2)
            else:
                J = math.pi * (2.0 * zz + u2 * (1.0 - zz)) / root2
            band2 += 0.5 * h2 * GLW[k] * J * math.sin(th) * _iker(eps * V * zeta, V)

    # inner band, zeta = w*sin(psi)
    band1 = 0.0
    if ui > 0.0:
        h1 = math.pi / n_panels
        for p in range(n_panels):
            mid = -0.5 * math.pi + (p + 0.5) * h1
            for k in range(16):
                psi = mid + 0.5 * h1 * GLX[k]
                sp = math.sin(psi)
                cp = math.cos(psi)
                zeta = w * sp
                zz = zeta * zeta
                ratio = -zeta / (ui * math.sqrt(1.0 - zz))
                if ratio > 1.0:
                    ratio = 1.0
                elif ratio < -1.0:
                    ratio = -1.0
                th0 = math.acos(ratio)
                if derivative:
                    J = (2.0 * ui * th0 * (1.0 - 3.0 * zz)
                         + 2.0 * (1.0 - 2.0 * u2) * w * sp * cp) / (root2 * root2)
                else:
                    J = (th0 * (2.0 * zz + u2 * (1.0 - zz))
                         + 3.0 * zeta * ui * cp) / root2
                band1 += 0.5 * h1 * GLW[k] * J * w * cp * _iker(eps * V * zeta, V)
    return band1 + band2


@njit(cache=True)
def p3d(u, V, eps, n_panels):
    out = np.empty(u.size)
    for i in range(u.size):
        out[i] = eps * PREF3 * _bands3(u[i], V, eps, n_panels, False)
    return out


@njit(cache=True)
def dp3d(u, V, eps, n_panels):
    out = np.empty(u.size)
    for i in range(u.size):
        if u[i] == 0.0:
            out[i] = 0.0
        else:
            out[i] = eps * PREF3 * _bands3(u[i], V, eps, n_panels, True)
    return out
