"""Quadrature kernels for the Gaussian closed-form pressure laws.

For a unit Gaussian medium the pressure on a surface element with slope
u >= 0 (front side eps=+1, rear side eps=-1) reduces to one-dimensional
integrals:

  d=2:  p = eps/pi * int_{-pi/2}^{pi/2} cos^2(tau) * L(z) dtau,
        z = eps*V*(cos tau - u sin tau)/sqrt(1+u^2)

  d=3:  p = eps/(2 pi)^{3/2} * [ int_{-w}^{w} J1(zeta) K(eps*V*zeta) dzeta
                               + int_{w}^{1} J2(zeta) K(eps*V*zeta) dzeta ],
        w = u/sqrt(1+u^2)

with L and K combinations of exp, erf and polynomials.  Both integrands
carry an overall exp(-V^2/2); evaluating that factor separately underflows
long before the products do, so the kernels here work with the combined
quantities lker = exp(-V^2/2)*L and iker = exp(-V^2/2)*K and pick one of
three algebraic branches per point:

  z >= 0      combine exponents: exp((z^2-V^2)/2)*(1+erf(..)), safe since
              |z| <= V on the whole integration range
  -18 < z < 0 scaled complementary error function (erfcx), no cancellation
              worth worrying about until far in the tail
  z <= -18    asymptotic series in 1/z^2 (exact integer coefficients),
              machine precision in this range

Derivatives in u use the differentiated band weights; the band seam at
zeta = w is value-continuous so no boundary terms appear.

u must be a 1-D float64 array, eps is +1 or -1.  Integration is composite
16-point Gauss-Legendre with n_panels panels; default_panels(V) scales the
count with V because the integrand peaks have width ~ 1/V.

Two implementations exist: the vectorized numpy one in this module and a
scalar numba twin in _kernels_nb.  gauss_pressure / gauss_pressure_slope
dispatch on the active backend.
"""

import numpy as np
from scipy.special import erf, erfcx

from .backend import active_backend
from .errors import DomainError

SQRT2 = np.sqrt(2.0)
_C_L = np.sqrt(np.pi) / (2.0 * SQRT2)   # sqrt(pi/8)
_C_I = np.sqrt(np.pi / 2.0)
_PREF3 = 1.0 / (2.0 * np.pi) ** 1.5

GL_X, GL_W = np.polynomial.legendre.leggauss(16)

_U_CHUNK = 256


def _dfact(n):
    # double factorial of an odd n, exact integer; (-1)!! = 1
    out = 1
    k = n
    while k > 1:
        out *= k
        k -= 2
    return out


# Tail series for L(z) = 1 + z^2/2 + sqrt(pi/8) e^{z^2/2}(3z+z^3)(1+erf(z/sqrt2)),
# z -> -inf:  L ~ sum_{j>=2} (-1)^j (j-1) (2j-1)!! z^{-2j}  = 3/z^4 - 30/z^6 + ...
_LCO = np.array([(-1.0) ** j * (j - 1) * _dfact(2 * j - 1) for j in range(2, 13)])
# Tail series for K(z) = sqrt(pi/2) e^{z^2/2}(3+6z^2+z^4)(1+erf(z/sqrt2)) + 5z + z^3,
# z -> -inf:  K ~ sum_{j>=0} (-1)^{j+1} 4 (j+1)(j+2) (2j+3)!! z^{-(2j+5)}
_ICO = np.array([(-1.0) ** (j + 1) * 4 * (j + 1) * (j + 2) * _dfact(2 * j + 3)
                 for j in range(0, 11)])
# highest power first, for polyval in t = 1/z^2
_LCO_POLY = _LCO[::-1].copy()
_ICO_POLY = _ICO[::-1].copy()

_Z_SERIES = -18.0


def default_panels(V):
    """Panel count that resolves the ~1/V-wide integrand peaks."""
    return max(8, int(np.ceil(3.0 * (abs(V) + 1.0))))


def _panel_nodes(a, b, n_panels):
    edges = np.linspace(a, b, n_panels + 1)
    half = 0.5 * (edges[1] - edges[0])
    mids = 0.5 * (edges[:-1] + edges[1:])
    nodes = (mids[:, None] + half * GL_X[None, :]).ravel()
    wts = np.tile(half * GL_W, n_panels)
    return nodes, wts


def lker_np(z, V):
    """exp(-V^2/2) * L(z), branch-stable for |z| <= V."""
    z = np.asarray(z, dtype=np.float64)
    out = np.empty_like(z)
    g = np.exp(-0.5 * V * V)
    pos = z >= 0.0
    far = z <= _Z_SERIES
    mid = ~(pos | far)
    if pos.any():
        zp = z[pos]
        ex = np.exp(0.5 * (zp * zp - V * V)) * (1.0 + erf(zp / SQRT2))
        out[pos] = g * (1.0 + 0.5 * zp * zp) + _C_L * (3.0 * zp + zp ** 3) * ex
    if mid.any():
        zm = z[mid]
        out[mid] = g * (1.0 + 0.5 * zm * zm
                        + _C_L * (3.0 * zm + zm ** 3) * erfcx(-zm / SQRT2))
    if far.any():
        zf = z[far]
        t = 1.0 / (zf * zf)
        out[far] = g * t * t * np.polyval(_LCO_POLY, t)
    return out


def iker_np(z, V):
    """exp(-V^2/2) * K(z), same branch scheme as lker_np."""
    z = np.asarray(z, dtype=np.float64)
    out = np.empty_like(z)
    g = np.exp(-0.5 * V * V)
    pos = z >= 0.0
    far = z <= _Z_SERIES
    mid = ~(pos | far)
    if pos.any():
        zp = z[pos]
        z2 = zp * zp
        ex = np.exp(0.5 * (z2 - V * V)) * (1.0 + erf(zp / SQRT2))
        out[pos] = _C_I * (3.0 + 6.0 * z2 + z2 * z2) * ex + g * (5.0 * zp + zp * z2)
    if mid.any():
        zm = z[mid]
        z2 = zm * zm
        out[mid] = g * (_C_I * (3.0 + 6.0 * z2 + z2 * z2) * erfcx(-zm / SQRT2)
                        + 5.0 * zm + zm * z2)
    if far.any():
        zf = z[far]
        t = 1.0 / (zf * zf)
        out[far] = g * t * t / zf * np.polyval(_ICO_POLY, t)
    return out


def p2d_np(u, V, eps, n_panels):
    u = np.asarray(u, dtype=np.float64)
    tau, wt = _panel_nodes(-0.5 * np.pi, 0.5 * np.pi, n_panels)
    ct = np.cos(tau)
    st = np.sin(tau)
    wcc = wt * ct * ct
    out = np.empty_like(u)
    for lo in range(0, u.size, _U_CHUNK):
        ub = u[lo:lo + _U_CHUNK]
        root = np.sqrt(1.0 + ub * ub)
        z = (eps * V) * (ct[None, :] - ub[:, None] * st[None, :]) / root[:, None]
        out[lo:lo + _U_CHUNK] = lker_np(z, V) @ wcc
    return (eps / np.pi) * out


def dp2d_np(u, V, eps, n_panels):
    u = np.asarray(u, dtype=np.float64)
    tau, wt = _panel_nodes(-0.5 * np.pi, 0.5 * np.pi, n_panels)
    ct = np.cos(tau)
    st = np.sin(tau)
    wcc = wt * ct * ct
    out = np.empty_like(u)
    for lo in range(0, u.size, _U_CHUNK):
        ub = u[lo:lo + _U_CHUNK]
        root2 = 1.0 + ub * ub
        z = (eps * V) * (ct[None, :] - ub[:, None] * st[None, :]) / np.sqrt(root2)[:, None]
        vals = iker_np(z, V)
        a = vals @ (wcc * st)
        b = vals @ (wcc * ct)
        out[lo:lo + _U_CHUNK] = (a + ub * b) / root2 ** 1.5
    np.multiply(out, -V / (2.0 * np.pi), out)
    out[u == 0.0] = 0.0   # integrand is odd there; kill roundoff residue
    return out


def _bands3(ub, V, eps, n_panels, derivative):
    """Shared band quadrature for the 3-D closed form, one u-chunk."""
    u2 = ub * ub
    root2 = 1.0 + u2
    w = ub / np.sqrt(root2)

    f01, w01 = _panel_nodes(0.0, 1.0, n_panels)
    psi, wpsi = _panel_nodes(-0.5 * np.pi, 0.5 * np.pi, n_panels)

    # outer band, zeta = cos(theta) so the kernel peak keeps uniform width
    acw = np.arccos(np.clip(w, 0.0, 1.0))
    th = acw[:, None] * f01[None, :]
    zeta = np.cos(th)
    sth = np.sin(th)
    zz = zeta * zeta
    if derivative:
        J = (2.0 * np.pi) * ub[:, None] * (1.0 - 3.0 * zz) / (root2 ** 2)[:, None]
    else:
        J = np.pi * (2.0 * zz + u2[:, None] * (1.0 - zz)) / root2[:, None]
    band2 = ((iker_np((eps * V) * zeta, V) * J * sth) @ w01) * acw

    # inner band, zeta = w*sin(psi); then the square root in the band weight
    # is exactly u*cos(psi) and the endpoint behavior is polynomial
    pos = ub > 0.0
    band1 = np.zeros_like(ub)
    if pos.any():
        up = ub[pos]
        u2p = up * up
        root2p = 1.0 + u2p
        wp = w[pos]
        sp = np.sin(psi)[None, :]
        cp = np.cos(psi)[None, :]
        zeta1 = wp[:, None] * sp
        zz1 = zeta1 * zeta1
        ratio = -zeta1 / (up[:, None] * np.sqrt(1.0 - zz1))
        th0 = np.arccos(np.clip(ratio, -1.0, 1.0))
        if derivative:
            J1 = (2.0 * up[:, None] * th0 * (1.0 - 3.0 * zz1)
                  + 2.0 * (1.0 - 2.0 * u2p)[:, None] * wp[:, None] * sp * cp) \
                / (root2p ** 2)[:, None]
        else:
            J1 = (th0 * (2.0 * zz1 + u2p[:, None] * (1.0 - zz1))
                  + 3.0 * zeta1 * up[:, None] * cp) / root2p[:, None]
        band1[pos] = (iker_np((eps * V) * zeta1, V) * J1 * wp[:, None] * cp) @ wpsi
    return band1 + band2


def p3d_np(u, V, eps, n_panels):
    u = np.asarray(u, dtype=np.float64)
    out = np.empty_like(u)
    for lo in range(0, u.size, _U_CHUNK):
        ub = u[lo:lo + _U_CHUNK]
        out[lo:lo + _U_CHUNK] = _bands3(ub, V, eps, n_panels, derivative=False)
    return (eps * _PREF3) * out


def dp3d_np(u, V, eps, n_panels):
    u = np.asarray(u, dtype=np.float64)
    out = np.empty_like(u)
    for lo in range(0, u.size, _U_CHUNK):
        ub = u[lo:lo + _U_CHUNK]
        out[lo:lo + _U_CHUNK] = _bands3(ub, V, eps, n_panels, derivative=True)
    out *= eps * _PREF3
    out[u == 0.0] = 0.0
    return out


_NB = None


def _nb():
    global _NB
    if _NB is None:
        from . import _kernels_nb
        _NB = _kernels_nb
    return _NB


def gauss_pressure(d, u, V, eps, n_panels=None):
    """Unit-Gaussian pressure law, dispatching on dimension and backend."""
    if d not in (2, 3):
        raise DomainError("Gaussian closed form exists for d=2 and d=3 only")
    if eps not in (1, -1):
        raise DomainError("eps must be +1 (front) or -1 (rear)")
    u = np.ascontiguousarray(u, dtype=np.float64)
    npan = default_panels(V) if n_panels is None else int(n_panels)
    if active_backend() == "numba":
        fn = _nb().p2d if d == 2 else _nb().p3d
        return fn(u, float(V), float(eps), npan)
    fn = p2d_np if d == 2 else p3d_np
    return fn(u, float(V), float(eps), npan)


def gauss_pressure_slope(d, u, V, eps, n_panels=None):
    """du-derivative of gauss_pressure, same dispatch."""
    if d not in (2, 3):
        raise DomainError("Gaussian closed form exists for d=2 and d=3 only")
    if eps not in (1, -1):
        raise DomainError("eps must be +1 (front) or -1 (rear)")
    u = np.ascontiguousarray(u, dtype=np.float64)
    npan = default_panels(V) if n_panels is None else int(n_panels)
    if active_backend() == "numba":
        fn = _nb().dp2d if d == 2 else _nb().dp3d
        return fn(u, float(V), float(eps), npan)
    fn = dp2d_np if d == 2 else dp3d_np
    return fn(u, float(V), float(eps), npan)
