"""One-sided pressure curves p(u) on conical surface elements.

For a convex rotation body moving at speed V through a medium sigma, the
resistance splits into front and rear surface integrals of a pressure law
p_eps(u): eps=+1 for the front side, eps=-1 for the rear, u >= 0 the local
slope against the symmetry axis.  Both laws extend to u -> infinity with a
finite tail value and the front law decreases while the rear one dips below
its tail before recovering; everything downstream (envelopes, solvers) only
needs value, slope and tail.

Backends:

  GaussianClosedForm2D / GaussianClosedForm3D
      For media that are finite superpositions of centered Gaussians
      (sigma = sum_j a_j beta_j^d g(beta_j r)), scaling gives
      p(u) = sum_j a_j beta_j^{-2} p_unit(u, beta_j V), and p_unit comes
      from the dimension-reduced quadratures in kernels.py.  Accurate at
      any V; this is the hot path.

  GenericQuadrature
      Works for every admissible density and every d >= 2 through the
      intermediate profile rho(z) = int r^{d+1} sigma(sqrt(r^2+2rVz+V^2)) dr
      tabulated once on z in [-1,1] (VarrhoKernel) and then folded with
      dimension-dependent angular weights.  Table resolution limits it to
      moderate speeds (roughly V <= 10 at default settings); constructor
      calibration raises NumericsError when the table cannot keep up.

AnalyticCurve wraps explicit value/slope callables (used for the zero- and
infinite-speed limit laws) behind the same interface.
"""

import math
import warnings

import numpy as np
from scipy import integrate
from scipy.interpolate import CubicSpline

from . import kernels
from .errors import ConfigError, DomainError, NumericsError
from .medium import FlowContext, sphere_area

__all__ = [
    "PressureCurve", "VarrhoKernel", "AnalyticCurve",
    "BACKEND_GAUSS2", "BACKEND_GAUSS3", "BACKEND_GENERIC",
    "gaussian_pressure_2d", "gaussian_pressure_3d",
    "pressure", "pressure_derivative", "pressure_tail", "pressure_table_csv",
]

BACKEND_GAUSS2 = "GaussianClosedForm2D"
BACKEND_GAUSS3 = "GaussianClosedForm3D"
BACKEND_GENERIC = "GenericQuadrature"

_Z_CHUNK = 256


def _slope_array(u):
    arr = np.atleast_1d(np.asarray(u, dtype=np.float64))
    if arr.ndim != 1:
        raise DomainError("slope argument must be scalar or 1-D")
    if not np.all(np.isfinite(arr)):
        raise DomainError("slope argument must be finite")
    if np.any(arr < 0.0):
        raise DomainError("slopes must be >= 0")
    return arr


class VarrhoKernel:
    """Tabulated rho(z) = int_0^inf r^{d+1} sigma(sqrt(r^2+2rVz+V^2)) dr.

    rho and its z-derivative are sampled on a Chebyshev grid over [-1,1]
    (denser automatically as V grows) and interpolated with cubic splines.
    The derivative uses rho'(z) = V int r^{d+2} sigma'(s)/s dr.
    Construction cross-checks the splines against adaptive quadrature at
    off-grid points and raises NumericsError if the table under-resolves.
    """

    def __init__(self, density, V, n_nodes=None, check=True):
        if not (V > 0):
            raise DomainError("speed V must be > 0")
        self.density = density
        self.V = float(V)
        self.d = density.d
        if n_nodes is None:
            n_nodes = 513 if V <= 8.0 else min(4097, int(513 * V / 8.0) | 1)
        if n_nodes < 33:
            raise ConfigError("varrho table needs at least 33 nodes")
        self.n_nodes = int(n_nodes)

        k = np.arange(self.n_nodes)
        z = -np.cos(np.pi * k / (self.n_nodes - 1))
        z[0], z[-1] = -1.0, 1.0
        r_hi = self.V + density.tail_radius(self.d + 2)
        n_rp = max(64, int(np.ceil(1.5 * r_hi)))
        rn, rw = kernels._panel_nodes(0.0, r_hi, n_rp)

        d = self.d
        vals = np.empty(self.n_nodes)
        dvals = np.empty(self.n_nodes)
        rp1 = rn ** (d + 1) * rw
        rp2 = rn ** (d + 2) * rw
        for lo in range(0, self.n_nodes, _Z_CHUNK):
            zb = z[lo:lo + _Z_CHUNK]
            s2 = rn[None, :] ** 2 + 2.0 * rn[None, :] * self.V * zb[:, None] + self.V ** 2
            s = np.sqrt(np.maximum(s2, 0.0))
            vals[lo:lo + _Z_CHUNK] = density.sigma(s) @ rp1
            ds = density.dsigma(s) / np.maximum(s, 1e-300)
            dvals[lo:lo + _Z_CHUNK] = self.V * (ds @ rp2)

        self._z = z
        self._r_hi = r_hi
        self._sp = CubicSpline(z, vals)
        self._dsp = CubicSpline(z, dvals)
        self.scale = float(np.max(np.abs(vals)))
        if check:
            self._check_table()

    def _quad_value(self, z):
        d, V = self.d, self.V
        dens = self.density

        def f(r):
            s = math.sqrt(r * r + 2.0 * r * V * z + V * V)
            return r ** (d + 1) * float(dens.sigma(np.array([s]))[0])

        peak = max(0.0, -V * z)
        pts = [p for p in (peak, V) if 0.0 < p < self._r_hi]
        # referee for the table: ask for more than quad promises on kinked
        # integrands (tabulated sigma), so silence its roundoff complaint
        with warnings.catch_warnings():
            warnings.simplefilter("ignore", integrate.IntegrationWarning)
            val, _ = integrate.quad(f, 0.0, self._r_hi, points=pts or None,
                                    limit=800, epsabs=1e-10, epsrel=1e-10)
        return val

    def _check_table(self):
        for z in (-0.9995, -0.71, -0.33, 0.137, 0.58, 0.9995):
            ref = self._quad_value(z)
            got = float(self._sp(z))
            if abs(got - ref) > 1e-7 * max(self.scale, 1e-300):
                raise NumericsError(
                    f"varrho table under-resolved at z={z} (V={self.V}, "
                    f"{self.n_nodes} nodes): spline {got:.6e} vs quad {ref:.6e}")

    def varrho(self, z):
        return self._sp(np.clip(z, -1.0, 1.0))

    def dvarrho(self, z):
        return self._dsp(np.clip(z, -1.0, 1.0))


class _GaussianEval:
    """Closed-form evaluation for Gaussian superpositions."""

    def __init__(self, d, terms, V, n_panels):
        self.d = d
        self.V = float(V)
        # each term contributes a_j beta_j^{-2} p_unit(u, beta_j V)
        self.parts = []
        for a, b in terms:
            if a < 0 or b <= 0:
                raise DomainError("gaussian terms need a >= 0, beta > 0")
            Vj = b * V
            npan = n_panels if n_panels is not None else kernels.default_panels(Vj)
            self.parts.append((a / (b * b), Vj, npan))

    def value(self, u, eps):
        out = np.zeros_like(u)
        for coef, Vj, npan in self.parts:
            out += coef * kernels.gauss_pressure(self.d, u, Vj, eps, npan)
        return out

    def slope(self, u, eps):
        out = np.zeros_like(u)
        for coef, Vj, npan in self.parts:
            out += coef * kernels.gauss_pressure_slope(self.d, u, Vj, eps, npan)
        return out

    def tail(self, eps):
        return eps * 0.5 * sum(coef for coef, _, _ in self.parts)

    def refine(self):
        self.parts = [(c, Vj, 2 * npan) for c, Vj, npan in self.parts]

    def veff(self):
        return max(Vj for _, Vj, _ in self.parts)


class _GenericEval:
    """Angular quadrature over the varrho table, any d >= 2."""

    def __init__(self, vk, n_panels):
        self.vk = vk
        self.d = vk.d
        self.V = vk.V
        self.npan = n_panels if n_panels is not None else kernels.default_panels(vk.V)
        self._alpha_pan = max(6, self.npan // 2)
        self._wsp = None

    def refine(self):
        self.npan *= 2
        self._alpha_pan *= 2
        self._wsp = None

    def veff(self):
        return self.V

    # -- d = 2 ----------------------------------------------------------
    def _value2(self, phi, eps):
        th, wt = kernels._panel_nodes(-0.5 * np.pi, 0.5 * np.pi, self.npan)
        cc = np.cos(th) ** 2 * wt
        z = -eps * np.cos(phi[:, None] + th[None, :])
        return eps * (self.vk.varrho(z) @ cc)

    def _slope2(self, u, eps):
        phi = np.arctan(u)
        th, wt = kernels._panel_nodes(-0.5 * np.pi, 0.5 * np.pi, self.npan)
        cc = np.cos(th) ** 2 * wt
        ang = phi[:, None] + th[None, :]
        dv = self.vk.dvarrho(-eps * np.cos(ang))
        return (dv * np.sin(ang) @ cc) / (1.0 + u * u)

    # -- d = 3 ----------------------------------------------------------
    def _bands3(self, u, eps, derivative):
        u2 = u * u
        root2 = 1.0 + u2
        w = u / np.sqrt(root2)
        f01, w01 = kernels._panel_nodes(0.0, 1.0, self.npan)
        psi, wpsi = kernels._panel_nodes(-0.5 * np.pi, 0.5 * np.pi, self.npan)

        acw = np.arccos(np.clip(w, 0.0, 1.0))
        th = acw[:, None] * f01[None, :]
        zeta = np.cos(th)
        zz = zeta * zeta
        if derivative:
            J = (2.0 * np.pi) * u[:, None] * (1.0 - 3.0 * zz) / (root2 ** 2)[:, None]
        else:
            J = np.pi * (2.0 * zz + u2[:, None] * (1.0 - zz)) / root2[:, None]
        band2 = ((self.vk.varrho(-eps * zeta) * J * np.sin(th)) @ w01) * acw

        band1 = np.zeros_like(u)
        pos = u > 0.0
        if pos.any():
            up = u[pos]
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
            band1[pos] = (self.vk.varrho(-eps * zeta1) * J1 * wp[:, None] * cp) @ wpsi
        return band1 + band2

    def _tail3(self, eps):
        psi, wpsi = kernels._panel_nodes(-0.5 * np.pi, 0.5 * np.pi, self.npan)
        cp = np.cos(psi)
        vals = self.vk.varrho(-eps * np.sin(psi))
        return eps * 0.5 * np.pi * float(vals * cp ** 3 @ wpsi)

    # -- d >= 4 ---------------------------------------------------------
    def _fold_alpha(self):
        """Collapse the extra angular dimensions into 1-D tables.

        W(y) = S_{d-3} int_0^{pi/2} varrho(y cos a) cos^3 a sin^{d-3} a da
        turns the d >= 4 surface integral into the planar one with W in
        place of varrho; W' uses the exact tabulated varrho derivative.
        """
        if self._wsp is None:
            al, wa = kernels._panel_nodes(0.0, 0.5 * np.pi, self._alpha_pan)
            ca, sa = np.cos(al), np.sin(al)
            apw = sphere_area(self.d - 3) * wa * sa ** (self.d - 3) * ca ** 3
            z = self.vk._z
            grid = ca[:, None] * z[None, :]
            self._wsp = CubicSpline(z, apw @ self.vk.varrho(grid))
            self._dwsp = CubicSpline(z, (apw * ca) @ self.vk.dvarrho(grid))
        return self._wsp, self._dwsp

    def _value_hi(self, phi, eps, derivative):
        wsp, dwsp = self._fold_alpha()
        th, wt = kernels._panel_nodes(-0.5 * np.pi, 0.5 * np.pi, self.npan)
        ccw = np.cos(th) ** 2 * wt
        ang = phi[:, None] + th[None, :]
        z = np.clip(-eps * np.cos(ang), -1.0, 1.0)
        if derivative:
            return np.cos(phi) ** 2 * ((dwsp(z) * np.sin(ang)) @ ccw)
        return eps * (wsp(z) @ ccw)

    # -- dispatch --------------------------------------------------------
    def value(self, u, eps):
        if self.d == 2:
            return self._value2(np.arctan(u), eps)
        if self.d == 3:
            return eps * self._bands3(u, eps, derivative=False)
        return self._value_hi(np.arctan(u), eps, derivative=False)

    def slope(self, u, eps):
        if self.d == 2:
            out = self._slope2(u, eps)
        elif self.d == 3:
            out = eps * self._bands3(u, eps, derivative=True)
        else:
            out = self._value_hi(np.arctan(u), eps, derivative=True)
        out[u == 0.0] = 0.0
        return out

    def tail(self, eps):
        if self.d == 3:
            return self._tail3(eps)
        return float(self._value_hi(np.array([0.5 * np.pi]), eps, derivative=False)[0]) \
            if self.d >= 4 else float(self._value2(np.array([0.5 * np.pi]), eps)[0])


class PressureCurve:
    """Pressure law of one body side as a function of surface slope.

    Construct with a density, speed V > 0 and side eps (+1 front, -1 rear).
    backend is "auto", "gaussian" or "generic"; the resolved name is in
    .backend.  Construction runs a panel-doubling calibration and raises
    NumericsError if the quadrature will not reach tolerance.
    """

    def __init__(self, density, V, eps, backend="auto", n_panels=None,
                 varrho_kernel=None, varrho_nodes=None, calibrate=True):
        if eps not in (1, -1):
            raise DomainError("eps must be +1 (front) or -1 (rear)")
        if not (V > 0):
            raise DomainError("speed V must be > 0")
        self.density = density
        self.V = float(V)
        self.eps = int(eps)
        self.d = density.d

        terms = density.as_gaussian_terms()
        if backend == "auto":
            use_gauss = terms is not None and self.d in (2, 3)
        elif backend == "gaussian":
            if terms is None:
                raise ConfigError("gaussian backend requires a Gaussian-superposition density")
            if self.d not in (2, 3):
                raise ConfigError("gaussian closed forms exist for d=2 and d=3 only")
            use_gauss = True
        elif backend == "generic":
            use_gauss = False
        else:
            raise ConfigError(f"unknown backend {backend!r}")

        if use_gauss:
            self.backend = BACKEND_GAUSS2 if self.d == 2 else BACKEND_GAUSS3
            self._eval = _GaussianEval(self.d, terms, self.V, n_panels)
            self.varrho_kernel = None
        else:
            self.backend = BACKEND_GENERIC
            vk = varrho_kernel or VarrhoKernel(density, self.V, n_nodes=varrho_nodes)
            if vk.d != self.d or vk.V != self.V:
                raise ConfigError("varrho kernel was built for different d or V")
            self.varrho_kernel = vk
            self._eval = _GenericEval(vk, n_panels)

        self._tail = None
        self._value0 = None
        if calibrate:
            self._calibrate()

    # construction-time convergence check: double panels until two probe
    # passes agree, then keep the finer count for the life of the curve
    def _calibrate(self):
        probes = np.array([0.0, 0.31, 0.7, 1.7, 4.0, 11.0])
        ref = self._eval.value(probes, self.eps)
        scale = max(float(np.max(np.abs(ref))), 1e-300)
        for _ in range(6):
            self._eval.refine()
            new = self._eval.value(probes, self.eps)
            if np.max(np.abs(new - ref)) <= 1e-10 * scale:
                return
            ref = new
        raise NumericsError("pressure quadrature failed to converge during calibration")

    def value(self, u):
        arr = _slope_array(u)
        out = self._eval.value(arr, self.eps)
        return float(out[0]) if np.isscalar(u) or np.ndim(u) == 0 else out

    def slope(self, u):
        arr = _slope_array(u)
        out = self._eval.slope(arr, self.eps)
        return float(out[0]) if np.isscalar(u) or np.ndim(u) == 0 else out

    def tail(self):
        if self._tail is None:
            self._tail = float(self._eval.tail(self.eps))
        return self._tail

    def value0(self):
        if self._value0 is None:
            self._value0 = float(self.value(0.0))
        return self._value0

    def range_scale(self):
        """Positive scale |p(0) - p(inf)| used for relative tolerances."""
        return max(abs(self.value0() - self.tail()), 1e-300)

    def suggest_umax(self):
        """Grid extent that safely covers all envelope structure."""
        return max(48.0, 8.0 * (1.0 + self._eval.veff()))

    @classmethod
    def pair(cls, density, V, backend="auto", **kw):
        """Front and rear curves, sharing the varrho table when generic."""
        front = cls(density, V, +1, backend=backend, **kw)
        if front.varrho_kernel is not None:
            kw = dict(kw, varrho_kernel=front.varrho_kernel)
        rear = cls(density, V, -1, backend=backend, **kw)
        return front, rear

    @classmethod
    def from_context(cls, ctx, eps, **kw):
        return cls(ctx.density, ctx.V, eps, **kw)


class AnalyticCurve:
    """Pressure-curve interface around explicit value/slope callables."""

    def __init__(self, value_fn, slope_fn, tail, d, umax=48.0):
        self._vf = value_fn
        self._sf = slope_fn
        self._tail = float(tail)
        self.d = d
        self._umax = float(umax)
        self.V = None

    def value(self, u):
        arr = _slope_array(u)
        out = np.asarray(self._vf(arr), dtype=np.float64)
        return float(out[0]) if np.ndim(u) == 0 else out

    def slope(self, u):
        arr = _slope_array(u)
        out = np.asarray(self._sf(arr), dtype=np.float64)
        return float(out[0]) if np.ndim(u) == 0 else out

    def tail(self):
        return self._tail

    def value0(self):
        return float(self.value(0.0))

    def range_scale(self):
        return max(abs(self.value0() - self.tail()), 1e-300)

    def suggest_umax(self):
        return self._umax


def gaussian_pressure_2d(u, V, eps, n_panels=None):
    """Unit-Gaussian closed-form pressure, d=2."""
    return kernels.gauss_pressure(2, _slope_array(u), V, eps, n_panels)


def gaussian_pressure_3d(u, V, eps, n_panels=None):
    """Unit-Gaussian closed-form pressure, d=3."""
    return kernels.gauss_pressure(3, _slope_array(u), V, eps, n_panels)


def pressure(curve, u):
    return curve.value(u)


def pressure_derivative(curve, u):
    return curve.slope(u)


def pressure_tail(curve):
    return curve.tail()


def pressure_table_csv(front, rear, path, us):
    """Write u, front/rear pressures and slopes as CSV (17 significant digits)."""
    us = _slope_array(us)
    cols = (us, front.value(us), rear.value(us), front.slope(us), rear.slope(us))
    with open(path, "w") as fh:
        fh.write("u,p_plus,p_minus,dp_plus,dp_minus\n")
        for row in zip(*cols):
            fh.write(",".join(f"{x:.17g}" for x in row) + "\n")
