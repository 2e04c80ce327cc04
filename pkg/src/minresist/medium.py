"""Radial velocity densities of the ambient medium.

A medium is described by a rotationally invariant density sigma(|v|) on R^d.
The admissibility conditions that make the one-sided pressure laws convex
enough for the envelope construction are:

  * sigma >= 0,
  * sigma'(r)/r strictly negative, bounded below, and monotone increasing,
  * enough tail decay that the resistance moment integral converges.

validate_condition_A checks these on a finite grid.  Grid checks cannot
prove the conditions, only refute them; values inside the tolerance band
count as borderline and are resolved by the on_borderline policy.

Concrete densities: GaussianDensity (unit), MaxwellDensity (equilibrium at
given mass/temperature), MixtureDensity (weighted scaled superpositions),
TabulatedDensity (grid data, monotone cubic interpolation).  Densities that
are finite Gaussian superpositions report their terms via
as_gaussian_terms(), which lets the pressure layer use the closed forms.
"""

import abc
import csv
import json
import math
from dataclasses import dataclass, field

import numpy as np
from scipy import integrate
from scipy.interpolate import PchipInterpolator

from .errors import ConfigError, DomainError, NumericsError

__all__ = [
    "RadialDensity", "GaussianDensity", "MaxwellDensity", "MixtureDensity",
    "TabulatedDensity", "FlowContext", "AdmissibilityReport",
    "validate_condition_A", "moment", "flux_density", "sphere_area",
    "density_from_json", "density_from_csv",
]


def sphere_area(k):
    """Surface measure of the unit sphere S^k in R^{k+1}."""
    if k < 0:
        raise DomainError("sphere dimension must be >= 0")
    return 2.0 * math.pi ** ((k + 1) / 2.0) / math.gamma((k + 1) / 2.0)


class RadialDensity(abc.ABC):
    """Base class: rotationally invariant density sigma(|v|) on R^d."""

    d: int

    def __init__(self, d):
        d = int(d)
        if d < 2:
            raise DomainError("dimension must be >= 2")
        self.d = d
        self._moments = {}

    @abc.abstractmethod
    def sigma(self, r):
        """Density value at radius r (array in, array out)."""

    @abc.abstractmethod
    def dsigma(self, r):
        """Radial derivative sigma'(r)."""

    def as_gaussian_terms(self):
        """Return [(a_j, beta_j)] with sigma = sum a_j beta_j^d g(beta_j r),
        g the unit Gaussian, or None if no such finite representation."""
        return None

    def tail_radius(self, power=None):
        """Radius beyond which r^power * sigma stops contributing."""
        if power is None:
            power = self.d + 1
        rr = np.geomspace(1e-3, 1e4, 400)
        vals = self.sigma(rr) * rr ** power
        peak = vals.max()
        if peak <= 0.0:
            return 1.0
        big = np.nonzero(vals > 1e-16 * peak)[0]
        return float(rr[big[-1]]) * 1.5

    def moment(self, k):
        """One-dimensional radial moment integral of sigma(r) r^k over r>0."""
        if k < 0:
            raise DomainError("moment order must be >= 0")
        k = int(k)
        if k not in self._moments:
            hi = self.tail_radius(power=k)
            val, err = integrate.quad(lambda r: float(self.sigma(np.array([r]))[0]) * r ** k,
                                      0.0, hi, limit=200)
            if not np.isfinite(val) or err > 1e-8 * max(abs(val), 1.0):
                raise NumericsError(f"moment({k}) did not converge")
            self._moments[k] = val
        return self._moments[k]

    @property
    def nu(self):
        """Total mass (number density) of the medium."""
        return sphere_area(self.d - 1) * self.moment(self.d - 1)

    @abc.abstractmethod
    def to_json(self):
        """JSON-serializable description."""

    def __repr__(self):
        return f"{type(self).__name__}(d={self.d})"


class GaussianDensity(RadialDensity):
    """Unit Gaussian: sigma(r) = (2 pi)^{-d/2} exp(-r^2/2)."""

    def __init__(self, d):
        super().__init__(d)
        self._norm = (2.0 * math.pi) ** (-self.d / 2.0)

    def sigma(self, r):
        r = np.asarray(r, dtype=np.float64)
        return self._norm * np.exp(-0.5 * r * r)

    def dsigma(self, r):
        r = np.asarray(r, dtype=np.float64)
        return -r * self._norm * np.exp(-0.5 * r * r)

    def as_gaussian_terms(self):
        return [(1.0, 1.0)]

    def moment(self, k):
        if k < 0:
            raise DomainError("moment order must be >= 0")
        # int_0^inf r^k e^{-r^2/2} dr = 2^{(k-1)/2} Gamma((k+1)/2)
        return self._norm * 2.0 ** ((k - 1) / 2.0) * math.gamma((k + 1) / 2.0)

    def to_json(self):
        return {"kind": "gaussian", "d": self.d}


class MaxwellDensity(RadialDensity):
    """Equilibrium density nu (m/(2 pi k T))^{d/2} exp(-m r^2 / (2 k T))."""

    def __init__(self, d, mass, temperature, number_density=1.0, boltzmann=1.0):
        super().__init__(d)
        if mass <= 0 or temperature <= 0 or number_density <= 0 or boltzmann <= 0:
            raise DomainError("mass, temperature, density and boltzmann must be positive")
        self.mass = float(mass)
        self.temperature = float(temperature)
        self.number_density = float(number_density)
        self.boltzmann = float(boltzmann)
        self.beta = math.sqrt(self.mass / (self.boltzmann * self.temperature))
        self._unit = GaussianDensity(d)

    def sigma(self, r):
        r = np.asarray(r, dtype=np.float64)
        return self.number_density * self.beta ** self.d * self._unit.sigma(self.beta * r)

    def dsigma(self, r):
        r = np.asarray(r, dtype=np.float64)
        return self.number_density * self.beta ** (self.d + 1) * self._unit.dsigma(self.beta * r)

    def as_gaussian_terms(self):
        return [(self.number_density, self.beta)]

    def moment(self, k):
        return self.number_density * self.beta ** (self.d - k - 1) * self._unit.moment(k)

    def to_json(self):
        return {"kind": "maxwell", "d": self.d, "mass": self.mass,
                "temperature": self.temperature,
                "number_density": self.number_density,
                "boltzmann": self.boltzmann}


class MixtureDensity(RadialDensity):
    """Weighted superposition sum_i w_i base_i(s_i r)."""

    def __init__(self, components):
        comps = []
        d = None
        for w, s, base in components:
            if w < 0:
                raise DomainError("mixture weights must be >= 0")
            if s <= 0:
                raise DomainError("mixture scales must be > 0")
            if d is None:
                d = base.d
            elif base.d != d:
                raise ConfigError("mixture components must share the dimension")
            comps.append((float(w), float(s), base))
        if not comps:
            raise ConfigError("mixture needs at least one component")
        super().__init__(d)
        self.components = comps

    @classmethod
    def from_gaussian_terms(cls, terms, d):
        """Build sum_j a_j beta_j^d g(beta_j r) from [(a_j, beta_j)]."""
        return cls([(a * b ** d, b, GaussianDensity(d)) for a, b in terms])

    def sigma(self, r):
        r = np.asarray(r, dtype=np.float64)
        out = np.zeros_like(r)
        for w, s, base in self.components:
            out += w * base.sigma(s * r)
        return out

    def dsigma(self, r):
        r = np.asarray(r, dtype=np.float64)
        out = np.zeros_like(r)
        for w, s, base in self.components:
            out += w * s * base.dsigma(s * r)
        return out

    def as_gaussian_terms(self):
        terms = []
        for w, s, base in self.components:
            sub = base.as_gaussian_terms()
            if sub is None:
                return None
            terms.extend((w * a / s ** self.d, b * s) for a, b in sub)
        return terms

    def moment(self, k):
        return sum(w * s ** (-k - 1) * base.moment(k) for w, s, base in self.components)

    def to_json(self):
        return {"kind": "mixture", "d": self.d,
                "components": [{"weight": w, "scale": s, "base": base.to_json()}
                               for w, s, base in self.components]}


class TabulatedDensity(RadialDensity):
    """Density given on a radial grid, PCHIP-interpolated.

    Constant extension to the left of the grid, zero beyond the last point.
    """

    def __init__(self, d, r, values):
        r = np.asarray(r, dtype=np.float64)
        values = np.asarray(values, dtype=np.float64)
        if r.size == 0 or values.size == 0:
            raise ConfigError("empty radial table")
        if r.size != values.size:
            raise ConfigError("radius and value columns differ in length")
        if r.size < 4:
            raise ConfigError("radial table needs at least 4 points")
        if not np.all(np.diff(r) > 0):
            raise ConfigError("radial grid must be strictly increasing")
        if r[0] < 0:
            raise DomainError("radii must be >= 0")
        if not np.all(np.isfinite(values)):
            raise ConfigError("non-finite density values in table")
        super().__init__(d)
        self.r_grid = r
        self.values = values
        self._interp = PchipInterpolator(r, values, extrapolate=False)
        self._dinterp = self._interp.derivative()

    def sigma(self, r):
        r = np.asarray(r, dtype=np.float64)
        out = self._interp(np.clip(r, self.r_grid[0], self.r_grid[-1]))
        out = np.where(r > self.r_grid[-1], 0.0, out)
        return out

    def dsigma(self, r):
        r = np.asarray(r, dtype=np.float64)
        out = self._dinterp(np.clip(r, self.r_grid[0], self.r_grid[-1]))
        out = np.where((r > self.r_grid[-1]) | (r < self.r_grid[0]), 0.0, out)
        return out

    def tail_radius(self, power=None):
        return float(self.r_grid[-1])

    def moment(self, k):
        # sigma is piecewise cubic, so per-knot Gauss-Legendre is exact
        if k < 0:
            raise DomainError("moment order must be >= 0")
        k = int(k)
        if k not in self._moments:
            x, w = np.polynomial.legendre.leggauss(8)
            a, b = self.r_grid[:-1], self.r_grid[1:]
            half = 0.5 * (b - a)
            nodes = (0.5 * (a + b)[:, None] + half[:, None] * x[None, :]).ravel()
            wts = (half[:, None] * w[None, :]).ravel()
            vals = np.asarray(self.sigma(nodes)) * nodes ** k
            self._moments[k] = float(np.dot(wts, vals))
        return self._moments[k]

    def to_json(self):
        return {"kind": "tabulated", "d": self.d,
                "r": self.r_grid.tolist(), "sigma": self.values.tolist()}


@dataclass(frozen=True)
class FlowContext:
    """A medium together with the body speed through it."""
    density: RadialDensity
    V: float

    def __post_init__(self):
        if not (self.V > 0):
            raise DomainError("speed V must be > 0")

    @property
    def d(self):
        return self.density.d

    @property
    def nu(self):
        return self.density.nu


@dataclass
class AdmissibilityReport:
    admissible: bool
    borderline: bool
    checks: dict = field(default_factory=dict)

    def __str__(self):
        lines = [f"admissible={self.admissible} borderline={self.borderline}"]
        for name, (ok, worst, where) in self.checks.items():
            lines.append(f"  {name:12s} {'ok' if ok else 'FAIL':4s} worst={worst:.3e} at r={where:.4g}")
        return "\n".join(lines)


def validate_condition_A(density, grid=None, tol=1e-9, on_borderline="warn"):
    """Grid test of the admissibility conditions.

    on_borderline: "warn" keeps borderline media admissible (flagged),
    "reject" marks them inadmissible.
    """
    if on_borderline not in ("warn", "reject"):
        raise ConfigError("on_borderline must be 'warn' or 'reject'")
    if grid is None:
        hi = max(density.tail_radius(), 1.0)
        grid = np.geomspace(1e-4 * hi, hi, 512)
    grid = np.asarray(grid, dtype=np.float64)
    if grid.size == 0:
        raise ConfigError("empty validation grid")
    if np.any(grid <= 0):
        raise DomainError("validation grid must be positive")

    sig = density.sigma(grid)
    dsig = density.dsigma(grid)
    g = dsig / grid
    checks = {}
    borderline = False

    sig_scale = max(float(np.max(np.abs(sig))), 1e-300)
    worst = float(np.min(sig))
    i = int(np.argmin(sig))
    checks["nonnegative"] = (worst >= -tol * sig_scale, worst, float(grid[i]))

    ok_f = bool(np.all(np.isfinite(g)))
    checks["finite_ratio"] = (ok_f, float(np.min(g)) if ok_f else float("nan"),
                              float(grid[int(np.argmin(g))]) if ok_f else float("nan"))

    # strictness is pointwise: a decaying tail keeps exact tiny negatives,
    # while interpolation wobble (signs grazing zero) goes borderline
    g_scale = max(float(np.max(np.abs(g))), 1e-300)
    worst = float(np.max(g))
    i = int(np.argmax(g))
    strict = bool(np.all(g < 0.0))
    loose = worst <= tol * g_scale
    checks["ratio_negative"] = (loose, worst, float(grid[i]))
    if loose and not strict:
        borderline = True

    dg = np.diff(g)
    worst = float(np.min(dg))
    i = int(np.argmin(dg))
    mono_strict = bool(np.all(dg > 0.0))
    mono_loose = worst >= -tol * g_scale
    checks["ratio_monotone"] = (mono_loose, worst, float(grid[i]))
    if mono_loose and not mono_strict:
        borderline = True

    # decay of the resistance moment integrand over the tail of the grid
    integrand = sig * grid ** (density.d + 1)
    peak = max(float(np.max(integrand)), 1e-300)
    tail = integrand[grid > grid[-1] / 10.0]
    decayed = float(tail[-1]) <= max(1e-8 * peak, float(tail[0]))
    checks["tail_decay"] = (decayed, float(tail[-1]) / peak, float(grid[-1]))

    admissible = all(ok for ok, _, _ in checks.values())
    if borderline and on_borderline == "reject":
        admissible = False
    return AdmissibilityReport(admissible=admissible, borderline=borderline, checks=checks)


def moment(density, k):
    """Radial moment integral int_0^inf sigma(r) r^k dr."""
    return density.moment(k)


def flux_density(ctx):
    """Total mass nu of the medium in a flow context (or bare density)."""
    density = ctx.density if isinstance(ctx, FlowContext) else ctx
    return density.nu


_KINDS = {}


def density_from_json(obj):
    """Rebuild a density from its to_json() form (dict or JSON string)."""
    if isinstance(obj, (str, bytes)):
        try:
            obj = json.loads(obj)
        except json.JSONDecodeError as e:
            raise ConfigError(f"bad density JSON: {e}") from None
    if not isinstance(obj, dict) or "kind" not in obj:
        raise ConfigError("density JSON must be an object with a 'kind' field")
    kind = obj["kind"]
    try:
        if kind == "gaussian":
            return GaussianDensity(obj["d"])
        if kind == "maxwell":
            return MaxwellDensity(obj["d"], obj["mass"], obj["temperature"],
                                  obj.get("number_density", 1.0),
                                  obj.get("boltzmann", 1.0))
        if kind == "mixture":
            comps = [(c["weight"], c["scale"], density_from_json(c["base"]))
                     for c in obj["components"]]
            return MixtureDensity(comps)
        if kind == "tabulated":
            return TabulatedDensity(obj["d"], obj["r"], obj["sigma"])
    except KeyError as e:
        raise ConfigError(f"density JSON missing field {e}") from None
    raise ConfigError(f"unknown density kind {kind!r}")


def density_from_csv(path, d):
    """Read a two-column r,sigma table into a TabulatedDensity."""
    rr, vv = [], []
    with open(path, newline="") as fh:
        for row in csv.reader(fh):
            if not row or row[0].strip().startswith("#"):
                continue
            if len(row) < 2:
                raise ConfigError(f"{path}: expected two columns, got {row!r}")
            try:
                rr.append(float(row[0]))
                vv.append(float(row[1]))
            except ValueError:
                if not rr:   # tolerate a single header line
                    continue
                raise ConfigError(f"{path}: non-numeric row {row!r}") from None
    return TabulatedDensity(d, rr, vv)
