"""Convex lower envelopes of pressure curves on [0, infinity).

The solvers never use a pressure curve directly, only its convex lower
envelope pbar.  The envelope agrees with the curve except on finitely many
open intervals (components) where it is a straight chord; the component
endpoints are tangency points.  The structurally important landmarks are

  u0      right endpoint of the component starting at u=0
          (the curve is flat at 0 and concave nearby, so such a component
          always exists for a genuine pressure curve),
  B       = -pbar'(0), the magnitude of the envelope slope on it,
  u_star  for the front side: the slope location where the front envelope
          slope has decayed to -B_minus of the rear side.

build_envelope samples the curve on a graded grid, takes the lower convex
hull (with far grid extent scaled to the speed so no structure is missed),
then sharpens each hull gap into exact tangency by root finding: the
from-zero component solves p(y) - p(0) - y p'(y) = 0, interior components
solve the two-point tangency system.  Components closer than the tie
tolerance are merged and flagged; hull gaps whose dip depth is below
numerical noise are dropped.
"""

from dataclasses import dataclass, field

import numpy as np
from scipy.optimize import brentq, root

from .errors import DomainError, NumericsError

__all__ = [
    "EnvelopeComponent", "EnvelopeAnalysis", "build_envelope",
    "landmark_u0_B", "find_u_star", "component_of",
]

ON_ENVELOPE_RTOL = 1e-9      # chord-below-curve verification, times range
TIE_MERGE_TOL = 1e-8         # component endpoints closer than this merge
MICROGAP_RTOL = 1e-10        # hull gaps shallower than this are noise


@dataclass(frozen=True)
class EnvelopeComponent:
    """Open interval (lo, hi) where the envelope is a chord."""
    lo: float
    hi: float
    p_lo: float
    p_hi: float

    @property
    def slope(self):
        return (self.p_hi - self.p_lo) / (self.hi - self.lo)

    def contains(self, h):
        return self.lo < h < self.hi

    def chord(self, h):
        return self.p_lo + self.slope * (h - self.lo)


@dataclass
class EnvelopeAnalysis:
    """Convex lower envelope of a pressure curve over [0, infinity)."""
    curve: object
    u_max: float
    components: list
    diagnostics: dict = field(default_factory=dict)

    def component_of(self, h):
        """Component whose open interval contains h, else None."""
        if h < 0:
            raise DomainError("slope must be >= 0")
        for c in self.components:
            if c.contains(h):
                return c
            if c.lo > h:
                break
        return None

    def value(self, h):
        if np.ndim(h) > 0:
            return np.array([self.value(x) for x in np.asarray(h, dtype=float)])
        h = float(h)
        if h < 0:
            raise DomainError("slope must be >= 0")
        c = self.component_of(h)
        if c is not None:
            return c.chord(h)
        return float(self.curve.value(h))

    def slope(self, h):
        if np.ndim(h) > 0:
            return np.array([self.slope(x) for x in np.asarray(h, dtype=float)])
        h = float(h)
        if h < 0:
            raise DomainError("slope must be >= 0")
        c = self.component_of(h)
        if c is not None:
            return c.slope
        # at a component endpoint the curve tangent equals the chord slope,
        # so falling through to the curve is consistent
        return float(self.curve.slope(h))

    @property
    def u0(self):
        if self.components and self.components[0].lo == 0.0:
            return self.components[0].hi
        return 0.0

    @property
    def B(self):
        if self.components and self.components[0].lo == 0.0:
            return -self.components[0].slope
        return -float(self.curve.slope(0.0))

    def tail(self):
        return float(self.curve.tail())


def _grid(u_max, n_grid):
    small = np.geomspace(1e-6, 0.1, 64)
    x = np.linspace(np.arctan(0.1), np.arctan(u_max), n_grid)
    return np.concatenate([[0.0], small[:-1], np.tan(x)])


def _lower_hull(u, p):
    """Indices of the lower convex hull vertices of the sampled curve."""
    hull = [0]
    for i in range(1, u.size):
        while len(hull) >= 2:
            i0, i1 = hull[-2], hull[-1]
            cross = (u[i1] - u[i0]) * (p[i] - p[i0]) - (p[i1] - p[i0]) * (u[i] - u[i0])
            if cross <= 0.0:
                hull.pop()
            else:
                break
        hull.append(i)
    return hull


def _refine_from_zero(curve, p0, lo, hi):
    """Tangency from (0, p(0)): root of g(y) = p(y) - p0 - y p'(y)."""
    def g(y):
        return float(curve.value(y)) - p0 - y * float(curve.slope(y))

    glo, ghi = g(lo), g(hi)
    k = 0
    while glo <= 0.0 and k < 8:      # walk left if the bracket missed
        lo *= 0.5
        glo = g(lo)
        k += 1
    while ghi >= 0.0 and k < 60:     # or right
        hi *= 1.3
        ghi = g(hi)
        k += 1
    if not (glo > 0.0 > ghi):
        raise NumericsError("could not bracket the from-zero tangency")
    return brentq(g, lo, hi, xtol=1e-13, rtol=8.9e-16)


def _refine_two_point(curve, lo, hi, span):
    """Two-point tangency: p'(l) = p'(r) = chord slope."""
    def F(x):
        l, r = x
        if not (0.0 < l < r):
            return [1.0, -1.0]
        pl, pr = float(curve.value(l)), float(curve.value(r))
        s = (pr - pl) / (r - l)
        return [float(curve.slope(l)) - s, float(curve.slope(r)) - s]

    sol = root(F, [lo, hi], method="hybr", tol=1e-13)
    l, r = sol.x
    ok = sol.success and 0.0 < l < r and abs(l - lo) < span and abs(r - hi) < span
    if ok:
        res = F([l, r])
        scale = max(abs(float(curve.slope(lo))), abs(float(curve.slope(hi))), 1e-300)
        ok = max(abs(res[0]), abs(res[1])) < 1e-7 * scale
    return (l, r) if ok else None


def build_envelope(curve, u_max=None, n_grid=None, tol=ON_ENVELOPE_RTOL):
    """Compute the convex lower envelope of a pressure curve."""
    if u_max is None:
        u_max = curve.suggest_umax()
    if n_grid is None:
        n_grid = 2048 if u_max <= 64 else 4096
    u = _grid(u_max, n_grid)
    p = np.asarray(curve.value(u), dtype=np.float64)
    if not np.all(np.isfinite(p)):
        raise NumericsError("pressure curve returned non-finite values")
    rng = curve.range_scale()
    tail = curve.tail()
    if np.min(p) < tail - 1e-7 * rng:
        raise NumericsError("pressure curve dips below its own tail value; "
                            "envelope over [0, inf) is ill-posed")

    hull = _lower_hull(u, p)
    diagnostics = {"ties": [], "dropped_microgaps": 0, "unrefined": 0}
    comps = []
    for a, b in zip(hull[:-1], hull[1:]):
        if b == a + 1:
            continue
        # genuine dip? measure the gap between curve and chord inside
        inner = slice(a + 1, b)
        chord = p[a] + (p[b] - p[a]) / (u[b] - u[a]) * (u[inner] - u[a])
        depth = float(np.max(p[inner] - chord))
        if depth <= MICROGAP_RTOL * rng:
            diagnostics["dropped_microgaps"] += 1
            continue
        if a == 0:
            hi0 = u[b]
            y = _refine_from_zero(curve, p[0], max(u[b - 1], 1e-6), min(hi0 * 1.02, u_max))
            comps.append(EnvelopeComponent(0.0, y, float(p[0]), float(curve.value(y))))
        else:
            span = 4.0 * (u[b] - u[a])
            ref = _refine_two_point(curve, u[a], u[b], span)
            if ref is None:
                diagnostics["unrefined"] += 1
                comps.append(EnvelopeComponent(float(u[a]), float(u[b]),
                                               float(p[a]), float(p[b])))
            else:
                l, r = ref
                comps.append(EnvelopeComponent(l, r, float(curve.value(l)),
                                               float(curve.value(r))))

    # merge components whose endpoints nearly touch (degenerate media)
    merged = []
    for c in comps:
        if merged and c.lo - merged[-1].hi <= TIE_MERGE_TOL * (1.0 + abs(c.lo)):
            prev = merged.pop()
            diagnostics["ties"].append((prev.hi, c.lo))
            merged.append(EnvelopeComponent(prev.lo, c.hi, prev.p_lo, c.p_hi))
        else:
            merged.append(c)

    env = EnvelopeAnalysis(curve=curve, u_max=float(u_max),
                           components=merged, diagnostics=diagnostics)
    _verify_on_envelope(env, u, p, rng, tol)
    return env


def _verify_on_envelope(env, u, p, rng, tol):
    """The chords must not cut above the curve anywhere on the grid."""
    worst = 0.0
    for c in env.components:
        sel = (u > c.lo) & (u < c.hi)
        if not np.any(sel):
            continue
        chord = c.p_lo + c.slope * (u[sel] - c.lo)
        worst = max(worst, float(np.max(chord - p[sel])))
    env.diagnostics["chord_excess"] = worst
    if worst > tol * rng:
        raise NumericsError(
            f"envelope verification failed: chord exceeds curve by {worst:.3e} "
            f"({worst / rng:.2e} of range)")


def landmark_u0_B(env):
    """(u0, B) of the from-zero component; (0, -p'(0)) if there is none."""
    return env.u0, env.B


def find_u_star(front_env, rear_env):
    """Front slope location where the front envelope slope reaches -B_minus.

    Requires B_plus > B_minus; anything else means the pressure curves are
    defective (front must start steeper than the rear).
    """
    B_plus = front_env.B
    B_minus = rear_env.B if isinstance(rear_env, EnvelopeAnalysis) else float(rear_env)
    if not (B_plus > B_minus):
        raise NumericsError(
            f"invariant violated: B_plus={B_plus:.6e} <= B_minus={B_minus:.6e}")
    u0p = front_env.u0
    curve = front_env.curve

    def g(y):
        return float(curve.slope(y)) + B_minus

    lo = u0p
    hi = max(2.0 * u0p, u0p + 1.0)
    k = 0
    while g(hi) <= 0.0:
        hi *= 1.6
        k += 1
        if k > 80:
            raise NumericsError("u_star bracket expansion failed")
    return brentq(g, lo, hi, xtol=1e-13, rtol=8.9e-16)


def component_of(env, h):
    """Module-level alias for EnvelopeAnalysis.component_of."""
    return env.component_of(h)
