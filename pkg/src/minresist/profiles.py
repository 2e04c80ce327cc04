"""Body profiles, solution kinds, resistance evaluation, certificates.

A convex rotation body of height h splits into a front side of depth h_plus
and a rear side of depth h_minus, h_plus + h_minus = h.  Each side is
described by a profile f: [0,1] -> [-h_side, 0] with f(1) = 0 at the rim,
f(0) = -h_side on the axis, and nondecreasing slope u(t) = f'(t) >= 0 (the
convexity constraint; t is the normalized cylindrical radius).  Resistance
of a side is (d-1) int_0^1 p(u(t)) t^{d-2} dt with the side's pressure law,
and the total is the sum of both sides.

Profiles are piecewise: cone segments (constant slope, includes flat disks
at u=0) and sampled arcs (strictly curved stretches produced by the d>=3
solver).  Slope jumps between segments are allowed; that is where the
optimal slope skips over an envelope component.

The optimality certificate: a side with Lagrange multiplier
lambda = -(d-1) pbar'(U_side) (U_side = h_side when d=2) must satisfy

    (d-1) t^{d-2} p(u(t)) + lambda u(t)  =  min_{v>=0} (d-1) t^{d-2} p(v) + lambda v

at every t.  check_certificate measures the worst violation of that
pointwise minimality over a slope grid.
"""

import json
from dataclasses import dataclass, field
from enum import Enum

import numpy as np

from .errors import ConfigError, DomainError, NumericsError

__all__ = [
    "SolutionKind", "ConeSegment", "ArcSegment", "BodyProfile", "SolveReport",
    "two_slope_side", "cone_side", "flat_side", "arc_side",
    "side_resistance", "profile_resistance", "check_certificate",
    "random_convex_side", "blend_sides",
]

_GL_X, _GL_W = np.polynomial.legendre.leggauss(16)


class SolutionKind(str, Enum):
    Trapezium = "trapezium"
    IsoscelesTriangle = "isosceles-triangle"
    TriangleTrapezium = "triangle-trapezium"
    TwoTriangles = "two-triangles"
    TwoTrianglesTrapezium = "two-triangles-trapezium"
    FirstKind = "first-kind"
    SecondKind = "second-kind"


@dataclass(frozen=True)
class ConeSegment:
    """Constant slope u on [t0, t1] (u=0 is a flat disk piece)."""
    t0: float
    t1: float
    u: float

    def slopes(self, t):
        return np.full_like(t, self.u)

    def min_slope(self):
        return self.u

    def max_slope(self):
        return self.u

    def drop(self):
        return self.u * (self.t1 - self.t0)


@dataclass(frozen=True)
class ArcSegment:
    """Sampled strictly-curved stretch: nodes (t_k, u_k), t strictly up.

    f_nodes, when given, are exact depths relative to the segment start
    (f_nodes[0] = 0); without them the depth falls back to the trapezoid
    rule on the slope nodes.
    """
    t_nodes: np.ndarray
    u_nodes: np.ndarray
    f_nodes: np.ndarray = None

    @property
    def t0(self):
        return float(self.t_nodes[0])

    @property
    def t1(self):
        return float(self.t_nodes[-1])

    def slopes(self, t):
        return np.interp(t, self.t_nodes, self.u_nodes)

    def min_slope(self):
        return float(self.u_nodes[0])

    def max_slope(self):
        return float(self.u_nodes[-1])

    def rel_depth(self, t):
        if self.f_nodes is not None:
            return np.interp(t, self.t_nodes, self.f_nodes)
        fn = np.concatenate([[0.0], np.cumsum(np.diff(self.t_nodes)
                                              * 0.5 * (self.u_nodes[1:] + self.u_nodes[:-1]))])
        return np.interp(t, self.t_nodes, fn)

    def drop(self):
        if self.f_nodes is not None:
            return float(self.f_nodes[-1])
        return float(np.trapezoid(self.u_nodes, self.t_nodes))


def _check_side(segments, h_side, where):
    if h_side < 0:
        raise DomainError("side depth must be >= 0")
    t = 0.0
    prev_u = 0.0
    drop = 0.0
    for seg in segments:
        if abs(seg.t0 - t) > 1e-10:
            raise NumericsError(f"{where}: segment gap at t={t}")
        if seg.min_slope() < prev_u - 1e-8 * (1.0 + prev_u):
            raise NumericsError(f"{where}: slope decreases at t={t}")
        if isinstance(seg, ArcSegment):
            tn, un = seg.t_nodes, seg.u_nodes
            if tn.size < 2 or np.any(np.diff(tn) <= 0):
                raise NumericsError(f"{where}: bad arc parametrization")
            if np.any(np.diff(un) < -1e-8 * (1.0 + np.max(np.abs(un)))):
                raise NumericsError(f"{where}: arc slope not monotone")
        prev_u = seg.max_slope()
        t = seg.t1
        drop += seg.drop()
    if abs(t - 1.0) > 1e-10:
        raise NumericsError(f"{where}: segments end at t={t}, not 1")
    if abs(drop - h_side) > 1e-7 * (1.0 + h_side):
        raise NumericsError(f"{where}: total drop {drop} != depth {h_side}")


class BodyProfile:
    """Front/rear profile pair of a convex rotation body."""

    def __init__(self, d, h_plus, h_minus, front, rear, kind=None, check=True):
        if d < 2:
            raise DomainError("dimension must be >= 2")
        self.d = int(d)
        self.h_plus = float(h_plus)
        self.h_minus = float(h_minus)
        self.front = list(front)
        self.rear = list(rear)
        self.kind = kind
        if check:
            _check_side(self.front, self.h_plus, "front")
            _check_side(self.rear, self.h_minus, "rear")

    @property
    def h(self):
        return self.h_plus + self.h_minus

    @classmethod
    def flat_disk(cls, d):
        return cls(d, 0.0, 0.0, flat_side(), flat_side(), kind=None)

    def _side(self, side):
        if side == "front":
            return self.front, self.h_plus
        if side == "rear":
            return self.rear, self.h_minus
        raise ConfigError("side must be 'front' or 'rear'")

    def slope(self, side, t):
        """Profile slope u(t); array t in [0,1]."""
        segs, _ = self._side(side)
        t = np.atleast_1d(np.asarray(t, dtype=np.float64))
        out = np.empty_like(t)
        for seg in segs:
            m = (t >= seg.t0) & (t <= seg.t1)
            if m.any():
                out[m] = seg.slopes(t[m])
        return out

    def depth(self, side, t):
        """Profile value f(t) (in [-h_side, 0], f(1)=0)."""
        segs, h_side = self._side(side)
        t = np.atleast_1d(np.asarray(t, dtype=np.float64))
        out = np.empty_like(t)
        f0 = -h_side
        for seg in segs:
            m = (t >= seg.t0) & (t <= seg.t1)
            if m.any():
                if isinstance(seg, ConeSegment):
                    out[m] = f0 + seg.u * (t[m] - seg.t0)
                else:
                    out[m] = f0 + seg.rel_depth(t[m])
            f0 += seg.drop()
        return out

    def sample(self, side, n=257):
        """(t, f) polyline including all segment boundaries and arc nodes."""
        segs, _ = self._side(side)
        ts = [np.linspace(0.0, 1.0, n)]
        for seg in segs:
            ts.append([seg.t0, seg.t1])
            if isinstance(seg, ArcSegment):
                ts.append(seg.t_nodes)
        t = np.unique(np.clip(np.concatenate([np.atleast_1d(x) for x in ts]), 0.0, 1.0))
        return t, self.depth(side, t)

    def realized_slopes(self, side, n_arc=64):
        """Representative (t, u) pairs covering what the profile realizes."""
        segs, _ = self._side(side)
        out = []
        for seg in segs:
            if isinstance(seg, ConeSegment):
                out.append((0.5 * (seg.t0 + seg.t1), seg.u))
                out.append((seg.t1, seg.u))
            else:
                tt = np.linspace(seg.t0, seg.t1, n_arc)
                out.extend(zip(tt, seg.slopes(tt)))
        return out

    def to_json(self, n=257):
        t_p, f_p = self.sample("front", n)
        t_m, f_m = self.sample("rear", n)
        return {
            "d": self.d,
            "h": self.h,
            "h_plus": self.h_plus,
            "h_minus": self.h_minus,
            "kind": self.kind.value if self.kind is not None else None,
            "f_plus": [{"t": float(t), "y": float(y)} for t, y in zip(t_p, f_p)],
            "f_minus": [{"t": float(t), "y": float(y)} for t, y in zip(t_m, f_m)],
        }

    @classmethod
    def from_json(cls, obj):
        if isinstance(obj, (str, bytes)):
            try:
                obj = json.loads(obj)
            except json.JSONDecodeError as e:
                raise ConfigError(f"bad profile JSON: {e}") from None
        try:
            d = obj["d"]
            hp, hm = obj["h_plus"], obj["h_minus"]
            kind = obj.get("kind")
            sides = []
            for key in ("f_plus", "f_minus"):
                pts = obj[key]
                t = np.array([p["t"] for p in pts], dtype=np.float64)
                y = np.array([p["y"] for p in pts], dtype=np.float64)
                order = np.argsort(t)
                t, y = t[order], y[order]
                keep = np.concatenate([[True], np.diff(t) > 1e-12])
                t, y = t[keep], y[keep]
                if t.size < 2:
                    raise ConfigError(f"profile JSON side {key} too short")
                du = np.diff(y) / np.diff(t)
                tm = 0.5 * (t[:-1] + t[1:])
                tn = np.concatenate([[0.0], tm, [1.0]])
                un = np.concatenate([[du[0]], du, [du[-1]]])
                un = np.maximum.accumulate(np.maximum(un, 0.0))
                sides.append([ArcSegment(tn, un)])
            kind = SolutionKind(kind) if kind else None
            prof = cls(d, hp, hm, sides[0], sides[1], kind=kind, check=False)
            return prof
        except (KeyError, TypeError) as e:
            raise ConfigError(f"malformed profile JSON: {e}") from None


@dataclass
class SolveReport:
    """Everything the solver knows about one optimal body."""
    d: int
    V: float
    h: float
    h_plus: float
    h_minus: float
    kind: SolutionKind
    R: float
    landmarks: dict = field(default_factory=dict)
    U_plus: float = None
    U_minus: float = None
    diagnostics: dict = field(default_factory=dict)

    def to_json(self):
        out = {
            "d": self.d, "V": self.V, "h": self.h,
            "h_plus": self.h_plus, "h_minus": self.h_minus,
            "kind": self.kind.value, "R": self.R,
            "landmarks": self.landmarks,
        }
        if self.U_plus is not None:
            out["U_plus"] = self.U_plus
        if self.U_minus is not None:
            out["U_minus"] = self.U_minus
        if self.diagnostics:
            out["diagnostics"] = {k: v for k, v in self.diagnostics.items()}
        return out


# -- construction helpers -------------------------------------------------

def flat_side():
    return [ConeSegment(0.0, 1.0, 0.0)]


def cone_side(h_side):
    if h_side == 0.0:
        return flat_side()
    return [ConeSegment(0.0, 1.0, float(h_side))]


def two_slope_side(h_side, u_lo, u_hi):
    """Slope u_lo near the axis, u_hi at the rim, total drop h_side."""
    if not (u_lo <= h_side <= u_hi):
        raise DomainError("two-slope side needs u_lo <= h <= u_hi")
    if u_hi <= u_lo:
        raise DomainError("two-slope side needs u_lo < u_hi")
    ts = (u_hi - h_side) / (u_hi - u_lo)
    if ts <= 0.0:
        return cone_side(h_side)
    if ts >= 1.0:
        return cone_side(h_side)
    return [ConeSegment(0.0, ts, float(u_lo)), ConeSegment(ts, 1.0, float(u_hi))]


def arc_side(t_nodes, u_nodes, t0_flat=None, f_nodes=None):
    """Optional central flat disk up to t0, then a sampled arc to t=1."""
    segs = []
    if t0_flat is not None and t0_flat > 0.0:
        segs.append(ConeSegment(0.0, float(t0_flat), 0.0))
    fn = None if f_nodes is None else np.asarray(f_nodes, dtype=np.float64)
    segs.append(ArcSegment(np.asarray(t_nodes, dtype=np.float64),
                           np.asarray(u_nodes, dtype=np.float64), fn))
    return segs


# -- resistance -----------------------------------------------------------

def side_resistance(segments, curve, d, n_panels=48):
    """(d-1) int_0^1 p(u(t)) t^{d-2} dt for one side."""
    total = 0.0
    for seg in segments:
        if isinstance(seg, ConeSegment):
            total += float(curve.value(seg.u)) * (seg.t1 ** (d - 1) - seg.t0 ** (d - 1))
        else:
            a, b = seg.t0, seg.t1
            edges = np.linspace(a, b, n_panels + 1)
            half = 0.5 * (edges[1] - edges[0])
            mids = 0.5 * (edges[:-1] + edges[1:])
            t = (mids[:, None] + half * _GL_X[None, :]).ravel()
            w = np.tile(half * _GL_W, n_panels)
            p = np.asarray(curve.value(seg.slopes(t)))
            total += float((d - 1) * np.sum(w * p * t ** (d - 2)))
    return total


def profile_resistance(profile, front_curve, rear_curve, n_panels=48):
    """Total resistance of a body profile under the two pressure laws."""
    return (side_resistance(profile.front, front_curve, profile.d, n_panels)
            + side_resistance(profile.rear, rear_curve, profile.d, n_panels))


# -- optimality certificate ------------------------------------------------

def _side_certificate(profile, side, curve, lam, u_grid, n_t=160):
    d = profile.d
    pv = np.asarray(curve.value(u_grid), dtype=np.float64)
    worst = 0.0
    at = None
    for t, u in profile.realized_slopes(side, n_arc=n_t):
        wgt = (d - 1) * t ** (d - 2)
        lhs = wgt * float(curve.value(u)) + lam * u
        best = float(np.min(wgt * pv + lam * u_grid))
        gap = lhs - best
        if gap > worst:
            worst, at = gap, (t, u)
    return worst, at


def check_certificate(profile, front_env, rear_env, n_u=1200, u_hi=None):
    """Max violation of the pointwise support condition per side.

    Returns {"lambda_front", "lambda_rear", "violation_front",
    "violation_rear"}; violations are absolute and should sit at roundoff
    scale (relative to the pressure range) for true optima.
    """
    d = profile.d
    out = {}
    for side, env, h_side in (("front", front_env, profile.h_plus),
                              ("rear", rear_env, profile.h_minus)):
        segs, _ = profile._side(side)
        U = max(seg.max_slope() for seg in segs)
        if h_side == 0.0 or U == 0.0:
            # flat side: lambda = 0 supports it iff p is minimal at 0 on
            # the envelope, which holds by construction; nothing to check
            out[f"lambda_{side}"] = 0.0
            out[f"violation_{side}"] = 0.0
            continue
        lam = -(d - 1) * float(env.slope(U))
        hi = u_hi or max(10.0, 3.0 * U)
        u_grid = np.unique(np.concatenate([
            np.linspace(0.0, hi, n_u),
            np.geomspace(1e-4, hi, n_u // 2),
            [U, h_side],
        ]))
        worst, at = _side_certificate(profile, side, env.curve, lam, u_grid)
        out[f"lambda_{side}"] = lam
        out[f"violation_{side}"] = worst
        if at is not None:
            out[f"violation_{side}_at"] = at
    return out


# -- perturbations (used by validation tests and the validate command) ----

def random_convex_side(h_side, rng, u_cap=None, max_pieces=5):
    """Random admissible side profile of the given depth."""
    if h_side <= 0.0:
        return flat_side()
    cap = u_cap if u_cap is not None else 3.0 * h_side + 2.0
    k = int(rng.integers(2, max_pieces + 1))
    slopes = np.sort(rng.uniform(0.0, cap, size=k))
    widths = rng.random(k) + 0.1
    widths /= widths.sum()
    drop = float(np.sum(slopes * widths))
    if drop <= 0.0:
        return cone_side(h_side)
    slopes *= h_side / drop
    segs = []
    t = 0.0
    for u, w in zip(slopes, widths):
        segs.append(ConeSegment(t, t + w, float(u)))
        t += w
    last = segs.pop()
    segs.append(ConeSegment(last.t0, 1.0, last.u))
    return segs


def blend_sides(profile, side, other_segments, s, n=513):
    """Convex blend of slope functions: (1-s) u_opt + s u_other.

    Both sides must have the same depth; the blend then keeps it, and a
    pointwise convex combination of nondecreasing slopes is nondecreasing,
    so the result is admissible.
    """
    t = np.linspace(0.0, 1.0, n)
    u_own = profile.slope(side, t)
    tmp = BodyProfile(profile.d, 1.0, 0.0, other_segments, flat_side(), check=False)
    u_oth = tmp.slope("front", t)
    u = (1.0 - s) * u_own + s * u_oth
    # the sampled slope polyline is the profile; rescale so its drop is
    # exactly the side depth again (sampling a cone kink shifts it a bit)
    h_side = profile.h_plus if side == "front" else profile.h_minus
    drop = float(np.trapezoid(u, t))
    if drop > 0.0 and h_side > 0.0:
        u *= h_side / drop
    return [ArcSegment(t, u)]
