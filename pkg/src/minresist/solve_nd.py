"""Optimal convex bodies of revolution, d >= 3.

With the radial weight t^{d-2} in the side functional, optimal side
profiles are no longer piecewise conical.  The construction runs through
the transform

    q(u) = |pbar'(u)|^{-1/(d-2)},      Q(u) = int_0^u q,

in terms of which the optimal side of parameter U realizes slope u at
radius t = q(u)/q(U): a flat disk of radius t0 = q(0)/q(U), then a curved
flank whose slope follows the inverse of the t-map.  The side depth and
value are

    h_map(U) = U - Q(U)/q(U),          r_map(U) = pbar(U) + Q(U)/q(U)^{d-1}.

h_map is nondecreasing and constant exactly on envelope components, so its
generalized inverse solve_U uses the segment supremum.  Bodies split into

    FirstKind  (h <= h_star): rear side flat, front side solves
               h_map(U_plus) = h, with h_star = u_star - B_minus^omega
               Q_plus(u_star) the largest height at which the front flank
               alone can still end at the mutual slope balance;
    SecondKind (h > h_star): both sides curved, the split h_plus + h_minus
               = h balancing pbar_plus'(U_plus) = pbar_minus'(U_minus).
"""

import numpy as np
from scipy.optimize import brentq

from .envelope import build_envelope, find_u_star
from .errors import DomainError, NumericsError
from .medium import FlowContext
from .pressure import PressureCurve
from .profiles import (ArcSegment, BodyProfile, ConeSegment, SolutionKind,
                       SolveReport, flat_side)

__all__ = ["QTransform", "ProblemND", "solve_U", "build_profile_nd",
           "side_value_nd", "compute_h_star", "solve_nd"]

_GL_X, _GL_W = np.polynomial.legendre.leggauss(16)


class QTransform:
    """q/Q machinery on one envelope, with cumulative integrals cached."""

    def __init__(self, env, d):
        if d < 3:
            raise DomainError("the q-transform needs d >= 3")
        self.env = env
        self.d = int(d)
        self.omega = 1.0 / (d - 2)

        # pieces: (a, b, q_const or None); None means on-curve, where q
        # varies and the cumulative integral uses cached GL panels
        bps = [0.0]
        for c in env.components:
            bps.extend((c.lo, c.hi))
        bps = sorted(set(bps))
        self._pieces = []
        comps = list(env.components)
        for a, b in zip(bps[:-1], bps[1:]):
            if b <= a:
                continue
            mid = 0.5 * (a + b)
            qc = None
            for c in comps:
                if c.lo <= mid <= c.hi:
                    qc = self._q_of_slope(c.slope)
                    break
            self._pieces.append([a, b, qc])
        self._pieces.append([bps[-1], bps[-1], None])   # open-ended tail
        self._tail_edges = [bps[-1]]
        self._tail_cum = [0.0]
        self._cum_at = None
        self._build_cums()

    def _q_of_slope(self, s):
        if not (s < 0.0):
            raise NumericsError("q-transform hit a nonnegative envelope slope")
        return (-s) ** (-self.omega)

    def _q_vec(self, u):
        u = np.asarray(u, dtype=np.float64)
        s = np.asarray(self.env.curve.slope(u), dtype=np.float64)
        if np.any(s >= 0.0):
            raise NumericsError("q-transform hit a nonnegative curve slope")
        return (-s) ** (-self.omega)

    def _gl(self, a, b):
        if b <= a:
            return 0.0
        half = 0.5 * (b - a)
        nodes = 0.5 * (a + b) + half * _GL_X
        return float(half * np.sum(_GL_W * self._q_vec(nodes)))

    def _curve_cum(self, a, b):
        """Cached panelized cumulative of q over an on-curve stretch."""
        n = max(8, int(np.ceil(2.0 * (b - a))))
        edges = np.linspace(a, b, n + 1)
        cum = np.zeros(n + 1)
        for i in range(n):
            cum[i + 1] = cum[i] + self._gl(edges[i], edges[i + 1])
        return edges, cum

    def _build_cums(self):
        total = 0.0
        self._cum_at = []
        for piece in self._pieces[:-1]:
            a, b, qc = piece
            if qc is not None:
                piece.append(None)
                inc = qc * (b - a)
            else:
                edges, cum = self._curve_cum(a, b)
                piece.append((edges, cum))
                inc = float(cum[-1])
            self._cum_at.append(total)
            total += inc
        self._cum_at.append(total)   # start of the open tail

    def _extend_tail(self, u):
        step = max(0.5, 0.01 * u)
        while self._tail_edges[-1] < u:
            a = self._tail_edges[-1]
            b = a + step
            self._tail_cum.append(self._tail_cum[-1] + self._gl(a, b))
            self._tail_edges.append(b)

    def q(self, u):
        u = float(u)
        if u < 0:
            raise DomainError("slope must be >= 0")
        for a, b, qc, *_ in self._pieces[:-1]:
            if u <= b:
                return qc if qc is not None else float(self._q_vec(u))
        return float(self._q_vec(u))

    def Q(self, u):
        u = float(u)
        if u < 0:
            raise DomainError("slope must be >= 0")
        for (a, b, qc, *rest), cum0 in zip(self._pieces[:-1], self._cum_at):
            if u <= b:
                if qc is not None:
                    return cum0 + qc * (u - a)
                edges, cum = rest[0]
                i = min(int(np.searchsorted(edges, u, side="right")) - 1,
                        edges.size - 2)
                i = max(i, 0)
                return cum0 + float(cum[i]) + self._gl(float(edges[i]), u)
        self._extend_tail(u)
        i = int(np.searchsorted(self._tail_edges, u, side="right")) - 1
        i = min(max(i, 0), len(self._tail_edges) - 2)
        return self._cum_at[-1] + self._tail_cum[i] \
            + self._gl(self._tail_edges[i], u)

    def h_map(self, u):
        if u == 0.0:
            return 0.0
        return u - self.Q(u) / self.q(u)

    def r_map(self, u):
        """Side value at parameter U."""
        if u == 0.0:
            return float(self.env.value(0.0))
        return float(self.env.value(u)) + self.Q(u) / self.q(u) ** (self.d - 1)

    def solve_U(self, h, rtol=1e-13):
        """Segment supremum of {U : h_map(U) = h}."""
        if h < 0:
            raise DomainError("side depth must be >= 0")
        if h == 0.0:
            return self.env.u0
        lo = 0.0
        hi = max(self.env.u0, h) + 1.0
        k = 0
        while self.h_map(hi) <= h:
            lo = hi
            hi *= 1.6
            k += 1
            if k > 80:
                raise NumericsError("solve_U bracket expansion failed")
        while hi - lo > rtol * (1.0 + hi):
            mid = 0.5 * (lo + hi)
            if self.h_map(mid) > h:
                hi = mid
            else:
                lo = mid
        U = hi
        c = self.env.component_of(U)
        if c is not None and abs(self.h_map(c.hi) - h) <= 1e-9 * (1.0 + abs(h)):
            U = c.hi   # snap to the segment supremum on a flat stretch
        return U


def solve_U(qt, h):
    return qt.solve_U(h)


def side_value_nd(qt, U):
    return qt.r_map(U)


def compute_h_star(front_qt, u_star, B_minus):
    """Largest height solvable with a flat rear side."""
    return u_star - B_minus ** front_qt.omega * front_qt.Q(u_star)


def build_profile_nd(qt, h_side, U, n_nodes=256):
    """Side profile (flat disk + curved flank) for parameter U."""
    env = qt.env
    if h_side == 0.0 or U <= env.u0 * (1.0 + 1e-12):
        return flat_side()
    qU = qt.q(U)
    t0 = qt.q(0.0) / qU

    # on-curve stretches between envelope components inside [u0, U]
    stretches = []
    start = env.u0
    for c in env.components:
        if c.lo <= start:
            continue
        if c.hi >= U:
            break
        if c.lo > start:
            stretches.append((start, min(c.lo, U)))
        start = c.hi
    if U > start:
        stretches.append((start, U))

    per = max(24, n_nodes // max(1, len(stretches)))
    segs = [ConeSegment(0.0, t0, 0.0)]
    for a, b in stretches:
        k = np.arange(per)
        u = a + (b - a) * 0.5 * (1.0 - np.cos(np.pi * k / (per - 1)))
        u[0], u[-1] = a, b
        qq = np.array([qt.q(x) for x in u])
        QQ = np.array([qt.Q(x) for x in u])
        t = qq / qU
        f = (u * qq - QQ) / qU
        segs.append(ArcSegment(t, u, f - f[0]))
    return segs


class ProblemND:
    """Curves, envelopes, landmarks and q-transforms for one (density, V)."""

    def __init__(self, density, V, backend="auto", curves=None):
        if density.d < 3:
            raise DomainError("ProblemND needs d >= 3 (use Problem2D for d=2)")
        FlowContext(density, V)
        self.density = density
        self.V = float(V)
        self.d = density.d
        if curves is None:
            curves = PressureCurve.pair(density, V, backend=backend)
        self.front, self.rear = curves
        self.front_env = build_envelope(self.front)
        self.rear_env = build_envelope(self.rear)
        self.u_plus0 = self.front_env.u0
        self.B_plus = self.front_env.B
        self.u_minus0 = self.rear_env.u0
        self.B_minus = self.rear_env.B
        self.u_star = find_u_star(self.front_env, self.rear_env)
        self.front_qt = QTransform(self.front_env, self.d)
        self._rear_qt = None
        self.h_star = compute_h_star(self.front_qt, self.u_star, self.B_minus)

    @property
    def rear_qt(self):
        if self._rear_qt is None:
            self._rear_qt = QTransform(self.rear_env, self.d)
        return self._rear_qt

    def landmarks(self):
        return {
            "u_plus0": self.u_plus0, "B_plus": self.B_plus,
            "u_minus0": self.u_minus0, "B_minus": self.B_minus,
            "u_star": self.u_star, "h_star": self.h_star,
        }

    def _split(self, h):
        """Balance pbar_plus'(U_plus(z)) = pbar_minus'(U_minus(h-z))."""
        fq, rq = self.front_qt, self.rear_qt

        def phi(z):
            Up = fq.solve_U(z)
            Um = rq.solve_U(h - z)
            return float(self.front_env.slope(Up)) - float(self.rear_env.slope(Um))

        lo, hi = self.h_star, h
        plo = phi(lo)
        if plo >= 0.0:
            return lo
        return brentq(phi, lo, hi, xtol=1e-11 * (1.0 + h), rtol=8.9e-16)

    def solve(self, h):
        if not (h > 0):
            raise DomainError("body height h must be > 0")
        diagnostics = {"backend": self.front.backend}
        if h <= self.h_star:
            kind = SolutionKind.FirstKind
            U_plus = self.front_qt.solve_U(h)
            h_plus, h_minus = float(h), 0.0
            U_minus = None
            front = build_profile_nd(self.front_qt, h_plus, U_plus)
            rear = flat_side()
            R = self.front_qt.r_map(U_plus) + self.rear_env.value(0.0)
            diagnostics["h_residual"] = self.front_qt.h_map(U_plus) - h
        else:
            kind = SolutionKind.SecondKind
            h_plus = float(self._split(h))
            h_minus = float(h - h_plus)
            U_plus = self.front_qt.solve_U(h_plus)
            U_minus = self.rear_qt.solve_U(h_minus)
            front = build_profile_nd(self.front_qt, h_plus, U_plus)
            rear = build_profile_nd(self.rear_qt, h_minus, U_minus)
            R = self.front_qt.r_map(U_plus) + self.rear_qt.r_map(U_minus)
            diagnostics["slope_balance_residual"] = \
                float(self.front_env.slope(U_plus)) - float(self.rear_env.slope(U_minus))
            diagnostics["h_residual"] = \
                (self.front_qt.h_map(U_plus) - h_plus,
                 self.rear_qt.h_map(U_minus) - h_minus)

        profile = BodyProfile(self.d, h_plus, h_minus, front, rear, kind=kind)
        report = SolveReport(d=self.d, V=self.V, h=float(h), h_plus=h_plus,
                             h_minus=h_minus, kind=kind, R=float(R),
                             landmarks=self.landmarks(), U_plus=U_plus,
                             U_minus=U_minus, diagnostics=diagnostics)
        return profile, report


def solve_nd(density, V, h, backend="auto"):
    """One-call solve; build a ProblemND yourself to amortize over many h."""
    return ProblemND(density, V, backend=backend).solve(h)
