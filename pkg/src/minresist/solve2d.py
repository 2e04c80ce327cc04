"""Optimal convex bodies of revolution, d = 2.

For d=2 the side functional is int_0^1 p(u(t)) dt under int_0^1 u = h_side,
so a side is optimal iff its slopes realize the convex envelope value
pbar(h_side): a single cone when h_side is outside every envelope
component, the two tangency slopes of its component otherwise.  The split
h = h_plus + h_minus then minimizes pbar_plus(h_plus) + pbar_minus(h_minus),
which classifies into five regimes by the landmarks u_plus0, u_star and
u_star + u_minus0:

  h <  u_plus0                  Trapezium: front flat+cone, rear disk
  u_plus0 <= h <= u_star        IsoscelesTriangle: front cone, rear disk
  u_star < h < u_star+u_minus0  TriangleTrapezium: front cone at u_star,
                                rear flat+cone soaking up the rest
  h >= u_star+u_minus0          equalize slopes: pbar_plus'(h_plus) =
                                pbar_minus'(h_minus); TwoTriangles, or
                                TwoTrianglesTrapezium when h_minus falls
                                in an interior rear envelope component

The split root in the last regime must be bracketed inside
[u_plus0, h - u_minus0]: outside that window the raw slope curves carry
spurious sign changes (front pre-tangency concavity, rear noise floor).
"""

import os
from concurrent.futures import ThreadPoolExecutor

import numpy as np
from scipy.optimize import brentq

from .envelope import build_envelope, find_u_star
from .errors import ConfigError, DomainError
from .medium import FlowContext
from .pressure import PressureCurve
from .profiles import (BodyProfile, SolutionKind, SolveReport, cone_side,
                       flat_side, two_slope_side)

__all__ = ["Problem2D", "minimize_side_2d", "solve_2d", "region_curves_2d"]


def minimize_side_2d(env, h_side):
    """Optimal single-side profile of depth h_side; returns (segments, value)."""
    if h_side < 0:
        raise DomainError("side depth must be >= 0")
    if h_side == 0.0:
        return flat_side(), env.value(0.0)
    c = env.component_of(h_side)
    if c is None:
        return cone_side(h_side), env.value(h_side)
    return two_slope_side(h_side, c.lo, c.hi), env.value(h_side)


class Problem2D:
    """Pressure curves, envelopes and landmarks for one (density, V)."""

    def __init__(self, density, V, backend="auto", curves=None):
        if density.d != 2:
            raise DomainError("Problem2D needs a d=2 density")
        ctx = FlowContext(density, V)   # validates V > 0
        self.density = density
        self.V = float(V)
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

    def landmarks(self):
        return {
            "u_plus0": self.u_plus0, "B_plus": self.B_plus,
            "u_minus0": self.u_minus0, "B_minus": self.B_minus,
            "u_star": self.u_star,
            "u_star_plus_u_minus0": self.u_star + self.u_minus0,
        }

    def _split_root(self, h):
        """Equal-slope split for tall bodies, bracketed away from the
        pre-tangency regions where raw slopes are non-monotone."""
        fe, re = self.front_env, self.rear_env

        def g(z):
            return float(self.front.slope(z)) - re.slope(h - z)

        lo, hi = self.u_plus0, h - self.u_minus0
        glo, ghi = g(lo), g(hi)
        if glo >= 0.0:
            return lo
        if ghi <= 0.0:
            return hi
        return brentq(g, lo, hi, xtol=1e-12, rtol=8.9e-16)

    def solve(self, h):
        if not (h > 0):
            raise DomainError("body height h must be > 0")
        fe, re = self.front_env, self.rear_env
        diagnostics = {}
        if h < self.u_plus0:
            kind = SolutionKind.Trapezium
            h_plus, h_minus = h, 0.0
            front = two_slope_side(h, 0.0, self.u_plus0)
            rear = flat_side()
        elif h <= self.u_star:
            kind = SolutionKind.IsoscelesTriangle
            h_plus, h_minus = h, 0.0
            front = cone_side(h)
            rear = flat_side()
        elif h < self.u_star + self.u_minus0:
            kind = SolutionKind.TriangleTrapezium
            h_plus, h_minus = self.u_star, h - self.u_star
            front = cone_side(h_plus)
            rear = two_slope_side(h_minus, 0.0, self.u_minus0)
        else:
            h_plus = self._split_root(h)
            h_minus = h - h_plus
            diagnostics["split_residual"] = \
                float(self.front.slope(h_plus)) - re.slope(h_minus)
            front = cone_side(h_plus)
            c = re.component_of(h_minus)
            if c is None:
                kind = SolutionKind.TwoTriangles
                rear = cone_side(h_minus)
            else:
                kind = SolutionKind.TwoTrianglesTrapezium
                rear = two_slope_side(h_minus, c.lo, c.hi)

        R = fe.value(h_plus) + re.value(h_minus)
        profile = BodyProfile(2, h_plus, h_minus, front, rear, kind=kind)
        report = SolveReport(d=2, V=self.V, h=float(h), h_plus=h_plus,
                             h_minus=h_minus, kind=kind, R=float(R),
                             landmarks=self.landmarks(),
                             diagnostics=diagnostics)
        report.diagnostics["backend"] = self.front.backend
        return profile, report


def solve_2d(density, V, h, backend="auto"):
    """One-call solve; build a Problem2D yourself to amortize over many h."""
    return Problem2D(density, V, backend=backend).solve(h)


def _thread_count():
    raw = os.environ.get("MINRES_THREADS", "").strip()
    if not raw:
        return min(8, os.cpu_count() or 1)
    try:
        n = int(raw)
    except ValueError:
        raise ConfigError(f"MINRES_THREADS must be an integer, got {raw!r}") from None
    if n < 1:
        raise ConfigError("MINRES_THREADS must be >= 1")
    return n


def region_curves_2d(density, V_grid, backend="auto", threads=None):
    """Landmark curves V -> (u_plus0, u_star, u_star + u_minus0).

    Returns (rows, errors): rows in V_grid order with NaNs where a speed
    failed, errors as (V, message) pairs.
    """
    V_grid = np.atleast_1d(np.asarray(V_grid, dtype=np.float64))
    if V_grid.size == 0:
        raise ConfigError("empty V grid")
    n_threads = threads if threads is not None else _thread_count()

    def work(V):
        prob = Problem2D(density, V, backend=backend)
        return (V, prob.u_plus0, prob.u_star, prob.u_star + prob.u_minus0)

    rows = [None] * V_grid.size
    errors = []
    with ThreadPoolExecutor(max_workers=n_threads) as pool:
        futs = {i: pool.submit(work, float(V)) for i, V in enumerate(V_grid)}
        for i in sorted(futs):
            try:
                rows[i] = futs[i].result()
            except Exception as e:   # propagate per-V failure, keep going
                rows[i] = (float(V_grid[i]), np.nan, np.nan, np.nan)
                errors.append((float(V_grid[i]), f"{type(e).__name__}: {e}"))
    return rows, errors
