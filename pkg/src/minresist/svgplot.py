"""Minimal deterministic SVG rendering of profiles, region maps and sweeps.

No plotting dependency: figures are simple paths in a fixed frame, and the
output bytes depend only on the input data, so identical inputs give
byte-identical files.
"""

import math

import numpy as np

__all__ = ["profile_svg", "regions_svg", "sweep_svg"]

_W, _H = 640, 420
_ML, _MR, _MT, _MB = 64, 20, 34, 46
_COLORS = ["#1f77b4", "#d62728", "#2ca02c", "#9467bd", "#8c564b", "#e377c2"]


def _fmt(x):
    return f"{x:.6g}"


def _path(points, stroke, width=1.6, fill="none", dash=None):
    d = "M" + " L".join(f"{_fmt(x)},{_fmt(y)}" for x, y in points)
    extra = f' stroke-dasharray="{dash}"' if dash else ""
    return (f'<path d="{d}" fill="{fill}" stroke="{stroke}" '
            f'stroke-width="{width}" stroke-linejoin="round"{extra}/>')


def _text(x, y, s, size=12, anchor="middle", fill="#222"):
    return (f'<text x="{_fmt(x)}" y="{_fmt(y)}" font-size="{size}" '
            f'font-family="Helvetica,Arial,sans-serif" text-anchor="{anchor}" '
            f'fill="{fill}">{s}</text>')


def _ticks(lo, hi, n=5):
    if hi <= lo:
        hi = lo + 1.0
    raw = np.linspace(lo, hi, n)
    return [float(f"{v:.3g}") for v in raw]


class _Frame:
    """Affine data -> pixel mapping with axes and tick labels."""

    def __init__(self, xlo, xhi, ylo, yhi, xlabel, ylabel, title):
        if xhi <= xlo:
            xhi = xlo + 1.0
        if yhi <= ylo:
            yhi = ylo + 1.0
        pad_x = 0.04 * (xhi - xlo)
        pad_y = 0.06 * (yhi - ylo)
        self.xlo, self.xhi = xlo - pad_x, xhi + pad_x
        self.ylo, self.yhi = ylo - pad_y, yhi + pad_y
        self.parts = []
        self.xlabel, self.ylabel, self.title = xlabel, ylabel, title
        self._axes(xlo, xhi, ylo, yhi)

    def x(self, v):
        return _ML + (v - self.xlo) / (self.xhi - self.xlo) * (_W - _ML - _MR)

    def y(self, v):
        return _H - _MB - (v - self.ylo) / (self.yhi - self.ylo) * (_H - _MT - _MB)

    def map(self, xs, ys):
        return [(self.x(a), self.y(b)) for a, b in zip(xs, ys)]

    def _axes(self, xlo, xhi, ylo, yhi):
        p = self.parts
        p.append(f'<rect x="{_ML}" y="{_MT}" width="{_W - _ML - _MR}" '
                 f'height="{_H - _MT - _MB}" fill="none" stroke="#888"/>')
        for v in _ticks(xlo, xhi):
            px = self.x(v)
            p.append(_path([(px, _H - _MB), (px, _H - _MB + 5)], "#888", 1.0))
            p.append(_text(px, _H - _MB + 18, _fmt(v), 11))
        for v in _ticks(ylo, yhi):
            py = self.y(v)
            p.append(_path([(_ML - 5, py), (_ML, py)], "#888", 1.0))
            p.append(_text(_ML - 8, py + 4, _fmt(v), 11, anchor="end"))
        p.append(_text((_ML + _W - _MR) / 2, _H - 10, self.xlabel, 13))
        p.append(_text(14, (_MT + _H - _MB) / 2, self.ylabel, 13))
        p.append(_text((_ML + _W - _MR) / 2, 20, self.title, 14))

    def legend(self, labels_colors):
        x0, y0 = _ML + 12, _MT + 16
        for i, (lab, col) in enumerate(labels_colors):
            y = y0 + 16 * i
            self.parts.append(_path([(x0, y - 4), (x0 + 22, y - 4)], col, 2.2))
            self.parts.append(_text(x0 + 28, y, lab, 11, anchor="start"))

    def render(self):
        body = "\n".join(self.parts)
        return (f'<svg xmlns="http://www.w3.org/2000/svg" width="{_W}" '
                f'height="{_H}" viewBox="0 0 {_W} {_H}">\n'
                f'<rect width="{_W}" height="{_H}" fill="white"/>\n'
                f"{body}\n</svg>\n")


def profile_svg(profile_json):
    """Axial cross-section silhouette of a body profile JSON object."""
    d = profile_json.get("d", "?")
    hp = float(profile_json["h_plus"])
    hm = float(profile_json["h_minus"])
    kind = profile_json.get("kind", "")

    def side_points(key):
        pts = profile_json[key]
        t = np.array([p["t"] for p in pts], dtype=np.float64)
        f = np.array([p["y"] for p in pts], dtype=np.float64)
        return t, f

    tf, ff = side_points("f_plus")
    tr, fr = side_points("f_minus")
    # axial coordinate: nose at +h_plus, rear center at -h_minus, rim at 0
    x_front, x_rear = -ff, fr
    frame = _Frame(-hm - 0.05, hp + 0.05, -1.05, 1.05, "axis", "radius",
                   f"optimal body  d={d}  kind={kind}")
    # outline: rear edge up, front edge down, then its mirror
    xs = np.concatenate([x_rear, x_front[::-1], x_rear[::-1], x_front])
    ys = np.concatenate([tr, tf[::-1], -tr[::-1], -tf])
    frame.parts.append(_path(frame.map(xs, ys), "#1f77b4", 1.8,
                             fill="#1f77b422"))
    frame.parts.append(_path(frame.map([-hm - 0.03, hp + 0.03], [0.0, 0.0]),
                             "#888", 0.8, dash="4,4"))
    return frame.render()


def regions_svg(rows, d):
    """Region-boundary curves over V: three curves for d=2, h*(V) for d=3."""
    rows = [r for r in rows if all(math.isfinite(v) for v in r)]
    V = [r[0] for r in rows]
    if d == 2:
        cols = list(zip(*rows))
        ymax = max(max(c) for c in cols[1:])
        frame = _Frame(min(V), max(V), 0.0, ymax, "V", "h",
                       "solution-kind regions (d=2)")
        labels = ["u+0", "u*", "u* + u-0"]
        for i, lab in enumerate(labels):
            frame.parts.append(_path(frame.map(V, cols[i + 1]), _COLORS[i]))
        frame.legend(list(zip(labels, _COLORS)))
    else:
        hs = [r[1] for r in rows]
        frame = _Frame(min(V), max(V), 0.0, max(hs), "V", "h",
                       "first/second kind boundary h*(V)")
        frame.parts.append(_path(frame.map(V, hs), _COLORS[0]))
        frame.legend([("h*", _COLORS[0])])
    return frame.render()


def sweep_svg(rows):
    """Reduced resistance against height, one curve per V."""
    rows = [r for r in rows if math.isfinite(r[3])]
    by_v = {}
    for V, h, R, Rt, kind in rows:
        by_v.setdefault(V, []).append((h, Rt))
    hs = [r[1] for r in rows]
    rt = [r[3] for r in rows]
    frame = _Frame(min(hs), max(hs), 0.0, max(rt), "h", "R / V^2",
                   "reduced resistance sweep")
    legend = []
    for i, V in enumerate(sorted(by_v)):
        pts = sorted(by_v[V])
        col = _COLORS[i % len(_COLORS)]
        frame.parts.append(_path(frame.map([p[0] for p in pts],
                                           [p[1] for p in pts]), col))
        legend.append((f"V={_fmt(V)}", col))
    frame.legend(legend)
    return frame.render()
