"""Command-line interface: solve, regions, sweep, validate, plot."""

import argparse
import json
import sys
from concurrent.futures import ThreadPoolExecutor
from pathlib import Path

import numpy as np

from .asymptotics import limit_profile_large_V, limit_profile_small_V
from .envelope import build_envelope
from .errors import ConfigError, DomainError, NumericsError
from .medium import (FlowContext, GaussianDensity, density_from_csv,
                     density_from_json)
from .montecarlo import estimate_resistance
from .pressure import PressureCurve
from .solve2d import Problem2D, _thread_count, region_curves_2d, solve_2d
from .solve_nd import ProblemND
from .svgplot import profile_svg, regions_svg, sweep_svg

__all__ = ["main"]


def _g17(x):
    return f"{float(x):.17g}"


def _parse_grid(spec, name):
    try:
        lo_s, hi_s, n_s = spec.split(":")
        lo, hi, n = float(lo_s), float(hi_s), int(n_s)
    except (ValueError, AttributeError) as exc:
        raise ConfigError(f"{name} must look like lo:hi:n, got {spec!r}") from exc
    if n <= 0:
        raise ConfigError(f"{name} needs at least one point")
    if not (np.isfinite(lo) and np.isfinite(hi)) or lo > hi:
        raise ConfigError(f"{name} bounds are invalid")
    return [lo] if n == 1 else [float(v) for v in np.linspace(lo, hi, n)]


def _load_density(args):
    if getattr(args, "density", None):
        path = Path(args.density)
        if not path.exists():
            raise ConfigError(f"density file not found: {path}")
        if path.suffix.lower() == ".csv":
            dens = density_from_csv(str(path), d=args.d if args.d else 2)
        else:
            dens = density_from_json(path.read_text())
        if args.d is not None and args.d != dens.d:
            raise ConfigError(f"--d {args.d} contradicts density file d={dens.d}")
        return dens
    d = args.d if args.d is not None else 2
    return GaussianDensity(d)


def _emit(text, out):
    if out:
        Path(out).write_text(text)
    else:
        sys.stdout.write(text if text.endswith("\n") else text + "\n")


def _require_v(args):
    if args.v is None:
        raise ConfigError("--v is required here")
    return args.v


def _require_h(args):
    if args.h is None:
        raise ConfigError("--h is required here")
    return args.h


# -- solve -------------------------------------------------------------------

def cmd_solve(args):
    dens = _load_density(args)
    h = _require_h(args)
    if args.limit:
        if args.limit == "small-v":
            profile, r_red = limit_profile_small_V(dens.d, h)
        else:
            profile, r_red = limit_profile_large_V(dens.d, h, nu=dens.nu)
        payload = {"limit": args.limit, "d": dens.d, "h": h,
                   "kind": profile.kind.value, "R_reduced": r_red,
                   "profile": profile.to_json()}
    else:
        V = _require_v(args)
        if dens.d == 2:
            profile, report = solve_2d(dens, V, h)
        else:
            profile, report = ProblemND(dens, V).solve(h)
        payload = {"report": report.to_json(), "profile": profile.to_json()}
    _emit(json.dumps(payload, indent=2), args.out)
    return 0


# -- regions -----------------------------------------------------------------

def _regions_rows_3d(dens, v_grid):
    def one(V):
        return ProblemND(dens, V).h_star

    rows, errors = [], []
    with ThreadPoolExecutor(max_workers=_thread_count()) as pool:
        futures = [pool.submit(one, V) for V in v_grid]
        for V, fut in zip(v_grid, futures):
            try:
                rows.append((V, fut.result()))
            except Exception as exc:
                rows.append((V, float("nan")))
                errors.append((V, str(exc)))
    return rows, errors


def cmd_regions(args):
    dens = _load_density(args)
    if not args.v_grid:
        raise ConfigError("regions needs --v-grid")
    v_grid = _parse_grid(args.v_grid, "--v-grid")
    if dens.d == 2:
        rows, errors = region_curves_2d(dens, v_grid)
        header = "V,u_plus0,u_star,u_star_plus_u_minus0"
    else:
        rows, errors = _regions_rows_3d(dens, v_grid)
        header = "V,h_star"
    for V, msg in errors:
        print(f"warning: V={V:g} failed: {msg}", file=sys.stderr)
    lines = [header] + [",".join(_g17(v) for v in row) for row in rows]
    _emit("\n".join(lines) + "\n", args.out)
    if args.svg:
        Path(args.svg).write_text(regions_svg(rows, dens.d))
    return 0


# -- sweep -------------------------------------------------------------------

def cmd_sweep(args):
    dens = _load_density(args)
    if args.v_grid:
        v_grid = _parse_grid(args.v_grid, "--v-grid")
    elif args.v is not None:
        v_grid = [args.v]
    else:
        raise ConfigError("sweep needs --v or --v-grid")
    if not args.h_grid:
        raise ConfigError("sweep needs --h-grid")
    h_grid = _parse_grid(args.h_grid, "--h-grid")

    pairs = []
    seen = set()
    for V in v_grid:
        for h in h_grid:
            key = (V, h)
            if key in seen:
                print(f"warning: duplicate grid point V={V:g} h={h:g} dropped",
                      file=sys.stderr)
                continue
            seen.add(key)
            pairs.append(key)

    rows = []
    for V in dict.fromkeys(v_grid):
        try:
            problem = Problem2D(dens, V) if dens.d == 2 else ProblemND(dens, V)
        except Exception as exc:
            print(f"warning: V={V:g} failed: {exc}", file=sys.stderr)
            for VV, h in pairs:
                if VV == V:
                    rows.append((V, h, float("nan"), float("nan"), "failed"))
            continue
        for VV, h in pairs:
            if VV != V:
                continue
            try:
                _, report = problem.solve(h)
                rows.append((V, h, report.R, report.R / V ** 2,
                             report.kind.value))
            except Exception as exc:
                print(f"warning: V={V:g} h={h:g} failed: {exc}", file=sys.stderr)
                rows.append((V, h, float("nan"), float("nan"), "failed"))

    lines = ["V,h,R,R_reduced,kind"]
    lines += [f"{_g17(V)},{_g17(h)},{_g17(R)},{_g17(Rt)},{kind}"
              for V, h, R, Rt, kind in rows]
    _emit("\n".join(lines) + "\n", args.out)
    if args.svg:
        Path(args.svg).write_text(sweep_svg(rows))
    return 0


# -- validate ----------------------------------------------------------------

def cmd_validate(args):
    dens = _load_density(args)
    V = _require_v(args)
    ctx = FlowContext(dens, V)
    if args.h is not None:
        if dens.d == 2:
            profile, report = solve_2d(dens, V, args.h)
        else:
            profile, report = ProblemND(dens, V).solve(args.h)
        r_analytic = report.R
    else:
        from .profiles import BodyProfile, SolutionKind, flat_side
        profile = BodyProfile(dens.d, 0.0, 0.0, flat_side(), flat_side(),
                              kind=SolutionKind.Trapezium if dens.d == 2
                              else SolutionKind.FirstKind)
        front, rear = PressureCurve.pair(dens, V)
        r_analytic = float(front.value(0.0) + rear.value(0.0))
    est = estimate_resistance(profile, ctx, n_samples=args.samples,
                              seed=args.seed)
    z = est.z_score(r_analytic)
    payload = {"R_mc": est.R, "se": est.se, "R_analytic": r_analytic,
               "z_score": z, "n": est.n, "seed": est.seed,
               "ok": bool(abs(z) <= args.tol)}
    _emit(json.dumps(payload, indent=2), args.out)
    return 0


# -- plot --------------------------------------------------------------------

def cmd_plot(args):
    path = Path(args.input)
    if not path.exists():
        raise ConfigError(f"input not found: {path}")
    text = path.read_text()
    out = args.out or str(path.with_suffix(".svg"))
    if path.suffix.lower() == ".json" or text.lstrip().startswith("{"):
        obj = json.loads(text)
        prof = obj.get("profile", obj)
        if "f_plus" not in prof:
            raise ConfigError("JSON input does not contain a body profile")
        svg = profile_svg(prof)
    else:
        lines = [ln for ln in text.splitlines() if ln.strip()]
        if not lines:
            raise ConfigError("empty CSV input")
        header = lines[0].strip()
        body = []
        for ln in lines[1:]:
            body.append(ln.split(","))
        if header.startswith("V,h,R"):
            rows = [(float(a), float(b), float(c), float(e), kind)
                    for a, b, c, e, kind in body]
            svg = sweep_svg(rows)
        elif header == "V,h_star":
            rows = [(float(a), float(b)) for a, b in body]
            svg = regions_svg(rows, 3)
        elif header.startswith("V,u_plus0"):
            rows = [tuple(float(x) for x in r) for r in body]
            svg = regions_svg(rows, 2)
        else:
            raise ConfigError(f"unrecognized CSV header: {header!r}")
    Path(out).write_text(svg)
    return 0


# -- parser ------------------------------------------------------------------

def _add_common(sp):
    sp.add_argument("--d", type=int, default=None,
                    help="dimension (default 2, or the density file's)")
    sp.add_argument("--gaussian", action="store_true",
                    help="unit Gaussian medium (the default)")
    sp.add_argument("--density", help="density spec file (.json or .csv)")
    sp.add_argument("--out", help="output path (default: stdout)")


def build_parser():
    parser = argparse.ArgumentParser(
        prog="minresist",
        description="Minimal-resistance convex bodies in a thermal rarefied flow.")
    sub = parser.add_subparsers(dest="command", required=True)

    sp = sub.add_parser("solve", help="solve one (d, V, h) problem")
    _add_common(sp)
    sp.add_argument("--v", type=float, help="body speed V > 0")
    sp.add_argument("--h", type=float, help="body height (length budget)")
    sp.add_argument("--limit", choices=["small-v", "large-v"],
                    help="solve the V->0 or V->oo limit problem instead")
    sp.set_defaults(func=cmd_solve)

    sp = sub.add_parser("regions", help="solution-kind boundary curves over V")
    _add_common(sp)
    sp.add_argument("--v-grid", help="V grid as lo:hi:n")
    sp.add_argument("--svg", help="also render the region map to this SVG")
    sp.set_defaults(func=cmd_regions)

    sp = sub.add_parser("sweep", help="resistance over a (V, h) grid")
    _add_common(sp)
    sp.add_argument("--v", type=float, help="single V value")
    sp.add_argument("--v-grid", help="V grid as lo:hi:n")
    sp.add_argument("--h-grid", help="h grid as lo:hi:n")
    sp.add_argument("--svg", help="also render the sweep to this SVG")
    sp.set_defaults(func=cmd_sweep)

    sp = sub.add_parser("validate", help="Monte-Carlo check against the solver")
    _add_common(sp)
    sp.add_argument("--v", type=float, help="body speed V > 0")
    sp.add_argument("--h", type=float,
                    help="height of the optimal body (flat disk if omitted)")
    sp.add_argument("--samples", type=int, default=100_000)
    sp.add_argument("--seed", type=int, default=0)
    sp.add_argument("--tol", type=float, default=3.0,
                    help="acceptable |z| between MC and analytic")
    sp.set_defaults(func=cmd_validate)

    sp = sub.add_parser("plot", help="render solver output (JSON/CSV) to SVG")
    sp.add_argument("input", help="profile JSON, regions CSV or sweep CSV")
    sp.add_argument("--out", help="SVG path (default: input with .svg)")
    sp.set_defaults(func=cmd_plot)

    return parser


def main(argv=None):
    parser = build_parser()
    try:
        args = parser.parse_args(argv)
    except SystemExit as exc:
        code = exc.code if isinstance(exc.code, int) else 0
        return 1 if code else 0
    try:
        return args.func(args)
    except ConfigError as exc:
        print(f"error: {exc}", file=sys.stderr)
        return 1
    except DomainError as exc:
        print(f"domain error: {exc}", file=sys.stderr)
        return 2
    except NumericsError as exc:
        print(f"numerical failure: {exc}", file=sys.stderr)
        return 3


if __name__ == "__main__":
    sys.exit(main())
