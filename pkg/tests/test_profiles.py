"""Profile containers, resistance quadrature and the optimality check."""

import numpy as np
import pytest

from minresist.envelope import build_envelope
from minresist.errors import ConfigError, DomainError, NumericsError
from minresist.medium import GaussianDensity
from minresist.pressure import AnalyticCurve, PressureCurve
from minresist.profiles import (ArcSegment, BodyProfile, ConeSegment,
                                SolutionKind, SolveReport, arc_side,
                                blend_sides, check_certificate, cone_side,
                                flat_side, profile_resistance,
                                random_convex_side, side_resistance,
                                two_slope_side)
from minresist.solve2d import solve_2d


def _newton_curve():
    return AnalyticCurve(
        value_fn=lambda u: 1.0 / (1.0 + np.square(u)),
        slope_fn=lambda u: -2.0 * np.asarray(u) / (1.0 + np.square(u)) ** 2,
        tail=0.0, d=2)


def test_segment_drops():
    assert ConeSegment(0.0, 0.5, 2.0).drop() == 1.0
    t = np.linspace(0.0, 1.0, 9)
    arc = ArcSegment(t, 2.0 * t)                 # u = 2t, drop = 1
    assert arc.drop() == pytest.approx(1.0)
    f = t ** 2                                    # exact depth of u = 2t
    arc = ArcSegment(t, 2.0 * t, f)
    assert arc.drop() == 1.0
    assert arc.rel_depth(np.array([0.5]))[0] == pytest.approx(0.25)


def test_side_validation():
    with pytest.raises(NumericsError):  # gap between segments
        BodyProfile(2, 1.0, 0.0,
                    [ConeSegment(0.0, 0.4, 1.0), ConeSegment(0.5, 1.0, 1.0)],
                    flat_side())
    with pytest.raises(NumericsError):  # slope decreases outward
        BodyProfile(2, 1.0, 0.0,
                    [ConeSegment(0.0, 0.5, 1.5), ConeSegment(0.5, 1.0, 0.5)],
                    flat_side())
    with pytest.raises(NumericsError):  # does not reach the rim
        BodyProfile(2, 0.5, 0.0, [ConeSegment(0.0, 0.9, 0.5 / 0.9)],
                    flat_side())
    with pytest.raises(NumericsError):  # drop disagrees with the depth
        BodyProfile(2, 2.0, 0.0, cone_side(1.0), flat_side())
    with pytest.raises(DomainError):
        BodyProfile(2, -1.0, 0.0, flat_side(), flat_side())
    with pytest.raises(DomainError):
        BodyProfile(1, 0.0, 0.0, flat_side(), flat_side())
    with pytest.raises(ConfigError):
        BodyProfile.flat_disk(2)._side("top")


def test_two_slope_side():
    segs = two_slope_side(0.7, 0.0, 1.0)
    assert len(segs) == 2
    assert segs[0].t1 == pytest.approx(0.3)      # (u_hi - h)/(u_hi - u_lo)
    assert sum(s.drop() for s in segs) == pytest.approx(0.7)
    assert two_slope_side(1.0, 0.0, 1.0) == cone_side(1.0)
    assert two_slope_side(0.0, 0.0, 1.0) == flat_side()
    with pytest.raises(DomainError):
        two_slope_side(2.0, 0.0, 1.0)
    with pytest.raises(DomainError):
        two_slope_side(0.5, 1.0, 0.2)


def test_depth_and_slope_evaluation():
    prof = BodyProfile(2, 0.7, 3.0, two_slope_side(0.7, 0.0, 1.0),
                       cone_side(3.0))
    t = np.linspace(0.0, 1.0, 11)
    assert prof.depth("front", 1.0)[0] == pytest.approx(0.0, abs=1e-15)
    assert prof.depth("front", 0.0)[0] == pytest.approx(-0.7)
    assert prof.depth("rear", 0.0)[0] == pytest.approx(-3.0)
    np.testing.assert_allclose(prof.depth("rear", t), 3.0 * (t - 1.0),
                               atol=1e-15)
    np.testing.assert_allclose(prof.slope("front", t),
                               np.where(t <= 0.3, 0.0, 1.0))
    assert prof.h == pytest.approx(3.7)


def test_side_resistance_exact_on_cones():
    curve = _newton_curve()
    for d in (2, 3, 4):
        segs = two_slope_side(0.7, 0.0, 1.0)
        ts = segs[0].t1
        want = curve.value(0.0) * ts ** (d - 1) \
            + curve.value(1.0) * (1.0 - ts ** (d - 1))
        assert side_resistance(segs, curve, d) == pytest.approx(want,
                                                                rel=1e-14)


def test_side_resistance_arc_matches_refined():
    curve = _newton_curve()
    t = np.linspace(0.0, 1.0, 257)
    segs = [ArcSegment(t, np.sqrt(t))]
    coarse = side_resistance(segs, curve, 3, n_panels=48)
    fine = side_resistance(segs, curve, 3, n_panels=192)
    # panels crossing the polyline's interp kinks cap the agreement
    assert coarse == pytest.approx(fine, rel=5e-8)


def test_flat_disk_resistance():
    front, rear = PressureCurve.pair(GaussianDensity(2), 1.0)
    disk = BodyProfile.flat_disk(2)
    R = profile_resistance(disk, front, rear)
    assert R == pytest.approx(1.8493204333124584, rel=1e-11)


def test_profile_json_round_trip():
    prof = BodyProfile(3, 0.7, 1.2, two_slope_side(0.7, 0.0, 1.0),
                       cone_side(1.2), kind=SolutionKind.Trapezium)
    obj = prof.to_json()
    back = BodyProfile.from_json(obj)
    assert back.d == 3 and back.kind == SolutionKind.Trapezium
    assert back.h_plus == pytest.approx(0.7)
    assert back.h_minus == pytest.approx(1.2)
    t = np.linspace(0.0, 1.0, 401)
    # reconstruction smears each kink over one sample spacing
    np.testing.assert_allclose(back.depth("front", t),
                               prof.depth("front", t), atol=2e-3)
    np.testing.assert_allclose(back.depth("rear", t),
                               prof.depth("rear", t), atol=2e-3)
    # string form parses too, junk does not
    assert BodyProfile.from_json(__import__("json").dumps(obj)).d == 3
    with pytest.raises(ConfigError):
        BodyProfile.from_json("{not json")
    with pytest.raises(ConfigError):
        BodyProfile.from_json({"d": 2})


def test_arc_side_with_flat_center():
    t = np.linspace(0.4, 1.0, 33)
    segs = arc_side(t, (t - 0.4) / 0.6, t0_flat=0.4)
    assert isinstance(segs[0], ConeSegment) and segs[0].u == 0.0
    assert segs[0].t1 == pytest.approx(0.4)
    drop = sum(s.drop() for s in segs)
    BodyProfile(2, drop, 0.0, segs, flat_side())  # validates


def test_certificate_accepts_known_optimum():
    density = GaussianDensity(2)
    front = build_envelope(PressureCurve(density, 1.0, 1))
    rear = build_envelope(PressureCurve(density, 1.0, -1))
    prof, rep = solve_2d(density, 1.0, 3.0)
    cert = check_certificate(prof, front, rear)
    scale = front.curve.range_scale()
    assert cert["violation_front"] <= 1e-9 * scale
    assert cert["violation_rear"] <= 1e-9 * scale
    assert cert["lambda_front"] > 0.0
    # flat disk certifies trivially
    cert = check_certificate(BodyProfile.flat_disk(2), front, rear)
    assert cert["violation_front"] == 0.0 and cert["lambda_front"] == 0.0


def test_perturbations_do_not_beat_the_optimum():
    density = GaussianDensity(2)
    fc, rc = PressureCurve.pair(density, 1.0)
    front, rear = build_envelope(fc), build_envelope(rc)
    prof, rep = solve_2d(density, 1.0, 4.5)
    R0 = rep.R
    rng = np.random.default_rng(20260816)
    for _ in range(12):
        side = "front" if rng.random() < 0.5 else "rear"
        h_side = prof.h_plus if side == "front" else prof.h_minus
        other = random_convex_side(h_side, rng)
        s = float(rng.uniform(0.05, 1.0))
        blended = blend_sides(prof, side, other, s)
        if side == "front":
            cand = BodyProfile(2, prof.h_plus, prof.h_minus, blended,
                               prof.rear, check=False)
        else:
            cand = BodyProfile(2, prof.h_plus, prof.h_minus, prof.front,
                               blended, check=False)
        R = profile_resistance(cand, fc, rc)
        assert R >= R0 - 1e-9 * (1.0 + abs(R0))


def test_random_convex_side_is_admissible():
    rng = np.random.default_rng(7)
    for _ in range(20):
        h_side = float(rng.uniform(0.0, 4.0))
        segs = random_convex_side(h_side, rng)
        BodyProfile(2, h_side, 0.0, segs, flat_side())  # validates
        slopes = [s.u for s in segs]
        assert slopes == sorted(slopes)


def test_solve_report_json():
    rep = SolveReport(d=2, V=1.0, h=3.0, h_plus=3.0, h_minus=0.0,
                      kind=SolutionKind.IsoscelesTriangle, R=0.73,
                      landmarks={"u_star": 3.54}, U_plus=3.0,
                      diagnostics={"backend": "GaussianClosedForm2D"})
    obj = rep.to_json()
    assert obj["kind"] == "isosceles-triangle"
    assert obj["U_plus"] == 3.0
    assert "U_minus" not in obj
    assert obj["landmarks"]["u_star"] == 3.54
    assert obj["diagnostics"]["backend"] == "GaussianClosedForm2D"
