"""Planar solver: the five body kinds and their thresholds."""

import numpy as np
import pytest

from minresist.errors import DomainError
from minresist.medium import GaussianDensity, MixtureDensity
from minresist.profiles import (SolutionKind, check_certificate,
                                profile_resistance)
from minresist.solve2d import (Problem2D, minimize_side_2d, region_curves_2d,
                               solve_2d)

# independently computed optima for the unit Gaussian at V=1
# (h, kind, h_plus, R)
ANCHORS = [
    (0.7, SolutionKind.Trapezium, 0.7, 1.4532826320172005),
    (3.0, SolutionKind.IsoscelesTriangle, 3.0, 0.7311578127740258),
    (4.5, SolutionKind.TriangleTrapezium, 3.542635984279048,
     0.6062554169819132),
    (6.0, SolutionKind.TwoTriangles, 3.758268169423789, 0.49145841161301723),
    (7.83, SolutionKind.TwoTriangles, 4.612488503763387, 0.38899068091624667),
    (12.0, SolutionKind.TwoTriangles, 6.655081483421297, 0.2606844690698751),
]


@pytest.fixture(scope="module")
def prob():
    return Problem2D(GaussianDensity(2), 1.0)


@pytest.mark.parametrize("h,kind,h_plus,R", ANCHORS)
def test_unit_gaussian_anchors(prob, h, kind, h_plus, R):
    profile, rep = prob.solve(h)
    assert rep.kind == kind
    assert profile.kind == kind
    assert rep.h_plus == pytest.approx(h_plus, rel=1e-11)
    assert rep.h_minus == pytest.approx(h - h_plus, rel=1e-11, abs=1e-11)
    assert rep.R == pytest.approx(R, rel=1e-11)
    # surface quadrature over the actual profile agrees (cones: exact)
    R_quad = profile_resistance(profile, prob.front, prob.rear)
    assert R_quad == pytest.approx(rep.R, rel=1e-10)


def test_anchor_certificates(prob):
    scale = prob.front.range_scale()
    for h, *_ in ANCHORS:
        profile, _ = prob.solve(h)
        cert = check_certificate(profile, prob.front_env, prob.rear_env)
        assert cert["violation_front"] <= 1e-9 * scale
        assert cert["violation_rear"] <= 1e-9 * scale


def test_tall_split_balances_slopes(prob):
    profile, rep = prob.solve(9.0)
    assert rep.kind == SolutionKind.TwoTriangles
    assert abs(rep.diagnostics["split_residual"]) < 1e-9
    # both sides realized as single cones whose slopes nearly agree
    assert profile.front[0].u == pytest.approx(rep.h_plus)
    assert profile.rear[0].u == pytest.approx(rep.h_minus)
    assert prob.front.slope(rep.h_plus) == pytest.approx(
        prob.rear.slope(rep.h_minus), rel=1e-8)


def test_kind_thresholds_follow_landmarks(prob):
    lm = prob.landmarks()
    eps = 1e-9
    assert prob.solve(lm["u_plus0"] * (1 - eps))[1].kind \
        == SolutionKind.Trapezium
    assert prob.solve(lm["u_plus0"] * (1 + eps))[1].kind \
        == SolutionKind.IsoscelesTriangle
    assert prob.solve(lm["u_star"] * (1 - eps))[1].kind \
        == SolutionKind.IsoscelesTriangle
    assert prob.solve(lm["u_star"] * (1 + eps))[1].kind \
        == SolutionKind.TriangleTrapezium
    s = lm["u_star_plus_u_minus0"]
    assert prob.solve(s * (1 - eps))[1].kind == SolutionKind.TriangleTrapezium
    assert prob.solve(s * (1 + eps))[1].kind == SolutionKind.TwoTriangles


def test_resistance_decreases_with_height(prob):
    hs = np.linspace(0.2, 14.0, 40)
    Rs = [prob.solve(h)[1].R for h in hs]
    assert np.all(np.diff(Rs) < 0.0)


def test_mixture_tall_body_regrows_trapezium():
    mix = MixtureDensity.from_gaussian_terms([(1.0, 1.0), (200.0, 10.0)], 2)
    profile, rep = solve_2d(mix, 1.0, 32.268)
    assert rep.kind == SolutionKind.TwoTrianglesTrapezium
    assert rep.h_plus == pytest.approx(25.38255265510453, rel=1e-10)
    assert rep.h_minus == pytest.approx(6.885447344895471, rel=1e-10)
    assert rep.R == pytest.approx(1.8785637869603953, rel=1e-10)
    # rear side carries the interior-chord trapezium: two cones
    assert len(profile.rear) == 2
    assert profile.rear[0].u < profile.rear[1].u


def test_minimize_side_matches_envelope(prob):
    segs, val = minimize_side_2d(prob.front_env, 0.0)
    assert val == pytest.approx(prob.front.value0(), rel=1e-12)
    assert segs[0].u == 0.0
    h = 0.5 * prob.u_plus0
    segs, val = minimize_side_2d(prob.front_env, h)
    assert val == pytest.approx(prob.front_env.value(h), rel=1e-12)
    with pytest.raises(DomainError):
        minimize_side_2d(prob.front_env, -1.0)


def test_solve_rejects_bad_height(prob):
    with pytest.raises(DomainError):
        prob.solve(0.0)
    with pytest.raises(DomainError):
        prob.solve(-2.0)
    with pytest.raises(DomainError):
        Problem2D(GaussianDensity(3), 1.0)


def test_region_curves_ordering():
    V_grid = np.geomspace(0.2, 5.0, 7)
    rows, errors = region_curves_2d(GaussianDensity(2), V_grid, threads=2)
    assert errors == []
    arr = np.array(rows)
    np.testing.assert_allclose(arr[:, 0], V_grid)
    # u_plus0 < u_star < u_star + u_minus0 at every speed
    assert np.all(arr[:, 1] < arr[:, 2])
    assert np.all(arr[:, 2] < arr[:, 3])
    # thresholds grow with V once past the slow regime
    assert np.all(np.diff(arr[2:, 2]) > 0.0)


def test_region_curves_reports_failures():
    rows, errors = region_curves_2d(GaussianDensity(2), [1.0, -1.0],
                                    threads=1)
    assert len(errors) == 1 and errors[0][0] == -1.0
    assert np.isfinite(rows[0][1])
    assert np.isnan(rows[1][1])
