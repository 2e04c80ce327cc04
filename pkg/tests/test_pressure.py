"""Pressure curves: closed forms, generic quadrature, scaling laws."""

import numpy as np
import pytest

from minresist.errors import ConfigError, DomainError
from minresist.medium import (GaussianDensity, MaxwellDensity, MixtureDensity,
                              TabulatedDensity)
from minresist.pressure import (BACKEND_GENERIC, AnalyticCurve, PressureCurve,
                                pressure_table_csv)

from _oracles import dp_elem, dp_mix, p_elem, p_mix


def _tab_gaussian(d, hi=12.0, n=600):
    r = np.linspace(0.0, hi, n)
    return TabulatedDensity(d, r, GaussianDensity(d).sigma(r))


@pytest.mark.parametrize("d", [2, 3])
@pytest.mark.parametrize("V", [0.3, 1.0, 3.0, 10.0])
def test_gaussian_curve_matches_oracle(d, V):
    u = np.unique(np.concatenate([[0.0], np.geomspace(1e-3, 40.0, 70)]))
    for eps in (1, -1):
        curve = PressureCurve(GaussianDensity(d), V, eps)
        ref_v = p_elem(u, V, eps)
        ref_s = dp_elem(u, V, eps)
        np.testing.assert_allclose(curve.value(u), ref_v, rtol=1e-10,
                                   atol=1e-13 * np.max(np.abs(ref_v)))
        np.testing.assert_allclose(curve.slope(u), ref_s, rtol=2e-8,
                                   atol=1e-13 * np.max(np.abs(ref_s)))
        assert curve.tail() == pytest.approx(eps * 0.5, rel=1e-12)
        assert curve.value0() == pytest.approx(p_elem(0.0, V, eps), rel=1e-12)


def test_scalar_and_array_calls_agree():
    curve = PressureCurve(GaussianDensity(2), 1.0, 1)
    u = np.array([0.0, 0.7, 2.5])
    vals = curve.value(u)
    for i, x in enumerate(u):
        assert curve.value(float(x)) == vals[i]
    assert isinstance(curve.value(0.7), float)


def test_maxwell_curve_is_rescaled_unit_curve():
    # medium of mass nu at thermal scale 1/beta: p = nu beta^-2 p1(u, beta V)
    mx = MaxwellDensity(3, mass=2.0, temperature=0.5, number_density=1.5)
    beta = mx.beta
    V = 0.8
    curve = PressureCurve(mx, V, 1)
    u = np.linspace(0.0, 12.0, 40)
    ref = 1.5 / beta ** 2 * p_elem(u, beta * V, 1)
    np.testing.assert_allclose(curve.value(u), ref, rtol=1e-10)


def test_mixture_curve_matches_term_sum():
    terms = [(1.0, 1.0), (200.0, 10.0)]
    g = GaussianDensity(2)
    mix = MixtureDensity([(1.0, 1.0, g), (200.0 * 10.0 ** 2, 10.0, g)])
    assert sorted(mix.as_gaussian_terms()) == [(1.0, 1.0), (200.0, 10.0)]
    V = 1.0
    u = np.unique(np.concatenate([[0.0], np.geomspace(1e-2, 30.0, 50)]))
    for eps in (1, -1):
        curve = PressureCurve(mix, V, eps)
        np.testing.assert_allclose(curve.value(u), p_mix(u, V, eps, terms),
                                   rtol=1e-10)
        np.testing.assert_allclose(curve.slope(u), dp_mix(u, V, eps, terms),
                                   rtol=1e-8, atol=1e-13 * 200.0)


@pytest.mark.parametrize("d", [2, 3])
@pytest.mark.parametrize("V", [0.3, 1.0, 3.0])
def test_generic_backend_agrees_with_closed_form(d, V):
    u = np.unique(np.concatenate([[0.0], np.geomspace(0.05, 25.0, 40)]))
    for eps in (1, -1):
        gen = PressureCurve(GaussianDensity(d), V, eps, backend="generic")
        assert gen.backend == BACKEND_GENERIC
        ref = p_elem(u, V, eps)
        np.testing.assert_allclose(gen.value(u), ref, rtol=2e-7,
                                   atol=1e-10 * np.max(np.abs(ref)))
        ref_s = dp_elem(u, V, eps)
        np.testing.assert_allclose(gen.slope(u), ref_s, rtol=2e-6,
                                   atol=1e-8 * np.max(np.abs(ref_s)))


def test_tabulated_density_routes_to_generic():
    tab = _tab_gaussian(2)
    curve = PressureCurve(tab, 1.0, 1)
    assert curve.backend == BACKEND_GENERIC
    u = np.linspace(0.0, 8.0, 25)
    np.testing.assert_allclose(curve.value(u), p_elem(u, 1.0, 1), rtol=1e-6)


@pytest.mark.parametrize("d", [4, 5])
def test_higher_dimensions_match_unit_gaussian_law(d):
    # for the unit Gaussian the pressure law is dimension-free, so the
    # d=2/3 oracle doubles as the reference for the d>=4 angular quadrature
    u = np.unique(np.concatenate([[0.0], np.geomspace(1e-2, 30.0, 40)]))
    for eps in (1, -1):
        curve = PressureCurve(GaussianDensity(d), 1.0, eps, backend="generic")
        np.testing.assert_allclose(curve.value(u), p_elem(u, 1.0, eps),
                                   rtol=1e-8, atol=1e-9)
        np.testing.assert_allclose(curve.slope(u), dp_elem(u, 1.0, eps),
                                   rtol=1e-8, atol=1e-9)
        assert curve.tail() == pytest.approx(eps * 0.5, abs=1e-9)
        assert curve.slope(0.0) == 0.0


def test_pair_shares_the_medium():
    front, rear = PressureCurve.pair(GaussianDensity(3), 2.0)
    assert front.eps == 1 and rear.eps == -1
    solo_f = PressureCurve(GaussianDensity(3), 2.0, 1)
    u = np.linspace(0.0, 10.0, 30)
    np.testing.assert_allclose(front.value(u), solo_f.value(u), rtol=1e-13)
    assert front.tail() + rear.tail() == pytest.approx(0.0, abs=1e-15)


def test_backend_and_domain_validation():
    g = GaussianDensity(4)
    with pytest.raises(ConfigError):
        PressureCurve(g, 1.0, 1, backend="gaussian")   # no closed form d=4
    with pytest.raises(ConfigError):
        PressureCurve(_tab_gaussian(2), 1.0, 1, backend="gaussian")
    with pytest.raises(ConfigError):
        PressureCurve(GaussianDensity(2), 1.0, 1, backend="wombat")
    with pytest.raises(DomainError):
        PressureCurve(GaussianDensity(2), -1.0, 1)
    with pytest.raises(DomainError):
        PressureCurve(GaussianDensity(2), 1.0, 2)


def test_suggest_umax_covers_the_landmarks():
    slow = PressureCurve(GaussianDensity(2), 0.02, -1)
    fast = PressureCurve(GaussianDensity(2), 50.0, -1)
    assert slow.suggest_umax() >= 48.0
    assert fast.suggest_umax() >= 8.0 * 51.0


def test_pressure_table_csv_round_trip(tmp_path):
    front, rear = PressureCurve.pair(GaussianDensity(2), 1.0)
    path = tmp_path / "table.csv"
    pressure_table_csv(front, rear, str(path), np.array([0.0, 1.0, 2.0]))
    lines = path.read_text().strip().splitlines()
    assert lines[0] == "u,p_plus,p_minus,dp_plus,dp_minus"
    row = [float(x) for x in lines[1].split(",")]
    assert row[0] == 0.0
    assert row[1] == pytest.approx(p_elem(0.0, 1.0, 1), rel=1e-12)
    assert row[2] == pytest.approx(p_elem(0.0, 1.0, -1), rel=1e-12)
    assert row[3] == 0.0 and row[4] == 0.0


def test_analytic_curve_interface():
    curve = AnalyticCurve(
        value_fn=lambda u: 1.0 / (1.0 + np.square(u)),
        slope_fn=lambda u: -2.0 * np.asarray(u) / (1.0 + np.square(u)) ** 2,
        tail=0.0, d=3, umax=32.0)
    assert curve.value(1.0) == pytest.approx(0.5)
    assert curve.slope(1.0) == pytest.approx(-0.5)
    assert curve.value0() == 1.0
    assert curve.tail() == 0.0
    assert curve.suggest_umax() == 32.0
