"""Monte-Carlo estimator vs the quadrature stack."""

import numpy as np
import pytest

from minresist.errors import ConfigError
from minresist.medium import (FlowContext, GaussianDensity, MaxwellDensity,
                              MixtureDensity, TabulatedDensity)
from minresist.montecarlo import McEstimate, estimate_resistance
from minresist.pressure import PressureCurve
from minresist.profiles import BodyProfile
from minresist.solve2d import solve_2d
from minresist.solve_nd import solve_nd


def _flat_disk_reference(density, V):
    front, rear = PressureCurve.pair(density, V)
    return front.value0() + rear.value0()


def test_bit_reproducible():
    ctx = FlowContext(GaussianDensity(2), 1.0)
    disk = BodyProfile.flat_disk(2)
    a = estimate_resistance(disk, ctx, n_samples=50_000, seed=42)
    b = estimate_resistance(disk, ctx, n_samples=50_000, seed=42)
    assert (a.R, a.se, a.n) == (b.R, b.se, b.n)
    c = estimate_resistance(disk, ctx, n_samples=50_000, seed=43)
    assert c.R != a.R


@pytest.mark.parametrize("d", [2, 3])
def test_flat_disk_agrees_with_quadrature(d):
    density = GaussianDensity(d)
    ctx = FlowContext(density, 1.0)
    est = estimate_resistance(BodyProfile.flat_disk(d), ctx,
                              n_samples=200_000, seed=7)
    ref = _flat_disk_reference(density, 1.0)
    assert abs(est.z_score(ref)) <= 4.0
    assert est.se < 0.02 * abs(ref)


def test_error_bars_cover():
    density = GaussianDensity(2)
    ctx = FlowContext(density, 1.0)
    disk = BodyProfile.flat_disk(2)
    ref = _flat_disk_reference(density, 1.0)
    hits = 0
    for seed in range(20):
        est = estimate_resistance(disk, ctx, n_samples=50_000, seed=seed)
        hits += abs(est.z_score(ref)) <= 3.0
    assert hits >= 19


def test_standard_error_scales_as_root_n():
    ctx = FlowContext(GaussianDensity(2), 1.0)
    disk = BodyProfile.flat_disk(2)
    small = estimate_resistance(disk, ctx, n_samples=100_000, seed=3)
    large = estimate_resistance(disk, ctx, n_samples=400_000, seed=3)
    assert small.se / large.se == pytest.approx(2.0, abs=0.25)


def test_optimal_bodies_check_out():
    density2 = GaussianDensity(2)
    profile, rep = solve_2d(density2, 1.0, 3.0)
    est = estimate_resistance(profile, FlowContext(density2, 1.0),
                              n_samples=400_000, seed=11)
    assert abs(est.z_score(rep.R)) <= 4.0
    density3 = GaussianDensity(3)
    profile, rep = solve_nd(density3, 1.0, 1.97)
    est = estimate_resistance(profile, FlowContext(density3, 1.0),
                              n_samples=400_000, seed=12)
    assert abs(est.z_score(rep.R)) <= 4.0


def test_maxwell_and_mixture_media():
    maxwell = MaxwellDensity(3, mass=2.0, temperature=0.5)
    est = estimate_resistance(BodyProfile.flat_disk(3),
                              FlowContext(maxwell, 0.8),
                              n_samples=200_000, seed=5)
    assert abs(est.z_score(_flat_disk_reference(maxwell, 0.8))) <= 4.0
    mix = MixtureDensity.from_gaussian_terms([(1.0, 1.0), (4.0, 2.0)], 2)
    est = estimate_resistance(BodyProfile.flat_disk(2),
                              FlowContext(mix, 1.5),
                              n_samples=200_000, seed=6)
    assert abs(est.z_score(_flat_disk_reference(mix, 1.5))) <= 4.0


def test_tabulated_medium_uses_radial_sampler():
    r = np.linspace(0.0, 12.0, 600)
    tab = TabulatedDensity(2, r, GaussianDensity(2).sigma(r))
    est = estimate_resistance(BodyProfile.flat_disk(2),
                              FlowContext(tab, 1.0),
                              n_samples=200_000, seed=9)
    # the table tracks the Gaussian closely, so its closed form is the ref
    ref = _flat_disk_reference(GaussianDensity(2), 1.0)
    assert abs(est.z_score(ref)) <= 4.0


def test_z_score_arithmetic():
    est = McEstimate(R=1.5, se=0.1, n=1000, seed=0)
    assert est.z_score(1.2) == pytest.approx(3.0)


def test_rejects_bad_inputs():
    ctx = FlowContext(GaussianDensity(2), 1.0)
    disk = BodyProfile.flat_disk(2)
    with pytest.raises(ConfigError):
        estimate_resistance("disk", ctx)
    with pytest.raises(ConfigError):
        estimate_resistance(disk, GaussianDensity(2))
    with pytest.raises(ConfigError):
        estimate_resistance(BodyProfile.flat_disk(3), ctx)
    with pytest.raises(ConfigError):
        estimate_resistance(disk, ctx, n_samples=10)
