import math

import jax.numpy as jnp
import numpy as np
import pytest
from hypothesis import given, settings, strategies as st

from qmembound.bound import (BoundQuery, KappaGridError, Scenario, capacity_estimate, invert_bound, kappa_objective, kappa_optimize,
                             lemma_coefficient, product_bound, sphere_r_squared)
from qmembound.constants import ELECTRON_MASS, HBAR, JOULE_M2_TO_EV_NM2, LN2

GRID_S = np.geomspace(10, 1e3, 10)
GRID_D = np.unique(np.geomspace(3, 1e3, 10).astype(int))


def test_hbar_is_codata():
    assert HBAR == pytest.approx(1.054571817e-34, rel=1e-9)


def test_zero_entropy_is_free():
    assert product_bound(BoundQuery(0.0, 100, ELECTRON_MASS)).product_bound == 0.0


def test_electron_example():
    bound = product_bound(BoundQuery(100.0, 100, 9.1093837015e-31))
    expected = HBAR ** 2 / (2 * 9.1093837015e-31) * 1e4 * (math.e - 1) ** 2
    assert bound.product_bound == pytest.approx(expected, rel=1e-14)
    assert bound.product_bound == pytest.approx(1.803e-34, rel=1e-3)
    assert bound.product_bound_ev_nm2 == pytest.approx(bound.product_bound * JOULE_M2_TO_EV_NM2)
    assert bound.constants_used["hbar_J_s"] == HBAR


def test_doubling_mass_halves_bound():
    light = product_bound(BoundQuery(37.0, 12, 1e-27)).product_bound
    heavy = product_bound(BoundQuery(37.0, 12, 2e-27)).product_bound
    assert heavy == pytest.approx(light / 2, rel=1e-15)


def test_bits_are_converted():
    query = BoundQuery.from_units(10.0, 5, 1.0, "bits")
    assert query.s_total == pytest.approx(10 * LN2)


@pytest.mark.parametrize("kwargs", [
    dict(s_total=-1.0, d=3, mass=1.0),
    dict(s_total=1.0, d=0, mass=1.0),
    dict(s_total=1.0, d=3, mass=0.0),
    dict(s_total=math.nan, d=3, mass=1.0),
])
def test_query_validation(kwargs):
    with pytest.raises(ValueError):
        BoundQuery(**kwargs)


def test_strictly_increasing_and_convex_in_entropy():
    s = np.linspace(0, 50, 201)
    values = np.array([product_bound(BoundQuery(float(x), 7, 1.0)).product_bound for x in s])
    assert np.all(np.diff(values) > 0)
    assert np.all(np.diff(values, 2) > 0)


def test_more_degrees_of_freedom_are_cheaper():
    for s in GRID_S:
        values = [product_bound(BoundQuery(float(s), int(d), 1.0)).product_bound for d in GRID_D]
        assert all(b < a for a, b in zip(values, values[1:]))


def test_inversion_round_trip_grid():
    r_squared, mass = 2.5e-3, ELECTRON_MASS
    for s in GRID_S:
        for d in GRID_D:
            product = product_bound(BoundQuery(float(s), int(d), mass)).product_bound
            recovered = invert_bound(product / r_squared, r_squared, mass, int(d))
            assert recovered.nats == pytest.approx(s, rel=1e-10)
            assert recovered.bits == pytest.approx(s / LN2, rel=1e-10)


@given(energy=st.floats(1e-25, 1e-10), r_squared=st.floats(1e-20, 1.0), d=st.integers(1, 1000))
@settings(max_examples=100, deadline=None)
def test_bound_of_inverse_is_identity(energy, r_squared, d):
    s = invert_bound(energy, r_squared, ELECTRON_MASS, d).nats
    product = product_bound(BoundQuery(s, d, ELECTRON_MASS)).product_bound
    assert product == pytest.approx(energy * r_squared, rel=1e-10)


def test_zero_energy_stores_nothing():
    assert invert_bound(0.0, 1.0, 1.0, 3) == (0.0, 0.0)


def test_kappa_example():
    optimum = kappa_optimize(1.0, 2.0)
    assert optimum.kappa_star == pytest.approx(0.25)
    assert optimum.bound == pytest.approx(0.5)
    assert optimum.objective_at_star == pytest.approx(0.5)


def test_kappa_star_is_a_strict_maximum():
    optimum = kappa_optimize(3.0, 0.7)
    at_star = float(kappa_objective(optimum.kappa_star, 3.0, 0.7))
    for factor in (0.9, 1.1):
        assert float(kappa_objective(optimum.kappa_star * factor, 3.0, 0.7)) < at_star
    assert optimum.grid_max <= at_star * (1 + 1e-12)


def test_kappa_grid_above_critical_point_raises(monkeypatch):
    # an objective that keeps rising past kappa*
    monkeypatch.setattr("qmembound.bound.kappa_objective",
                        lambda kappa, coefficient, r_squared: jnp.sqrt(jnp.asarray(kappa, jnp.float64)))
    with pytest.raises(KappaGridError):
        kappa_optimize(1.0, 2.0)


def test_kappa_bound_is_independent_of_r_squared():
    query = BoundQuery(300.0, 100, ELECTRON_MASS)
    expected = product_bound(query).product_bound
    coefficient = lemma_coefficient(query)
    rng = np.random.default_rng(3)
    bounds = np.array([kappa_optimize(coefficient, float(r)).bound for r in 10 ** rng.uniform(-20, 2, 1000)])
    assert np.ptp(bounds) / expected < 1e-12
    assert bounds[0] == pytest.approx(expected, rel=1e-12)


def test_product_bound_reports_kappa_star():
    query = BoundQuery(10.0, 5, 1e-26)
    result = product_bound(query, r_squared=1e-6)
    assert result.kappa_star == pytest.approx(lemma_coefficient(query) ** 2 / 1e-12)
    assert product_bound(query).kappa_star is None


def test_sphere_r_squared():
    radius = (3e-3 / (4 * math.pi)) ** (1 / 3)
    assert sphere_r_squared(1e-3) == pytest.approx(0.6 * radius ** 2)
    assert sphere_r_squared(1e-3) == pytest.approx(2.3090e-3, rel=1e-4)


def test_capacity_estimate_default_reading():
    estimate = capacity_estimate(Scenario(1.0, 1e-3, 10.0, 12.0, 3))
    assert estimate.per_atom.nats / 3 == pytest.approx(19.374, abs=1e-3)
    assert 10 <= estimate.bits_per_dof <= 40
    assert estimate.total_bits == pytest.approx(estimate.per_atom.bits * estimate.scenario.atoms)
    assert estimate.quoted_total_ratio == pytest.approx(1e31 / estimate.total_bits)


def test_capacity_estimate_zero_energy():
    estimate = capacity_estimate(Scenario(1.0, 1e-3, 0.0, 12.0, 3))
    assert estimate.total_bits == 0.0
