import math

import pytest

from qmembound.inversion import (EntropyTarget, asymptotic_cost, beta_for_entropy, default_method, lemma_value,
                                 sum_cost)
from qmembound.thermo import thermo_state, total_entropy


def test_entropy_target_validation():
    with pytest.raises(ValueError):
        EntropyTarget(-1.0, 10)
    with pytest.raises(ValueError):
        EntropyTarget(math.inf, 10)
    with pytest.raises(ValueError):
        EntropyTarget(1.0, 2)
    assert EntropyTarget.per_dof(2.0, 50).s_total == 100.0


def test_zero_entropy_rejected():
    with pytest.raises(ValueError):
        beta_for_entropy(EntropyTarget(0.0, 10))


def test_default_method_switch():
    assert default_method(10) == "direct"
    assert default_method(49) == "direct"
    assert default_method(50) == "asymptotic"


def test_asymptotic_forward_then_invert():
    state = thermo_state(0.1, 10, "asymptotic")
    beta = beta_for_entropy(EntropyTarget(state.total_entropy, 10), "asymptotic")
    assert beta == pytest.approx(0.1, abs=1e-8)


@pytest.mark.parametrize("d", [10, 50, 200])
@pytest.mark.parametrize("s_per_dof", [0.5, 1.0, 3.0, 6.0, 10.0])
def test_asymptotic_round_trip(d, s_per_dof):
    target = EntropyTarget.per_dof(s_per_dof, d)
    beta = beta_for_entropy(target, "asymptotic")
    assert total_entropy(beta, d, "asymptotic", warn_regime=False) == pytest.approx(target.s_total, abs=1e-10)


@pytest.mark.parametrize("s_per_dof", [0.5, 2.0, 5.0])
def test_direct_round_trip(s_per_dof):
    target = EntropyTarget.per_dof(s_per_dof, 10)
    beta = beta_for_entropy(target, "direct")
    # finite-difference noise in U_l sits around 1e-9
    assert total_entropy(beta, 10, "direct") == pytest.approx(target.s_total, abs=1e-7)


def test_direct_forward_then_invert():
    state = thermo_state(0.3, 10, "direct")
    assert beta_for_entropy(EntropyTarget(state.total_entropy, 10), "direct") == pytest.approx(0.3, rel=1e-6)


def test_larger_entropy_gives_smaller_beta():
    betas = [beta_for_entropy(EntropyTarget(s, 10), "asymptotic") for s in (5.0, 10.0, 20.0, 40.0)]
    assert all(b < a for a, b in zip(betas, betas[1:]))


@pytest.mark.parametrize("s_per_dof", [3.0, 4.0])
def test_methods_agree_on_beta_at_high_dimension(s_per_dof):
    target = EntropyTarget.per_dof(s_per_dof, 50)
    direct = beta_for_entropy(target, "direct")
    asymptotic = beta_for_entropy(target, "asymptotic")
    assert direct <= 0.2
    assert direct == pytest.approx(asymptotic, rel=0.05)


def test_lemma_value_example():
    assert lemma_value(200.0, 100) == pytest.approx(100 * (math.e ** 2 - 1), rel=1e-14)
    assert sum_cost(EntropyTarget(200.0, 100)).lemma_value == pytest.approx(638.9, abs=0.1)


def test_sum_cost_vanishes_with_entropy():
    cost = sum_cost(EntropyTarget(1e-6, 10), "direct")
    assert 0 <= cost.c_tilde_dimensionless < 1e-4
    assert cost.beta_solution > 5


@pytest.mark.parametrize("s_per_dof", [3.0, 4.0, 5.0])
def test_direct_cost_follows_leading_order_thermodynamics(s_per_dof):
    target = EntropyTarget.per_dof(s_per_dof, 50)
    cost = sum_cost(target, "direct")
    assert cost.method == "direct"
    assert cost.c_tilde_dimensionless >= 0
    assert cost.c_tilde_dimensionless == pytest.approx(cost.asymptotic_cost, rel=0.05)
    # the leading-order cost sits a factor ~e under d (e^{S/d} - 1)
    assert cost.c_tilde_dimensionless / cost.lemma_value == pytest.approx(1 / math.e, rel=0.1)


def test_asymptotic_cost_matches_asymptotic_method():
    target = EntropyTarget.per_dof(5.0, 200)
    cost = sum_cost(target)
    assert cost.method == "asymptotic"
    # exact Z_n against its small-beta expansion only
    assert cost.c_tilde_dimensionless == pytest.approx(asymptotic_cost(target.s_total, 200), rel=1e-3)
