import math

import numpy as np
import pytest

from mixedmotive.collective import (ConvergenceError, LoyaltyState, TR3Params,
                                    best_response_symmetric, cohesion,
                                    loyalty_modifier, nash_formula,
                                    team_payoff, team_payoffs, team_production,
                                    teammate_average)

CAL = TR3Params()  # calibrated constants

# Frozen from 30-digit evaluation of 25 * 14.12^0.7.
PRODUCTION_AT_14_12 = 159.52336289255686
# Frozen from 30-digit evaluation of 4.375^(10/3).
NASH_TOTAL_CALIBRATED = 136.95992973567948


def test_param_validation():
    with pytest.raises(ValueError):
        TR3Params(beta_scale=1.0)
    with pytest.raises(ValueError):
        TR3Params(beta_scale=0.0)
    with pytest.raises(ValueError):
        TR3Params(omega=-1.0)
    with pytest.raises(ValueError):
        TR3Params(loyalty_horizon=0)


class TestTeamProduction:
    def test_unit_total(self):
        p = TR3Params(omega=25.0)
        assert team_production([0.5, 0.5], p) == pytest.approx(25.0)

    def test_zero_total(self):
        assert team_production([0.0, 0.0, 0.0], CAL) == 0.0

    def test_frozen_point(self):
        assert team_production([7.0, 7.12], CAL) == pytest.approx(
            PRODUCTION_AT_14_12, rel=1e-14)

    def test_out_of_bounds_rejected(self):
        with pytest.raises(ValueError):
            team_production([60.0, 1.0], CAL)
        with pytest.raises(ValueError):
            team_production([-1.0, 1.0], CAL)


class TestTeamPayoff:
    def test_share_minus_cost(self):
        # Q = 100 engineered: omega * total^beta = 100 with total = 10.
        p = TR3Params(omega=100.0 / 10 ** 0.7, beta_scale=0.7, cost_c=1.0)
        actions = [10.0, 0.0, 0.0, 0.0]
        assert team_payoff(actions, 0, p) == pytest.approx(100.0 / 4 - 10.0)
        assert team_payoff(actions, 1, p) == pytest.approx(25.0)

    def test_all_zero(self):
        assert team_payoff([0.0] * 4, 2, CAL) == 0.0

    def test_free_rider_gets_exact_share(self):
        actions = [0.0, 20.0, 30.0, 10.0]
        q = team_production(actions, CAL)
        assert team_payoff(actions, 0, CAL) == pytest.approx(q / 4)

    def test_vectorized_matches_scalar(self):
        actions = [3.0, 8.0, 1.5, 22.0]
        vec = team_payoffs(actions, CAL)
        for i in range(4):
            assert vec[i] == pytest.approx(team_payoff(actions, i, CAL), rel=1e-15)


class TestTeammateAverage:
    def test_example(self):
        assert teammate_average([1.0, 2.0, 3.0, 4.0], 0) == pytest.approx(3.0)

    def test_uniform(self):
        assert teammate_average([7.0, 7.0, 7.0], 1) == pytest.approx(7.0)

    def test_two_agents_is_partner(self):
        assert teammate_average([5.0, 9.0], 0) == 9.0

    def test_single_agent_rejected(self):
        with pytest.raises(ValueError):
            teammate_average([1.0], 0)


class TestLoyaltyModifier:
    def test_zero_loyalty(self):
        assert loyalty_modifier(0.0, 10.0, 5.0, CAL) == 0.0

    def test_full_loyalty(self):
        assert loyalty_modifier(1.0, 10.0, 5.0, CAL) == pytest.approx(9.5)

    def test_linear_in_theta(self):
        assert loyalty_modifier(0.5, 10.0, 5.0, CAL) == pytest.approx(4.75)


class TestNashFormula:
    def test_base_one(self):
        # omega*beta = n*c makes the base 1.
        p = TR3Params(omega=8.0, beta_scale=0.5, cost_c=1.0)
        assert nash_formula(p, 4) == pytest.approx(1.0)

    def test_calibrated_value(self):
        assert nash_formula(CAL, 4) == pytest.approx(NASH_TOTAL_CALIBRATED, rel=1e-12)


class TestBestResponseSymmetric:
    def test_corner_at_prohibitive_cost(self):
        p = TR3Params(cost_c=1e6)
        assert best_response_symmetric(p, 4) == pytest.approx(0.0, abs=1e-6)

    def test_calibrated_consistency_with_formula(self):
        a = best_response_symmetric(CAL, 4)
        assert 4 * a == pytest.approx(nash_formula(CAL, 4), rel=1e-5)

    def test_first_order_condition(self):
        # Finite-difference derivative of the deviator payoff at the fixed point.
        a = best_response_symmetric(CAL, 4)
        others = 3 * a

        def deviator(x):
            total = x + others
            return CAL.omega * total ** CAL.beta_scale / 4 - CAL.cost_c * x

        h = 1e-5
        derivative = (deviator(a + h) - deviator(a - h)) / (2 * h)
        assert abs(derivative) < 1e-4

    def test_single_agent_interior_maximizer(self):
        p = TR3Params(omega=2.0, beta_scale=0.5, cost_c=1.0)
        expected = (p.omega * p.beta_scale / p.cost_c) ** (1 / (1 - p.beta_scale))
        assert best_response_symmetric(p, 1) == pytest.approx(expected, rel=1e-6)

    def test_random_draw_consistency(self):
        # Dual-route check on 20 interior draws.
        rng = np.random.default_rng(2024)
        checked = 0
        while checked < 20:
            beta = rng.uniform(0.3, 0.9)
            omega = rng.uniform(5.0, 30.0)
            c = rng.uniform(0.5, 2.0)
            n = int(rng.integers(2, 7))
            p = TR3Params(omega=omega, beta_scale=beta, cost_c=c)
            total = nash_formula(p, n)
            if not 0.05 < total / n < 0.9 * p.a_max:
                continue
            a = best_response_symmetric(p, n)
            assert n * a == pytest.approx(total, rel=1e-5), (omega, beta, c, n)
            checked += 1

    def test_unilateral_deviation_never_profits(self):
        a = best_response_symmetric(CAL, 4)
        others = 3 * a

        def deviator(x):
            total = x + others
            return CAL.omega * total ** CAL.beta_scale / 4 - CAL.cost_c * x

        base = deviator(a)
        for x in np.linspace(0.0, a, 50):
            assert deviator(x) <= base + 1e-8

    def test_nonconvergence_carries_last_iterate(self):
        with pytest.raises(ConvergenceError) as err:
            best_response_symmetric(CAL, 4, tol=1e-308, max_iter=5)
        assert isinstance(err.value.last, float)


class TestLoyaltyState:
    def test_theta_is_window_mean(self):
        s = LoyaltyState(1, a_max=50.0, horizon=10)
        s.record([25.0])
        assert s.theta(0) == pytest.approx(0.5)
        s.record([50.0])
        assert s.theta(0) == pytest.approx(0.75)

    def test_zero_contributor_closes_channel_within_horizon(self):
        s = LoyaltyState(1, a_max=50.0, horizon=10)
        for _ in range(5):
            s.record([50.0])
        assert s.theta(0) == 1.0
        for _ in range(10):
            s.record([0.0])
        assert s.theta(0) == 0.0
        assert loyalty_modifier(s.theta(0), 100.0, 0.0, CAL) == 0.0

    def test_window_truncates(self):
        s = LoyaltyState(1, a_max=1.0, horizon=3)
        for a in (0.0, 0.0, 1.0, 1.0, 1.0):
            s.record([a])
        assert s.theta(0) == 1.0


class TestCohesion:
    def test_full_loyalty(self):
        assert cohesion([1.0, 2.0], [1.0, 1.0]) == pytest.approx(1.0)

    def test_uniform_loyalty(self):
        assert cohesion([0.3, 0.9, 1.2], [0.4, 0.4, 0.4]) == pytest.approx(0.4)

    def test_weight_concentration(self):
        assert cohesion([1.0, 0.0], [0.2, 0.9]) == pytest.approx(0.2)

    def test_zero_weights_rejected(self):
        with pytest.raises(ValueError):
            cohesion([0.0, 0.0], [0.5, 0.5])
