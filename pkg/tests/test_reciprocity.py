import numpy as np
import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

from mixedmotive.reciprocity import (ReciprocityMemory, TR4Params,
                                     bounded_response, complete_utility,
                                     reciprocity_sensitivity,
                                     reciprocity_signal, trust_gated_modifier,
                                     windowed_baseline)

P = TR4Params()
TANH_1 = 0.7615941559557649


def test_param_validation():
    with pytest.raises(ValueError):
        TR4Params(rho0=0.0)
    with pytest.raises(ValueError):
        TR4Params(k_window=0)


class TestWindowedBaseline:
    def test_short_history(self):
        assert windowed_baseline([2.0, 4.0, 6.0], t=4, k=5) == pytest.approx(4.0)

    def test_window_truncates_long_history(self):
        history = [1.0, 1.0, 10.0, 20.0, 30.0, 40.0, 50.0]
        assert windowed_baseline(history, t=8, k=5) == pytest.approx(30.0)

    def test_constant_history(self):
        assert windowed_baseline([7.0] * 9, t=10, k=5) == 7.0

    def test_window_of_one_is_previous_action(self):
        history = [3.0, 9.0, 27.0]
        assert windowed_baseline(history, t=4, k=1) == 27.0

    def test_undefined_before_step_two(self):
        with pytest.raises(ValueError):
            windowed_baseline([], t=1, k=5)


class TestSignalAndResponse:
    def test_signal_examples(self):
        assert reciprocity_signal(5.0, 5.0) == 0.0
        assert reciprocity_signal(7.0, 5.0) == 2.0
        assert reciprocity_signal(3.0, 5.0) < 0

    def test_response_at_zero(self):
        assert bounded_response(0.0, 1.0) == 0.0

    def test_response_unit(self):
        assert bounded_response(1.0, 1.0) == pytest.approx(TANH_1, rel=1e-14)

    @given(st.floats(min_value=-50, max_value=50))
    def test_oddness(self, x):
        assert bounded_response(-x, 1.0) == pytest.approx(-bounded_response(x, 1.0))

    @given(st.floats(min_value=-1e6, max_value=1e6),
           st.floats(min_value=0.1, max_value=10))
    def test_bounded(self, x, kappa):
        # Strict in exact arithmetic; large arguments round to exactly 1.0.
        assert abs(bounded_response(x, kappa)) <= 1.0

    @given(st.floats(min_value=-8.0, max_value=8.0))
    def test_strictly_bounded_at_moderate_arguments(self, x):
        assert abs(bounded_response(x, 1.0)) < 1.0

    def test_kappa_validated(self):
        with pytest.raises(ValueError):
            bounded_response(1.0, 0.0)


class TestSensitivity:
    def test_identity_at_unit_elasticity(self):
        assert reciprocity_sensitivity(0.64, P) == pytest.approx(0.64)

    def test_zero_coupling(self):
        assert reciprocity_sensitivity(0.0, P) == 0.0

    def test_quadratic_elasticity(self):
        p = TR4Params(eta=2.0)
        assert reciprocity_sensitivity(0.5, p) == pytest.approx(0.25)

    def test_domain(self):
        with pytest.raises(ValueError):
            reciprocity_sensitivity(1.5, P)


class TestTrustGatedModifier:
    def test_closed_gate(self):
        out = trust_gated_modifier(0, [1.0, 0.0], [1.0, 1.0], [0.0, 5.0], P)
        assert out == 0.0

    def test_fully_open_dyad(self):
        # T=1, D=1, rho=1, saturated response -> lambda * (1 + omega) * phi.
        out = trust_gated_modifier(0, [1.0, 1.0], [1.0, 1.0], [0.0, 1e9], P)
        assert out == pytest.approx(1.6, rel=1e-9)

    def test_zero_signals(self):
        out = trust_gated_modifier(0, [1.0, 1.0], [1.0, 1.0], [0.0, 0.0], P)
        assert out == 0.0

    def test_saturation_bound(self):
        rng = np.random.default_rng(5)
        n = 4
        bound = P.lambda_R * (n - 1) * (1.0 + P.omega_amp) * P.rho0
        for _ in range(200):
            trust = rng.uniform(0, 1, n)
            coupling = rng.uniform(0, 1, n)
            signals = rng.uniform(-1e3, 1e3, n)
            out = trust_gated_modifier(1, trust, coupling, signals, P)
            assert abs(out) <= bound + 1e-12

    def test_monotone_in_each_signal(self):
        rng = np.random.default_rng(9)
        trust = rng.uniform(0.2, 1, 3)
        coupling = rng.uniform(0.2, 1, 3)
        base_signals = rng.uniform(-2, 2, 3)
        base = trust_gated_modifier(0, trust, coupling, base_signals, P)
        for j in (1, 2):
            bumped = base_signals.copy()
            bumped[j] += 0.5
            assert trust_gated_modifier(0, trust, coupling, bumped, P) >= base

    def test_length_mismatch_rejected(self):
        with pytest.raises(ValueError):
            trust_gated_modifier(0, [1.0], [1.0, 1.0], [0.0, 0.0], P)


class TestCompleteUtility:
    def test_sum(self):
        assert complete_utility(1.0, 2.0, 3.0, 4.0) == 10.0

    def test_zeros(self):
        assert complete_utility(0.0, 0.0, 0.0, 0.0) == 0.0

    def test_permutation_invariance(self):
        assert complete_utility(4.0, 3.0, 2.0, 1.0) == complete_utility(1.0, 2.0, 3.0, 4.0)


class TestReciprocityMemory:
    def test_default_baseline_before_history(self):
        m = ReciprocityMemory(2, 5, default_baseline=[50.0, 50.0])
        assert m.baseline(0) == 50.0

    def test_baseline_tracks_window(self):
        m = ReciprocityMemory(1, 3)
        for a in (1.0, 2.0, 3.0, 4.0):
            m.record([a])
        assert m.baseline(0) == pytest.approx(3.0)

    def test_buffer_bounded(self):
        m = ReciprocityMemory(1, 2)
        for a in range(10):
            m.record([float(a)])
        assert len(m.buffers[0]) == 2
