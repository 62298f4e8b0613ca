import json
import math

import numpy as np
import pytest

from mixedmotive.audit import (EPSILON, AuditOutcome, f_fin, static_audit,
                               summarize_static, summarize_temporal,
                               temporal_audit, temporal_strategies)
from mixedmotive.payoffs import RewardMode
from mixedmotive.policies import ConstantPolicy, TitForTatPolicy


class TestFiniteFraction:
    def test_all_finite(self):
        assert f_fin([1.0, 2.0, 3.0, 4.0]) == 1.0

    def test_one_nan(self):
        assert f_fin([1.0, 2.0, float("nan"), 4.0]) == 0.75

    def test_all_nonfinite(self):
        assert f_fin([float("nan"), float("inf"), float("-inf")]) == 0.0

    def test_exact_fraction_for_random_series(self):
        rng = np.random.default_rng(0)
        for _ in range(100):
            m = int(rng.integers(1, 500))
            k = int(rng.integers(0, m + 1))
            series = np.ones(m)
            bad_positions = rng.choice(m, size=k, replace=False)
            markers = rng.choice([np.nan, np.inf, -np.inf], size=k)
            series[bad_positions] = markers
            assert f_fin(series) == (m - k) / m

    def test_empty_rejected(self):
        with pytest.raises(ValueError):
            f_fin([])


class TestClassification:
    def test_exploitative_requires_gain_and_harm(self):
        assert AuditOutcome(1.0, -1.0).exploitative
        assert not AuditOutcome(1.0, 1.0).exploitative
        assert not AuditOutcome(-1.0, -1.0).exploitative
        assert not AuditOutcome(0.0, -1.0).exploitative

    def test_epsilon_band_is_neutral(self):
        assert not AuditOutcome(EPSILON / 2, -1.0).exploitative
        assert not AuditOutcome(1.0, -EPSILON / 2).exploitative

    def test_antisymmetric_under_sign_flip(self):
        rng = np.random.default_rng(1)
        for _ in range(100):
            d, p = rng.uniform(-5, 5, size=2)
            a = AuditOutcome(d, p).exploitative
            b = AuditOutcome(-d, -p).exploitative
            assert not (a and b)


class TestStaticAudit:
    def test_shape(self):
        report = static_audit("SLCD-v0", RewardMode.INTEGRATED, seed=0)
        assert len(report["rows"]) == 21
        assert [r["level_pct"] for r in report["rows"]] == list(range(0, 101, 5))
        assert len(report["deviations"]) == 4
        assert [d["level_pct"] for d in report["deviations"]] == [20, 40, 60, 80]

    def test_deviation_action_is_half_the_level(self):
        report = static_audit("SLCD-v0", RewardMode.INTEGRATED, seed=0)
        assert [d["deviator_action_pct"] for d in report["deviations"]] == \
            [10.0, 20.0, 30.0, 40.0]

    def test_policy_argument_never_changes_bytes(self):
        base = static_audit("TrustDilemma-v0", RewardMode.INTEGRATED, seed=1)
        with_policy = static_audit("TrustDilemma-v0", RewardMode.INTEGRATED,
                                   seed=1, policy=TitForTatPolicy())
        other_policy = static_audit("TrustDilemma-v0", RewardMode.INTEGRATED,
                                    seed=1, policy=ConstantPolicy(93))
        dump = lambda r: json.dumps(r, sort_keys=True)
        assert dump(base) == dump(with_policy) == dump(other_policy)

    def test_seed_deterministic(self):
        a = static_audit("DynamicPartnerSelection-v0", RewardMode.INTEGRATED, 7)
        b = static_audit("DynamicPartnerSelection-v0", RewardMode.INTEGRATED, 7)
        assert json.dumps(a, sort_keys=True) == json.dumps(b, sort_keys=True)


class TestTemporalAudit:
    def test_strategy_set_counts(self):
        labels = [lab for lab, _ in temporal_strategies(100, 100.0)]
        assert sum(1 for l in labels if l.startswith("switchpoint")) == 9
        assert sum(1 for l in labels if l.startswith("early_defect")) == 3
        assert labels.count("full_defect") == 1
        assert labels.count("gradual_ramp") == 1
        assert labels.count("final_step") == 1
        assert len(labels) == 15

    def test_switchpoints_span_half_to_ninety_nine_percent(self):
        labels = [lab for lab, _ in temporal_strategies(200, 100.0)]
        fracs = [float(l.split(":")[1]) for l in labels
                 if l.startswith("switchpoint")]
        assert fracs[0] == pytest.approx(0.50)
        assert fracs[-1] == pytest.approx(0.99)
        gaps = np.diff(fracs)
        assert np.allclose(gaps, gaps[0])

    def test_schedules_have_documented_shapes(self):
        for label, sched in temporal_strategies(100, 100.0):
            assert len(sched) == 100
            if label == "full_defect":
                assert set(sched) == {0.0}
            if label == "final_step":
                assert sched[-1] == 0.0 and set(sched[:-1]) == {50.0}
            if label == "gradual_ramp":
                assert sched[0] == 50.0 and sched[-1] == 0.0
                tail = sched[80:]
                assert all(a >= b for a, b in zip(tail, tail[1:]))

    def test_report_shape_and_baseline(self):
        report = temporal_audit("SLCD-v0", seed=0)
        assert len(report["outcomes"]) == 15
        assert len(report["baseline_returns"]) == 2

    def test_baseline_versus_itself_is_neutral(self):
        # A deviator who never deviates produces zero deltas.
        report = temporal_audit("SLCD-v0", seed=0)
        # The switchpoint at 0.99 of a 40-step horizon rounds to step 40,
        # i.e. never defects; it must be classified neutral.
        last_switch = [o for o in report["outcomes"]
                       if o["strategy"].startswith("switchpoint")][-1]
        assert last_switch["deviator_delta"] == 0.0
        assert not last_switch["exploitative"]


class TestSummaries:
    def test_temporal_summary_counts(self):
        reports = [temporal_audit("SLCD-v0", seed=s) for s in (0, 1)]
        summary = summarize_temporal(reports)
        assert summary["switchpoint"]["tests"] == 18
        assert summary["full_defect"]["tests"] == 2

    def test_static_summary_counts(self):
        reports = [static_audit("SLCD-v0", RewardMode.INTEGRATED, 0)]
        summary = summarize_static(reports)
        assert summary["tests"] == 4
