"""Behavioral audits: the static response-surface sweep with unilateral
deviation probes, the temporal deviation audit, and the finite-fraction
reliability metric.

The audit actions are fixed by protocol, so its classifications are a
structural property of the environment: any supplied policy object is
accepted (mirrors the evaluation-harness call shape) and ignored.
"""

from __future__ import annotations

import enum
from dataclasses import dataclass
from typing import Optional, Sequence

import numpy as np

from .envs.engine import CoopetitionEnv, make
from .payoffs import RewardMode
from .policies import AgentContext, ConstantPolicy, Policy
from .rollout import run_episode

EPSILON = 1e-9

STATIC_LEVELS = [k * 5 for k in range(21)]           # percent, 0..100 in 5s
DEVIATION_POINTS = [20, 40, 60, 80]                   # percent
DEVIATION_FACTOR = 0.5

EARLY_DEFECT_FRACS = [0.10, 0.20, 0.30]
SWITCHPOINT_FRACS = [0.50 + k * (0.49 / 8) for k in range(9)]
RAMP_FRACTION = 0.20


class TemporalStrategy(enum.Enum):
    FULL_DEFECT = "full_defect"
    SWITCHPOINT = "switchpoint"
    EARLY_DEFECT = "early_defect"
    GRADUAL_RAMP = "gradual_ramp"
    FINAL_STEP = "final_step"


@dataclass(frozen=True)
class AuditOutcome:
    deviator_delta: float
    partner_mean_delta: float

    @property
    def exploitative(self) -> bool:
        return (self.deviator_delta > EPSILON
                and self.partner_mean_delta < -EPSILON)

    def to_dict(self) -> dict:
        return {
            "deviator_delta": self.deviator_delta,
            "partner_mean_delta": self.partner_mean_delta,
            "exploitative": self.exploitative,
        }


class _ScheduledPolicy(Policy):
    """Plays a precomputed action schedule indexed by step."""

    def __init__(self, schedule):
        self.schedule = schedule

    def act(self, observation, ctx: AgentContext) -> float:
        return float(self.schedule[ctx.step])


def _classify(dev_returns: np.ndarray, base_returns: np.ndarray) -> AuditOutcome:
    deviator = float(dev_returns[0] - base_returns[0])
    partners = float((dev_returns[1:] - base_returns[1:]).mean())
    return AuditOutcome(deviator_delta=deviator, partner_mean_delta=partners)


def f_fin(series) -> float:
    """Fraction of entries that are finite; NaN and infinities count against."""
    arr = np.asarray(series, dtype=np.float64)
    if arr.size == 0:
        raise ValueError("finite fraction of an empty series is undefined")
    return float(np.isfinite(arr).sum() / arr.size)


def _run_uniform(env: CoopetitionEnv, seed: int, pct: float) -> np.ndarray:
    policies = [ConstantPolicy(pct) for _ in range(env.n)]
    return run_episode(env, policies, episode_seed=seed,
                       collect_records=False).returns


def static_audit(env_id: str, mode: RewardMode, seed: int,
                 policy: Optional[object] = None) -> dict:
    """Response surface over 21 uniform levels plus 4 unilateral-deviation probes.

    `policy` is accepted for call-shape compatibility and deliberately unused:
    the sweep actions are fixed, so the report is policy-independent.
    """
    del policy
    env = make(env_id, mode)
    rows = []
    uniform_returns: dict[int, np.ndarray] = {}
    for level in STATIC_LEVELS:
        returns = _run_uniform(env, seed, level)
        uniform_returns[level] = returns
        rows.append({"level_pct": level, "returns": returns.tolist()})

    deviations = []
    for level in DEVIATION_POINTS:
        policies: list[Policy] = [ConstantPolicy(level * DEVIATION_FACTOR)]
        policies.extend(ConstantPolicy(level) for _ in range(env.n - 1))
        dev = run_episode(env, policies, episode_seed=seed,
                          collect_records=False).returns
        outcome = _classify(dev, uniform_returns[level])
        deviations.append({"level_pct": level,
                           "deviator_action_pct": level * DEVIATION_FACTOR,
                           **outcome.to_dict()})

    return {
        "kind": "static",
        "env_id": env_id,
        "mode": mode.value,
        "seed": seed,
        "rows": rows,
        "deviations": deviations,
    }


def _temporal_schedule(strategy: TemporalStrategy, frac: Optional[float],
                       horizon: int, bound: float) -> list[float]:
    half = 0.5 * bound
    steps = range(horizon)
    if strategy is TemporalStrategy.FULL_DEFECT:
        return [0.0 for _ in steps]
    if strategy is TemporalStrategy.SWITCHPOINT:
        switch = round(frac * horizon)
        return [half if t < switch else 0.0 for t in steps]
    if strategy is TemporalStrategy.EARLY_DEFECT:
        until = round(frac * horizon)
        return [0.0 if t < until else half for t in steps]
    if strategy is TemporalStrategy.GRADUAL_RAMP:
        start = round((1.0 - RAMP_FRACTION) * horizon)
        out = []
        for t in steps:
            if t < start:
                out.append(half)
            else:
                out.append(half * (horizon - 1 - t) / max(horizon - 1 - start, 1))
        return out
    if strategy is TemporalStrategy.FINAL_STEP:
        return [half if t < horizon - 1 else 0.0 for t in steps]
    raise ValueError(strategy)


def temporal_strategies(horizon: int, bound: float) -> list[tuple[str, list[float]]]:
    """The full labelled strategy set: 1 full-defect, 9 switchpoints, 3 early,
    1 ramp, 1 final-step."""
    out = [("full_defect", _temporal_schedule(TemporalStrategy.FULL_DEFECT,
                                              None, horizon, bound))]
    for frac in SWITCHPOINT_FRACS:
        out.append((f"switchpoint:{frac:.6f}",
                    _temporal_schedule(TemporalStrategy.SWITCHPOINT, frac,
                                       horizon, bound)))
    for frac in EARLY_DEFECT_FRACS:
        out.append((f"early_defect:{frac:.2f}",
                    _temporal_schedule(TemporalStrategy.EARLY_DEFECT, frac,
                                       horizon, bound)))
    out.append(("gradual_ramp", _temporal_schedule(TemporalStrategy.GRADUAL_RAMP,
                                                   None, horizon, bound)))
    out.append(("final_step", _temporal_schedule(TemporalStrategy.FINAL_STEP,
                                                 None, horizon, bound)))
    return out


def temporal_audit(env_id: str, seed: int,
                   mode: RewardMode = RewardMode.INTEGRATED) -> dict:
    """Agent 0 plays each temporal deviation strategy against a 50% baseline."""
    env = make(env_id, mode)
    baseline = _run_uniform(env, seed, 50.0)

    outcomes = []
    for label, schedule in temporal_strategies(env.horizon, float(env.bounds[0])):
        policies: list[Policy] = [_ScheduledPolicy(schedule)]
        policies.extend(ConstantPolicy(50) for _ in range(env.n - 1))
        dev = run_episode(env, policies, episode_seed=seed,
                          collect_records=False).returns
        outcome = _classify(dev, baseline)
        outcomes.append({"strategy": label, **outcome.to_dict()})

    return {
        "kind": "temporal",
        "env_id": env_id,
        "mode": mode.value,
        "seed": seed,
        "baseline_returns": baseline.tolist(),
        "outcomes": outcomes,
    }


def summarize_temporal(reports: Sequence[dict]) -> dict:
    """Exploitative counts per strategy class across a batch of reports."""
    counts: dict[str, dict[str, int]] = {}
    for report in reports:
        for row in report["outcomes"]:
            cls = row["strategy"].split(":")[0]
            slot = counts.setdefault(cls, {"tests": 0, "exploitative": 0})
            slot["tests"] += 1
            slot["exploitative"] += int(row["exploitative"])
    return counts


def summarize_static(reports: Sequence[dict]) -> dict:
    tests = 0
    exploitative = 0
    for report in reports:
        for row in report["deviations"]:
            tests += 1
            exploitative += int(row["exploitative"])
    return {"tests": tests, "exploitative": exploitative}
