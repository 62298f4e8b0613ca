"""Analytic reference policies.

Each oracle solves for a stationary per-agent action profile from the
environment's calibrated constants alone, then the profile is replayed
open-loop through the live environment to obtain its reference return.
Equilibrium-style oracles run damped simultaneous best response on the
steady-state payoff with mechanism modifiers off; optimum-style oracles
maximize the steady-state group objective over symmetric profiles.
"""

from __future__ import annotations

import enum
import math
from typing import Callable, Optional

import numpy as np

from .collective import ConvergenceError, _golden_max
from .envs.config import EnvConfig, Tier
from .envs.registry import get_config
from .payoffs import RewardMode, ValueSpec
from .policies import FixedProfilePolicy
from .rollout import mean_episode_return


class OracleName(enum.Enum):
    EQUILIBRIUM = "Equilibrium"
    TRUST_AWARE = "TrustAware"
    NASH = "Nash"
    LOYALTY = "Loyalty"
    SOCIAL_OPTIMUM = "SocialOptimum"
    RECIPROCITY_EQUILIBRIUM = "ReciprocityEquilibrium"
    BOUNDED_RECIPROCITY = "BoundedReciprocity"


_TIER_REFERENCE = {
    Tier.TR1: OracleName.EQUILIBRIUM,
    Tier.TR2: OracleName.TRUST_AWARE,
    Tier.TR3: OracleName.LOYALTY,
    Tier.TR4: OracleName.BOUNDED_RECIPROCITY,
}


def reference_oracle(env_id: str) -> OracleName:
    """The per-environment reference oracle used for gap tables."""
    return _TIER_REFERENCE[get_config(env_id).tier]


def _oracle_gamma(config: EnvConfig) -> float:
    choices = config.overlay.get("gamma_choices")
    if choices:
        return float(np.mean(choices))
    return config.value_params.gamma


def _individual_value(a: float, config: EnvConfig) -> float:
    vp = config.value_params
    if vp.spec is ValueSpec.LOGARITHMIC:
        return vp.theta * math.log(1.0 + a)
    return 0.0 if a == 0.0 else math.pow(a, vp.beta_power)


def _geomean(actions: np.ndarray) -> float:
    if (actions == 0.0).any():
        return 0.0
    return float(np.exp(np.log(actions).mean()))


def static_payoffs(config: EnvConfig, actions: np.ndarray) -> np.ndarray:
    """Steady-state payoff vector for a stationary profile.

    Relational state is held at its stationary point under constant actions:
    signals vanish, trust freezes at its initial level, no breach occurs, and
    sanction/exclusion states settle to the level implied by the profile.
    """
    ov = config.overlay
    n = config.n_agents
    actions = np.asarray(actions, dtype=np.float64)
    bounds = np.asarray(config.action_bounds)
    endow = np.asarray(config.endowments)
    gamma = _oracle_gamma(config)

    if config.tier is Tier.TR3:
        p3 = config.tr3_params
        if ov.get("public_goods"):
            pool = ov["multiplier"] * float(actions.sum()) / n
            pi = (endow - actions) + pool
            frac = actions / bounds
            pi[frac < ov["sanction_threshold"]] *= ov["sanction_multiplier"]
            return pi
        if "exclusion_threshold" in ov:
            frac = actions / p3.a_max
            members = frac >= ov["exclusion_threshold"]
            pi = np.empty(n)
            if members.any():
                total = float(actions[members].sum())
                q = 0.0 if total == 0.0 else p3.omega * math.pow(total, p3.beta_scale)
                pi[members] = q / int(members.sum()) - p3.cost_c * actions[members]
            pi[~members] = endow[~members] - p3.cost_c * actions[~members]
            return pi
        total = float(actions.sum())
        q = 0.0 if total == 0.0 else p3.omega * math.pow(total, p3.beta_scale)
        pi = q / n - p3.cost_c * actions
        if "coordination_threshold" in ov:
            if total / float(bounds.sum()) >= ov["coordination_threshold"]:
                pi += ov["coordination_bonus"] * q / n
        return pi

    if ov.get("gift_exchange"):
        emp, wrk = ov["employer"], ov["worker"]
        wage, effort = float(actions[emp]), float(actions[wrk])
        joint = _geomean(actions)
        share = (gamma / n) * joint
        pi = np.empty(n)
        pi[emp] = (endow[emp] - wage) + _individual_value(joint, config) + share
        pi[wrk] = (endow[wrk] - effort) + wage + share
        return pi

    if ov.get("matching"):
        # Representative pairwise play: each agent faces one partner at the
        # mean of the others' levels.
        pi = np.empty(n)
        for i in range(n):
            partner = float(np.delete(actions, i).mean())
            pair = np.array([actions[i], partner])
            share = (gamma / 2.0) * _geomean(pair)
            pi[i] = (endow[i] - actions[i]) + _individual_value(actions[i], config) + share
        return pi

    share = (gamma / n) * _geomean(actions)
    pi = (endow - actions) + np.array(
        [_individual_value(a, config) for a in actions]) + share

    if ov.get("graduated_sanctions"):
        steady = np.where(actions / bounds < ov["sanction_threshold"],
                          ov["sanction_cap"], 0)
        pi = pi * (1.0 - ov["sanction_step_penalty"] * steady)

    if "commissions" in ov:
        rates = ov["commissions"]
        platform = ov["platform_agent"]
        pi = pi.copy()
        collected = 0.0
        for i in range(n):
            if i == platform or rates[i] == 0.0:
                continue
            cut = rates[i] * pi[i]
            pi[i] -= cut
            collected += cut
        pi[platform] += collected

    return pi


def _trust_aware_objective(config: EnvConfig, actions: np.ndarray) -> np.ndarray:
    """Private payoff plus the trust-scaled synergy share at full trust."""
    gamma = _oracle_gamma(config)
    share = (gamma / config.n_agents) * _geomean(actions)
    return static_payoffs(config, actions) + 0.5 * share


def _loyalty_total(config: EnvConfig, actions: np.ndarray) -> float:
    """Group objective with the loyalty channel held at full loyalty."""
    pi = static_payoffs(config, actions)
    total = float(pi.sum())
    if config.tier is Tier.TR3 and config.overlay.get("loyalty_channel"):
        p3 = config.tr3_params
        n = config.n_agents
        for i in range(n):
            pbar = (pi.sum() - pi[i]) / (n - 1)
            total += p3.phi_B * pbar + p3.phi_C * p3.cost_c * float(actions[i])
    return total


def _argmax_scalar(f: Callable[[float], float], lo: float, hi: float) -> float:
    """Coarse grid scan followed by golden-section refinement; tolerant of the
    threshold discontinuities the overlays introduce."""
    grid = np.linspace(lo, hi, 201)
    vals = [f(x) for x in grid]
    k = int(np.argmax(vals))
    a = grid[max(0, k - 1)]
    b = grid[min(len(grid) - 1, k + 1)]
    x = _golden_max(f, float(a), float(b))
    return x if f(x) >= vals[k] else float(grid[k])


def _best_response_profile(config: EnvConfig,
                           payoffs: Callable[[EnvConfig, np.ndarray], np.ndarray],
                           tol: float = 1e-5, max_iter: int = 10_000) -> np.ndarray:
    # tol is a position tolerance; 1e-5 is the practical floor set by the
    # curvature of double-precision payoffs near an interior maximum, and the
    # induced payoff error is quadratically smaller.
    n = config.n_agents
    bounds = np.asarray(config.action_bounds)
    a = bounds / 2.0
    weight = 1.0 / n
    for _ in range(max_iter):
        br = np.empty(n)
        for i in range(n):
            def deviator(x: float, i=i) -> float:
                trial = a.copy()
                trial[i] = x
                return float(payoffs(config, trial)[i])
            br[i] = _argmax_scalar(deviator, 0.0, float(bounds[i]))
        a_next = (1.0 - weight) * a + weight * br
        if float(np.abs(a_next - a).max()) < tol:
            return a_next
        a = a_next
    raise ConvergenceError(
        f"oracle best response did not converge for {config.env_id}",
        last=float(a.mean()),
    )


def _symmetric_optimum(config: EnvConfig,
                       total: Callable[[EnvConfig, np.ndarray], float]) -> np.ndarray:
    bounds = np.asarray(config.action_bounds)

    def objective(x: float) -> float:
        return total(config, x * bounds)

    x = _argmax_scalar(objective, 0.0, 1.0)
    return x * bounds


def solve_oracle(name, config: EnvConfig, tol: float = 1e-5) -> np.ndarray:
    """Stationary per-agent action profile for the named oracle."""
    if isinstance(name, str):
        name = OracleName(name)
    if name in (OracleName.EQUILIBRIUM, OracleName.NASH,
                OracleName.RECIPROCITY_EQUILIBRIUM):
        return _best_response_profile(config, static_payoffs, tol=tol)
    if name is OracleName.TRUST_AWARE:
        return _best_response_profile(
            config, lambda c, a: _trust_aware_objective(c, a), tol=tol)
    if name in (OracleName.LOYALTY, OracleName.SOCIAL_OPTIMUM):
        return _symmetric_optimum(config, _loyalty_total)
    if name is OracleName.BOUNDED_RECIPROCITY:
        # Reciprocity and trust modifiers vanish at the zero-signal steady
        # state, leaving the group payoff itself.
        return _symmetric_optimum(
            config, lambda c, a: float(static_payoffs(c, a).sum()))
    raise ValueError(f"unknown oracle {name}")


def oracle_return(env_id: str, name, mode: RewardMode, seeds) -> float:
    """Mean episodic return of the oracle profile replayed through the env."""
    from .envs.engine import make

    config = get_config(env_id)
    profile = solve_oracle(name, config)

    def env_factory(seed):
        return make(env_id, mode, seed=seed)

    def policies_factory(env):
        return [FixedProfilePolicy(profile, i) for i in range(env.n)]

    return mean_episode_return(env_factory, policies_factory, seeds)


def export_profile(env_id: str, name, profile: np.ndarray) -> dict:
    """Config-file snippet for replaying a solved profile."""
    if isinstance(name, OracleName):
        name = name.value
    return {
        "env_id": env_id,
        "oracle": name,
        "profile": [float(x) for x in profile],
    }


def constant_sweep(env_id: str, mode: RewardMode, seeds, **env_kwargs) -> dict:
    """Mean per-agent episodic return for each of the 101 constant policies."""
    from .envs.engine import make
    from .policies import ConstantPolicy

    rows = []
    for pct in range(101):
        def env_factory(seed):
            return make(env_id, mode, seed=seed, **env_kwargs)

        def policies_factory(env, pct=pct):
            return [ConstantPolicy(pct) for _ in range(env.n)]

        rows.append({"pct": pct,
                     "mean_return": mean_episode_return(env_factory,
                                                        policies_factory, seeds)})
    best = max(range(101), key=lambda k: rows[k]["mean_return"])
    return {"env_id": env_id, "mode": mode.value, "seeds": list(seeds),
            "rows": rows, "argmax_pct": best}
