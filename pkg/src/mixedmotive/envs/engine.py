"""Episode state machine.

One instance owns one episode: relational state (trust, loyalty, reciprocity
memories), the action history, and a seeded generator. Evolution is fully
deterministic given (config, mode, seed, action sequence); the only RNG
consumers are the matching overlay and the hidden-synergy draw.
"""

from __future__ import annotations

import math
from dataclasses import dataclass
from typing import Any, Optional

import numpy as np

from .._backend import kernels
from ..collective import LoyaltyState, cohesion, loyalty_modifier, teammate_average
from ..payoffs import InterdependenceMatrix, RewardMode, ValueSpec, reward_vector
from ..reciprocity import ReciprocityMemory
from ..trust import TrustState
from .config import EnvConfig, ObservationConfig, Tier
from .registry import get_config

TRACE_SCHEMA_VERSION = 1

# Trailing window feeding the trust-layer baseline.
TRUST_BASELINE_WINDOW = 10


@dataclass
class StepRecord:
    t: int
    actions: list[float]
    pi: list[float]
    modifiers: list[float]
    rewards: list[float]
    trust: Optional[list[list[float]]]
    loyalty: Optional[list[float]]
    terminated: bool
    truncated: bool

    def to_dict(self) -> dict[str, Any]:
        d: dict[str, Any] = {
            "t": self.t,
            "actions": self.actions,
            "pi": self.pi,
            "modifiers": self.modifiers,
            "rewards": self.rewards,
        }
        if self.trust is not None:
            d["trust"] = self.trust
        if self.loyalty is not None:
            d["loyalty"] = self.loyalty
        d["terminated"] = self.terminated
        d["truncated"] = self.truncated
        return d


class CoopetitionEnv:
    """A single mixed-motive episode with a configurable reward layer."""

    def __init__(self, config: EnvConfig, mode: RewardMode = RewardMode.INTEGRATED,
                 obs_config: Optional[ObservationConfig] = None,
                 seed: Optional[int] = None, *,
                 zero_interdependence: bool = False,
                 disable_modifiers: bool = False,
                 reward_scale: float = 1.0):
        self.config = config
        self.mode = mode
        self.obs_config = obs_config if obs_config is not None else config.observation
        self.n = config.n_agents
        self.horizon = config.horizon
        self.bounds = np.asarray(config.action_bounds, dtype=np.float64)
        self.endowments = np.asarray(config.endowments, dtype=np.float64)
        self.D = (InterdependenceMatrix.zeros(self.n)
                  if zero_interdependence else config.D)
        self.modifiers_enabled = not disable_modifiers
        if reward_scale <= 0:
            raise ValueError("reward_scale must be > 0")
        self.reward_scale = reward_scale
        self._seed = seed if seed is not None else 0
        self.reset(self._seed)

    # -- lifecycle -----------------------------------------------------------

    def reset(self, seed: Optional[int] = None):
        if seed is not None:
            self._seed = seed
        self.rng = np.random.default_rng(self._seed)
        cfg = self.config
        self.t = 0
        self.terminated = False
        self.truncated = False
        self.prev_actions = self.bounds / 2.0
        self.history: list[np.ndarray] = []
        self._trailing = [[] for _ in range(self.n)]

        self.trust = (TrustState(self.n, cfg.trust_init)
                      if cfg.tier.has_trust else None)
        self.loyalty = (LoyaltyState(self.n, cfg.tr3_params.a_max,
                                     cfg.tr3_params.loyalty_horizon)
                        if cfg.tier is Tier.TR3 else None)
        self.recip = (ReciprocityMemory(self.n, cfg.tr4_params.k_window,
                                        default_baseline=self.bounds / 2.0)
                      if cfg.tier is Tier.TR4 else None)

        ov = cfg.overlay
        self._sanction_levels = (np.zeros(self.n, dtype=np.int64)
                                 if ov.get("graduated_sanctions") else None)
        self._excluded = (np.zeros(self.n, dtype=bool)
                          if "exclusion_threshold" in ov else None)
        self._probation = np.zeros(self.n, dtype=np.int64)
        self._grace = np.zeros(self.n, dtype=np.int64)
        self._gamma = cfg.value_params.gamma
        if "gamma_choices" in ov:
            self._gamma = float(self.rng.choice(np.asarray(ov["gamma_choices"],
                                                           dtype=np.float64)))
        return self._observe(), {"t": 0}

    @property
    def done(self) -> bool:
        return self.terminated or self.truncated

    # -- stepping ------------------------------------------------------------

    def step(self, actions):
        if self.done:
            raise RuntimeError(f"episode over after step {self.t}; reset() to reuse")
        arr = np.asarray(actions, dtype=np.float64)
        if arr.shape != (self.n,):
            raise ValueError(f"expected {self.n} actions, got shape {arr.shape}")
        if np.isnan(arr).any():
            raise ValueError("NaN action rejected")
        submitted = np.clip(arr, 0.0, self.bounds)

        cfg = self.config
        ov = cfg.overlay

        effective = submitted.copy()
        if self._excluded is not None:
            self._update_exclusion(submitted)
            effective[self._excluded] = 0.0

        pairs = self._draw_pairs() if ov.get("matching") else None

        # Relational state reacts to the actions the world actually sees.
        raw_recip_signals = None
        if self.trust is not None:
            baselines = self._trust_baselines()
            self.trust.update(effective, baselines, cfg.trust_params)
        if self.recip is not None:
            recip_base = self._recip_baselines()
            raw_recip_signals = effective - recip_base
            self.recip.record(effective)
        if self.loyalty is not None:
            self.loyalty.record(submitted)

        pi, g = self._compute_payoffs(effective, submitted, pairs)
        modifiers = (self._compute_modifiers(effective, pi, g, raw_recip_signals)
                     if self.modifiers_enabled else np.zeros(self.n))

        if self.reward_scale != 1.0:
            pi = pi * self.reward_scale
            modifiers = modifiers * self.reward_scale
        rewards = reward_vector(pi, modifiers, self.D, self.mode)

        self._record_trailing(effective)
        self.prev_actions = effective
        self.history.append(effective)
        self.t += 1

        if "collapse_threshold" in ov and self.trust is not None:
            mask = ~np.eye(self.n, dtype=bool)
            if float(self.trust.T[mask].max()) < ov["collapse_threshold"]:
                self.terminated = True
        if not self.terminated and self.t >= self.horizon:
            self.truncated = True

        record = StepRecord(
            t=self.t,
            actions=effective.tolist(),
            pi=pi.tolist(),
            modifiers=modifiers.tolist(),
            rewards=rewards.tolist(),
            trust=self.trust.T.tolist() if self.trust is not None else None,
            loyalty=self.loyalty.thetas().tolist() if self.loyalty is not None else None,
            terminated=self.terminated,
            truncated=self.truncated,
        )
        info: dict[str, Any] = {"pi": pi, "modifiers": modifiers, "record": record}
        if pairs is not None:
            info["pairs"] = pairs
        if self.loyalty is not None:
            row_dependency = (self.D.entries.sum(axis=1) - 1.0) / max(self.n - 1, 1)
            if row_dependency.sum() > 0:
                info["cohesion"] = cohesion(row_dependency, self.loyalty.thetas())
        if self._sanction_levels is not None:
            info["sanction_levels"] = self._sanction_levels.copy()
        return self._observe(), rewards, self.terminated, self.truncated, info

    # -- internals -----------------------------------------------------------

    def _record_trailing(self, actions: np.ndarray) -> None:
        for i in range(self.n):
            w = self._trailing[i]
            w.append(float(actions[i]))
            if len(w) > TRUST_BASELINE_WINDOW:
                del w[0]

    def _trailing_mean(self, j: int) -> float:
        w = self._trailing[j]
        if not w:
            return float(self.bounds[j]) / 2.0
        return sum(w) / len(w)

    def _trust_baselines(self) -> np.ndarray:
        if self.config.overlay.get("image_signals") and self.trust is not None:
            return self.trust.public_image() * self.bounds
        return np.array([self._trailing_mean(j) for j in range(self.n)])

    def _recip_baselines(self) -> np.ndarray:
        if self.config.overlay.get("image_signals") and self.trust is not None:
            return self.trust.public_image() * self.bounds
        return self.recip.baselines()

    def _update_exclusion(self, submitted: np.ndarray) -> None:
        ov = self.config.overlay
        p3 = self.config.tr3_params
        threshold = ov["exclusion_threshold"]
        need = ov.get("probation_steps", 3)
        frac = ov.get("probation_fraction", threshold)
        for i in range(self.n):
            if self._excluded[i]:
                if submitted[i] >= frac * p3.a_max:
                    self._probation[i] += 1
                else:
                    self._probation[i] = 0
                if self._probation[i] >= need:
                    self._excluded[i] = False
                    self._probation[i] = 0
                    self._grace[i] = p3.loyalty_horizon
            else:
                if self._grace[i] > 0:
                    self._grace[i] -= 1
                elif (self.loyalty is not None and self.loyalty.has_history(i)
                      and self.loyalty.theta(i) < threshold):
                    self._excluded[i] = True
                    self._probation[i] = 0

    def _draw_pairs(self) -> list[tuple[int, int]]:
        ov = self.config.overlay
        w = ov["reputation_weight"]
        window = ov.get("reputation_window", 10)
        rep = np.empty(self.n)
        for i in range(self.n):
            hist = self._trailing[i][-window:]
            rep[i] = (sum(hist) / len(hist) / self.bounds[i]) if hist else 0.5
        weight = (1.0 - w) + w * rep
        unmatched = list(range(self.n))
        pairs = []
        while len(unmatched) >= 2:
            i = unmatched.pop(0)
            cand = np.array(unmatched)
            p = weight[cand] / weight[cand].sum()
            j = int(self.rng.choice(cand, p=p))
            unmatched.remove(j)
            pairs.append((i, j))
        return pairs

    def _base_payoffs(self, actions: np.ndarray, idx=None) -> tuple[np.ndarray, float]:
        """Endowment-retention payoff over all agents or a subset."""
        vp = self.config.value_params
        if idx is None:
            acts, ends = actions, self.endowments
        else:
            acts, ends = actions[idx], self.endowments[idx]
        out = np.empty(len(acts))
        g = kernels.base_payoffs(
            np.ascontiguousarray(acts), np.ascontiguousarray(ends),
            vp.theta, vp.beta_power, vp.spec is ValueSpec.LOGARITHMIC,
            self._gamma, out,
        )
        return out, g

    def _compute_payoffs(self, actions: np.ndarray, submitted: np.ndarray,
                         pairs) -> tuple[np.ndarray, float]:
        cfg = self.config
        ov = cfg.overlay

        if pairs is not None:
            pi = self.endowments.copy()  # unmatched agents retain their endowment
            for (i, j) in pairs:
                sub, _ = self._base_payoffs(actions, idx=[i, j])
                pi[i], pi[j] = sub[0], sub[1]
            return pi, 0.0

        if ov.get("gift_exchange"):
            # Production needs both the employer's outlay and worker effort
            # (complementary inputs), so withholding the wage forfeits the
            # output term rather than converting it into retained endowment.
            emp, wrk = ov["employer"], ov["worker"]
            wage, effort = float(actions[emp]), float(actions[wrk])
            vp = cfg.value_params
            g = kernels.geometric_mean(np.ascontiguousarray(actions))
            share = (self._gamma / self.n) * g
            f = (kernels.log_value(g, vp.theta)
                 if vp.spec is ValueSpec.LOGARITHMIC
                 else kernels.power_value(g, vp.beta_power))
            pi = np.empty(self.n)
            pi[emp] = (self.endowments[emp] - wage) + f + share
            pi[wrk] = (self.endowments[wrk] - effort) + wage + share
            return pi, g

        if cfg.tier is Tier.TR3:
            return self._team_payoffs(actions, submitted), 0.0

        pi, g = self._base_payoffs(actions)

        if ov.get("graduated_sanctions"):
            threshold = ov["sanction_threshold"]
            penalty = ov["sanction_step_penalty"]
            cap = ov["sanction_cap"]
            frac = actions / self.bounds
            for i in range(self.n):
                if frac[i] < threshold:
                    self._sanction_levels[i] = min(cap, self._sanction_levels[i] + 1)
                else:
                    self._sanction_levels[i] = max(0, self._sanction_levels[i] - 1)
                pi[i] *= 1.0 - penalty * self._sanction_levels[i]

        if "commissions" in ov:
            rates = ov["commissions"]
            platform = ov["platform_agent"]
            collected = 0.0
            for i in range(self.n):
                if i == platform or rates[i] == 0.0:
                    continue
                cut = rates[i] * pi[i]
                pi[i] -= cut
                collected += cut
            pi[platform] += collected

        if "breach_drop_fraction" in ov and self.t >= 1:
            drop = ov["breach_drop_fraction"] * self.endowments
            for i in range(self.n):
                if self.prev_actions[i] - actions[i] > drop[i]:
                    pi[i] -= ov["breach_cost_fraction"] * self.endowments[i]

        if "recovery_target" in ov and self.trust is not None:
            if self.trust.offdiag_min() >= ov["recovery_target"]:
                pi += ov["recovery_bonus_fraction"] * self.endowments

        return pi, g

    def _team_payoffs(self, actions: np.ndarray, submitted: np.ndarray) -> np.ndarray:
        cfg = self.config
        ov = cfg.overlay
        p3 = cfg.tr3_params

        if ov.get("public_goods"):
            pool = ov["multiplier"] * float(actions.sum()) / self.n
            pi = (self.endowments - actions) + pool
            frac = actions / self.bounds
            pi[frac < ov["sanction_threshold"]] *= ov["sanction_multiplier"]
            return pi

        if self._excluded is not None:
            members = ~self._excluded
            n_active = int(members.sum())
            pi = np.empty(self.n)
            if n_active > 0:
                total = float(actions[members].sum())
                q = 0.0 if total == 0.0 else p3.omega * math.pow(total, p3.beta_scale)
                pi[members] = q / n_active - p3.cost_c * actions[members]
            # probation effort of excluded agents is spent, not pooled
            pi[self._excluded] = (self.endowments[self._excluded]
                                  - p3.cost_c * submitted[self._excluded])
            return pi

        out = np.empty(self.n)
        q = kernels.team_payoffs(np.ascontiguousarray(actions),
                                 p3.omega, p3.beta_scale, p3.cost_c, out)
        if "coordination_threshold" in ov:
            if float(actions.sum()) / float(self.bounds.sum()) >= ov["coordination_threshold"]:
                out += ov["coordination_bonus"] * q / self.n
        return out

    def _compute_modifiers(self, actions, pi, g, raw_recip_signals) -> np.ndarray:
        cfg = self.config
        tier = cfg.tier
        m = np.zeros(self.n)
        if tier is Tier.TR1:
            return m
        if tier is Tier.TR3:
            if not cfg.overlay.get("loyalty_channel"):
                return m
            for i in range(self.n):
                if self._excluded is not None and self._excluded[i]:
                    continue
                m[i] = loyalty_modifier(self.loyalty.theta(i),
                                        teammate_average(pi, i),
                                        float(actions[i]), cfg.tr3_params)
            return m
        # Trust-scaled synergy share: incoming trust above the neutral midpoint
        # boosts the share, below erodes it.
        share = (self._gamma / self.n) * g
        for i in range(self.n):
            m[i] = (self.trust.incoming_mean(i) - 0.5) * share
        if tier is Tier.TR4:
            recip = np.empty(self.n)
            p4 = cfg.tr4_params
            kernels.reciprocity_modifiers(
                self.trust.T, self.D.entries,
                np.ascontiguousarray(raw_recip_signals),
                p4.rho0, p4.eta, p4.kappa_r, p4.lambda_R, p4.omega_amp, recip,
            )
            m += recip
        return m

    # -- observations --------------------------------------------------------

    def observation_length(self) -> int:
        oc = self.obs_config
        cfg = self.config
        length = 1 + (self.n - 1)
        if cfg.tier.has_trust and oc.include_trust:
            length += self.n - 1
        if cfg.tier is Tier.TR3 and oc.include_loyalty:
            length += 1
        if cfg.overlay.get("public_image_in_obs"):
            length += self.n
        if oc.interdependence_visible:
            length += self.n
        if oc.include_step_fraction:
            length += 1
        return length

    def _observe(self, prev_override: Optional[np.ndarray] = None) -> list[np.ndarray]:
        return [self._observe_agent(i, prev_override) for i in range(self.n)]

    def _observe_agent(self, i: int,
                       prev_override: Optional[np.ndarray] = None) -> np.ndarray:
        oc = self.obs_config
        cfg = self.config
        prev = self.prev_actions if prev_override is None else prev_override
        parts = [prev[i] / self.bounds[i]]
        for j in range(self.n):
            if j != i:
                parts.append(prev[j] / self.bounds[j])
        if cfg.tier.has_trust and oc.include_trust:
            for j in range(self.n):
                if j != i:
                    parts.append(self.trust.T[i, j])
        if cfg.tier is Tier.TR3 and oc.include_loyalty:
            parts.append(self.loyalty.theta(i))
        if cfg.overlay.get("public_image_in_obs"):
            parts.extend(self.trust.public_image().tolist())
        if oc.interdependence_visible:
            parts.extend(self.D.entries[i].tolist())
        if oc.include_step_fraction:
            parts.append(self.t / self.horizon)
        return np.asarray(parts, dtype=np.float64)


def make(env_id: str, mode: RewardMode = RewardMode.INTEGRATED,
         obs_config: Optional[ObservationConfig] = None,
         seed: Optional[int] = None, **kwargs) -> CoopetitionEnv:
    """Instantiate a registered environment with its calibrated configuration."""
    if isinstance(mode, str):
        mode = RewardMode(mode)
    return CoopetitionEnv(get_config(env_id), mode, obs_config, seed, **kwargs)
