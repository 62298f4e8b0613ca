"""Non-learning reference policies: the 101 constant-fraction policies, a
seeded uniform-random policy, and tit-for-tat matching of partner behavior.
"""

from __future__ import annotations

import enum
from dataclasses import dataclass
from typing import Optional

import numpy as np


class PolicyKind(enum.Enum):
    CONSTANT = "constant"
    RANDOM = "random"
    TIT_FOR_TAT = "titfortat"
    ORACLE = "oracle"


@dataclass(frozen=True)
class PolicySpec:
    kind: PolicyKind
    pct: Optional[int] = None
    seed: Optional[int] = None
    oracle: Optional[str] = None

    def __post_init__(self):
        if self.kind is PolicyKind.CONSTANT:
            if self.pct is None or not 0 <= self.pct <= 100:
                raise ValueError("constant policies take an integer percent in 0..100")
        if self.kind is PolicyKind.ORACLE and not self.oracle:
            raise ValueError("oracle policies need an oracle name")

    def label(self) -> str:
        if self.kind is PolicyKind.CONSTANT:
            return f"constant:{self.pct}"
        if self.kind is PolicyKind.RANDOM:
            return "random" if self.seed is None else f"random:{self.seed}"
        if self.kind is PolicyKind.ORACLE:
            return f"oracle:{self.oracle}"
        return "titfortat"


def parse_policy(text: str) -> PolicySpec:
    """Parse CLI forms: constant:NN, random[:seed], titfortat, oracle:Name."""
    head, _, arg = text.strip().partition(":")
    head = head.lower()
    if head == "constant":
        return PolicySpec(PolicyKind.CONSTANT, pct=int(arg))
    if head == "random":
        return PolicySpec(PolicyKind.RANDOM, seed=int(arg) if arg else None)
    if head in ("titfortat", "tft"):
        return PolicySpec(PolicyKind.TIT_FOR_TAT)
    if head == "oracle":
        return PolicySpec(PolicyKind.ORACLE, oracle=arg)
    raise ValueError(f"unknown policy spec {text!r}")


@dataclass
class AgentContext:
    """What a policy may condition on besides the observation vector."""

    agent_index: int
    bound: float
    endowment: float
    step: int
    prev_actions: np.ndarray
    bounds: np.ndarray


class Policy:
    """Stateless protocol: bind() once per episode, then act() per step."""

    def bind(self, episode_seed: int, agent_index: int) -> None:
        pass

    def act(self, observation, ctx: AgentContext) -> float:
        raise NotImplementedError


class ConstantPolicy(Policy):
    def __init__(self, pct: float):
        self.fraction = pct / 100.0

    def act(self, observation, ctx: AgentContext) -> float:
        return self.fraction * ctx.bound


class RandomPolicy(Policy):
    """Uniform on [0, bound] from the policy's own seeded stream."""

    def __init__(self, seed: Optional[int] = None):
        self.seed = seed
        self._rng = np.random.default_rng(seed)

    def bind(self, episode_seed: int, agent_index: int) -> None:
        entropy = self.seed if self.seed is not None else episode_seed
        self._rng = np.random.default_rng(
            np.random.SeedSequence([entropy, agent_index])
        )

    def act(self, observation, ctx: AgentContext) -> float:
        return float(self._rng.uniform(0.0, ctx.bound))


class TitForTatPolicy(Policy):
    """Match the partners' mean previous cooperation fraction, scaled to the
    agent's own range; opens at the midpoint."""

    def act(self, observation, ctx: AgentContext) -> float:
        if ctx.step == 0:
            return ctx.bound / 2.0
        i = ctx.agent_index
        fracs = [ctx.prev_actions[j] / ctx.bounds[j]
                 for j in range(len(ctx.bounds)) if j != i]
        return float(np.mean(fracs)) * ctx.bound


class FixedProfilePolicy(Policy):
    """Replays one agent's slot of a precomputed stationary profile."""

    def __init__(self, profile, agent_index: Optional[int] = None):
        self.profile = np.asarray(profile, dtype=np.float64)
        self._index = agent_index

    def bind(self, episode_seed: int, agent_index: int) -> None:
        if self._index is None:
            self._index = agent_index

    def act(self, observation, ctx: AgentContext) -> float:
        idx = self._index if self._index is not None else ctx.agent_index
        return float(self.profile[idx])


def build_policy(spec: PolicySpec, env_config=None) -> Policy:
    """Instantiate a policy; oracle specs are resolved against the env config."""
    if spec.kind is PolicyKind.CONSTANT:
        return ConstantPolicy(spec.pct)
    if spec.kind is PolicyKind.RANDOM:
        return RandomPolicy(spec.seed)
    if spec.kind is PolicyKind.TIT_FOR_TAT:
        return TitForTatPolicy()
    from .oracles import OracleName, solve_oracle

    if env_config is None:
        raise ValueError("oracle policies require the environment configuration")
    profile = solve_oracle(OracleName(spec.oracle), env_config)
    return FixedProfilePolicy(profile)
