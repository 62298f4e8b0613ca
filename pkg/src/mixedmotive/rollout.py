"""Shared episode runner used by the oracle evaluator, the audits, and the CLI."""

from __future__ import annotations

from dataclasses import dataclass
from typing import Optional, Sequence

import numpy as np

from .envs.engine import CoopetitionEnv, StepRecord
from .policies import AgentContext, Policy


@dataclass
class EpisodeResult:
    returns: np.ndarray            # per-agent sum of rewards
    records: list[StepRecord]
    steps: int

    @property
    def mean_return(self) -> float:
        return float(self.returns.mean())


def run_episode(env: CoopetitionEnv, policies: Sequence[Policy],
                episode_seed: Optional[int] = None,
                collect_records: bool = True) -> EpisodeResult:
    """Drive one full episode; the env must be freshly reset (or pass a seed)."""
    if episode_seed is not None:
        env.reset(episode_seed)
    elif env.t != 0:
        env.reset()
    seed = env._seed
    if len(policies) != env.n:
        raise ValueError(f"need {env.n} policies, got {len(policies)}")
    for i, p in enumerate(policies):
        p.bind(seed, i)

    obs = env._observe()
    returns = np.zeros(env.n)
    records: list[StepRecord] = []
    while not env.done:
        actions = np.empty(env.n)
        for i, p in enumerate(policies):
            ctx = AgentContext(
                agent_index=i, bound=float(env.bounds[i]),
                endowment=float(env.endowments[i]), step=env.t,
                prev_actions=env.prev_actions, bounds=env.bounds,
            )
            actions[i] = p.act(obs[i], ctx)
        obs, rewards, _, _, info = env.step(actions)
        returns += rewards
        if collect_records:
            records.append(info["record"])
    return EpisodeResult(returns=returns, records=records, steps=env.t)


def mean_episode_return(env_factory, policies_factory, seeds) -> float:
    """Mean over seeds and agents of the episodic return."""
    totals = []
    for seed in seeds:
        env = env_factory(seed)
        result = run_episode(env, policies_factory(env), episode_seed=seed,
                             collect_records=False)
        totals.append(result.mean_return)
    return float(np.mean(totals))
