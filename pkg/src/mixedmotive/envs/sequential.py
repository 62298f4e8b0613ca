"""Turn-taking facade over a parallel episode.

Agents act one at a time in fixed index order. Agents later in the cycle see
the earlier agents' current-step actions in their observation's previous-action
slots; once all agents have acted, the joint action is committed through the
wrapped instance's parallel step. After the episode ends each agent must pass
None exactly once, mirroring the usual agent-environment-cycle convention.
"""

from __future__ import annotations

from typing import Iterator, Optional

import numpy as np

from .engine import CoopetitionEnv


class ProtocolError(RuntimeError):
    """An agent acted out of turn or violated the none-action convention."""


class SequentialView:
    def __init__(self, env: CoopetitionEnv):
        self.env = env
        self._pending: dict[int, float] = {}
        self._cursor = 0
        self._last_rewards: Optional[np.ndarray] = None
        self._last_info: Optional[dict] = None
        self._post_done_visits = 0

    @property
    def current_agent(self) -> int:
        return self._cursor

    def reset(self, seed: Optional[int] = None):
        out = self.env.reset(seed)
        self._pending.clear()
        self._cursor = 0
        self._last_rewards = None
        self._post_done_visits = 0
        return out

    def agent_iter(self) -> Iterator[int]:
        """Yield the acting agent until the episode ends, then one closing
        visit per agent (which must answer with a None action)."""
        while not self.env.done:
            yield self._cursor
        while self._post_done_visits < self.env.n:
            yield self._cursor

    def observe(self, agent: int) -> np.ndarray:
        if agent != self._cursor:
            raise ProtocolError(f"agent {agent} observed out of turn (turn: {self._cursor})")
        prev = self.env.prev_actions.copy()
        for j, a in self._pending.items():
            prev[j] = min(max(a, 0.0), self.env.bounds[j])
        return self.env._observe_agent(agent, prev_override=prev)

    def last(self):
        """(observation, reward, terminated, truncated, info) for the acting agent."""
        obs = self.observe(self._cursor)
        r = float(self._last_rewards[self._cursor]) if self._last_rewards is not None else 0.0
        return obs, r, self.env.terminated, self.env.truncated, self._last_info

    def step(self, action: Optional[float]) -> None:
        if self.env.done:
            if action is not None:
                raise ProtocolError("episode is over; terminal agents must pass None")
            self._post_done_visits += 1
            self._cursor = (self._cursor + 1) % self.env.n
            return
        if action is None:
            raise ProtocolError(f"agent {self._cursor} must act; episode is still live")
        self._pending[self._cursor] = float(action)
        if len(self._pending) == self.env.n:
            joint = np.array([self._pending[i] for i in range(self.env.n)])
            _, rewards, _, _, info = self.env.step(joint)
            self._last_rewards = rewards
            self._last_info = info
            self._pending.clear()
            self._cursor = 0
        else:
            self._cursor += 1


def sequential_view(env: CoopetitionEnv) -> SequentialView:
    return SequentialView(env)
