"""Value functions, synergy, the three-mode reward layer, and return analytics.

Everything in this module is a pure function of its arguments; episode state
never leaks in. Utilities are plain float64 throughout, with no rescaling or
clipping at this layer.
"""

from __future__ import annotations

import enum
from dataclasses import dataclass, field

import numpy as np

from ._backend import kernels


class ValueSpec(enum.Enum):
    LOGARITHMIC = "logarithmic"
    POWER = "power"


class RewardMode(enum.Enum):
    """How the per-agent reward is assembled from the payoff vector."""

    PRIVATE = "private"
    INTEGRATED = "integrated"
    COOPERATIVE = "cooperative"


@dataclass(frozen=True)
class ValueFunctionParams:
    """Parameters of the individual-value and synergy terms.

    theta scales the logarithmic form, beta_power is the exponent of the
    power form, gamma weighs the geometric-mean synergy bonus.
    """

    spec: ValueSpec = ValueSpec.LOGARITHMIC
    theta: float = 20.0
    beta_power: float = 0.75
    gamma: float = 0.65

    def __post_init__(self):
        if self.theta <= 0:
            raise ValueError(f"theta must be > 0, got {self.theta}")
        if not 0.0 < self.beta_power <= 1.0:
            raise ValueError(f"beta_power must be in (0, 1], got {self.beta_power}")
        if not 0.0 <= self.gamma <= 1.0:
            raise ValueError(f"gamma must be in [0, 1], got {self.gamma}")


@dataclass(frozen=True)
class InterdependenceMatrix:
    """Asymmetric coupling weights: entry (i, j) is the weight agent i places
    on agent j's payoff. Off-diagonal entries live in [0, 1]; the diagonal is
    stored as 1 but excluded from every weighted sum."""

    entries: np.ndarray = field()

    def __post_init__(self):
        m = np.asarray(self.entries, dtype=np.float64)
        if m.ndim != 2 or m.shape[0] != m.shape[1]:
            raise ValueError(f"coupling matrix must be square, got shape {m.shape}")
        off = m[~np.eye(m.shape[0], dtype=bool)]
        if off.size and (off.min() < 0.0 or off.max() > 1.0):
            raise ValueError("off-diagonal coupling weights must lie in [0, 1]")
        m = m.copy()
        np.fill_diagonal(m, 1.0)
        object.__setattr__(self, "entries", m)

    @property
    def n(self) -> int:
        return self.entries.shape[0]

    @classmethod
    def uniform(cls, n: int, weight: float) -> "InterdependenceMatrix":
        m = np.full((n, n), weight, dtype=np.float64)
        np.fill_diagonal(m, 1.0)
        return cls(m)

    @classmethod
    def zeros(cls, n: int) -> "InterdependenceMatrix":
        return cls.uniform(n, 0.0)


def individual_value(a: float, params: ValueFunctionParams) -> float:
    """Strictly increasing, strictly concave value of one agent's contribution."""
    if a < 0:
        raise ValueError(f"contribution must be >= 0, got {a}")
    if params.spec is ValueSpec.LOGARITHMIC:
        return kernels.log_value(float(a), params.theta)
    return kernels.power_value(float(a), params.beta_power)


def synergy(actions) -> float:
    """Geometric mean of the contribution vector; exactly 0 if any entry is 0."""
    arr = np.ascontiguousarray(actions, dtype=np.float64)
    if arr.size == 0:
        raise ValueError("synergy of an empty contribution vector is undefined")
    if arr.min() < 0:
        raise ValueError("contributions must be >= 0")
    return kernels.geometric_mean(arr)


def total_value(actions, params: ValueFunctionParams) -> float:
    """Sum of individual values plus gamma-weighted synergy."""
    arr = np.ascontiguousarray(actions, dtype=np.float64)
    return sum(individual_value(a, params) for a in arr) + params.gamma * synergy(arr)


def integrated_utility(pi, D: InterdependenceMatrix, i: int) -> float:
    """Own payoff plus coupling-weighted partner payoffs (diagonal excluded)."""
    pi = np.asarray(pi, dtype=np.float64)
    n = pi.shape[0]
    if not 0 <= i < n:
        raise IndexError(f"agent index {i} out of range for {n} agents")
    row = D.entries[i]
    return float(pi[i] + sum(row[j] * pi[j] for j in range(n) if j != i))


def reward_vector(pi, modifiers, D: InterdependenceMatrix, mode: RewardMode) -> np.ndarray:
    """Per-agent rewards under the active mode.

    PRIVATE returns the payoff vector unchanged; INTEGRATED adds the coupled
    partner payoffs and the mechanism modifier; COOPERATIVE pays every agent
    the mean payoff.
    """
    pi = np.ascontiguousarray(pi, dtype=np.float64)
    n = pi.shape[0]
    if mode is RewardMode.PRIVATE:
        return pi.copy()
    if mode is RewardMode.COOPERATIVE:
        mean = float(pi.sum() / n)
        return np.full(n, mean, dtype=np.float64)
    m = np.ascontiguousarray(modifiers, dtype=np.float64)
    if m.shape[0] != n:
        raise ValueError("modifier vector length must match payoff vector length")
    out = np.empty(n, dtype=np.float64)
    kernels.integrated_rewards(pi, D.entries, m, out)
    return out


def gap_percent(algo_return: float, oracle_return: float) -> float:
    """Signed percent by which a return beats (+) or trails (-) its reference."""
    if oracle_return == 0:
        raise ValueError("gap percentage is undefined for a zero reference return")
    return (algo_return - oracle_return) / abs(oracle_return) * 100.0


def dij_contribution(r_integrated: float, r_private: float) -> float:
    """Fraction of the integrated return attributable to the coupling terms."""
    if r_integrated == 0:
        raise ValueError("coupling contribution is undefined for a zero integrated return")
    return (r_integrated - r_private) / r_integrated


def calibrate_dij(weights, scores) -> float:
    """Weighted mean of per-dependency-type scores; the calibration aggregator."""
    w = np.asarray(weights, dtype=np.float64)
    d = np.asarray(scores, dtype=np.float64)
    if w.size == 0 or w.size != d.size:
        raise ValueError("weights and scores must be equal-length and nonempty")
    if w.min() < 0 or w.sum() <= 0:
        raise ValueError("weights must be nonnegative with a positive sum")
    return float((w * d).sum() / w.sum())
