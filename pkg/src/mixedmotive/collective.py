"""Team production with loyalty: concave joint output, equal shares, private
effort cost, a loyalty modifier gated by trailing cooperation, and the
closed-form free-riding equilibrium with an independent numeric oracle.
"""

from __future__ import annotations

import math
from collections import deque
from dataclasses import dataclass

import numpy as np

from ._backend import kernels


@dataclass(frozen=True)
class TR3Params:
    omega: float = 25.0
    beta_scale: float = 0.7
    cost_c: float = 1.0
    phi_B: float = 0.8
    phi_C: float = 0.3
    a_max: float = 50.0
    loyalty_horizon: int = 10

    def __post_init__(self):
        if not 0.0 < self.beta_scale < 1.0:
            raise ValueError(f"beta_scale must be in (0, 1), got {self.beta_scale}")
        for name in ("omega", "cost_c", "phi_B", "phi_C", "a_max"):
            if getattr(self, name) <= 0:
                raise ValueError(f"{name} must be > 0")
        if self.loyalty_horizon < 1:
            raise ValueError("loyalty_horizon must be >= 1")


class ConvergenceError(RuntimeError):
    """Best-response iteration failed to settle; carries the last iterate."""

    def __init__(self, message: str, last: float):
        super().__init__(message)
        self.last = last


class LoyaltyState:
    """Trailing normalized cooperation over a bounded window, per agent.

    theta_i is the mean of a_i / a_max over the available history (at most
    `horizon` entries), hence always in [0, 1]. Empty history reads as 0.
    """

    def __init__(self, n: int, a_max: float, horizon: int):
        self.a_max = a_max
        self.windows = [deque(maxlen=horizon) for _ in range(n)]

    def record(self, actions) -> None:
        for i, a in enumerate(actions):
            self.windows[i].append(float(a) / self.a_max)

    def theta(self, i: int) -> float:
        w = self.windows[i]
        if not w:
            return 0.0
        return sum(w) / len(w)

    def thetas(self) -> np.ndarray:
        return np.array([self.theta(i) for i in range(len(self.windows))])

    def has_history(self, i: int) -> bool:
        return len(self.windows[i]) > 0


def team_production(actions, p: TR3Params) -> float:
    """Joint output omega * (sum of contributions)^beta."""
    arr = np.asarray(actions, dtype=np.float64)
    if arr.min() < 0 or arr.max() > p.a_max:
        raise ValueError(f"contributions must lie in [0, {p.a_max}]")
    total = float(arr.sum())
    if total == 0.0:
        return 0.0
    return p.omega * math.pow(total, p.beta_scale)


def team_payoff(actions, i: int, p: TR3Params) -> float:
    """Equal share of output minus the private effort cost."""
    arr = np.asarray(actions, dtype=np.float64)
    n = arr.shape[0]
    if not 0 <= i < n:
        raise IndexError(f"agent index {i} out of range")
    return team_production(arr, p) / n - p.cost_c * float(arr[i])


def team_payoffs(actions, p: TR3Params) -> np.ndarray:
    """All agents' team payoffs in one pass (kernel-backed)."""
    arr = np.ascontiguousarray(actions, dtype=np.float64)
    out = np.empty(arr.shape[0], dtype=np.float64)
    kernels.team_payoffs(arr, p.omega, p.beta_scale, p.cost_c, out)
    return out


def teammate_average(payoffs, i: int) -> float:
    """Mean payoff of everyone except agent i."""
    arr = np.asarray(payoffs, dtype=np.float64)
    n = arr.shape[0]
    if n < 2:
        raise ValueError("teammate average requires at least 2 agents")
    return float((arr.sum() - arr[i]) / (n - 1))


def loyalty_modifier(theta_i: float, pbar_minus_i: float, a_i: float, p: TR3Params) -> float:
    """Loyalty-gated benefit share plus cost tolerance."""
    return theta_i * (p.phi_B * pbar_minus_i + p.phi_C * p.cost_c * a_i)


def nash_formula(p: TR3Params, n: int) -> float:
    """Closed-form total contribution at the free-riding equilibrium.

    Literal evaluation of (omega*beta / (n*c))^(1/(1-beta)); compare against
    best_response_symmetric times n for the dual-route consistency check.
    """
    if p.beta_scale >= 1.0:
        raise ValueError("closed form requires beta < 1")
    base = p.omega * p.beta_scale / (n * p.cost_c)
    return math.pow(base, 1.0 / (1.0 - p.beta_scale))


def _golden_max(f, lo: float, hi: float, tol: float = 1e-11) -> float:
    """Golden-section maximizer of a unimodal f on [lo, hi]."""
    invphi = (math.sqrt(5.0) - 1.0) / 2.0
    a, b = lo, hi
    c = b - invphi * (b - a)
    d = a + invphi * (b - a)
    fc, fd = f(c), f(d)
    while b - a > tol:
        if fc > fd:
            b, d, fd = d, c, fc
            c = b - invphi * (b - a)
            fc = f(c)
        else:
            a, c, fc = c, d, fd
            d = a + invphi * (b - a)
            fd = f(d)
    return 0.5 * (a + b)


def best_response_symmetric(p: TR3Params, n: int, tol: float = 1e-8,
                            max_iter: int = 10_000) -> float:
    """Symmetric equilibrium contribution found by damped best-response iteration.

    Each round maximizes one deviator's team payoff against the rest of the
    team holding the current symmetric level, then moves part way toward that
    best response. The step weight is 1/n: the inner best response is linear
    in the others' total with slope -(n-1), so a 1/n step cancels the linear
    part and keeps the iteration contractive at any team size.
    """
    if tol <= 0:
        raise ValueError("tol must be > 0")

    def deviator_payoff(x: float, others_total: float) -> float:
        total = x + others_total
        q = 0.0 if total == 0.0 else p.omega * math.pow(total, p.beta_scale)
        return q / n - p.cost_c * x

    weight = 1.0 / n
    a = min(1.0, p.a_max)
    for _ in range(max_iter):
        others = (n - 1) * a
        br = _golden_max(lambda x: deviator_payoff(x, others), 0.0, p.a_max)
        a_next = (1.0 - weight) * a + weight * br
        if abs(a_next - a) < tol:
            return a_next
        a = a_next
    raise ConvergenceError(
        f"best response did not converge within {max_iter} iterations", last=a
    )


def cohesion(team_dependency, theta) -> float:
    """Dependency-weighted mean loyalty."""
    w = np.asarray(team_dependency, dtype=np.float64)
    t = np.asarray(theta, dtype=np.float64)
    if w.size == 0 or w.size != t.size:
        raise ValueError("weights and loyalties must be equal-length and nonempty")
    if w.min() < 0 or w.sum() <= 0:
        raise ValueError("dependency weights must be nonnegative with a positive sum")
    return float((w * t).sum() / w.sum())
