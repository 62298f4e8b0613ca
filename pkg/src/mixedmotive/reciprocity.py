"""Memory-bounded reciprocity: windowed baselines, a saturating tanh response,
dependency-scaled sensitivity, and the trust-gated modifier that feeds the
composed utility.
"""

from __future__ import annotations

import math
from collections import deque
from dataclasses import dataclass

import numpy as np


@dataclass(frozen=True)
class TR4Params:
    rho0: float = 1.0
    eta: float = 1.0
    kappa_r: float = 1.0
    k_window: int = 5
    lambda_R: float = 1.0
    omega_amp: float = 0.6

    def __post_init__(self):
        for name in ("rho0", "eta", "kappa_r", "lambda_R", "omega_amp"):
            if getattr(self, name) <= 0:
                raise ValueError(f"{name} must be > 0")
        if not isinstance(self.k_window, int) or self.k_window < 1:
            raise ValueError("k_window must be an integer >= 1")


class ReciprocityMemory:
    """Ring buffers of each agent's recent actions, bounded at the window length."""

    def __init__(self, n: int, k_window: int, default_baseline=None):
        self.buffers = [deque(maxlen=k_window) for _ in range(n)]
        # Baseline reported before any history exists (midpoint of the action range).
        self.default_baseline = (
            list(default_baseline) if default_baseline is not None else [0.0] * n
        )

    def record(self, actions) -> None:
        for i, a in enumerate(actions):
            self.buffers[i].append(float(a))

    def baseline(self, j: int) -> float:
        buf = self.buffers[j]
        if not buf:
            return self.default_baseline[j]
        return sum(buf) / len(buf)

    def baselines(self) -> np.ndarray:
        return np.array([self.baseline(j) for j in range(len(self.buffers))])


def windowed_baseline(history_j, t: int, k: int) -> float:
    """Mean of agent j's actions over steps max(1, t-k) .. t-1 (1-indexed)."""
    if k < 1:
        raise ValueError("window length must be >= 1")
    if t < 2:
        raise ValueError("no history exists before step 2; use the configured default")
    lo = max(1, t - k)
    window = [float(history_j[tau - 1]) for tau in range(lo, t)]
    return sum(window) / len(window)


def reciprocity_signal(a_j_now: float, baseline_j: float) -> float:
    """Raw deviation of the current action from the recent baseline."""
    return a_j_now - baseline_j


def bounded_response(x: float, kappa_r: float) -> float:
    """Odd, saturating response in (-1, 1)."""
    if kappa_r <= 0:
        raise ValueError(f"kappa_r must be > 0, got {kappa_r}")
    return math.tanh(kappa_r * x)


def reciprocity_sensitivity(d_ij: float, p: TR4Params) -> float:
    """Dependency-scaled response strength rho0 * D^eta."""
    if not 0.0 <= d_ij <= 1.0:
        raise ValueError(f"coupling weight must be in [0, 1], got {d_ij}")
    if d_ij == 0.0:
        return 0.0
    return p.rho0 * math.pow(d_ij, p.eta)


def trust_gated_modifier(i: int, trust_row, d_row, signals, p: TR4Params) -> float:
    """Sum over partners of trust x dependency amplification x sensitivity x response."""
    n = len(signals)
    if len(trust_row) != n or len(d_row) != n:
        raise ValueError("trust row, coupling row, and signals must share one length")
    acc = 0.0
    for j in range(n):
        if j == i:
            continue
        dij = float(d_row[j])
        rho = reciprocity_sensitivity(dij, p)
        phi = math.tanh(p.kappa_r * float(signals[j]))
        acc += float(trust_row[j]) * (1.0 + p.omega_amp * dij) * rho * phi
    return p.lambda_R * acc


def complete_utility(pi_base: float, u_interdep: float, u_trust: float,
                     u_recip: float) -> float:
    """Additive composition of the four utility channels."""
    return pi_base + u_interdep + u_trust + u_recip
