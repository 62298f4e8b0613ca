"""Two-layer trust model: immediate trust with a negativity-biased asymmetric
update, and exponentially smoothed reputation on top of it.

The defaults encode the 3:1 bias (erosion rate 0.30 vs build rate 0.10), so a
unit defection costs three cooperations' worth of trust.
"""

from __future__ import annotations

import math
from dataclasses import dataclass

import numpy as np

from ._backend import kernels


@dataclass(frozen=True)
class TrustParams:
    kappa: float = 1.0
    lambda_plus: float = 0.10
    lambda_minus: float = 0.30
    mu_reputation: float = 0.05

    def __post_init__(self):
        if self.kappa <= 0:
            raise ValueError(f"kappa must be > 0, got {self.kappa}")
        for name in ("lambda_plus", "lambda_minus", "mu_reputation"):
            v = getattr(self, name)
            if not 0.0 < v <= 1.0:
                raise ValueError(f"{name} must be in (0, 1], got {v}")


class TrustState:
    """Immediate trust T and reputation R, both n x n with fixed unit diagonal.

    Owned by a single episode; updates are in place and single-writer.
    """

    def __init__(self, n: int, initial: float = 0.5):
        if not 0.0 <= initial <= 1.0:
            raise ValueError(f"initial trust must be in [0, 1], got {initial}")
        self.n = n
        self.T = np.full((n, n), initial, dtype=np.float64)
        self.R = np.full((n, n), initial, dtype=np.float64)
        np.fill_diagonal(self.T, 1.0)
        np.fill_diagonal(self.R, 1.0)

    def update(self, actions, baselines, params: TrustParams) -> None:
        """Apply one step of signal-driven trust and reputation updates."""
        a = np.ascontiguousarray(actions, dtype=np.float64)
        b = np.ascontiguousarray(baselines, dtype=np.float64)
        kernels.trust_update_matrix(
            self.T, self.R, a, b,
            params.kappa, params.lambda_plus, params.lambda_minus,
            params.mu_reputation,
        )

    def offdiag_min(self) -> float:
        mask = ~np.eye(self.n, dtype=bool)
        return float(self.T[mask].min())

    def incoming_mean(self, i: int) -> float:
        """Mean trust the other agents place in agent i (column i, diagonal excluded)."""
        col = self.T[:, i]
        return float((col.sum() - col[i]) / (self.n - 1))

    def public_image(self) -> np.ndarray:
        """Per-agent column mean of reputation, diagonal excluded."""
        total = self.R.sum(axis=0) - np.diag(self.R)
        return total / (self.n - 1)

    def copy_matrices(self) -> tuple[np.ndarray, np.ndarray]:
        return self.T.copy(), self.R.copy()


def cooperation_signal(a_j: float, baseline_j: float, kappa: float) -> float:
    """Bounded signal in (-1, 1) whose sign matches the deviation from baseline."""
    if kappa <= 0:
        raise ValueError(f"kappa must be > 0, got {kappa}")
    return math.tanh(kappa * (a_j - baseline_j))


def update_trust(t: float, s: float, params: TrustParams) -> float:
    """One asymmetric trust step; positive signals close the gap to 1 at the
    build rate, negative signals shrink trust at the erosion rate."""
    sp = max(0.0, s)
    sn = max(0.0, -s)
    return t + params.lambda_plus * sp * (1.0 - t) - params.lambda_minus * sn * t


def update_reputation(r: float, t: float, mu: float) -> float:
    """Exponential smoothing of reputation toward the current trust level."""
    return (1.0 - mu) * r + mu * t
