"""Environment configuration types."""

from __future__ import annotations

import enum
from dataclasses import dataclass, field
from typing import Any, Optional

from ..collective import TR3Params
from ..payoffs import InterdependenceMatrix, ValueFunctionParams
from ..reciprocity import TR4Params
from ..trust import TrustParams


class Tier(enum.Enum):
    TR1 = "TR1"
    TR2 = "TR2"
    TR3 = "TR3"
    TR4 = "TR4"

    @property
    def has_trust(self) -> bool:
        """Trust machinery runs in every tier above the static one."""
        return self is not Tier.TR1


@dataclass(frozen=True)
class ObservationConfig:
    """Which state channels each agent observes. The observation layout is a
    fixed ordering, so its length is fully determined by these flags and n."""

    interdependence_visible: bool = True
    include_trust: bool = True
    include_loyalty: bool = True
    include_step_fraction: bool = True


@dataclass(frozen=True)
class EnvConfig:
    env_id: str
    tier: Tier
    n_agents: int
    horizon: int
    endowments: tuple[float, ...]
    action_bounds: tuple[float, ...]
    D: InterdependenceMatrix
    value_params: ValueFunctionParams = ValueFunctionParams()
    trust_params: Optional[TrustParams] = None
    tr3_params: Optional[TR3Params] = None
    tr4_params: Optional[TR4Params] = None
    trust_init: float = 0.5
    overlay: dict[str, Any] = field(default_factory=dict)
    observation: ObservationConfig = ObservationConfig()

    def __post_init__(self):
        if len(self.endowments) != self.n_agents or len(self.action_bounds) != self.n_agents:
            raise ValueError("endowments and action bounds must have one entry per agent")
        if self.D.n != self.n_agents:
            raise ValueError("coupling matrix size must match the agent count")
        if self.tier.has_trust and self.trust_params is None:
            raise ValueError(f"{self.tier.value} environments require trust parameters")
        if self.tier is Tier.TR3 and self.tr3_params is None:
            raise ValueError("TR3 environments require team-production parameters")
        if self.tier is Tier.TR4 and self.tr4_params is None:
            raise ValueError("TR4 environments require reciprocity parameters")

    def to_document(self) -> dict[str, Any]:
        """Human-readable single-environment config document."""
        doc: dict[str, Any] = {
            "env_id": self.env_id,
            "tier": self.tier.value,
            "n_agents": self.n_agents,
            "horizon": self.horizon,
            "endowments": list(self.endowments),
            "action_bounds": list(self.action_bounds),
            "coupling_matrix": self.D.entries.tolist(),
            "value_params": {
                "spec": self.value_params.spec.value,
                "theta": self.value_params.theta,
                "beta_power": self.value_params.beta_power,
                "gamma": self.value_params.gamma,
            },
            "trust_init": self.trust_init,
            "overlay": dict(self.overlay),
        }
        if self.trust_params is not None:
            doc["trust_params"] = {
                "kappa": self.trust_params.kappa,
                "lambda_plus": self.trust_params.lambda_plus,
                "lambda_minus": self.trust_params.lambda_minus,
                "mu_reputation": self.trust_params.mu_reputation,
            }
        if self.tr3_params is not None:
            p = self.tr3_params
            doc["team_params"] = {
                "omega": p.omega, "beta_scale": p.beta_scale, "cost_c": p.cost_c,
                "phi_B": p.phi_B, "phi_C": p.phi_C, "a_max": p.a_max,
                "loyalty_horizon": p.loyalty_horizon,
            }
        if self.tr4_params is not None:
            p = self.tr4_params
            doc["reciprocity_params"] = {
                "rho0": p.rho0, "eta": p.eta, "kappa_r": p.kappa_r,
                "k_window": p.k_window, "lambda_R": p.lambda_R,
                "omega_amp": p.omega_amp,
            }
        return doc
