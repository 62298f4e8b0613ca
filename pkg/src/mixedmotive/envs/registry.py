"""The twenty-environment registry with calibrated constants and per-environment
overlays.

Generic dyads use a neutral 0.5 coupling; the four case-study environments and
the structurally asymmetric ones carry their documented weights. Overlay keys
are consumed by the engine; the full set is serializable as one JSON document
per environment so every overlay stays inspectable.
"""

from __future__ import annotations

import json
from pathlib import Path

import numpy as np

from ..collective import TR3Params
from ..payoffs import InterdependenceMatrix, ValueFunctionParams
from ..reciprocity import TR4Params
from ..trust import TrustParams
from .config import EnvConfig, ObservationConfig, Tier

_TRUST = TrustParams()
_TR3 = TR3Params()
_TR4 = TR4Params()

_DEFAULT_COUPLING = 0.5
_TR3_BOUND = _TR3.a_max


def _uniform(n: int, e: float = 100.0) -> tuple[tuple[float, ...], tuple[float, ...]]:
    return (e,) * n, (e,) * n


def _matrix(rows) -> InterdependenceMatrix:
    return InterdependenceMatrix(np.array(rows, dtype=np.float64))


def _build_registry() -> dict[str, EnvConfig]:
    envs: dict[str, EnvConfig] = {}

    def add(cfg: EnvConfig) -> None:
        envs[cfg.env_id] = cfg

    # ---- Static-coupling tier ----------------------------------------------
    e2, b2 = _uniform(2)
    add(EnvConfig(
        env_id="PartnerHoldUp-v0", tier=Tier.TR1, n_agents=2, horizon=100,
        endowments=e2, action_bounds=b2,
        D=_matrix([[1.0, 0.85], [0.30, 1.0]]),
        overlay={"weak_agent": 0, "weak_dependency": 0.85},
    ))
    e5, b5 = _uniform(5)
    platform_rows = np.full((5, 5), 0.10)
    platform_rows[0, 1:] = 0.30          # platform on each developer
    platform_rows[1:, 0] = 0.75          # developers on the platform
    np.fill_diagonal(platform_rows, 1.0)
    add(EnvConfig(
        env_id="PlatformEcosystem-v0", tier=Tier.TR1, n_agents=5, horizon=100,
        endowments=e5, action_bounds=b5, D=InterdependenceMatrix(platform_rows),
        overlay={"platform_agent": 0, "developer_dependency": 0.75},
    ))
    e4, b4 = _uniform(4)
    add(EnvConfig(
        env_id="DynamicPartnerSelection-v0", tier=Tier.TR1, n_agents=4, horizon=100,
        endowments=e4, action_bounds=b4,
        D=InterdependenceMatrix.uniform(4, _DEFAULT_COUPLING),
        overlay={"matching": True, "reputation_weight": 0.5, "reputation_window": 10},
    ))
    add(EnvConfig(
        env_id="SynergySearch-v0", tier=Tier.TR1, n_agents=2, horizon=100,
        endowments=e2, action_bounds=b2,
        D=InterdependenceMatrix.uniform(2, _DEFAULT_COUPLING),
        overlay={"gamma_choices": [0.2, 0.65], "reveal_gamma_in_obs": False},
    ))
    add(EnvConfig(
        env_id="RenaultNissan-v0", tier=Tier.TR1, n_agents=2, horizon=60,
        endowments=e2, action_bounds=b2,
        D=InterdependenceMatrix.uniform(2, _DEFAULT_COUPLING),
        overlay={"case_study": "alliance-dyad"},
    ))

    # ---- Trust tier ---------------------------------------------------------
    add(EnvConfig(
        env_id="TrustDilemma-v0", tier=Tier.TR2, n_agents=2, horizon=100,
        endowments=e2, action_bounds=b2,
        D=InterdependenceMatrix.uniform(2, _DEFAULT_COUPLING), trust_params=_TRUST,
        overlay={"collapse_threshold": 0.01},
    ))
    add(EnvConfig(
        env_id="RecoveryRace-v0", tier=Tier.TR2, n_agents=2, horizon=150,
        endowments=e2, action_bounds=b2,
        D=InterdependenceMatrix.uniform(2, _DEFAULT_COUPLING), trust_params=_TRUST,
        trust_init=0.05,
        overlay={"recovery_target": 0.90, "recovery_bonus_fraction": 0.5},
    ))
    add(EnvConfig(
        env_id="SLCD-v0", tier=Tier.TR2, n_agents=2, horizon=40,
        endowments=e2, action_bounds=b2,
        # Agent 0 = fabrication side, agent 1 = market side of the JV dyad.
        D=_matrix([[1.0, 0.64], [0.86, 1.0]]),
        trust_params=_TRUST,
        overlay={"case_study": "lcd-joint-venture"},
    ))
    add(EnvConfig(
        env_id="CooperativeNegotiation-v0", tier=Tier.TR2, n_agents=2, horizon=100,
        endowments=e2, action_bounds=b2,
        D=InterdependenceMatrix.uniform(2, _DEFAULT_COUPLING), trust_params=_TRUST,
        overlay={"breach_drop_fraction": 0.25, "breach_cost_fraction": 0.1},
    ))
    add(EnvConfig(
        env_id="ReputationMarket-v0", tier=Tier.TR2, n_agents=2, horizon=100,
        endowments=e2, action_bounds=b2,
        D=InterdependenceMatrix.uniform(2, _DEFAULT_COUPLING), trust_params=_TRUST,
        overlay={"public_image_in_obs": True},
    ))

    # ---- Collective-action tier --------------------------------------------
    e4t, b4t = _uniform(4, _TR3_BOUND)
    add(EnvConfig(
        env_id="TeamProduction-v0", tier=Tier.TR3, n_agents=4, horizon=100,
        endowments=e4t, action_bounds=b4t,
        D=InterdependenceMatrix.uniform(4, _DEFAULT_COUPLING),
        trust_params=_TRUST, tr3_params=_TR3,
        overlay={"coordination_threshold": 0.5, "coordination_bonus": 0.1},
    ))
    add(EnvConfig(
        env_id="LoyaltyTeam-v0", tier=Tier.TR3, n_agents=4, horizon=100,
        endowments=e4t, action_bounds=b4t,
        D=InterdependenceMatrix.uniform(4, _DEFAULT_COUPLING),
        trust_params=_TRUST, tr3_params=_TR3,
        overlay={"loyalty_channel": True},
    ))
    e6t, b6t = _uniform(6, _TR3_BOUND)
    add(EnvConfig(
        env_id="CoalitionFormation-v0", tier=Tier.TR3, n_agents=6, horizon=150,
        endowments=e6t, action_bounds=b6t,
        D=InterdependenceMatrix.uniform(6, _DEFAULT_COUPLING),
        trust_params=_TRUST, tr3_params=_TR3,
        overlay={
            "loyalty_channel": True, "exclusion_threshold": 0.2,
            "probation_steps": 3, "probation_fraction": 0.2,
        },
    ))
    e5t, b5t = _uniform(5, _TR3_BOUND)
    add(EnvConfig(
        env_id="ApacheProject-v0", tier=Tier.TR3, n_agents=5, horizon=60,
        endowments=e5t, action_bounds=b5t,
        D=InterdependenceMatrix.uniform(5, _DEFAULT_COUPLING),
        trust_params=_TRUST, tr3_params=_TR3,
        overlay={"loyalty_channel": True, "case_study": "oss-commons", "phase": "mature"},
    ))
    add(EnvConfig(
        env_id="PublicGoods-v0", tier=Tier.TR3, n_agents=4, horizon=100,
        endowments=e4t, action_bounds=b4t,
        D=InterdependenceMatrix.uniform(4, _DEFAULT_COUPLING),
        trust_params=_TRUST, tr3_params=_TR3,
        overlay={
            "public_goods": True, "multiplier": 1.6,
            "sanction_threshold": 0.3, "sanction_multiplier": 0.5,
        },
    ))

    # ---- Reciprocity tier ---------------------------------------------------
    add(EnvConfig(
        env_id="ReciprocalDilemma-v0", tier=Tier.TR4, n_agents=2, horizon=100,
        endowments=e2, action_bounds=b2,
        D=InterdependenceMatrix.uniform(2, _DEFAULT_COUPLING),
        trust_params=_TRUST, tr4_params=_TR4,
        overlay={},
    ))
    add(EnvConfig(
        env_id="GiftExchange-v0", tier=Tier.TR4, n_agents=2, horizon=100,
        endowments=e2, action_bounds=b2,
        D=InterdependenceMatrix.uniform(2, _DEFAULT_COUPLING),
        trust_params=_TRUST, tr4_params=_TR4,
        overlay={"gift_exchange": True, "employer": 0, "worker": 1},
    ))
    e4r, b4r = _uniform(4)
    add(EnvConfig(
        env_id="IndirectReciprocity-v0", tier=Tier.TR4, n_agents=4, horizon=150,
        endowments=e4r, action_bounds=b4r,
        D=InterdependenceMatrix.uniform(4, _DEFAULT_COUPLING),
        trust_params=_TRUST, tr4_params=_TR4,
        overlay={"image_signals": True, "public_image_in_obs": True},
    ))
    e6r, b6r = _uniform(6)
    add(EnvConfig(
        env_id="GraduatedSanction-v0", tier=Tier.TR4, n_agents=6, horizon=200,
        endowments=e6r, action_bounds=b6r,
        D=InterdependenceMatrix.uniform(6, _DEFAULT_COUPLING),
        trust_params=_TRUST, tr4_params=_TR4,
        overlay={
            "graduated_sanctions": True, "sanction_threshold": 0.3,
            "sanction_step_penalty": 0.15, "sanction_cap": 4,
        },
    ))
    e3r, b3r = _uniform(3)
    add(EnvConfig(
        env_id="AppleAppStore-v0", tier=Tier.TR4, n_agents=3, horizon=66,
        endowments=e3r, action_bounds=b3r,
        # Agent 0 = platform, 1 = top-tier developer, 2 = marginal developer.
        D=_matrix([[1.0, 0.30, 0.20], [0.85, 1.0, 0.10], [0.85, 0.10, 1.0]]),
        trust_params=_TRUST, tr4_params=_TR4,
        overlay={
            "case_study": "app-marketplace", "platform_agent": 0,
            "commissions": [0.0, 0.30, 0.15],
        },
    ))

    return envs


REGISTRY: dict[str, EnvConfig] = _build_registry()


def get_config(env_id: str) -> EnvConfig:
    try:
        return REGISTRY[env_id]
    except KeyError:
        known = ", ".join(sorted(REGISTRY))
        raise KeyError(f"unknown environment {env_id!r}; registered: {known}") from None


def env_ids() -> list[str]:
    return sorted(REGISTRY)


def export_configs(directory) -> list[Path]:
    """Write one human-readable JSON document per environment."""
    out = Path(directory)
    out.mkdir(parents=True, exist_ok=True)
    written = []
    for env_id in env_ids():
        path = out / f"{env_id}.json"
        path.write_text(json.dumps(REGISTRY[env_id].to_document(), indent=2) + "\n")
        written.append(path)
    return written
