"""mixedmotive: a deterministic simulation engine for mixed-motive
multi-agent games, with calibrated environments, analytic oracle baselines,
a configurable reward layer, and behavioral audit protocols.
"""

__version__ = "1.0.0"

from ._backend import backend_name
from .audit import f_fin, static_audit, temporal_audit
from .collective import (TR3Params, best_response_symmetric, cohesion,
                         loyalty_modifier, nash_formula, team_payoff,
                         team_production, teammate_average)
from .envs import (CoopetitionEnv, EnvConfig, ObservationConfig, Tier, env_ids,
                   get_config, make, sequential_view)
from .oracles import (OracleName, constant_sweep, reference_oracle,
                      solve_oracle)
from .payoffs import (InterdependenceMatrix, RewardMode, ValueFunctionParams,
                      ValueSpec, calibrate_dij, dij_contribution, gap_percent,
                      individual_value, integrated_utility, reward_vector,
                      synergy, total_value)
from .policies import PolicyKind, PolicySpec, build_policy, parse_policy
from .reciprocity import (TR4Params, bounded_response, complete_utility,
                          reciprocity_sensitivity, reciprocity_signal,
                          trust_gated_modifier, windowed_baseline)
from .rollout import run_episode
from .trust import (TrustParams, TrustState, cooperation_signal,
                    update_reputation, update_trust)

__all__ = [
    "__version__", "backend_name",
    "ValueFunctionParams", "ValueSpec", "InterdependenceMatrix", "RewardMode",
    "individual_value", "synergy", "total_value", "integrated_utility",
    "reward_vector", "gap_percent", "dij_contribution", "calibrate_dij",
    "TrustParams", "TrustState", "cooperation_signal", "update_trust",
    "update_reputation",
    "TR3Params", "team_production", "team_payoff", "teammate_average",
    "loyalty_modifier", "nash_formula", "best_response_symmetric", "cohesion",
    "TR4Params", "windowed_baseline", "reciprocity_signal", "bounded_response",
    "reciprocity_sensitivity", "trust_gated_modifier", "complete_utility",
    "EnvConfig", "ObservationConfig", "Tier", "CoopetitionEnv", "make",
    "env_ids", "get_config", "sequential_view",
    "PolicySpec", "PolicyKind", "parse_policy", "build_policy",
    "OracleName", "reference_oracle", "solve_oracle", "constant_sweep",
    "static_audit", "temporal_audit", "f_fin",
    "run_episode",
]
