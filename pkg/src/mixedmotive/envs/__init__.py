from .config import EnvConfig, ObservationConfig, Tier
from .engine import TRACE_SCHEMA_VERSION, CoopetitionEnv, StepRecord, make
from .registry import REGISTRY, env_ids, export_configs, get_config
from .sequential import ProtocolError, SequentialView, sequential_view

__all__ = [
    "EnvConfig", "ObservationConfig", "Tier",
    "CoopetitionEnv", "StepRecord", "make", "TRACE_SCHEMA_VERSION",
    "REGISTRY", "env_ids", "export_configs", "get_config",
    "SequentialView", "sequential_view", "ProtocolError",
]
