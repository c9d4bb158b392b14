"""DiffServ edge-router QoS simulator.

Configs are passed as config-file text or as a preset name; ``settings`` is a
dict of extra ``key=value`` assignments applied on top.
"""

from ._core import (
    ConfigError,
    ContractViolation,
    InfeasiblePlanError,
    IoError,
    adaptive_weights,
    normalize_config,
    plan_buffers,
    preset_config,
    preset_names,
    run,
    run_csv,
    simulate,
    static_weights,
    sweep_k,
    sweep_load,
)

__all__ = [
    "ConfigError",
    "ContractViolation",
    "InfeasiblePlanError",
    "IoError",
    "adaptive_weights",
    "normalize_config",
    "plan_buffers",
    "preset_config",
    "preset_names",
    "run",
    "run_csv",
    "simulate",
    "static_weights",
    "sweep_k",
    "sweep_load",
]
