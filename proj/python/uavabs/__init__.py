"""mmWave UAV aerial base station simulator."""

from uavabs._core import (
    GeometryError,
    InvalidArgument,
    ValidationError,
    acoustic_level,
    array_factor_abs,
    bundled_scenario_text,
    bundled_scenarios,
    coverage_span,
    evaluate,
    mcs_rate_bps,
    min_standoff,
    noise_floor_dbm,
    path_loss_db,
    pattern_stats,
    reproduce,
    resolve_config,
    run,
    select_mcs,
    slant_distance,
)

__all__ = [
    "GeometryError",
    "InvalidArgument",
    "ValidationError",
    "acoustic_level",
    "array_factor_abs",
    "bundled_scenario_text",
    "bundled_scenarios",
    "coverage_span",
    "evaluate",
    "mcs_rate_bps",
    "min_standoff",
    "noise_floor_dbm",
    "path_loss_db",
    "pattern_stats",
    "reproduce",
    "resolve_config",
    "run",
    "select_mcs",
    "slant_distance",
]
