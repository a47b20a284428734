"""Hair orientation fields, combing paths and end-effector trajectories."""

from ._hairflow import (
    HairflowError,
    TemporalMaskFilter,
    compare_planners_csv,
    orientation_field,
    plan,
    plan_mesh,
    read_orf,
    refine,
    shock_filter,
    synth,
    trajectory,
)

__all__ = [
    "HairflowError",
    "TemporalMaskFilter",
    "compare_planners_csv",
    "orientation_field",
    "plan",
    "plan_mesh",
    "read_orf",
    "refine",
    "shock_filter",
    "synth",
    "trajectory",
]
