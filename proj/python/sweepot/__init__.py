"""Sweep planning for granular material via exact optimal transport."""

from ._core import (
    EpisodeRecord,
    GridGeometry,
    GroundCost,
    HeightMap,
    Method,
    MetricRecord,
    MetricSeries,
    NormalizedDistribution,
    PlanEntry,
    PlannerConfig,
    SimConfig,
    SourceKind,
    SweepAction,
    TaskKind,
    TaskSpec,
    TransportPlan,
    Vec2,
    apply_sweep,
    baseline_diff_map,
    baseline_max_ot,
    default_iou_threshold,
    emd,
    generate_source,
    generate_target_gather,
    generate_target_letter,
    generate_target_sep,
    ground_cost,
    iou,
    load_grid,
    next_best_sweep,
    normalize,
    repose_relax,
    run_episode,
    save_grid,
    solve_ot,
)

__all__ = [
    "EpisodeRecord",
    "GridGeometry",
    "GroundCost",
    "HeightMap",
    "Method",
    "MetricRecord",
    "MetricSeries",
    "NormalizedDistribution",
    "PlanEntry",
    "PlannerConfig",
    "SimConfig",
    "SourceKind",
    "SweepAction",
    "TaskKind",
    "TaskSpec",
    "TransportPlan",
    "Vec2",
    "apply_sweep",
    "baseline_diff_map",
    "baseline_max_ot",
    "default_iou_threshold",
    "emd",
    "generate_source",
    "generate_target_gather",
    "generate_target_letter",
    "generate_target_sep",
    "ground_cost",
    "iou",
    "load_grid",
    "next_best_sweep",
    "normalize",
    "repose_relax",
    "run_episode",
    "save_grid",
    "solve_ot",
]

__version__ = "0.1.0"
