"""Losses, aggregation, instance AP metrics, and report assembly."""

from .aggregate import aggregate_axis_prediction, aggregate_origin_prediction
from .ap import (
    ARTICULATED_MODES,
    MODE_AXIS,
    MODE_ORIGIN,
    MODE_ORIGIN_AXIS,
    EvalConfig,
    articulated_ap,
    average_precision,
    axis_gate,
    count_missing_origins,
    origin_gate,
)
from .connectivity import (
    RELATIONS,
    REL_CHILD,
    REL_NONE,
    REL_PARENT,
    ObjectConnectivity,
    connectivity_accuracy,
    connectivity_from_annotation,
)
from .instances import (
    EvalError,
    GtInstance,
    InstancePrediction,
    check_gt_disjoint,
    load_gt_instances,
    load_predictions,
    save_gt_instances,
    save_predictions,
)
from .losses import (
    CLASSES,
    CLASS_BACKGROUND,
    LossWeights,
    loss_articulation,
    loss_aux,
    loss_cls,
    loss_segmentation,
    total_loss,
)
from .masks import Matching, confidence_order, mask_iou, match_instances
from .report import (
    BreakdownRecord,
    EvalReport,
    breakdown_records,
    breakdown_report,
    evaluate_instances,
    pool_scenes,
)

__all__ = [
    "ARTICULATED_MODES",
    "BreakdownRecord",
    "CLASSES",
    "CLASS_BACKGROUND",
    "EvalConfig",
    "EvalError",
    "EvalReport",
    "GtInstance",
    "InstancePrediction",
    "LossWeights",
    "Matching",
    "MODE_AXIS",
    "MODE_ORIGIN",
    "MODE_ORIGIN_AXIS",
    "ObjectConnectivity",
    "RELATIONS",
    "REL_CHILD",
    "REL_NONE",
    "REL_PARENT",
    "aggregate_axis_prediction",
    "aggregate_origin_prediction",
    "articulated_ap",
    "average_precision",
    "axis_gate",
    "breakdown_records",
    "breakdown_report",
    "check_gt_disjoint",
    "confidence_order",
    "connectivity_accuracy",
    "connectivity_from_annotation",
    "count_missing_origins",
    "evaluate_instances",
    "load_gt_instances",
    "load_predictions",
    "loss_articulation",
    "loss_aux",
    "loss_cls",
    "loss_segmentation",
    "mask_iou",
    "match_instances",
    "origin_gate",
    "pool_scenes",
    "save_gt_instances",
    "save_predictions",
    "total_loss",
]
