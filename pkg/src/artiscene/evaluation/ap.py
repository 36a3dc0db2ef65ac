"""Average precision over instance masks, with articulation-gated variants."""

from __future__ import annotations

import math
from dataclasses import dataclass, field

import numpy as np

from ..annotation.model import MOTION_ROTATION
from .instances import EvalError, GtInstance, InstancePrediction
from .masks import confidence_order, match_instances

MODE_ORIGIN = "+Origin"
MODE_AXIS = "+Axis"
MODE_ORIGIN_AXIS = "+Origin+Axis"
ARTICULATED_MODES = (MODE_ORIGIN, MODE_AXIS, MODE_ORIGIN_AXIS)

_DEFAULT_IOU_BAND = tuple(round(0.50 + 0.05 * i, 2) for i in range(10))

# precision is interpolated at this many evenly spaced recall levels
N_RECALL_POINTS = 101


@dataclass(frozen=True)
class EvalConfig:
    """Metric thresholds.

    ``axis_cos_threshold`` bounds 1 - cos(angle) between predicted and true
    axis; ``origin_dist_threshold`` bounds the distance from the predicted
    origin to the true axis line, in meters. ``axis_sign_invariant`` treats
    an axis and its negation as the same line (the default for metrics).
    """

    iou_thresholds: tuple[float, ...] = _DEFAULT_IOU_BAND
    axis_cos_threshold: float = 1.0 - math.cos(math.radians(15.0))
    origin_dist_threshold: float = 0.25
    axis_sign_invariant: bool = True

    def __post_init__(self):
        ts = tuple(float(t) for t in self.iou_thresholds)
        if not ts or any(not 0.0 < t <= 1.0 for t in ts):
            raise EvalError("iou_thresholds must be non-empty values in (0, 1]")
        object.__setattr__(self, "iou_thresholds", ts)
        if not 0.0 < float(self.axis_cos_threshold) <= 1.0:
            raise EvalError("axis_cos_threshold must lie in (0, 1]")
        if float(self.origin_dist_threshold) <= 0.0:
            raise EvalError("origin_dist_threshold must be positive")


def axis_gate(pred: InstancePrediction, gt: GtInstance, config: EvalConfig) -> bool:
    a = np.asarray(pred.axis, float)
    cos = float(np.dot(a / np.linalg.norm(a), np.asarray(gt.axis, float)))
    if config.axis_sign_invariant:
        cos = abs(cos)
    return 1.0 - cos <= config.axis_cos_threshold + 1e-12


def origin_gate(pred: InstancePrediction, gt: GtInstance,
                config: EvalConfig) -> tuple[bool, bool]:
    """(passes, used_missing_origin). Translation GT has no origin to check."""
    if gt.motion_type != MOTION_ROTATION:
        return True, False
    if pred.origin is None:
        return False, True
    d = np.asarray(pred.origin, float) - np.asarray(gt.origin, float)
    dist = float(np.linalg.norm(np.cross(np.asarray(gt.axis, float), d)))
    return dist <= config.origin_dist_threshold + 1e-12, False


@dataclass
class _ClassCurve:
    """True/false flags in confidence order for one class at one threshold."""

    flags: list[bool] = field(default_factory=list)
    n_gt: int = 0
    n_missing_origin: int = 0


def _class_curve(preds, gts, iou_threshold: float, *, check_axis: bool,
                 check_origin: bool, config: EvalConfig) -> _ClassCurve:
    """Match by mask only, then demote matched pairs that fail the motion
    gates. The GT stays consumed either way, mirroring how a wrong-motion
    prediction still occupies the part it found."""
    matching = match_instances(preds, gts, iou_threshold)
    verdict = {pi: gi for pi, gi in matching.pairs}
    curve = _ClassCurve(n_gt=len(gts))
    for pi in confidence_order(preds):
        gi = verdict.get(pi)
        ok = gi is not None
        if ok and check_axis:
            ok = axis_gate(preds[pi], gts[gi], config)
        if ok and check_origin:
            ok, missing = origin_gate(preds[pi], gts[gi], config)
            curve.n_missing_origin += int(missing)
        curve.flags.append(ok)
    return curve


def _interpolated_ap(curve: _ClassCurve) -> float:
    if curve.n_gt == 0:
        raise EvalError("cannot compute AP with no ground truth")
    tp = np.cumsum(np.asarray(curve.flags, dtype=np.float64))
    ranks = np.arange(1, len(curve.flags) + 1, dtype=np.float64)
    precision = tp / ranks
    recall = tp / curve.n_gt
    levels = np.linspace(0.0, 1.0, N_RECALL_POINTS)
    total = 0.0
    for r in levels:
        at_least = precision[recall >= r - 1e-12]
        total += float(at_least.max()) if at_least.size else 0.0
    return total / N_RECALL_POINTS


def _split_by_class(preds, gts):
    classes = sorted({gt.motion_type for gt in gts})
    if not classes:
        raise EvalError("nothing to evaluate: no ground-truth instances")
    for cls in classes:
        yield (cls,
               [p for p in preds if p.motion_type == cls],
               [g for g in gts if g.motion_type == cls])


def _mean_ap(preds, gts, iou_threshold: float, config: EvalConfig, *,
             check_axis: bool = False, check_origin: bool = False) -> float:
    values = []
    for _, ps, gs in _split_by_class(preds, gts):
        curve = _class_curve(ps, gs, iou_threshold, check_axis=check_axis,
                             check_origin=check_origin, config=config)
        values.append(_interpolated_ap(curve))
    return float(np.mean(values))


def average_precision(preds, gts,
                      config: EvalConfig = EvalConfig()) -> tuple[float, float, float]:
    """(AP averaged over the IoU band, AP at 0.50, AP at 0.25).

    Each value is the mean over the motion-type classes present in the
    ground truth; predictions of absent classes are ignored.
    """
    band = [_mean_ap(preds, gts, t, config) for t in config.iou_thresholds]
    ap = float(np.mean(band))
    ap50 = _mean_ap(preds, gts, 0.50, config)
    ap25 = _mean_ap(preds, gts, 0.25, config)
    return ap, ap50, ap25


def articulated_ap(preds, gts, mode: str,
                   config: EvalConfig = EvalConfig()) -> float:
    """AP at IoU 0.50 with motion-parameter gates on matched pairs.

    ``mode`` selects the gates: +Axis bounds the angle between axes,
    +Origin bounds the predicted origin's distance to the true axis line
    (rotation GT only), +Origin+Axis requires both. A matched prediction
    that fails a gate counts as a false positive and still consumes its GT.
    """
    if mode not in ARTICULATED_MODES:
        raise EvalError(f"mode must be one of {ARTICULATED_MODES}, got {mode!r}")
    return _mean_ap(preds, gts, 0.50, config,
                    check_axis="Axis" in mode, check_origin="Origin" in mode)


def count_missing_origins(preds, gts, config: EvalConfig = EvalConfig()) -> int:
    """Matched rotation predictions lacking an origin at IoU 0.50."""
    total = 0
    for _, ps, gs in _split_by_class(preds, gts):
        curve = _class_curve(ps, gs, 0.50, check_axis=False, check_origin=True,
                             config=config)
        total += curve.n_missing_origin
    return total
