"""Assembled metric reports: headline APs, per-class values, breakdowns."""

from __future__ import annotations

import dataclasses
from dataclasses import dataclass

import numpy as np

from .ap import (
    MODE_AXIS,
    MODE_ORIGIN,
    MODE_ORIGIN_AXIS,
    EvalConfig,
    _class_curve,
    _interpolated_ap,
    _split_by_class,
    articulated_ap,
    average_precision,
    axis_gate,
    count_missing_origins,
    origin_gate,
)
from .instances import EvalError
from .masks import match_instances

UNLABELED = "(unlabeled)"


@dataclass(frozen=True)
class BreakdownRecord:
    """Per-GT-instance outcome at the IoU 0.50 operating point."""

    size: int
    label: str
    segmented: bool
    with_origin: bool
    with_axis: bool


def breakdown_records(preds, gts, config: EvalConfig = EvalConfig()
                      ) -> tuple[BreakdownRecord, ...]:
    """One record per GT instance: found at IoU 0.50, and with the motion
    gates layered on top of a successful match."""
    records = []
    for _, ps, gs in _split_by_class(preds, gts):
        matching = match_instances(ps, gs, 0.50)
        matched = {gi: pi for pi, gi in matching.pairs}
        for gi, gt in enumerate(gs):
            pi = matched.get(gi)
            seg = pi is not None
            ax = seg and axis_gate(ps[pi], gt, config)
            og = seg and origin_gate(ps[pi], gt, config)[0]
            records.append(BreakdownRecord(
                size=len(gt.mask),
                label=gt.label if gt.label is not None else UNLABELED,
                segmented=seg, with_origin=og, with_axis=ax,
            ))
    return tuple(records)


def _fractions(records) -> dict:
    n = len(records)
    return {
        "count": n,
        "segmentation": sum(r.segmented for r in records) / n,
        "with_origin": sum(r.with_origin for r in records) / n,
        "with_axis": sum(r.with_axis for r in records) / n,
    }


def breakdown_report(records, n_buckets: int = 3) -> dict:
    """Fractions of correct recognitions by part size and by label.

    Size buckets split at empirical quantiles of the supplied point counts
    (terciles by default); every record lands in exactly one bucket.
    """
    records = list(records)
    if not records:
        raise EvalError("no records to break down")
    if n_buckets < 1:
        raise EvalError("n_buckets must be at least 1")
    sizes = np.array([r.size for r in records], dtype=np.float64)
    cuts = np.quantile(sizes, [i / n_buckets for i in range(1, n_buckets)])
    which = np.searchsorted(cuts, sizes, side="left")
    edges = [float(sizes.min())] + [float(c) for c in cuts] + [float(sizes.max())]
    by_size = []
    for b in range(n_buckets):
        members = [r for r, w in zip(records, which) if w == b]
        row = {"min_points": edges[b], "max_points": edges[b + 1]}
        if members:
            row.update(_fractions(members))
        else:
            row.update({"count": 0, "segmentation": None,
                        "with_origin": None, "with_axis": None})
        by_size.append(row)
    by_label = {}
    for label in sorted({r.label for r in records}):
        by_label[label] = _fractions([r for r in records if r.label == label])
    return {"by_size": by_size, "by_label": by_label}


@dataclass(frozen=True)
class EvalReport:
    ap: float
    ap50: float
    ap25: float
    ap50_origin: float
    ap50_axis: float
    ap50_origin_axis: float
    per_class: dict
    breakdown: dict
    n_predictions: int
    n_gt: int
    missing_origin_predictions: int

    def to_dict(self) -> dict:
        return dataclasses.asdict(self)


def evaluate_instances(preds, gts, config: EvalConfig = EvalConfig()) -> EvalReport:
    """Full metric sweep for one pooled set of instances."""
    preds = list(preds)
    gts = list(gts)
    ap, ap50, ap25 = average_precision(preds, gts, config)
    per_class = {}
    for cls, ps, gs in _split_by_class(preds, gts):
        band = []
        for t in config.iou_thresholds:
            band.append(_interpolated_ap(
                _class_curve(ps, gs, t, check_axis=False, check_origin=False,
                             config=config)))
        per_class[cls] = {
            "ap": float(np.mean(band)),
            "ap50": _interpolated_ap(_class_curve(
                ps, gs, 0.50, check_axis=False, check_origin=False, config=config)),
            "ap25": _interpolated_ap(_class_curve(
                ps, gs, 0.25, check_axis=False, check_origin=False, config=config)),
            "n_gt": len(gs),
        }
    return EvalReport(
        ap=ap, ap50=ap50, ap25=ap25,
        ap50_origin=articulated_ap(preds, gts, MODE_ORIGIN, config),
        ap50_axis=articulated_ap(preds, gts, MODE_AXIS, config),
        ap50_origin_axis=articulated_ap(preds, gts, MODE_ORIGIN_AXIS, config),
        per_class=per_class,
        breakdown=breakdown_report(breakdown_records(preds, gts, config)),
        n_predictions=len(preds),
        n_gt=len(gts),
        missing_origin_predictions=count_missing_origins(preds, gts, config),
    )


def pool_scenes(scene_pairs) -> tuple[list, list]:
    """Concatenate per-scene (preds, gts) with disjoint point-index spaces
    so pooled masks never collide across scenes."""
    all_preds: list = []
    all_gts: list = []
    offset = 0
    for preds, gts in scene_pairs:
        top = -1
        for inst in list(preds) + list(gts):
            top = max(top, inst.mask[-1])
        for p in preds:
            all_preds.append(dataclasses.replace(
                p, mask=tuple(i + offset for i in p.mask)))
        for g in gts:
            all_gts.append(dataclasses.replace(
                g, mask=tuple(i + offset for i in g.mask)))
        offset += top + 1
    return all_preds, all_gts
