"""Independently coded reference formulas for the evaluation tests.

Everything here is written straight from the metric definitions with plain
loops, sharing no code with the package, so agreement is meaningful.
"""

from __future__ import annotations

import math


def oracle_articulation_loss(pred_axis, pred_origin, gt_axis, gt_origin,
                             motion_type, lam=1.0) -> float:
    ax = [float(x) for x in pred_axis]
    gx = [float(x) for x in gt_axis]
    norm = math.sqrt(sum(x * x for x in ax))
    unit = [x / norm for x in ax]
    cos = sum(u * g for u, g in zip(unit, gx))
    value = lam * (1.0 - cos)
    if motion_type == "rotation":
        d = [float(p) - float(q) for p, q in zip(pred_origin, gt_origin)]
        cx = (gx[1] * d[2] - gx[2] * d[1],
              gx[2] * d[0] - gx[0] * d[2],
              gx[0] * d[1] - gx[1] * d[0])
        value += lam * math.sqrt(sum(c * c for c in cx))
    return value


def _iou(a, b) -> float:
    sa, sb = set(a), set(b)
    inter = len(sa & sb)
    union = len(sa | sb)
    return inter / union if union else 0.0


def _axis_ok(pred_axis, gt_axis, one_minus_cos_thr, sign_invariant) -> bool:
    norm = math.sqrt(sum(float(x) ** 2 for x in pred_axis))
    cos = sum((float(a) / norm) * float(b)
              for a, b in zip(pred_axis, gt_axis))
    if sign_invariant:
        cos = abs(cos)
    return 1.0 - cos <= one_minus_cos_thr + 1e-12


def _origin_ok(pred_origin, gt, dist_thr) -> bool:
    if gt.motion_type != "rotation":
        return True
    if pred_origin is None:
        return False
    d = [float(p) - float(q) for p, q in zip(pred_origin, gt.origin)]
    g = [float(x) for x in gt.axis]
    cx = (g[1] * d[2] - g[2] * d[1],
          g[2] * d[0] - g[0] * d[2],
          g[0] * d[1] - g[1] * d[0])
    return math.sqrt(sum(c * c for c in cx)) <= dist_thr + 1e-12


def oracle_class_ap(preds, gts, iou_thr, *, check_axis=False,
                    check_origin=False, one_minus_cos_thr=1.0 - math.cos(math.radians(15.0)),
                    dist_thr=0.25, sign_invariant=True) -> float:
    """Interpolated AP for one motion class, straight from the definition."""
    order = sorted(range(len(preds)),
                   key=lambda i: (-preds[i].confidence, i))
    taken = [False] * len(gts)
    flags = []
    for pi in order:
        p = preds[pi]
        best_iou, best_gi = 0.0, None
        for gi, g in enumerate(gts):
            if taken[gi] or g.motion_type != p.motion_type:
                continue
            iou = _iou(p.mask, g.mask)
            if iou >= iou_thr and iou > best_iou:
                best_iou, best_gi = iou, gi
        if best_gi is None:
            flags.append(False)
            continue
        taken[best_gi] = True
        ok = True
        if check_axis and not _axis_ok(p.axis, gts[best_gi].axis,
                                       one_minus_cos_thr, sign_invariant):
            ok = False
        if check_origin and not _origin_ok(p.origin, gts[best_gi], dist_thr):
            ok = False
        flags.append(ok)

    n_gt = len(gts)
    if n_gt == 0:
        return 0.0
    precisions, recalls = [], []
    tp = 0
    for rank, flag in enumerate(flags, start=1):
        if flag:
            tp += 1
        precisions.append(tp / rank)
        recalls.append(tp / n_gt)
    total = 0.0
    for i in range(101):
        r = i / 100.0
        best = 0.0
        for p, rec in zip(precisions, recalls):
            if rec >= r - 1e-12 and p > best:
                best = p
        total += best
    return total / 101.0


def oracle_mean_ap(preds, gts, iou_thr, **gates) -> float:
    """Mean over the motion classes present in the ground truth."""
    classes = sorted({g.motion_type for g in gts})
    values = []
    for cls in classes:
        cls_preds = [p for p in preds if p.motion_type == cls]
        cls_gts = [g for g in gts if g.motion_type == cls]
        values.append(oracle_class_ap(cls_preds, cls_gts, iou_thr, **gates))
    return sum(values) / len(values)


def oracle_band_ap(preds, gts, thresholds, **gates) -> float:
    return sum(oracle_mean_ap(preds, gts, t, **gates)
               for t in thresholds) / len(thresholds)
