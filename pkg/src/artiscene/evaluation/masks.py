"""Mask overlap and the greedy instance-matching rule shared by all metrics."""

from __future__ import annotations

from dataclasses import dataclass

from .instances import EvalError


def mask_iou(a, b) -> float:
    """Intersection over union of two index sets. Both empty is an error:
    the ratio is undefined and silently returning 0 or 1 would skew AP."""
    sa, sb = set(a), set(b)
    union = sa | sb
    if not union:
        raise EvalError("IoU of two empty masks is undefined")
    return len(sa & sb) / len(union)


@dataclass(frozen=True)
class Matching:
    """Outcome of greedy matching at one IoU threshold.

    ``pairs`` holds (pred_index, gt_index) in match order; indices absent
    from the pairs are false positives (predictions) or false negatives
    (ground truth).
    """

    pairs: tuple[tuple[int, int], ...]
    unmatched_preds: tuple[int, ...]
    unmatched_gts: tuple[int, ...]


def confidence_order(preds) -> list[int]:
    """Descending confidence; ties broken by lower prediction index."""
    return sorted(range(len(preds)), key=lambda i: (-preds[i].confidence, i))


def match_instances(preds, gts, iou_threshold: float) -> Matching:
    """Greedily match predictions to ground truth of the same motion type.

    Predictions claim, in descending confidence order, the still-unmatched
    GT with the highest IoU at or above the threshold (GT index breaks
    ties). A claimed GT stays claimed.
    """
    if not 0.0 < iou_threshold <= 1.0:
        raise EvalError(f"iou_threshold must lie in (0, 1], got {iou_threshold}")
    taken = [False] * len(gts)
    pairs = []
    for pi in confidence_order(preds):
        pred = preds[pi]
        best_gt, best_iou = -1, 0.0
        for gi, gt in enumerate(gts):
            if taken[gi] or gt.motion_type != pred.motion_type:
                continue
            iou = mask_iou(pred.mask, gt.mask)
            if iou >= iou_threshold and iou > best_iou:
                best_gt, best_iou = gi, iou
        if best_gt >= 0:
            taken[best_gt] = True
            pairs.append((pi, best_gt))
    matched_preds = {pi for pi, _ in pairs}
    return Matching(
        pairs=tuple(pairs),
        unmatched_preds=tuple(i for i in range(len(preds)) if i not in matched_preds),
        unmatched_gts=tuple(i for i in range(len(gts)) if not taken[i]),
    )
