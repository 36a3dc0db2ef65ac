"""Instance records for metric computation, plus their JSON file formats.

Masks are sorted point-index sets against a fixed evaluation resolution; a
prediction adds a confidence, ground truth may add a text label used only
for breakdown tables.
"""

from __future__ import annotations

import json
from dataclasses import dataclass

import numpy as np

from ..annotation.model import MOTION_ROTATION, MOTION_TRANSLATION

MOTION_TYPES = (MOTION_ROTATION, MOTION_TRANSLATION)

# axis vectors in prediction files are accepted as unit within this tolerance
AXIS_UNIT_TOL = 1e-6


class EvalError(ValueError):
    pass


def _check_mask(mask) -> tuple[int, ...]:
    out = []
    for v in mask:
        if isinstance(v, bool) or not isinstance(v, (int, np.integer)):
            raise EvalError(f"mask entries must be integers, got {v!r}")
        out.append(int(v))
    if not out:
        raise EvalError("mask must be non-empty")
    if any(b <= a for a, b in zip(out, out[1:])):
        raise EvalError("mask must be strictly increasing")
    if out[0] < 0:
        raise EvalError("mask indices must be non-negative")
    return tuple(out)


def _check_axis(axis) -> tuple[float, float, float]:
    a = np.asarray(axis, dtype=np.float64).reshape(-1)
    if a.shape != (3,) or not np.all(np.isfinite(a)):
        raise EvalError(f"axis must be 3 finite components, got {axis!r}")
    n = float(np.linalg.norm(a))
    if abs(n - 1.0) > AXIS_UNIT_TOL:
        raise EvalError(f"axis must be unit length within {AXIS_UNIT_TOL}, norm {n}")
    return (float(a[0]), float(a[1]), float(a[2]))


def _check_origin(origin, motion_type: str):
    if origin is None:
        return None
    if motion_type == MOTION_TRANSLATION:
        raise EvalError("translation instances must not carry an origin")
    o = np.asarray(origin, dtype=np.float64).reshape(-1)
    if o.shape != (3,) or not np.all(np.isfinite(o)):
        raise EvalError(f"origin must be 3 finite components, got {origin!r}")
    return (float(o[0]), float(o[1]), float(o[2]))


@dataclass(frozen=True)
class InstancePrediction:
    """One predicted movable part: mask, confidence, and motion parameters."""

    mask: tuple[int, ...]
    confidence: float
    motion_type: str
    axis: tuple[float, float, float]
    origin: tuple[float, float, float] | None = None

    def __post_init__(self):
        object.__setattr__(self, "mask", _check_mask(self.mask))
        c = float(self.confidence)
        if not 0.0 <= c <= 1.0:
            raise EvalError(f"confidence must lie in [0, 1], got {c}")
        object.__setattr__(self, "confidence", c)
        if self.motion_type not in MOTION_TYPES:
            raise EvalError(f"motion_type must be one of {MOTION_TYPES}")
        object.__setattr__(self, "axis", _check_axis(self.axis))
        object.__setattr__(self, "origin", _check_origin(self.origin, self.motion_type))


@dataclass(frozen=True)
class GtInstance:
    """Ground-truth movable part. ``label`` feeds the per-label breakdown."""

    mask: tuple[int, ...]
    motion_type: str
    axis: tuple[float, float, float]
    origin: tuple[float, float, float] | None = None
    label: str | None = None

    def __post_init__(self):
        object.__setattr__(self, "mask", _check_mask(self.mask))
        if self.motion_type not in MOTION_TYPES:
            raise EvalError(f"motion_type must be one of {MOTION_TYPES}")
        object.__setattr__(self, "axis", _check_axis(self.axis))
        object.__setattr__(self, "origin", _check_origin(self.origin, self.motion_type))
        if self.label is not None and not isinstance(self.label, str):
            raise EvalError("label must be a string")


def check_gt_disjoint(gts) -> None:
    """GT masks within one scene must be pairwise disjoint."""
    seen: dict[int, int] = {}
    for i, gt in enumerate(gts):
        for idx in gt.mask:
            if idx in seen:
                raise EvalError(
                    f"gt instances {seen[idx]} and {i} overlap at point {idx}"
                )
            seen[idx] = i


def _load_doc(data: bytes | str, kind: str) -> dict:
    if isinstance(data, bytes):
        data = data.decode("utf-8")
    try:
        doc = json.loads(data)
    except json.JSONDecodeError as exc:
        raise EvalError(f"{kind} file is not valid JSON: {exc}") from None
    if not isinstance(doc, dict) or set(doc) != {"scene_id", "instances"}:
        raise EvalError(f"{kind} file must be {{scene_id, instances}}")
    if not isinstance(doc["scene_id"], str) or not isinstance(doc["instances"], list):
        raise EvalError(f"{kind} file has malformed scene_id or instances")
    return doc


def _pop_keys(row: dict, required: set[str], optional: set[str], where: str) -> None:
    if not isinstance(row, dict):
        raise EvalError(f"{where}: instance must be an object")
    missing = required - set(row)
    unknown = set(row) - required - optional
    if missing:
        raise EvalError(f"{where}: missing keys {sorted(missing)}")
    if unknown:
        raise EvalError(f"{where}: unknown keys {sorted(unknown)}")


def load_predictions(data: bytes | str) -> tuple[str, tuple[InstancePrediction, ...]]:
    doc = _load_doc(data, "prediction")
    out = []
    for i, row in enumerate(doc["instances"]):
        where = f"instances[{i}]"
        _pop_keys(row, {"mask", "confidence", "motion_type", "axis"}, {"origin"}, where)
        try:
            out.append(InstancePrediction(
                mask=row["mask"], confidence=row["confidence"],
                motion_type=row["motion_type"], axis=row["axis"],
                origin=row.get("origin"),
            ))
        except EvalError as exc:
            raise EvalError(f"{where}: {exc}") from None
    return doc["scene_id"], tuple(out)


def load_gt_instances(data: bytes | str) -> tuple[str, tuple[GtInstance, ...]]:
    doc = _load_doc(data, "ground-truth")
    out = []
    for i, row in enumerate(doc["instances"]):
        where = f"instances[{i}]"
        _pop_keys(row, {"mask", "motion_type", "axis"}, {"origin", "label"}, where)
        try:
            out.append(GtInstance(
                mask=row["mask"], motion_type=row["motion_type"], axis=row["axis"],
                origin=row.get("origin"), label=row.get("label"),
            ))
        except EvalError as exc:
            raise EvalError(f"{where}: {exc}") from None
    gts = tuple(out)
    check_gt_disjoint(gts)
    return doc["scene_id"], gts


def save_predictions(scene_id: str, preds) -> str:
    rows = []
    for p in preds:
        row = {"mask": list(p.mask), "confidence": p.confidence,
               "motion_type": p.motion_type, "axis": list(p.axis)}
        if p.origin is not None:
            row["origin"] = list(p.origin)
        rows.append(row)
    return json.dumps({"scene_id": scene_id, "instances": rows},
                      indent=2, sort_keys=True) + "\n"


def save_gt_instances(scene_id: str, gts) -> str:
    rows = []
    for g in gts:
        row = {"mask": list(g.mask), "motion_type": g.motion_type, "axis": list(g.axis)}
        if g.origin is not None:
            row["origin"] = list(g.origin)
        if g.label is not None:
            row["label"] = g.label
        rows.append(row)
    return json.dumps({"scene_id": scene_id, "instances": rows},
                      indent=2, sort_keys=True) + "\n"
