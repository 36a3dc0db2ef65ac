"""Dataset statistics and derived per-point annotation fields."""

from __future__ import annotations

import math
from collections import Counter
from dataclasses import dataclass, field

import numpy as np

from ..geometry import GeometryError, TriMesh
from ..geometry.core import _as_points
from .model import MOTION_TRANSLATION, ROLE_INTERACTABLE, ROLE_MOVABLE, SceneAnnotation


def center_shift_field(points) -> np.ndarray:
    """Per-point vector to the centroid of the point set (sums to zero)."""
    pts = _as_points(points)
    if len(pts) == 0:
        raise GeometryError("center shift of an empty point set is undefined")
    return pts.mean(axis=0) - pts


@dataclass(frozen=True)
class SceneStats:
    n_objects: int
    n_parts: int
    n_connection_graphs: int  # objects with at least two parts
    avg_hierarchy_depth: float  # root counts as depth 1
    movable_fraction: float
    interactable_fraction: float
    translation_fraction: float  # among articulated parts
    object_label_counts: dict[str, int] = field(default_factory=dict)
    part_label_counts: dict[str, int] = field(default_factory=dict)
    part_face_log2_histogram: dict[int, int] = field(default_factory=dict)
    total_mesh_faces: int | None = None
    annotated_face_fraction: float | None = None

    def to_dict(self) -> dict:
        out = {
            "n_objects": self.n_objects,
            "n_parts": self.n_parts,
            "n_connection_graphs": self.n_connection_graphs,
            "avg_hierarchy_depth": self.avg_hierarchy_depth,
            "movable_fraction": self.movable_fraction,
            "interactable_fraction": self.interactable_fraction,
            "translation_fraction": self.translation_fraction,
            "object_label_counts": dict(sorted(self.object_label_counts.items())),
            "part_label_counts": dict(sorted(self.part_label_counts.items())),
            "part_face_log2_histogram": {
                str(k): v for k, v in sorted(self.part_face_log2_histogram.items())
            },
        }
        if self.total_mesh_faces is not None:
            out["total_mesh_faces"] = self.total_mesh_faces
            out["annotated_face_fraction"] = self.annotated_face_fraction
        return out


def _object_depth(obj) -> int:
    parts = {p.id: p for p in obj.parts}
    children: dict[str, list[str]] = {pid: [] for pid in parts}
    roots = []
    for p in obj.parts:
        if p.parent_part is None or p.parent_part not in parts:
            roots.append(p.id)
        else:
            children[p.parent_part].append(p.id)
    depth = 0
    stack = [(r, 1) for r in roots]
    seen = set()
    while stack:
        node, d = stack.pop()
        if node in seen:
            continue
        seen.add(node)
        depth = max(depth, d)
        for child in children[node]:
            stack.append((child, d + 1))
    return depth


def scene_stats(scene: SceneAnnotation, mesh: TriMesh | None = None) -> SceneStats:
    """Aggregate counts over one scene.

    Part sizes are histogrammed in base-2 logarithmic bins: a part with n
    faces lands in bin i when 2^i <= n < 2^(i+1). An empty scene yields
    all-zero counts.
    """
    parts = [p for obj in scene.objects for p in obj.parts]
    n_parts = len(parts)
    n_objects = len(scene.objects)

    movable = sum(1 for p in parts if p.role == ROLE_MOVABLE)
    interactable = sum(1 for p in parts if p.role == ROLE_INTERACTABLE)
    articulated = [p for p in parts if p.articulation is not None]
    translations = sum(
        1 for p in articulated if p.articulation.motion_type == MOTION_TRANSLATION
    )

    histogram: Counter[int] = Counter()
    for p in parts:
        n = len(p.face_indices)
        if n > 0:
            histogram[int(math.floor(math.log2(n)))] += 1

    depths = [_object_depth(obj) for obj in scene.objects if obj.parts]
    total_faces = None
    covered = None
    if mesh is not None:
        total_faces = mesh.n_faces
        annotated = {f for p in parts for f in p.face_indices}
        covered = len(annotated) / total_faces if total_faces else 0.0

    return SceneStats(
        n_objects=n_objects,
        n_parts=n_parts,
        n_connection_graphs=sum(1 for obj in scene.objects if len(obj.parts) >= 2),
        avg_hierarchy_depth=float(np.mean(depths)) if depths else 0.0,
        movable_fraction=movable / n_parts if n_parts else 0.0,
        interactable_fraction=interactable / n_parts if n_parts else 0.0,
        translation_fraction=translations / len(articulated) if articulated else 0.0,
        object_label_counts=dict(Counter(obj.label for obj in scene.objects)),
        part_label_counts=dict(Counter(p.label for p in parts)),
        part_face_log2_histogram=dict(histogram),
        total_mesh_faces=total_faces,
        annotated_face_fraction=covered,
    )
