"""Heuristics that propose articulation parameters, fixtures and masses.

These are deliberately simple geometric rules meant to seed an annotation
session, not to replace it:

* hinges swing about a vertical axis placed on the part-box edge nearest the
  base of the object,
* slide directions copy the dominant near-horizontal ("front") face normal,
* fixtures snap eligible items to nearby structural surfaces,
* masses scale a per-class prior linearly with bounding-box volume.
"""

from __future__ import annotations

import math
from dataclasses import dataclass

import numpy as np
from scipy.spatial import cKDTree

from ..geometry import Aabb, GeometryError, TriMesh, compute_aabb, face_areas, face_normals
from .model import AnnotationError, Fixture, MassTable, SceneAnnotation

# structural surfaces a fixture may anchor to, in addition to eligible items
STRUCTURAL_ANCHOR_LABELS = frozenset({"wall", "ceiling", "floor"})

DEFAULT_FIXTURE_LABELS = ("ceiling light", "door frame", "window frame", "radiator")

HINGE_AXIS = (0.0, 0.0, 1.0)
SLIDE_CLUSTER_ANGLE_DEG = 10.0
SLIDE_HORIZONTAL_ANGLE_DEG = 30.0
FIXTURE_GAP_THRESHOLD = 0.05
FIXTURE_MAX_VERTICES = 2000


class SuggestionError(ValueError):
    pass


@dataclass(frozen=True)
class HingeSuggestion:
    axis: tuple[float, float, float]
    origin: tuple[float, float, float]
    low_confidence: bool


def suggest_hinge_axis(part_mesh: TriMesh, base_mesh: TriMesh) -> HingeSuggestion:
    """Vertical hinge on the part-box corner nearest the base centroid.

    Of the four vertical edges of the part's bounding box, the one whose
    (x, y) corner lies closest to the base box centroid is taken as the hinge
    line; ties prefer lower x, then lower y. The origin is the midpoint of
    that edge. The suggestion is flagged low-confidence when the part box is
    wider than tall, where a vertical hinge is usually wrong.
    """
    if part_mesh.n_vertices == 0 or base_mesh.n_vertices == 0:
        raise SuggestionError("hinge suggestion needs non-empty part and base meshes")
    part_box = compute_aabb(part_mesh.vertices)
    base_box = compute_aabb(base_mesh.vertices)
    cx, cy = float(base_box.center[0]), float(base_box.center[1])

    corners = [
        (float(x), float(y))
        for x in (part_box.min_corner[0], part_box.max_corner[0])
        for y in (part_box.min_corner[1], part_box.max_corner[1])
    ]
    best = min(corners, key=lambda c: ((c[0] - cx) ** 2 + (c[1] - cy) ** 2, c[0], c[1]))
    mid_z = 0.5 * float(part_box.min_corner[2] + part_box.max_corner[2])
    ext = part_box.extents
    wider_than_tall = max(float(ext[0]), float(ext[1])) > float(ext[2])
    return HingeSuggestion(HINGE_AXIS, (best[0], best[1], mid_z), wider_than_tall)


def suggest_slide_axis(part_mesh: TriMesh) -> np.ndarray:
    """Unit slide direction from the dominant near-horizontal face normal.

    Face normals are greedily clustered at 10 degrees (seeded in face order);
    among clusters whose mean normal is within 30 degrees of horizontal, the
    one with the largest total face area wins, and its area-weighted mean
    normal is returned.
    """
    if part_mesh.n_faces == 0:
        raise SuggestionError("slide suggestion needs a non-empty part mesh")
    try:
        normals = face_normals(part_mesh)
    except GeometryError as exc:
        raise SuggestionError(str(exc)) from None
    areas = face_areas(part_mesh)

    cos_cluster = math.cos(math.radians(SLIDE_CLUSTER_ANGLE_DEG))
    seeds: list[np.ndarray] = []
    members: list[list[int]] = []
    for i, n in enumerate(normals):
        for ci, seed in enumerate(seeds):
            if float(n @ seed) >= cos_cluster:
                members[ci].append(i)
                break
        else:
            seeds.append(n)
            members.append([i])

    sin_horizontal = math.sin(math.radians(SLIDE_HORIZONTAL_ANGLE_DEG))
    best_area = -1.0
    best_mean = None
    for idx in members:
        weights = areas[idx]
        mean = (normals[idx] * weights[:, None]).sum(axis=0)
        norm = float(np.linalg.norm(mean))
        if norm < 1e-30:
            continue
        mean = mean / norm
        if abs(float(mean[2])) > sin_horizontal:
            continue  # not a front-facing cluster
        total = float(weights.sum())
        if total > best_area:
            best_area = total
            best_mean = mean
    if best_mean is None:
        raise SuggestionError("no front face found")
    return best_mean


def estimate_mass(label: str, volume: float, table: MassTable) -> float:
    """Scale the class prior linearly with bounding-box volume."""
    if label not in table:
        raise AnnotationError(f"no mass prior for label {label!r}")
    if not math.isfinite(volume) or volume <= 0.0:
        raise AnnotationError(f"volume must be positive, got {volume}")
    mass, ref_volume = table.entries[label]
    return mass * (volume / ref_volume)


def _object_vertices(mesh: TriMesh, scene: SceneAnnotation, obj_id: str) -> np.ndarray:
    obj = scene.object_by_id(obj_id)
    faces = sorted({f for part in obj.parts for f in part.face_indices})
    if not faces:
        raise SuggestionError(f"object {obj_id!r} has no faces")
    used = np.unique(mesh.faces[np.asarray(faces, dtype=np.int64)])
    return mesh.vertices[used]


def _subsample(points: np.ndarray, limit: int = FIXTURE_MAX_VERTICES) -> np.ndarray:
    if len(points) <= limit:
        return points
    stride = -(-len(points) // limit)  # ceil
    return points[::stride]


def propose_fixtures(scene: SceneAnnotation, mesh: TriMesh,
                     eligible_labels=DEFAULT_FIXTURE_LABELS,
                     threshold: float = FIXTURE_GAP_THRESHOLD) -> list[Fixture]:
    """Fixture proposals for every object with an eligible label.

    An item is fixed to the nearest candidate anchor (a wall/ceiling/floor
    object or another eligible item) whose bounding-box gap is at most
    ``threshold``. The attachment point is the midpoint of the closest vertex
    pair, with each side subsampled to a deterministic stride of at most
    2000 vertices.
    """
    if threshold <= 0.0:
        raise SuggestionError("threshold must be positive")
    eligible = set(eligible_labels)

    boxes: dict[str, Aabb] = {}
    verts: dict[str, np.ndarray] = {}
    for obj in scene.objects:
        if not any(part.face_indices for part in obj.parts):
            continue
        v = _object_vertices(mesh, scene, obj.id)
        verts[obj.id] = v
        boxes[obj.id] = compute_aabb(v)

    fixtures = []
    for obj in scene.objects:
        if obj.label not in eligible or obj.id not in boxes:
            continue
        best = None
        for anchor in scene.objects:
            if anchor.id == obj.id or anchor.id not in boxes:
                continue
            if anchor.label not in STRUCTURAL_ANCHOR_LABELS and anchor.label not in eligible:
                continue
            gap = boxes[obj.id].gap_to(boxes[anchor.id])
            if gap > threshold:
                continue
            if best is None or gap < best[0]:
                best = (gap, anchor.id)
        if best is None:
            continue
        _, anchor_id = best
        a = _subsample(verts[obj.id])
        b = _subsample(verts[anchor_id])
        dists, nearest = cKDTree(b).query(a)
        i = int(np.argmin(dists))
        point = 0.5 * (a[i] + b[nearest[i]])
        fixture = Fixture(obj.id, anchor_id, tuple(float(x) for x in point))
        for box in (boxes[obj.id], boxes[anchor_id]):
            if box.distance_to_point(point) > 2.0 * threshold:
                raise SuggestionError(
                    f"attachment point for {obj.id!r} strayed outside 2x threshold"
                )
        fixtures.append(fixture)
    return fixtures
