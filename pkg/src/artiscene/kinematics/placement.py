"""Object insertion: placement advice plus RANSAC-guided pose selection."""

from __future__ import annotations

import json
import urllib.error
import urllib.request
from dataclasses import dataclass
from importlib import resources

import numpy as np

from ..annotation.model import ObjectInstance, PartSegment, SceneAnnotation
from ..geometry import TriMesh, compute_aabb, merge_meshes, ransac_plane, submesh

SURFACE_HORIZONTAL = "horizontal"
SURFACE_VERTICAL = "vertical"
SURFACES = (SURFACE_HORIZONTAL, SURFACE_VERTICAL)

# placement planes must agree with the advised surface within this angle
PLANE_TILT_DEG = 15.0

DEFAULT_RANSAC_ITERATIONS = 256
DEFAULT_INLIER_DIST = 0.01


class PlacementError(ValueError):
    pass


@dataclass(frozen=True)
class PlacementAdvice:
    """Where an object should go and how the supporting surface is oriented."""

    target_label: str
    surface: str

    def __post_init__(self):
        if self.surface not in SURFACES:
            raise PlacementError(f"surface must be one of {SURFACES}, got {self.surface!r}")


@dataclass(frozen=True)
class PlacementRule:
    object_label: str
    target_labels: tuple[str, ...]
    surface: str


def load_placement_rules(data: bytes | str) -> tuple[PlacementRule, ...]:
    """Rules file: JSON list of {object_label, target_labels, surface}."""
    if isinstance(data, bytes):
        data = data.decode("utf-8")
    try:
        raw = json.loads(data)
    except json.JSONDecodeError as exc:
        raise PlacementError(f"placement rules are not valid JSON: {exc}") from None
    if not isinstance(raw, list):
        raise PlacementError("placement rules must be a JSON list")
    rules = []
    for i, row in enumerate(raw):
        if (not isinstance(row, dict)
                or set(row) != {"object_label", "target_labels", "surface"}
                or not isinstance(row["object_label"], str)
                or not isinstance(row["target_labels"], list)
                or not all(isinstance(t, str) for t in row["target_labels"])
                or row["surface"] not in SURFACES):
            raise PlacementError(f"placement rule [{i}] is malformed")
        rules.append(PlacementRule(row["object_label"],
                                   tuple(row["target_labels"]), row["surface"]))
    return tuple(rules)


def default_placement_rules() -> tuple[PlacementRule, ...]:
    data = resources.files("artiscene").joinpath("data/placement_rules.json").read_bytes()
    return load_placement_rules(data)


class RuleBasedAdvisor:
    """Advisor backed by a static rules table.

    The first rule for the object label whose target list intersects the
    scene labels wins; target preference follows the rule's own ordering.
    """

    def __init__(self, rules: tuple[PlacementRule, ...] | None = None):
        self.rules = default_placement_rules() if rules is None else tuple(rules)

    def __call__(self, object_label: str, scene_labels) -> PlacementAdvice:
        present = set(scene_labels)
        for rule in self.rules:
            if rule.object_label != object_label:
                continue
            for target in rule.target_labels:
                if target in present:
                    return PlacementAdvice(target_label=target, surface=rule.surface)
        raise PlacementError(
            f"no placement rule for {object_label!r} among scene labels "
            f"{sorted(present)}"
        )


def rule_based_advisor(object_label: str, scene_labels) -> PlacementAdvice:
    """Advise from the checked-in default rules table."""
    return RuleBasedAdvisor()(object_label, scene_labels)


class HttpPlacementAdvisor:
    """Advisor that defers to an external service over one JSON POST.

    Request body: {"object_label": ..., "scene_labels": [...]}. Expected
    response: {"target_label": ..., "surface": ...} with the target present
    in the scene. Timeouts, transport errors, and non-conforming responses
    fall back to the rule table when ``fallback`` is set, and raise
    otherwise.
    """

    def __init__(self, url: str, timeout: float = 10.0, fallback=None):
        self.url = url
        self.timeout = float(timeout)
        self.fallback = fallback

    def _request(self, object_label: str, scene_labels) -> PlacementAdvice:
        body = json.dumps({"object_label": object_label,
                           "scene_labels": list(scene_labels)}).encode("utf-8")
        req = urllib.request.Request(
            self.url, data=body, headers={"Content-Type": "application/json"},
            method="POST",
        )
        with urllib.request.urlopen(req, timeout=self.timeout) as resp:
            payload = json.loads(resp.read().decode("utf-8"))
        if (not isinstance(payload, dict)
                or set(payload) != {"target_label", "surface"}
                or not isinstance(payload["target_label"], str)):
            raise PlacementError(f"malformed advisor response: {payload!r}")
        advice = PlacementAdvice(payload["target_label"], payload["surface"])
        if advice.target_label not in set(scene_labels):
            raise PlacementError(
                f"advisor chose {advice.target_label!r}, not a scene label"
            )
        return advice

    def __call__(self, object_label: str, scene_labels) -> PlacementAdvice:
        try:
            return self._request(object_label, scene_labels)
        except (urllib.error.URLError, OSError, ValueError) as exc:
            if self.fallback is None:
                if isinstance(exc, PlacementError):
                    raise
                raise PlacementError(f"placement service failed: {exc}") from exc
            return self.fallback(object_label, scene_labels)


def _target_vertices(mesh: TriMesh, annotation: SceneAnnotation,
                     target_label: str) -> np.ndarray:
    for obj in annotation.objects:
        if obj.label != target_label:
            continue
        faces: list[int] = []
        for part in obj.parts:
            faces.extend(part.face_indices)
        if not faces:
            raise PlacementError(f"target object {obj.id!r} has no faces")
        return submesh(mesh, sorted(set(faces))).vertices
    raise PlacementError(f"no object labeled {target_label!r} in the scene")


def _surface_matches(normal: np.ndarray, surface: str) -> bool:
    cos_to_up = abs(float(normal[2]))
    if surface == SURFACE_HORIZONTAL:
        return cos_to_up >= np.cos(np.radians(PLANE_TILT_DEG))
    return cos_to_up <= np.sin(np.radians(PLANE_TILT_DEG))


def insert_object(mesh: TriMesh, annotation: SceneAnnotation, obj: TriMesh,
                  advice: PlacementAdvice, seed: int, *,
                  object_label: str = "inserted object",
                  object_id: str | None = None,
                  iterations: int = DEFAULT_RANSAC_ITERATIONS,
                  inlier_dist: float = DEFAULT_INLIER_DIST,
                  ) -> tuple[TriMesh, SceneAnnotation]:
    """Place ``obj`` against the advised target and graft it into the scene.

    The supporting plane is fit to the target object's vertices; it must be
    within 15 degrees of the advised orientation or placement fails. The
    object is translated so its bottom-center (horizontal) or back-center
    (vertical) lands on the inlier centroid projected onto the plane. The
    inputs are left untouched; a new mesh and annotation are returned.
    """
    if len(obj.faces) == 0:
        raise PlacementError("cannot insert an empty mesh")
    points = _target_vertices(mesh, annotation, advice.target_label)
    plane, inliers = ransac_plane(points, iterations=iterations,
                                  inlier_dist=inlier_dist, seed=seed)
    if not _surface_matches(plane.normal, advice.surface):
        raise PlacementError(
            f"no {advice.surface} plane found on {advice.target_label!r} "
            f"(best normal {np.round(plane.normal, 4).tolist()})"
        )
    anchor = plane.project(points[inliers].mean(axis=0)[None, :])[0]

    box = compute_aabb(obj.vertices)
    attach = np.array(box.center)
    if advice.surface == SURFACE_HORIZONTAL:
        attach[2] = box.min_corner[2]
    else:
        flat = np.array([plane.normal[0], plane.normal[1], 0.0])
        axis = int(np.argmax(np.abs(flat[:2])))
        attach[axis] = (box.min_corner if flat[axis] > 0 else box.max_corner)[axis]
    moved = TriMesh(obj.vertices + (anchor - attach), obj.faces, obj.vertex_colors)

    existing = set(annotation.all_ids())
    if object_id is None:
        base = "inserted"
        object_id, n = base, 1
        while object_id in existing or f"{object_id}_body" in existing:
            n += 1
            object_id = f"{base}_{n}"
    elif object_id in existing or f"{object_id}_body" in existing:
        raise PlacementError(f"object id {object_id!r} already in use")

    first_new_face = len(mesh.faces)
    new_part = PartSegment(
        id=f"{object_id}_body", label=object_label,
        face_indices=tuple(range(first_new_face, first_new_face + len(obj.faces))),
    )
    new_object = ObjectInstance(id=object_id, label=object_label, parts=(new_part,))
    merged = merge_meshes([mesh, moved])
    updated = SceneAnnotation(
        scene_id=annotation.scene_id,
        objects=annotation.objects + (new_object,),
        fixtures=annotation.fixtures,
    )
    return merged, updated
