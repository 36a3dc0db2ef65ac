"""Scene annotation data model and its JSON sidecar format.

A scene annotation is a forest of part segments grouped into object
instances, plus fixture records that pin items to structural surfaces.
Loading is strict: unknown or duplicate keys, dangling references and
overlapping sibling face sets are rejected with the offending JSON path.
Graph-level faults (cycles, multiple roots, ...) are deliberately *not* load
errors; they are the domain of ``validate_connectivity`` so broken scenes can
still be inspected and reported on.
"""

from __future__ import annotations

import json
import math
from dataclasses import dataclass, field

MOTION_ROTATION = "rotation"
MOTION_TRANSLATION = "translation"
MOTION_TYPES = (MOTION_ROTATION, MOTION_TRANSLATION)

ROLE_MOVABLE = "movable"
ROLE_INTERACTABLE = "interactable"
ROLE_FIXED = "fixed"
ROLE_NONE = "none"
ROLES = (ROLE_MOVABLE, ROLE_INTERACTABLE, ROLE_FIXED, ROLE_NONE)

AXIS_UNIT_TOL = 1e-9


class AnnotationError(ValueError):
    """Schema or invariant violation; the message names the offending path."""


def _point3(value, where: str) -> tuple[float, float, float]:
    try:
        vec = tuple(float(x) for x in value)
    except (TypeError, ValueError):
        raise AnnotationError(f"{where}: expected 3 numbers") from None
    if len(vec) != 3 or not all(math.isfinite(x) for x in vec):
        raise AnnotationError(f"{where}: expected 3 finite components")
    if any(isinstance(x, (str, bool)) for x in value):
        raise AnnotationError(f"{where}: expected 3 numbers")
    return vec


def _unit3(value, where: str) -> tuple[float, float, float]:
    vec = _point3(value, where)
    norm = math.sqrt(sum(x * x for x in vec))
    if abs(norm - 1.0) > AXIS_UNIT_TOL:
        raise AnnotationError(f"{where}: axis must be unit length within {AXIS_UNIT_TOL}")
    return vec


@dataclass(frozen=True)
class Articulation:
    """Motion model of a movable part, in world coordinates.

    Rotations travel in degrees about the line (origin, axis); translations
    travel in meters along the axis and carry no origin.
    """

    motion_type: str
    axis: tuple[float, float, float]
    range: tuple[float, float]
    origin: tuple[float, float, float] | None = None

    def __post_init__(self):
        if self.motion_type not in MOTION_TYPES:
            raise AnnotationError(f"articulation: unknown motion type {self.motion_type!r}")
        object.__setattr__(self, "axis", _unit3(self.axis, "articulation.axis"))
        lo, hi = (float(x) for x in self.range)
        if not (math.isfinite(lo) and math.isfinite(hi)):
            raise AnnotationError("articulation.range: bounds must be finite")
        if lo > hi:
            raise AnnotationError(f"articulation.range: min {lo} exceeds max {hi}")
        object.__setattr__(self, "range", (lo, hi))
        if self.motion_type == MOTION_ROTATION:
            if self.origin is None:
                raise AnnotationError("articulation: rotation requires an origin")
            object.__setattr__(self, "origin", _point3(self.origin, "articulation.origin"))
        elif self.origin is not None:
            raise AnnotationError("articulation: translation must not carry an origin")


@dataclass(frozen=True)
class PartSegment:
    """A part of an object: a face set plus its role in the part tree."""

    id: str
    label: str
    face_indices: tuple[int, ...]
    role: str = ROLE_NONE
    parent_part: str | None = None
    articulation: Articulation | None = None
    interactable_for: str | None = None

    def __post_init__(self):
        if not self.id:
            raise AnnotationError("part: id must be non-empty")
        if self.role not in ROLES:
            raise AnnotationError(f"part {self.id!r}: unknown role {self.role!r}")
        faces = tuple(int(x) for x in self.face_indices)
        if any(f < 0 for f in faces):
            raise AnnotationError(f"part {self.id!r}: negative face index")
        if any(faces[i] >= faces[i + 1] for i in range(len(faces) - 1)):
            raise AnnotationError(
                f"part {self.id!r}: face_indices must be strictly increasing"
            )
        object.__setattr__(self, "face_indices", faces)
        movable = self.role == ROLE_MOVABLE
        if movable and self.articulation is None:
            raise AnnotationError(f"part {self.id!r}: movable part needs an articulation")
        if not movable and self.articulation is not None:
            raise AnnotationError(
                f"part {self.id!r}: articulation is only allowed on movable parts"
            )
        if self.interactable_for is not None and self.role != ROLE_INTERACTABLE:
            raise AnnotationError(
                f"part {self.id!r}: interactable_for requires role 'interactable'"
            )


@dataclass(frozen=True)
class ObjectInstance:
    id: str
    label: str
    parts: tuple[PartSegment, ...]
    mass: float | None = None

    def __post_init__(self):
        if not self.id:
            raise AnnotationError("object: id must be non-empty")
        object.__setattr__(self, "parts", tuple(self.parts))
        if self.mass is not None:
            m = float(self.mass)
            if not math.isfinite(m) or m <= 0.0:
                raise AnnotationError(f"object {self.id!r}: mass must be positive")
            object.__setattr__(self, "mass", m)

    def part_by_id(self, part_id: str) -> PartSegment:
        for part in self.parts:
            if part.id == part_id:
                return part
        raise KeyError(part_id)


@dataclass(frozen=True)
class Fixture:
    """Pins the item ``id`` (a part or object) to the anchor ``attached_to``."""

    id: str
    attached_to: str
    attachment_point: tuple[float, float, float]

    def __post_init__(self):
        if not self.id or not self.attached_to:
            raise AnnotationError("fixture: ids must be non-empty")
        object.__setattr__(
            self, "attachment_point", _point3(self.attachment_point, "fixture.attachment_point")
        )


@dataclass(frozen=True)
class SceneAnnotation:
    scene_id: str
    objects: tuple[ObjectInstance, ...] = ()
    fixtures: tuple[Fixture, ...] = ()

    def __post_init__(self):
        object.__setattr__(self, "objects", tuple(self.objects))
        object.__setattr__(self, "fixtures", tuple(self.fixtures))

    def object_by_id(self, object_id: str) -> ObjectInstance:
        for obj in self.objects:
            if obj.id == object_id:
                return obj
        raise KeyError(object_id)

    def all_ids(self) -> set[str]:
        ids = {obj.id for obj in self.objects}
        for obj in self.objects:
            ids.update(part.id for part in obj.parts)
        return ids


@dataclass(frozen=True)
class MassTable:
    """Per-class mass priors: label -> (mass_kg at reference_volume_m3)."""

    entries: dict[str, tuple[float, float]] = field(default_factory=dict)

    def __post_init__(self):
        clean = {}
        for label, (mass, vol) in self.entries.items():
            mass, vol = float(mass), float(vol)
            if mass <= 0.0 or vol <= 0.0:
                raise AnnotationError(f"mass table {label!r}: mass and volume must be positive")
            clean[label] = (mass, vol)
        object.__setattr__(self, "entries", clean)

    def __contains__(self, label: str) -> bool:
        return label in self.entries


# ---------------------------------------------------------------------------
# strict JSON loading

_SCENE_KEYS = {"scene_id": True, "objects": True, "fixtures": False}
_OBJECT_KEYS = {"id": True, "label": True, "parts": True, "mass": False}
_PART_KEYS = {"id": True, "label": True, "face_indices": True, "role": True,
              "parent_part": False, "articulation": False, "interactable_for": False}
_ARTIC_KEYS = {"type": True, "axis": True, "range": True, "origin": False}
_FIXTURE_KEYS = {"id": True, "attached_to": True, "attachment_point": True}


def _obj_pairs(node, where: str) -> list:
    if not (isinstance(node, tuple) and len(node) == 2 and node[0] == "__obj__"):
        raise AnnotationError(f"{where}: expected an object")
    return node[1]


def _check_keys(pairs: list, schema: dict, where: str) -> dict:
    out = {}
    for key, value in pairs:
        if key in out:
            raise AnnotationError(f"{where}: duplicate key {key!r}")
        if key not in schema:
            raise AnnotationError(f"{where}: unknown key {key!r}")
        out[key] = value
    for key, required in schema.items():
        if required and key not in out:
            raise AnnotationError(f"{where}: missing required key {key!r}")
    return out


def _expect(value, kind, where: str):
    if not isinstance(value, kind) or isinstance(value, bool):
        raise AnnotationError(f"{where}: expected {kind.__name__}")
    return value


def _load_articulation(node, where: str) -> Articulation:
    data = _check_keys(_obj_pairs(node, where), _ARTIC_KEYS, where)
    rng = _expect(data["range"], list, f"{where}.range")
    if len(rng) != 2:
        raise AnnotationError(f"{where}.range: expected [min, max]")
    try:
        return Articulation(
            motion_type=_expect(data["type"], str, f"{where}.type"),
            axis=_expect(data["axis"], list, f"{where}.axis"),
            range=tuple(rng),
            origin=data.get("origin"),
        )
    except AnnotationError as exc:
        raise AnnotationError(f"{where}: {exc}") from None


def _load_part(node, where: str) -> PartSegment:
    data = _check_keys(_obj_pairs(node, where), _PART_KEYS, where)
    faces = _expect(data["face_indices"], list, f"{where}.face_indices")
    for i, f in enumerate(faces):
        _expect(f, int, f"{where}.face_indices[{i}]")
    artic = data.get("articulation")
    parent = data.get("parent_part")
    if parent is not None:
        parent = _expect(parent, str, f"{where}.parent_part")
    inter = data.get("interactable_for")
    if inter is not None:
        inter = _expect(inter, str, f"{where}.interactable_for")
    try:
        return PartSegment(
            id=_expect(data["id"], str, f"{where}.id"),
            label=_expect(data["label"], str, f"{where}.label"),
            face_indices=tuple(faces),
            role=_expect(data["role"], str, f"{where}.role"),
            parent_part=parent,
            articulation=None if artic is None else _load_articulation(
                artic, f"{where}.articulation"),
            interactable_for=inter,
        )
    except AnnotationError as exc:
        msg = str(exc)
        raise AnnotationError(msg if msg.startswith(where) else f"{where}: {exc}") from None


def _validate_scene(scene: SceneAnnotation, n_faces: int | None) -> None:
    ids: dict[str, str] = {}
    for oi, obj in enumerate(scene.objects):
        where = f"objects[{oi}]"
        if obj.id in ids:
            raise AnnotationError(f"{where}: duplicate id {obj.id!r} (also {ids[obj.id]})")
        ids[obj.id] = where
        for pi, part in enumerate(obj.parts):
            pwhere = f"{where}.parts[{pi}]"
            if part.id in ids:
                raise AnnotationError(f"{pwhere}: duplicate id {part.id!r} (also {ids[part.id]})")
            ids[part.id] = pwhere

    for oi, obj in enumerate(scene.objects):
        where = f"objects[{oi}]"
        part_ids = {part.id for part in obj.parts}
        by_parent: dict[str | None, list[tuple[int, PartSegment]]] = {}
        for pi, part in enumerate(obj.parts):
            pwhere = f"{where}.parts[{pi}]"
            if part.parent_part is not None and part.parent_part not in part_ids:
                raise AnnotationError(
                    f"{pwhere}: parent_part {part.parent_part!r} does not exist in object {obj.id!r}"
                )
            if part.interactable_for is not None and part.interactable_for not in part_ids:
                raise AnnotationError(
                    f"{pwhere}: interactable_for {part.interactable_for!r} does not exist "
                    f"in object {obj.id!r}"
                )
            if n_faces is not None and part.face_indices and part.face_indices[-1] >= n_faces:
                raise AnnotationError(
                    f"{pwhere}: face index {part.face_indices[-1]} out of range "
                    f"for a mesh with {n_faces} faces"
                )
            by_parent.setdefault(part.parent_part, []).append((pi, part))
        for siblings in by_parent.values():
            for i in range(len(siblings)):
                for j in range(i + 1, len(siblings)):
                    (pi, pa), (pj, pb) = siblings[i], siblings[j]
                    overlap = set(pa.face_indices) & set(pb.face_indices)
                    if overlap:
                        raise AnnotationError(
                            f"{where}.parts[{pi}] and {where}.parts[{pj}]: sibling parts "
                            f"{pa.id!r} and {pb.id!r} share faces "
                            f"{sorted(overlap)[:5]}"
                        )

    scene_ids = scene.all_ids()
    for fi, fix in enumerate(scene.fixtures):
        where = f"fixtures[{fi}]"
        if fix.id not in scene_ids:
            raise AnnotationError(f"{where}: id {fix.id!r} does not name a part or object")
        if fix.attached_to not in scene_ids:
            raise AnnotationError(
                f"{where}: attached_to {fix.attached_to!r} does not name a part or object"
            )


def load_annotation(data: bytes | str, n_faces: int | None = None) -> SceneAnnotation:
    """Parse and validate an annotation sidecar.

    ``n_faces``, when given, additionally bounds every face index against the
    scene mesh.
    """
    if isinstance(data, bytes):
        data = data.decode("utf-8")
    try:
        raw = json.loads(data, object_pairs_hook=lambda pairs: ("__obj__", pairs))
    except json.JSONDecodeError as exc:
        raise AnnotationError(f"invalid JSON: {exc}") from None

    top = _check_keys(_obj_pairs(raw, "$"), _SCENE_KEYS, "$")
    objects = []
    for oi, entry in enumerate(_expect(top["objects"], list, "$.objects")):
        where = f"objects[{oi}]"
        data_obj = _check_keys(_obj_pairs(entry, where), _OBJECT_KEYS, where)
        parts = []
        for pi, pentry in enumerate(_expect(data_obj["parts"], list, f"{where}.parts")):
            parts.append(_load_part(pentry, f"{where}.parts[{pi}]"))
        mass = data_obj.get("mass")
        if mass is not None:
            mass = float(_expect(mass, (int, float), f"{where}.mass"))
        try:
            objects.append(ObjectInstance(
                id=_expect(data_obj["id"], str, f"{where}.id"),
                label=_expect(data_obj["label"], str, f"{where}.label"),
                parts=tuple(parts),
                mass=mass,
            ))
        except AnnotationError as exc:
            msg = str(exc)
            raise AnnotationError(
                msg if msg.startswith("objects[") else f"{where}: {exc}") from None
    fixtures = []
    raw_fixtures = top.get("fixtures")
    if raw_fixtures is not None:
        for fi, fentry in enumerate(_expect(raw_fixtures, list, "$.fixtures")):
            where = f"fixtures[{fi}]"
            data_fix = _check_keys(_obj_pairs(fentry, where), _FIXTURE_KEYS, where)
            try:
                fixtures.append(Fixture(
                    id=_expect(data_fix["id"], str, f"{where}.id"),
                    attached_to=_expect(data_fix["attached_to"], str, f"{where}.attached_to"),
                    attachment_point=_expect(data_fix["attachment_point"], list,
                                             f"{where}.attachment_point"),
                ))
            except AnnotationError as exc:
                msg = str(exc)
                raise AnnotationError(
                    msg if msg.startswith(where) else f"{where}: {exc}") from None
    scene = SceneAnnotation(
        scene_id=_expect(top["scene_id"], str, "$.scene_id"),
        objects=tuple(objects),
        fixtures=tuple(fixtures),
    )
    _validate_scene(scene, n_faces)
    return scene


def save_annotation(scene: SceneAnnotation) -> bytes:
    """Canonical JSON: sorted keys, two-space indent, trailing newline."""

    def artic_dict(a: Articulation):
        out = {"type": a.motion_type, "axis": list(a.axis), "range": list(a.range)}
        if a.origin is not None:
            out["origin"] = list(a.origin)
        return out

    def part_dict(p: PartSegment):
        out = {"id": p.id, "label": p.label, "face_indices": list(p.face_indices),
               "role": p.role}
        if p.parent_part is not None:
            out["parent_part"] = p.parent_part
        if p.articulation is not None:
            out["articulation"] = artic_dict(p.articulation)
        if p.interactable_for is not None:
            out["interactable_for"] = p.interactable_for
        return out

    doc = {
        "scene_id": scene.scene_id,
        "objects": [
            {
                "id": o.id,
                "label": o.label,
                **({"mass": o.mass} if o.mass is not None else {}),
                "parts": [part_dict(p) for p in o.parts],
            }
            for o in scene.objects
        ],
        "fixtures": [
            {"id": f.id, "attached_to": f.attached_to,
             "attachment_point": list(f.attachment_point)}
            for f in scene.fixtures
        ],
    }
    return (json.dumps(doc, indent=2, sort_keys=True) + "\n").encode("utf-8")


def load_mass_table(data: bytes | str) -> MassTable:
    """JSON map: label -> {"mass_kg": m, "reference_volume_m3": v}."""
    if isinstance(data, bytes):
        data = data.decode("utf-8")
    try:
        raw = json.loads(data)
    except json.JSONDecodeError as exc:
        raise AnnotationError(f"invalid JSON: {exc}") from None
    if not isinstance(raw, dict):
        raise AnnotationError("mass table must be a JSON object")
    entries = {}
    for label, row in raw.items():
        if not isinstance(row, dict) or set(row) != {"mass_kg", "reference_volume_m3"}:
            raise AnnotationError(
                f"mass table {label!r}: expected keys mass_kg and reference_volume_m3"
            )
        entries[label] = (row["mass_kg"], row["reference_volume_m3"])
    return MassTable(entries)


def default_mass_table() -> MassTable:
    from importlib import resources

    data = resources.files("artiscene").joinpath("data/mass_table.json").read_bytes()
    return load_mass_table(data)
