"""In-memory model of the text scene-description format.

A stage is a tree of typed prims under an implicit root. Transform prims
group objects, mesh prims carry geometry, and physics joint prims encode
articulation (revolute/prismatic) and rigid attachments (fixed). Attribute
order inside a prim and child order are both significant: serialization is
deterministic and two stages are equal only when their trees match exactly.
"""

from __future__ import annotations

import math
import re
from dataclasses import dataclass, field

SCHEMA_XFORM = "Xform"
SCHEMA_MESH = "Mesh"
SCHEMA_REVOLUTE = "PhysicsRevoluteJoint"
SCHEMA_PRISMATIC = "PhysicsPrismaticJoint"
SCHEMA_FIXED = "PhysicsFixedJoint"
SCHEMAS = (SCHEMA_XFORM, SCHEMA_MESH, SCHEMA_REVOLUTE, SCHEMA_PRISMATIC, SCHEMA_FIXED)
JOINT_SCHEMAS = (SCHEMA_REVOLUTE, SCHEMA_PRISMATIC, SCHEMA_FIXED)

TYPE_POINT3_ARRAY = "point3f[]"
TYPE_INT_ARRAY = "int[]"
TYPE_VECTOR3 = "vector3f"
TYPE_POINT3 = "point3f"
TYPE_FLOAT = "float"
TYPE_STRING = "string"
TYPE_REL = "rel"
ATTR_TYPES = (TYPE_POINT3_ARRAY, TYPE_INT_ARRAY, TYPE_VECTOR3, TYPE_POINT3,
              TYPE_FLOAT, TYPE_STRING, TYPE_REL)

# closed attribute vocabulary: name -> (type, custom flag)
ATTR_SPECS: dict[str, tuple[str, bool]] = {
    "points": (TYPE_POINT3_ARRAY, False),
    "faceVertexCounts": (TYPE_INT_ARRAY, False),
    "faceVertexIndices": (TYPE_INT_ARRAY, False),
    "artic:label": (TYPE_STRING, True),
    "artic:role": (TYPE_STRING, True),
    "physics:mass": (TYPE_FLOAT, True),
    "artic:axis": (TYPE_VECTOR3, True),
    "artic:origin": (TYPE_POINT3, True),
    "physics:lowerLimit": (TYPE_FLOAT, False),
    "physics:upperLimit": (TYPE_FLOAT, False),
    "physics:body0": (TYPE_REL, False),
    "physics:body1": (TYPE_REL, False),
    "artic:interactable": (TYPE_REL, True),
    "artic:attachmentPoint": (TYPE_POINT3, True),
}

_NAME_RE = re.compile(r"^[A-Za-z_][A-Za-z0-9_]*$")

AXIS_UNIT_TOL = 1e-9


class UsdError(ValueError):
    """Stage-level invariant violation."""


def valid_prim_name(name: str) -> bool:
    return bool(_NAME_RE.match(name))


@dataclass(frozen=True)
class PrimAttribute:
    type_name: str
    value: object
    custom: bool = False

    def __post_init__(self):
        if self.type_name not in ATTR_TYPES:
            raise UsdError(f"unknown attribute type {self.type_name!r}")
        object.__setattr__(self, "value", _normalize_value(self.type_name, self.value))


def _finite(x) -> float:
    v = float(x)
    if not math.isfinite(v):
        raise UsdError("attribute values must be finite")
    return v


def _normalize_value(type_name: str, value):
    if type_name == TYPE_POINT3_ARRAY:
        return tuple(tuple(_finite(x) for x in p) for p in value)
    if type_name == TYPE_INT_ARRAY:
        return tuple(int(x) for x in value)
    if type_name in (TYPE_VECTOR3, TYPE_POINT3):
        out = tuple(_finite(x) for x in value)
        if len(out) != 3:
            raise UsdError(f"{type_name} needs exactly 3 components")
        return out
    if type_name == TYPE_FLOAT:
        return _finite(value)
    if type_name in (TYPE_STRING, TYPE_REL):
        if not isinstance(value, str):
            raise UsdError(f"{type_name} value must be a string")
        return value
    raise UsdError(f"unknown attribute type {type_name!r}")


@dataclass(eq=False)
class Prim:
    name: str
    schema: str
    attributes: dict[str, PrimAttribute] = field(default_factory=dict)
    children: list["Prim"] = field(default_factory=list)

    def __post_init__(self):
        if self.schema not in SCHEMAS:
            raise UsdError(f"unknown prim schema {self.schema!r}")
        if not valid_prim_name(self.name):
            raise UsdError(f"invalid prim name {self.name!r}")

    def set(self, name: str, value, type_name: str | None = None,
            custom: bool | None = None) -> "Prim":
        spec = ATTR_SPECS.get(name)
        if spec is None and (type_name is None or custom is None):
            raise UsdError(f"unknown attribute {name!r}")
        t = type_name if type_name is not None else spec[0]
        c = custom if custom is not None else spec[1]
        self.attributes[name] = PrimAttribute(t, value, c)
        return self

    def get(self, name: str):
        attr = self.attributes.get(name)
        return None if attr is None else attr.value

    def child(self, name: str) -> "Prim | None":
        for c in self.children:
            if c.name == name:
                return c
        return None

    def __eq__(self, other) -> bool:
        if not isinstance(other, Prim):
            return NotImplemented
        return (
            self.name == other.name
            and self.schema == other.schema
            and list(self.attributes.items()) == list(other.attributes.items())
            and self.children == other.children
        )


@dataclass(eq=False)
class UsdStage:
    """Prim forest plus layer metadata. ``default_prim`` must name a root
    child whenever the stage has any prims."""

    root_prims: list[Prim] = field(default_factory=list)
    default_prim: str | None = None
    meters_per_unit: int = 1
    up_axis: str = "Z"

    def __eq__(self, other) -> bool:
        if not isinstance(other, UsdStage):
            return NotImplemented
        return (
            self.root_prims == other.root_prims
            and self.default_prim == other.default_prim
            and self.meters_per_unit == other.meters_per_unit
            and self.up_axis == other.up_axis
        )

    def iter_prims(self):
        """Yield (path, prim) depth-first in document order."""

        def walk(prim: Prim, prefix: str):
            path = f"{prefix}/{prim.name}"
            yield path, prim
            for c in prim.children:
                yield from walk(c, path)

        for p in self.root_prims:
            yield from walk(p, "")

    def find(self, path: str) -> Prim | None:
        for p, prim in self.iter_prims():
            if p == path:
                return prim
        return None


@dataclass(frozen=True)
class JointSpec:
    """Typed view of a joint prim's attribute set."""

    kind: str  # revolute | prismatic | fixed
    body0: str
    body1: str
    axis: tuple[float, float, float] | None = None
    origin: tuple[float, float, float] | None = None
    lower: float | None = None
    upper: float | None = None
    interactable: str | None = None
    attachment_point: tuple[float, float, float] | None = None


_JOINT_REQUIRED = {
    SCHEMA_REVOLUTE: ("artic:axis", "artic:origin", "physics:lowerLimit",
                      "physics:upperLimit", "physics:body0", "physics:body1"),
    SCHEMA_PRISMATIC: ("artic:axis", "physics:lowerLimit", "physics:upperLimit",
                       "physics:body0", "physics:body1"),
    SCHEMA_FIXED: ("physics:body0", "physics:body1"),
}
_JOINT_OPTIONAL = {
    SCHEMA_REVOLUTE: ("artic:interactable",),
    SCHEMA_PRISMATIC: ("artic:interactable",),
    SCHEMA_FIXED: ("artic:attachmentPoint",),
}


def joint_spec_of(prim: Prim) -> JointSpec:
    if prim.schema not in JOINT_SCHEMAS:
        raise UsdError(f"prim {prim.name!r} is not a joint")
    kind = {SCHEMA_REVOLUTE: "revolute", SCHEMA_PRISMATIC: "prismatic",
            SCHEMA_FIXED: "fixed"}[prim.schema]
    return JointSpec(
        kind=kind,
        body0=prim.get("physics:body0"),
        body1=prim.get("physics:body1"),
        axis=prim.get("artic:axis"),
        origin=prim.get("artic:origin"),
        lower=prim.get("physics:lowerLimit"),
        upper=prim.get("physics:upperLimit"),
        interactable=prim.get("artic:interactable"),
        attachment_point=prim.get("artic:attachmentPoint"),
    )


def validate_stage(stage: UsdStage) -> None:
    """Enforce every stage invariant; raises UsdError with the prim path."""
    if stage.meters_per_unit != 1:
        raise UsdError("metersPerUnit must be 1")
    if stage.up_axis != "Z":
        raise UsdError("upAxis must be Z")
    if stage.root_prims:
        if stage.default_prim is None:
            raise UsdError("a stage with prims must declare defaultPrim")
        if not any(p.name == stage.default_prim for p in stage.root_prims):
            raise UsdError(f"defaultPrim {stage.default_prim!r} is not a root prim")
    elif stage.default_prim is not None:
        raise UsdError("defaultPrim set on an empty stage")

    paths = set()
    for path, prim in stage.iter_prims():
        if path in paths:
            raise UsdError(f"duplicate prim path {path}")
        paths.add(path)
        names = [c.name for c in prim.children]
        if len(names) != len(set(names)):
            raise UsdError(f"duplicate child names under {path}")
        for attr_name, attr in prim.attributes.items():
            spec = ATTR_SPECS.get(attr_name)
            if spec is None:
                raise UsdError(f"{path}: unknown attribute {attr_name!r}")
            if attr.type_name != spec[0] or attr.custom != spec[1]:
                raise UsdError(
                    f"{path}: attribute {attr_name!r} must be "
                    f"{'custom ' if spec[1] else ''}{spec[0]}"
                )

    root_names = [p.name for p in stage.root_prims]
    if len(root_names) != len(set(root_names)):
        raise UsdError("duplicate root prim names")

    for path, prim in stage.iter_prims():
        for attr_name, attr in prim.attributes.items():
            if attr.type_name == TYPE_REL and attr.value not in paths:
                raise UsdError(f"{path}: relationship {attr_name!r} targets "
                               f"missing prim {attr.value}")

        if prim.schema == SCHEMA_MESH:
            for required in ("points", "faceVertexCounts", "faceVertexIndices"):
                if required not in prim.attributes:
                    raise UsdError(f"{path}: mesh prim lacks {required!r}")
            points = prim.get("points")
            counts = prim.get("faceVertexCounts")
            indices = prim.get("faceVertexIndices")
            if any(c != 3 for c in counts):
                raise UsdError(f"{path}: only triangles allowed in faceVertexCounts")
            if len(indices) != 3 * len(counts):
                raise UsdError(f"{path}: faceVertexIndices length must be 3x counts")
            if indices and (min(indices) < 0 or max(indices) >= len(points)):
                raise UsdError(f"{path}: face index out of range")

        if prim.schema in JOINT_SCHEMAS:
            required = set(_JOINT_REQUIRED[prim.schema])
            allowed = required | set(_JOINT_OPTIONAL[prim.schema])
            present = set(prim.attributes)
            if not required.issubset(present) or not present.issubset(allowed):
                raise UsdError(
                    f"{path}: {prim.schema} must carry exactly {sorted(required)} "
                    f"(optionally {sorted(set(_JOINT_OPTIONAL[prim.schema]))}), "
                    f"got {sorted(present)}"
                )
            spec = joint_spec_of(prim)
            if spec.body0 == spec.body1:
                raise UsdError(f"{path}: joint bodies must differ")
            if spec.axis is not None:
                norm = math.sqrt(sum(x * x for x in spec.axis))
                if abs(norm - 1.0) > AXIS_UNIT_TOL:
                    raise UsdError(f"{path}: joint axis must be unit length")
            if spec.lower is not None and spec.lower > spec.upper:
                raise UsdError(f"{path}: lowerLimit exceeds upperLimit")
