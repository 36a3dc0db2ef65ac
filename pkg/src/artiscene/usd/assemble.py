"""Build a stage from an annotated mesh, and extract per-object stages.

Layout produced by ``assemble_stage``::

    /<scene>                    Xform   (default prim)
        /<object>               Xform   artic:label, physics:mass
            /<part>             Mesh    geometry + artic:label, artic:role
            /<part>_joint       joint   immediately after the moving prim
            ...child parts nest under their parent part's prim
        /<item>_fixture         PhysicsFixedJoint under the scene root

Prim names are sanitized annotation ids; siblings are deduplicated with
numeric suffixes. Joints reference prims by path, so every annotation id
maps to exactly one prim path.
"""

from __future__ import annotations

import re

from ..annotation.model import (
    MOTION_ROTATION,
    ROLE_MOVABLE,
    PartSegment,
    SceneAnnotation,
)
from ..annotation.validate import validate_connectivity
from ..geometry import TriMesh, submesh
from .model import (
    JOINT_SCHEMAS,
    SCHEMA_FIXED,
    SCHEMA_MESH,
    SCHEMA_PRISMATIC,
    SCHEMA_REVOLUTE,
    SCHEMA_XFORM,
    TYPE_REL,
    Prim,
    PrimAttribute,
    UsdError,
    UsdStage,
    validate_stage,
)

_INVALID_CHARS = re.compile(r"[^A-Za-z0-9_]")


def sanitize_prim_name(raw: str, taken: set[str]) -> str:
    """Map an annotation id to a unique valid prim name within one parent."""
    base = _INVALID_CHARS.sub("_", raw)
    if not base or base[0].isdigit():
        base = "_" + base
    name = base
    counter = 2
    while name in taken:
        name = f"{base}_{counter}"
        counter += 1
    taken.add(name)
    return name


def _mesh_prim(name: str, mesh: TriMesh, label: str, role: str) -> Prim:
    prim = Prim(name, SCHEMA_MESH)
    prim.set("points", [tuple(p) for p in mesh.vertices.tolist()])
    prim.set("faceVertexCounts", [3] * len(mesh.faces))
    prim.set("faceVertexIndices", [int(i) for i in mesh.faces.reshape(-1)])
    prim.set("artic:label", label)
    prim.set("artic:role", role)
    return prim


def _joint_prim(name: str, part: PartSegment, body0: str, body1: str,
                interactable: str | None) -> Prim:
    art = part.articulation
    if art.motion_type == MOTION_ROTATION:
        prim = Prim(name, SCHEMA_REVOLUTE)
        prim.set("artic:axis", art.axis)
        prim.set("artic:origin", art.origin)
    else:
        prim = Prim(name, SCHEMA_PRISMATIC)
        prim.set("artic:axis", art.axis)
    prim.set("physics:lowerLimit", art.range[0])
    prim.set("physics:upperLimit", art.range[1])
    prim.set("physics:body0", body0)
    prim.set("physics:body1", body1)
    if interactable is not None:
        prim.set("artic:interactable", interactable)
    return prim


def assemble_stage(mesh: TriMesh, annotation: SceneAnnotation) -> UsdStage:
    """Turn an annotated scene mesh into a joint-bearing stage.

    The annotation must pass ``validate_connectivity`` without hard
    violations; part geometry is carved out of ``mesh`` by face index with
    compact vertex re-indexing.
    """
    report = validate_connectivity(annotation)
    if report.hard_violations:
        first = report.hard_violations[0]
        raise UsdError(
            f"annotation has {len(report.hard_violations)} connectivity "
            f"violation(s); first: {first.kind} in object {first.object_id!r}"
        )

    root_taken: set[str] = set()
    scene_prim = Prim(sanitize_prim_name(annotation.scene_id, root_taken), SCHEMA_XFORM)
    scene_path = f"/{scene_prim.name}"
    path_of: dict[str, str] = {}
    prim_of: dict[str, Prim] = {}
    parent_prim_of: dict[str, Prim] = {}

    scene_taken: set[str] = set()
    for obj in annotation.objects:
        obj_prim = Prim(sanitize_prim_name(obj.id, scene_taken), SCHEMA_XFORM)
        obj_prim.set("artic:label", obj.label)
        if obj.mass is not None:
            obj_prim.set("physics:mass", obj.mass)
        obj_path = f"{scene_path}/{obj_prim.name}"
        path_of[obj.id] = obj_path
        prim_of[obj.id] = obj_prim
        scene_prim.children.append(obj_prim)

        # Parts nest along the connectivity tree. Parents always precede
        # children here because a clean report has no cycles: emit parts in
        # waves of resolved parents.
        pending = list(obj.parts)
        taken_by_parent: dict[str, set[str]] = {obj.id: set()}
        while pending:
            progressed = False
            remaining = []
            for part in pending:
                holder_id = part.parent_part if part.parent_part is not None else obj.id
                holder = prim_of.get(holder_id)
                if holder is None:
                    remaining.append(part)
                    continue
                taken = taken_by_parent.setdefault(holder_id, set())
                name = sanitize_prim_name(part.id, taken)
                part_prim = _mesh_prim(name, submesh(mesh, part.face_indices),
                                       part.label, part.role)
                holder.children.append(part_prim)
                path_of[part.id] = f"{path_of[holder_id]}/{name}"
                prim_of[part.id] = part_prim
                parent_prim_of[part.id] = holder
                progressed = True
            if not progressed:
                missing = ", ".join(sorted({str(p.parent_part) for p in remaining}))
                raise UsdError(f"unresolved part reference(s): {missing}")
            pending = remaining

        actuator_of = {p.interactable_for: p.id for p in obj.parts
                       if p.interactable_for is not None}
        for part in obj.parts:
            if part.role != ROLE_MOVABLE:
                continue
            holder_id = part.parent_part if part.parent_part is not None else obj.id
            holder = parent_prim_of[part.id]
            taken = taken_by_parent[holder_id]
            joint_name = sanitize_prim_name(prim_of[part.id].name + "_joint", taken)
            actuator = actuator_of.get(part.id)
            joint = _joint_prim(
                joint_name, part,
                body0=path_of[holder_id],
                body1=path_of[part.id],
                interactable=None if actuator is None else path_of[actuator],
            )
            at = holder.children.index(prim_of[part.id])
            holder.children.insert(at + 1, joint)

    for fix in annotation.fixtures:
        for ref in (fix.id, fix.attached_to):
            if ref not in path_of:
                raise UsdError(f"fixture {fix.id!r}: unresolved reference {ref!r}")
        joint = Prim(sanitize_prim_name(fix.id + "_fixture", scene_taken), SCHEMA_FIXED)
        joint.set("physics:body0", path_of[fix.attached_to])
        joint.set("physics:body1", path_of[fix.id])
        joint.set("artic:attachmentPoint", fix.attachment_point)
        scene_prim.children.append(joint)

    stage = UsdStage(root_prims=[scene_prim], default_prim=scene_prim.name)
    validate_stage(stage)
    return stage


def _copy_prim(prim: Prim) -> Prim:
    return Prim(prim.name, prim.schema, attributes=dict(prim.attributes),
                children=[_copy_prim(c) for c in prim.children])


def _rel_targets(prim: Prim):
    for name, attr in prim.attributes.items():
        if attr.type_name == TYPE_REL:
            yield name, attr


def extract_object(stage: UsdStage, object_path: str) -> tuple[UsdStage, list[str]]:
    """Lift one object's subtree into its own stage.

    Joints that sit outside the subtree but reference only prims inside it
    (part joints never do; fixtures can) are carried along under the new
    root. Joints referencing prims outside the subtree cannot survive the
    cut; they are dropped and their old paths returned as warnings.
    """
    target = stage.find(object_path)
    if target is None:
        raise UsdError(f"no prim at path {object_path}")

    inner_prefix = object_path + "/"
    subtree_paths = {path for path, _ in stage.iter_prims()
                     if path == object_path or path.startswith(inner_prefix)}
    new_prefix = f"/{target.name}"

    def reroot(path: str) -> str:
        return new_prefix + path[len(object_path):]

    dropped: list[str] = []
    new_root = _copy_prim(target)

    def rewrite(prim: Prim, old_path: str) -> bool:
        """Re-root rels in place; False when the prim cannot survive."""
        for name, attr in list(_rel_targets(prim)):
            if attr.value not in subtree_paths:
                return False
            prim.attributes[name] = PrimAttribute(TYPE_REL, reroot(attr.value),
                                                  attr.custom)
        kept = []
        for child in prim.children:
            child_path = f"{old_path}/{child.name}"
            if rewrite(child, child_path):
                kept.append(child)
            else:
                dropped.append(child_path)
        prim.children = kept
        return True

    if not rewrite(new_root, object_path):
        raise UsdError(f"prim at {object_path} references prims outside its subtree")

    taken = {c.name for c in new_root.children} | {new_root.name}
    for path, prim in stage.iter_prims():
        if path in subtree_paths or prim.schema not in JOINT_SCHEMAS:
            continue
        targets = [attr.value for _, attr in _rel_targets(prim)]
        if not any(t in subtree_paths for t in targets):
            continue
        if all(t in subtree_paths for t in targets):
            carried = _copy_prim(prim)
            carried.name = sanitize_prim_name(prim.name, taken)
            for name, attr in list(_rel_targets(carried)):
                carried.attributes[name] = PrimAttribute(TYPE_REL, reroot(attr.value),
                                                         attr.custom)
            new_root.children.append(carried)
        else:
            dropped.append(path)

    out = UsdStage(root_prims=[new_root], default_prim=new_root.name)
    validate_stage(out)
    return out, dropped
