"""Seeded random stage builder shared by the format tests.

Stages cover the whole grammar: nested transforms, meshes with labels and
roles, revolute and prismatic joints with limits and optional interactable
rels, and fixed joints with attachment points. Every stage passes
validation, so parse(emit(stage)) must reproduce it exactly.
"""

from __future__ import annotations

import numpy as np

from artiscene.usd import (
    SCHEMA_FIXED,
    SCHEMA_MESH,
    SCHEMA_PRISMATIC,
    SCHEMA_REVOLUTE,
    SCHEMA_XFORM,
    Prim,
    UsdStage,
)

_ROLES = ("fixed", "movable", "interactable", "none")
_LABELS = ("door", "drawer", "cabinet body", "shelf", 'weird "label"',
           "panel\\slash", "", "handle")


def _name(rng: np.random.Generator, taken: set[str]) -> str:
    alphabet = "abcdefghijklmnopqrstuvwxyz_ABCDEFGHIJKLMNOPQRSTUVWXYZ0123456789"
    while True:
        head = alphabet[int(rng.integers(0, 53))]
        tail = "".join(alphabet[int(i)]
                       for i in rng.integers(0, len(alphabet),
                                             size=int(rng.integers(0, 7))))
        candidate = head + tail
        if candidate not in taken:
            taken.add(candidate)
            return candidate


def _mesh_prim(rng: np.random.Generator, name: str) -> Prim:
    n_verts = int(rng.integers(3, 9))
    points = [tuple(float(x) for x in rng.normal(0.0, 2.0, 3))
              for _ in range(n_verts)]
    n_faces = int(rng.integers(1, 5))
    faces = []
    for _ in range(n_faces):
        faces.extend(int(v) for v in rng.choice(n_verts, 3, replace=False))
    prim = Prim(name, SCHEMA_MESH)
    prim.set("points", points)
    prim.set("faceVertexCounts", [3] * n_faces)
    prim.set("faceVertexIndices", faces)
    if rng.random() < 0.7:
        prim.set("artic:label", _LABELS[int(rng.integers(0, len(_LABELS)))])
    if rng.random() < 0.5:
        prim.set("artic:role", _ROLES[int(rng.integers(0, len(_ROLES)))])
    return prim


def _unit_axis(rng: np.random.Generator) -> tuple[float, float, float]:
    v = rng.normal(0.0, 1.0, 3)
    while np.linalg.norm(v) < 1e-3:
        v = rng.normal(0.0, 1.0, 3)
    v = v / np.linalg.norm(v)
    return tuple(float(x) for x in v)


def _joint_prim(rng: np.random.Generator, name: str, schema: str,
                body0: str, body1: str,
                interactable: str | None) -> Prim:
    prim = Prim(name, schema)
    prim.set("artic:axis", _unit_axis(rng))
    if schema == SCHEMA_REVOLUTE:
        prim.set("artic:origin", tuple(float(x) for x in rng.normal(0, 3, 3)))
    lo = float(rng.uniform(-180.0, 90.0))
    prim.set("physics:lowerLimit", lo)
    prim.set("physics:upperLimit", lo + float(rng.uniform(0.0, 180.0)))
    prim.set("physics:body0", body0)
    prim.set("physics:body1", body1)
    if interactable is not None:
        prim.set("artic:interactable", interactable)
    return prim


def random_stage(seed: int) -> UsdStage:
    """A stage drawn from the full grammar; validation is guaranteed."""
    rng = np.random.default_rng(seed)
    if rng.random() < 0.05:
        return UsdStage(root_prims=[], default_prim=None)

    taken: set[str] = set()
    scene = Prim(_name(rng, taken), SCHEMA_XFORM)
    if rng.random() < 0.5:
        scene.set("artic:label", "scene")
    mesh_paths: list[str] = []
    part_slots: list[tuple[Prim, str, Prim, str]] = []

    for _ in range(int(rng.integers(1, 4))):
        sibling_names = {c.name for c in scene.children}
        obj = Prim(_name(rng, sibling_names | taken), SCHEMA_XFORM)
        obj_path = f"/{scene.name}/{obj.name}"
        if rng.random() < 0.6:
            obj.set("artic:label", _LABELS[int(rng.integers(0, len(_LABELS)))])
        if rng.random() < 0.4:
            obj.set("physics:mass", float(rng.uniform(0.1, 80.0)))
        scene.children.append(obj)

        base = _mesh_prim(rng, _name(rng, set(taken)))
        base_path = f"{obj_path}/{base.name}"
        obj.children.append(base)
        mesh_paths.append(base_path)

        holders = [(base, base_path)]
        for _ in range(int(rng.integers(0, 4))):
            holder, holder_path = holders[int(rng.integers(0, len(holders)))]
            used = {c.name for c in holder.children}
            child = _mesh_prim(rng, _name(rng, used | taken))
            child_path = f"{holder_path}/{child.name}"
            holder.children.append(child)
            mesh_paths.append(child_path)
            holders.append((child, child_path))
            part_slots.append((holder, holder_path, child, child_path))

    # joints next to the parts they move
    for holder, holder_path, child, child_path in part_slots:
        if rng.random() < 0.6:
            schema = SCHEMA_REVOLUTE if rng.random() < 0.5 else SCHEMA_PRISMATIC
            used = {c.name for c in holder.children}
            interactable = None
            if rng.random() < 0.3:
                interactable = mesh_paths[int(rng.integers(0, len(mesh_paths)))]
            joint = _joint_prim(rng, _name(rng, used | taken), schema,
                                holder_path, child_path, interactable)
            at = holder.children.index(child) + 1
            holder.children.insert(at, joint)

    # fixed joints pin random prim pairs from the scene root
    if len(mesh_paths) >= 2 and rng.random() < 0.5:
        for _ in range(int(rng.integers(1, 3))):
            a, b = rng.choice(len(mesh_paths), 2, replace=False)
            used = {c.name for c in scene.children}
            fixed = Prim(_name(rng, used | taken), SCHEMA_FIXED)
            fixed.set("physics:body0", mesh_paths[int(a)])
            fixed.set("physics:body1", mesh_paths[int(b)])
            if rng.random() < 0.5:
                fixed.set("artic:attachmentPoint",
                          tuple(float(x) for x in rng.normal(0, 2, 3)))
            scene.children.append(fixed)

    return UsdStage(root_prims=[scene], default_prim=scene.name)
