"""Joint motion: range handling, per-joint transforms, whole-scene posing."""

from __future__ import annotations

from dataclasses import dataclass, field

import numpy as np

from ..annotation.model import MOTION_ROTATION, MOTION_TRANSLATION, Articulation
from ..geometry import RigidTransform, TriMesh, rotation_about_line, unit
from ..usd.model import JOINT_SCHEMAS, SCHEMA_MESH, UsdStage, joint_spec_of

MODE_CLAMP = "clamp"
MODE_STRICT = "strict"


class KinematicsError(ValueError):
    pass


class JointRangeError(KinematicsError):
    pass


def check_range(articulation: Articulation, s: float, mode: str = MODE_CLAMP) -> float:
    """Fit a joint parameter into the articulation's range.

    Clamp mode snaps to the nearest limit; strict mode raises when the value
    falls outside [lower, upper].
    """
    lower, upper = articulation.range
    s = float(s)
    if mode == MODE_CLAMP:
        return min(max(s, lower), upper)
    if mode == MODE_STRICT:
        if s < lower or s > upper:
            raise JointRangeError(
                f"joint value {s} outside range [{lower}, {upper}]"
            )
        return s
    raise KinematicsError(f"unknown range mode {mode!r}")


def joint_transform(articulation: Articulation, s: float) -> RigidTransform:
    """Rigid motion at parameter ``s``: degrees about the axis line for
    rotation, meters along the axis for translation."""
    s = float(s)
    if articulation.motion_type == MOTION_ROTATION:
        if articulation.origin is None:
            raise KinematicsError("rotation articulation is missing an origin")
        return rotation_about_line(articulation.axis, s, articulation.origin)
    if articulation.motion_type == MOTION_TRANSLATION:
        return RigidTransform(np.eye(3), s * np.asarray(articulation.axis, float))
    raise KinematicsError(f"unknown motion type {articulation.motion_type!r}")


def _articulation_of_joint(spec) -> Articulation:
    if spec.kind == "revolute":
        return Articulation(motion_type=MOTION_ROTATION, axis=spec.axis,
                            origin=spec.origin, range=(spec.lower, spec.upper))
    if spec.kind == "prismatic":
        return Articulation(motion_type=MOTION_TRANSLATION, axis=spec.axis,
                            range=(spec.lower, spec.upper))
    raise KinematicsError(f"joint kind {spec.kind!r} carries no motion")


def _mesh_of_prim(prim) -> TriMesh:
    points = np.asarray(prim.get("points"), dtype=np.float64).reshape(-1, 3)
    indices = np.asarray(prim.get("faceVertexIndices"), dtype=np.int64).reshape(-1, 3)
    return TriMesh(points, indices)


@dataclass(frozen=True)
class PosedScene:
    """Meshes of every Mesh prim after applying a joint state.

    ``clamped`` records joints whose requested value fell outside their
    range, as joint path -> (requested, applied).
    """

    meshes: dict[str, TriMesh] = field(default_factory=dict)
    clamped: dict[str, tuple[float, float]] = field(default_factory=dict)


def pose_scene(stage: UsdStage, state: dict[str, float]) -> PosedScene:
    """Apply joint values and propagate motion down the prim hierarchy.

    Each joint moves the subtree rooted at its body1 prim; nested joints
    compose outermost-first, so a handle on a door swings with the door.
    Values outside a joint's range are clamped and reported.
    """
    prims = dict(stage.iter_prims())
    clamped: dict[str, tuple[float, float]] = {}
    movers: list[tuple[str, RigidTransform]] = []
    for path, s in state.items():
        prim = prims.get(path)
        if prim is None or prim.schema not in JOINT_SCHEMAS:
            raise KinematicsError(f"state names no joint prim at {path}")
        spec = joint_spec_of(prim)
        art = _articulation_of_joint(spec)
        applied = check_range(art, s, MODE_CLAMP)
        if applied != float(s):
            clamped[path] = (float(s), applied)
        movers.append((spec.body1, joint_transform(art, applied)))
    # outermost joints first so deeper motion happens in the already-moved frame
    movers.sort(key=lambda m: (len(m[0]), m[0]))

    meshes: dict[str, TriMesh] = {}
    for path, prim in prims.items():
        if prim.schema != SCHEMA_MESH:
            continue
        total = RigidTransform.identity()
        for body1, t in movers:
            if path == body1 or path.startswith(body1 + "/"):
                total = total.compose(t)
        mesh = _mesh_of_prim(prim)
        meshes[path] = TriMesh(total.apply(mesh.vertices), mesh.faces)
    return PosedScene(meshes=meshes, clamped=clamped)
