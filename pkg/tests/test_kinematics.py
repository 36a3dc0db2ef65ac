import numpy as np
import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

from artiscene.annotation import Articulation
from artiscene.kinematics import (
    MODE_CLAMP,
    MODE_STRICT,
    JointRangeError,
    KinematicsError,
    check_range,
    joint_transform,
    pose_scene,
)
from artiscene.usd import assemble_stage

HINGE = Articulation(motion_type="rotation", axis=(0.0, 0.0, 1.0),
                     origin=(1.0, 0.0, 0.0), range=(0.0, 90.0))
SLIDE = Articulation(motion_type="translation", axis=(0.0, 1.0, 0.0),
                     range=(0.0, 0.5))

DOOR_JOINT = "/synthetic_0/cabinet_1/cabinet_1_body/cabinet_1_door_joint"
DRAWER_JOINT = "/synthetic_0/cabinet_1/cabinet_1_body/cabinet_1_drawer_joint"


def test_check_range_clamp():
    assert check_range(HINGE, 120.0) == 90.0
    assert check_range(HINGE, -5.0) == 0.0
    assert check_range(HINGE, 45.0) == 45.0


def test_check_range_strict():
    assert check_range(HINGE, 45.0, mode=MODE_STRICT) == 45.0
    with pytest.raises(JointRangeError):
        check_range(HINGE, 91.0, mode=MODE_STRICT)


def test_check_range_unknown_mode():
    with pytest.raises(KinematicsError):
        check_range(HINGE, 10.0, mode="fuzzy")


def test_rotation_transform_spins_about_the_line():
    t = joint_transform(HINGE, 90.0)
    moved = t.apply([[2.0, 0.0, 0.0]])
    assert np.allclose(moved, [[1.0, 1.0, 0.0]], atol=1e-12)
    # the hinge line itself stays put
    assert np.allclose(t.apply([[1.0, 0.0, 7.0]]), [[1.0, 0.0, 7.0]], atol=1e-12)


def test_translation_transform_slides_along_axis():
    t = joint_transform(SLIDE, 0.3)
    assert np.allclose(t.apply([[0.0, 0.0, 0.0]]), [[0.0, 0.3, 0.0]])
    assert np.allclose(t.rotation, np.eye(3))


@given(st.floats(-80.0, 80.0), st.floats(-80.0, 80.0))
@settings(max_examples=60, deadline=None)
def test_rotation_values_add(a, b):
    wide = Articulation(motion_type="rotation", axis=(0.0, 0.0, 1.0),
                        origin=(0.5, -0.5, 0.0), range=(-160.0, 160.0))
    combined = joint_transform(wide, a + b)
    stacked = joint_transform(wide, a).compose(joint_transform(wide, b))
    pts = np.array([[1.0, 2.0, 3.0], [-0.5, 0.1, 0.9]])
    assert np.allclose(combined.apply(pts), stacked.apply(pts), atol=1e-9)


def test_pose_scene_moves_door_and_handle(room):
    stage = assemble_stage(room.mesh, room.annotation)
    rest = pose_scene(stage, {})
    posed = pose_scene(stage, {DOOR_JOINT: 90.0})
    door_path = "/synthetic_0/cabinet_1/cabinet_1_body/cabinet_1_door"
    handle_path = f"{door_path}/cabinet_1_handle"
    assert not np.allclose(posed.meshes[door_path].vertices,
                           rest.meshes[door_path].vertices)
    assert not np.allclose(posed.meshes[handle_path].vertices,
                           rest.meshes[handle_path].vertices)
    body_path = "/synthetic_0/cabinet_1/cabinet_1_body"
    assert np.allclose(posed.meshes[body_path].vertices,
                       rest.meshes[body_path].vertices)


def test_pose_scene_preserves_door_handle_rigidity(room):
    stage = assemble_stage(room.mesh, room.annotation)
    rest = pose_scene(stage, {})
    posed = pose_scene(stage, {DOOR_JOINT: 63.0})
    door_path = "/synthetic_0/cabinet_1/cabinet_1_body/cabinet_1_door"
    handle_path = f"{door_path}/cabinet_1_handle"
    before = np.vstack([rest.meshes[door_path].vertices,
                        rest.meshes[handle_path].vertices])
    after = np.vstack([posed.meshes[door_path].vertices,
                       posed.meshes[handle_path].vertices])
    d_before = np.linalg.norm(before[:, None] - before[None, :], axis=-1)
    d_after = np.linalg.norm(after[:, None] - after[None, :], axis=-1)
    assert np.allclose(d_before, d_after, atol=1e-9)


def test_pose_scene_drawer_slides_in_y(room):
    stage = assemble_stage(room.mesh, room.annotation)
    rest = pose_scene(stage, {})
    posed = pose_scene(stage, {DRAWER_JOINT: 0.2})
    drawer = "/synthetic_0/cabinet_1/cabinet_1_body/cabinet_1_drawer"
    delta = posed.meshes[drawer].vertices - rest.meshes[drawer].vertices
    assert np.allclose(delta, [0.0, 0.2, 0.0])


def test_pose_scene_reports_clamps(room):
    stage = assemble_stage(room.mesh, room.annotation)
    posed = pose_scene(stage, {DOOR_JOINT: 170.0})
    assert posed.clamped == {DOOR_JOINT: (170.0, 110.0)}


def test_pose_scene_unknown_joint(room):
    stage = assemble_stage(room.mesh, room.annotation)
    with pytest.raises(KinematicsError):
        pose_scene(stage, {"/synthetic_0/nope": 1.0})


def test_pose_scene_covers_every_mesh(room):
    stage = assemble_stage(room.mesh, room.annotation)
    posed = pose_scene(stage, {})
    mesh_paths = {p for p, prim in stage.iter_prims() if prim.schema == "Mesh"}
    assert set(posed.meshes) == mesh_paths


def test_fixed_joint_carries_no_motion(room):
    stage = assemble_stage(room.mesh, room.annotation)
    with pytest.raises(KinematicsError):
        pose_scene(stage, {"/synthetic_0/light_1_fixture": 1.0})
