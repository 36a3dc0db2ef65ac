from artiscene.annotation import (
    KIND_CYCLE,
    KIND_GAP,
    KIND_INTERACTABLE,
    KIND_MULTIPLE_ROOTS,
    KIND_ZERO_ROOTS,
    Articulation,
    ObjectInstance,
    PartSegment,
    SceneAnnotation,
    validate_connectivity,
)

HINGE = Articulation(motion_type="rotation", axis=(0, 0, 1),
                     origin=(0, 0, 0), range=(0, 90))


def part(pid, face, parent=None, **kw):
    return PartSegment(id=pid, label=pid, face_indices=(face,),
                       parent_part=parent, **kw)


def scene_of(*parts) -> SceneAnnotation:
    return SceneAnnotation(
        scene_id="s",
        objects=(ObjectInstance(id="obj", label="thing", parts=parts),),
    )


def kinds(scene) -> list[str]:
    return sorted(v.kind for v in validate_connectivity(scene).violations)


def test_clean_tree_passes():
    scene = scene_of(part("root", 0), part("a", 1, "root"), part("b", 2, "a"))
    report = validate_connectivity(scene)
    assert report.ok(strict=True)
    assert report.objects[0].depth == 3


def test_cycle_detected():
    scene = scene_of(part("root", 0), part("a", 1, "b"), part("b", 2, "a"))
    assert KIND_CYCLE in kinds(scene)


def test_self_parent_is_a_cycle():
    scene = scene_of(part("root", 0), part("a", 1, "a"))
    assert kinds(scene) == [KIND_CYCLE]


def test_gap_detected():
    scene = scene_of(part("root", 0), part("a", 1, "missing"))
    assert kinds(scene) == [KIND_GAP]


def test_multiple_roots_detected():
    scene = scene_of(part("r1", 0), part("r2", 1))
    assert kinds(scene) == [KIND_MULTIPLE_ROOTS]


def test_zero_roots_detected():
    scene = scene_of(part("a", 0, "b"), part("b", 1, "a"))
    report = validate_connectivity(scene)
    found = {v.kind for v in report.violations}
    assert KIND_ZERO_ROOTS in found


def test_interactable_target_must_be_movable():
    scene = scene_of(
        part("root", 0),
        part("panel", 1, "root"),
        part("knob", 2, "panel", role="interactable", interactable_for="panel"),
    )
    report = validate_connectivity(scene)
    assert [v.kind for v in report.violations] == [KIND_INTERACTABLE]
    # a dangling actuator is a warning, not a hard fault
    assert report.ok()
    assert not report.ok(strict=True)


def test_interactable_on_movable_is_clean():
    scene = scene_of(
        part("root", 0),
        part("door", 1, "root", role="movable", articulation=HINGE),
        part("knob", 2, "door", role="interactable", interactable_for="door"),
    )
    assert kinds(scene) == []


def test_single_part_object_is_clean():
    assert kinds(scene_of(part("only", 0))) == []


def test_empty_scene_is_clean():
    report = validate_connectivity(SceneAnnotation(scene_id="empty"))
    assert report.ok(strict=True)
    assert report.objects == ()


def test_faults_reported_per_object():
    scene = SceneAnnotation(
        scene_id="s",
        objects=(
            ObjectInstance(id="good", label="x", parts=(part("r", 0),)),
            ObjectInstance(id="bad", label="x",
                           parts=(part("r", 1), part("a", 2, "nope"))),
        ),
    )
    report = validate_connectivity(scene)
    by_id = {o.object_id: o for o in report.objects}
    assert by_id["good"].violations == ()
    assert [v.kind for v in by_id["bad"].violations] == [KIND_GAP]


def test_report_dict_counts():
    scene = scene_of(part("root", 0), part("a", 1, "b"), part("b", 2, "a"))
    doc = validate_connectivity(scene).to_dict()
    assert doc["hard_violation_count"] >= 1
    assert doc["warning_count"] == 0
