import numpy as np
import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

from artiscene.usd import (
    SCHEMA_FIXED,
    SCHEMA_MESH,
    SCHEMA_REVOLUTE,
    SCHEMA_XFORM,
    Prim,
    UsdaParseError,
    UsdError,
    UsdStage,
    emit_usda,
    joint_spec_of,
    parse_usda,
    validate_stage,
)

from _stages import random_stage


def tri_mesh_prim(name: str = "part") -> Prim:
    prim = Prim(name, SCHEMA_MESH)
    prim.set("points", [(0.0, 0.0, 0.0), (1.0, 0.0, 0.0), (0.0, 1.0, 0.0)])
    prim.set("faceVertexCounts", [3])
    prim.set("faceVertexIndices", [0, 1, 2])
    return prim


def one_mesh_stage() -> UsdStage:
    root = Prim("scene", SCHEMA_XFORM)
    root.children.append(tri_mesh_prim())
    return UsdStage(root_prims=[root], default_prim="scene")


def test_empty_stage_emits_five_line_header():
    text = emit_usda(UsdStage(root_prims=[], default_prim=None))
    assert text.splitlines() == [
        "#usda 1.0",
        "(",
        "    metersPerUnit = 1",
        '    upAxis = "Z"',
        ")",
    ]


def test_default_prim_required_with_prims():
    root = Prim("scene", SCHEMA_XFORM)
    with pytest.raises(UsdError):
        validate_stage(UsdStage(root_prims=[root], default_prim=None))


def test_default_prim_forbidden_when_empty():
    with pytest.raises(UsdError):
        validate_stage(UsdStage(root_prims=[], default_prim="scene"))


def test_mesh_requires_triangles():
    prim = Prim("part", SCHEMA_MESH)
    prim.set("points", [(0.0, 0.0, 0.0), (1.0, 0.0, 0.0), (0.0, 1.0, 0.0),
                        (1.0, 1.0, 0.0)])
    prim.set("faceVertexCounts", [4])
    prim.set("faceVertexIndices", [0, 1, 2, 3])
    stage = UsdStage(root_prims=[prim], default_prim="part")
    with pytest.raises(UsdError, match="triangle"):
        validate_stage(stage)


def test_joint_bodies_must_differ():
    stage = one_mesh_stage()
    joint = Prim("hinge", SCHEMA_REVOLUTE)
    joint.set("artic:axis", (0.0, 0.0, 1.0))
    joint.set("artic:origin", (0.0, 0.0, 0.0))
    joint.set("physics:lowerLimit", 0.0)
    joint.set("physics:upperLimit", 90.0)
    joint.set("physics:body0", "/scene/part")
    joint.set("physics:body1", "/scene/part")
    stage.root_prims[0].children.append(joint)
    with pytest.raises(UsdError, match="bodies"):
        validate_stage(stage)


def test_joint_axis_must_be_unit():
    stage = one_mesh_stage()
    joint = Prim("hinge", SCHEMA_REVOLUTE)
    joint.set("artic:axis", (0.0, 0.0, 2.0))
    joint.set("artic:origin", (0.0, 0.0, 0.0))
    joint.set("physics:lowerLimit", 0.0)
    joint.set("physics:upperLimit", 90.0)
    joint.set("physics:body0", "/scene")
    joint.set("physics:body1", "/scene/part")
    stage.root_prims[0].children.append(joint)
    with pytest.raises(UsdError, match="unit"):
        validate_stage(stage)


def test_rel_target_must_exist():
    stage = one_mesh_stage()
    joint = Prim("pin", SCHEMA_FIXED)
    joint.set("physics:body0", "/scene/part")
    joint.set("physics:body1", "/scene/ghost")
    stage.root_prims[0].children.append(joint)
    with pytest.raises(UsdError, match="ghost"):
        validate_stage(stage)


def test_unknown_attribute_rejected():
    prim = Prim("scene", SCHEMA_XFORM)
    with pytest.raises(UsdError):
        prim.set("artic:banana", "yes")


def test_joint_spec_of_reads_fields():
    joint = Prim("hinge", SCHEMA_REVOLUTE)
    joint.set("artic:axis", (0.0, 0.0, 1.0))
    joint.set("artic:origin", (1.0, 2.0, 3.0))
    joint.set("physics:lowerLimit", -10.0)
    joint.set("physics:upperLimit", 80.0)
    joint.set("physics:body0", "/a")
    joint.set("physics:body1", "/b")
    spec = joint_spec_of(joint)
    assert spec.kind == "revolute"
    assert spec.origin == (1.0, 2.0, 3.0)
    assert spec.lower == -10.0
    assert spec.body1 == "/b"


def test_simple_stage_round_trip():
    stage = one_mesh_stage()
    text = emit_usda(stage)
    assert parse_usda(text) == stage
    assert emit_usda(parse_usda(text)) == text


def test_string_escapes_round_trip():
    root = Prim("scene", SCHEMA_XFORM)
    root.set("artic:label", 'say "hi" \\ bye')
    stage = UsdStage(root_prims=[root], default_prim="scene")
    assert parse_usda(emit_usda(stage)) == stage


def test_parse_reports_line_and_column():
    text = emit_usda(one_mesh_stage())
    broken = text.replace('def Mesh "part"', 'def Cube "part"')
    with pytest.raises(UsdaParseError) as err:
        parse_usda(broken)
    # header is 6 lines, the root def and "{" take two more
    assert err.value.line == 9
    assert err.value.column == 9


def test_parse_rejects_bad_indentation():
    text = emit_usda(one_mesh_stage())
    lines = text.splitlines()
    idx = next(i for i, l in enumerate(lines) if "points" in l)
    lines[idx] = " " + lines[idx]
    with pytest.raises(UsdaParseError):
        parse_usda("\n".join(lines) + "\n")


def test_parse_rejects_duplicate_siblings():
    root = Prim("scene", SCHEMA_XFORM)
    root.children.append(tri_mesh_prim("part"))
    root.children.append(tri_mesh_prim("part2"))
    text = emit_usda(UsdStage(root_prims=[root], default_prim="scene"))
    clashing = text.replace('"part2"', '"part"')
    with pytest.raises(UsdaParseError, match="duplicate") as err:
        parse_usda(clashing)
    # reported at the second def line, at its indent
    assert err.value.column == 5


def test_parse_rejects_trailing_garbage():
    text = emit_usda(one_mesh_stage())
    with pytest.raises(UsdaParseError):
        parse_usda(text + "stray\n")


def test_repr_reals_preserved_exactly():
    root = Prim("scene", SCHEMA_XFORM)
    root.set("physics:mass", 0.1 + 0.2)
    stage = UsdStage(root_prims=[root], default_prim="scene")
    back = parse_usda(emit_usda(stage))
    assert back.root_prims[0].get("physics:mass") == 0.1 + 0.2


@given(st.integers(0, 2**32 - 1))
@settings(max_examples=100, deadline=None)
def test_round_trip_random_stages(seed):
    stage = random_stage(seed)
    text = emit_usda(stage)
    back = parse_usda(text)
    assert back == stage
    assert emit_usda(back) == text


@given(st.integers(0, 2**32 - 1))
@settings(max_examples=50, deadline=None)
def test_emitted_indentation_is_multiples_of_four(seed):
    text = emit_usda(random_stage(seed))
    for line in text.splitlines():
        pad = len(line) - len(line.lstrip(" "))
        assert pad % 4 == 0
