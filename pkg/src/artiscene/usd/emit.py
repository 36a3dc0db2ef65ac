"""Deterministic text serialization of a stage.

Reals are written with ``repr`` so each binary64 value survives parsing
unchanged; attribute and child order are preserved, making the output usable
for diffing and exact round trips.
"""

from __future__ import annotations

from .model import (
    TYPE_FLOAT,
    TYPE_INT_ARRAY,
    TYPE_POINT3,
    TYPE_POINT3_ARRAY,
    TYPE_REL,
    TYPE_STRING,
    TYPE_VECTOR3,
    Prim,
    PrimAttribute,
    UsdStage,
    validate_stage,
)

_ESCAPES = {"\\": "\\\\", '"': '\\"'}


def _quote(text: str) -> str:
    out = []
    for ch in text:
        if ch in _ESCAPES:
            out.append(_ESCAPES[ch])
        elif ch in ("\n", "\r", "\t") or ord(ch) < 0x20:
            raise ValueError(f"control character not representable in string: {ch!r}")
        else:
            out.append(ch)
    return '"' + "".join(out) + '"'


def _real(x: float) -> str:
    return repr(float(x))


def _tuple3(value) -> str:
    return "(" + ", ".join(_real(x) for x in value) + ")"


def _attr_value(attr: PrimAttribute) -> str:
    t = attr.type_name
    if t == TYPE_POINT3_ARRAY:
        return "[" + ", ".join(_tuple3(p) for p in attr.value) + "]"
    if t == TYPE_INT_ARRAY:
        return "[" + ", ".join(str(i) for i in attr.value) + "]"
    if t in (TYPE_VECTOR3, TYPE_POINT3):
        return _tuple3(attr.value)
    if t == TYPE_FLOAT:
        return _real(attr.value)
    if t == TYPE_STRING:
        return _quote(attr.value)
    if t == TYPE_REL:
        return f"<{attr.value}>"
    raise AssertionError(t)


def _emit_prim(prim: Prim, level: int, out: list[str]) -> None:
    pad = "    " * level
    out.append(f'{pad}def {prim.schema} "{prim.name}"')
    out.append(f"{pad}{{")
    inner = "    " * (level + 1)
    for name, attr in prim.attributes.items():
        prefix = "custom " if attr.custom else ""
        type_name = "rel" if attr.type_name == TYPE_REL else attr.type_name
        out.append(f"{inner}{prefix}{type_name} {name} = {_attr_value(attr)}")
    for child in prim.children:
        _emit_prim(child, level + 1, out)
    out.append(f"{pad}}}")


def emit_usda(stage: UsdStage) -> str:
    """Serialize a valid stage; the result parses back to an equal stage."""
    validate_stage(stage)
    out = ["#usda 1.0", "("]
    if stage.default_prim is not None:
        out.append(f'    defaultPrim = {_quote(stage.default_prim)}')
    out.append(f"    metersPerUnit = {stage.meters_per_unit}")
    out.append(f'    upAxis = {_quote(stage.up_axis)}')
    out.append(")")
    for prim in stage.root_prims:
        _emit_prim(prim, 0, out)
    return "\n".join(out) + "\n"
