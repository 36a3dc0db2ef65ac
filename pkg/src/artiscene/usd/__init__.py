"""Hierarchical scene description: prim model, text format, assembly."""

from .assemble import assemble_stage, extract_object, sanitize_prim_name
from .emit import emit_usda
from .model import (
    ATTR_SPECS,
    JOINT_SCHEMAS,
    SCHEMA_FIXED,
    SCHEMA_MESH,
    SCHEMA_PRISMATIC,
    SCHEMA_REVOLUTE,
    SCHEMA_XFORM,
    SCHEMAS,
    JointSpec,
    Prim,
    PrimAttribute,
    UsdError,
    UsdStage,
    joint_spec_of,
    valid_prim_name,
    validate_stage,
)
from .parse import UsdaParseError, parse_usda

__all__ = [
    "ATTR_SPECS",
    "JOINT_SCHEMAS",
    "SCHEMA_FIXED",
    "SCHEMA_MESH",
    "SCHEMA_PRISMATIC",
    "SCHEMA_REVOLUTE",
    "SCHEMA_XFORM",
    "SCHEMAS",
    "JointSpec",
    "Prim",
    "PrimAttribute",
    "UsdError",
    "UsdStage",
    "UsdaParseError",
    "assemble_stage",
    "emit_usda",
    "extract_object",
    "joint_spec_of",
    "parse_usda",
    "sanitize_prim_name",
    "valid_prim_name",
    "validate_stage",
]
