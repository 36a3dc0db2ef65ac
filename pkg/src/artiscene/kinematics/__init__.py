"""Motion application and geometric scene editing."""

from .joints import (
    MODE_CLAMP,
    MODE_STRICT,
    JointRangeError,
    KinematicsError,
    PosedScene,
    check_range,
    joint_transform,
    pose_scene,
)
from .placement import (
    SURFACE_HORIZONTAL,
    SURFACE_VERTICAL,
    SURFACES,
    HttpPlacementAdvisor,
    PlacementAdvice,
    PlacementError,
    PlacementRule,
    RuleBasedAdvisor,
    default_placement_rules,
    insert_object,
    load_placement_rules,
    rule_based_advisor,
)

__all__ = [
    "MODE_CLAMP",
    "MODE_STRICT",
    "HttpPlacementAdvisor",
    "JointRangeError",
    "KinematicsError",
    "PlacementAdvice",
    "PlacementError",
    "PlacementRule",
    "PosedScene",
    "RuleBasedAdvisor",
    "SURFACE_HORIZONTAL",
    "SURFACE_VERTICAL",
    "SURFACES",
    "check_range",
    "default_placement_rules",
    "insert_object",
    "joint_transform",
    "load_placement_rules",
    "pose_scene",
    "rule_based_advisor",
]
