"""Scene annotation model, proposal heuristics, validation and statistics."""

from .model import (
    MOTION_ROTATION,
    MOTION_TRANSLATION,
    MOTION_TYPES,
    ROLE_FIXED,
    ROLE_INTERACTABLE,
    ROLE_MOVABLE,
    ROLE_NONE,
    ROLES,
    AnnotationError,
    Articulation,
    Fixture,
    MassTable,
    ObjectInstance,
    PartSegment,
    SceneAnnotation,
    default_mass_table,
    load_annotation,
    load_mass_table,
    save_annotation,
)
from .stats import SceneStats, center_shift_field, scene_stats
from .suggest import (
    DEFAULT_FIXTURE_LABELS,
    STRUCTURAL_ANCHOR_LABELS,
    HingeSuggestion,
    SuggestionError,
    estimate_mass,
    propose_fixtures,
    suggest_hinge_axis,
    suggest_slide_axis,
)
from .validate import (
    HARD_KINDS,
    KIND_CYCLE,
    KIND_GAP,
    KIND_INTERACTABLE,
    KIND_MULTIPLE_ROOTS,
    KIND_ZERO_ROOTS,
    ObjectReport,
    ValidationReport,
    Violation,
    validate_connectivity,
)

__all__ = [
    "AnnotationError",
    "Articulation",
    "DEFAULT_FIXTURE_LABELS",
    "Fixture",
    "HARD_KINDS",
    "HingeSuggestion",
    "KIND_CYCLE",
    "KIND_GAP",
    "KIND_INTERACTABLE",
    "KIND_MULTIPLE_ROOTS",
    "KIND_ZERO_ROOTS",
    "MOTION_ROTATION",
    "MOTION_TRANSLATION",
    "MOTION_TYPES",
    "MassTable",
    "ObjectInstance",
    "ObjectReport",
    "PartSegment",
    "ROLES",
    "ROLE_FIXED",
    "ROLE_INTERACTABLE",
    "ROLE_MOVABLE",
    "ROLE_NONE",
    "STRUCTURAL_ANCHOR_LABELS",
    "SceneAnnotation",
    "SceneStats",
    "SuggestionError",
    "ValidationReport",
    "Violation",
    "center_shift_field",
    "default_mass_table",
    "estimate_mass",
    "load_annotation",
    "load_mass_table",
    "propose_fixtures",
    "save_annotation",
    "scene_stats",
    "suggest_hinge_axis",
    "suggest_slide_axis",
    "validate_connectivity",
]
