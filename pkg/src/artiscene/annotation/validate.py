"""Connectivity validation for annotated scenes.

The validator never raises on bad scenes; every structural fault becomes a
typed violation in the report so a whole dataset can be swept and triaged.
Detected fault kinds, per object:

* ``cycle``: parts whose parent chain loops, including self-parenting
  (the degenerate double-parent declaration)
* ``gap``: a part whose parent id does not exist inside its object
* ``multiple_roots``: more than one part without a parent
* ``zero_roots``: every part claims a parent, so no tree root exists
* ``interactable_non_movable``: an interactable link whose target part is
  not movable
"""

from __future__ import annotations

from dataclasses import dataclass, field

from .model import ROLE_MOVABLE, SceneAnnotation

KIND_CYCLE = "cycle"
KIND_GAP = "gap"
KIND_MULTIPLE_ROOTS = "multiple_roots"
KIND_ZERO_ROOTS = "zero_roots"
KIND_INTERACTABLE = "interactable_non_movable"

HARD_KINDS = (KIND_CYCLE, KIND_GAP, KIND_MULTIPLE_ROOTS, KIND_ZERO_ROOTS)


@dataclass(frozen=True)
class Violation:
    object_id: str
    kind: str
    part_ids: tuple[str, ...]
    detail: str


@dataclass(frozen=True)
class ObjectReport:
    object_id: str
    depth: int
    violations: tuple[Violation, ...]


@dataclass(frozen=True)
class ValidationReport:
    objects: tuple[ObjectReport, ...] = ()

    @property
    def violations(self) -> tuple[Violation, ...]:
        return tuple(v for o in self.objects for v in o.violations)

    @property
    def hard_violations(self) -> tuple[Violation, ...]:
        return tuple(v for v in self.violations if v.kind in HARD_KINDS)

    @property
    def warnings(self) -> tuple[Violation, ...]:
        return tuple(v for v in self.violations if v.kind not in HARD_KINDS)

    def ok(self, strict: bool = False) -> bool:
        return not (self.violations if strict else self.hard_violations)

    def to_dict(self) -> dict:
        return {
            "objects": [
                {
                    "object_id": o.object_id,
                    "depth": o.depth,
                    "violations": [
                        {"kind": v.kind, "part_ids": list(v.part_ids), "detail": v.detail}
                        for v in o.violations
                    ],
                }
                for o in self.objects
            ],
            "hard_violation_count": len(self.hard_violations),
            "warning_count": len(self.warnings),
        }


def validate_connectivity(scene: SceneAnnotation) -> ValidationReport:
    """Check every object's part graph; reports faults instead of raising."""
    reports = []
    for obj in scene.objects:
        violations: list[Violation] = []
        parts = {part.id: part for part in obj.parts}
        children: dict[str, list[str]] = {pid: [] for pid in parts}
        roots = []
        gapped = []
        for part in obj.parts:
            if part.parent_part is None:
                roots.append(part.id)
            elif part.parent_part not in parts:
                gapped.append(part)
            else:
                children[part.parent_part].append(part.id)

        for part in gapped:
            violations.append(Violation(
                obj.id, KIND_GAP, (part.id,),
                f"part {part.id!r} names missing parent {part.parent_part!r}",
            ))

        if obj.parts and not roots:
            violations.append(Violation(
                obj.id, KIND_ZERO_ROOTS, tuple(sorted(parts)),
                f"object {obj.id!r} has no root part",
            ))
        elif len(roots) > 1:
            violations.append(Violation(
                obj.id, KIND_MULTIPLE_ROOTS, tuple(roots),
                f"object {obj.id!r} has {len(roots)} root parts",
            ))

        # walk parent chains; every part on a loop is reported exactly once
        state: dict[str, int] = {}  # 0 in progress, 1 done
        cycles: list[tuple[str, ...]] = []
        for start in parts:
            if start in state:
                continue
            chain = []
            node = start
            while node is not None and node in parts and node not in state:
                state[node] = 0
                chain.append(node)
                node = parts[node].parent_part
            if node is not None and node in parts and state.get(node) == 0:
                loop = chain[chain.index(node):]
                cycles.append(tuple(sorted(loop)))
            for seen in chain:
                state[seen] = 1
        for loop in sorted(cycles):
            violations.append(Violation(
                obj.id, KIND_CYCLE, loop,
                "parent chain loops through " + " -> ".join(loop),
            ))

        for part in obj.parts:
            if part.interactable_for is None:
                continue
            target = parts.get(part.interactable_for)
            if target is None or target.role != ROLE_MOVABLE:
                violations.append(Violation(
                    obj.id, KIND_INTERACTABLE, (part.id, part.interactable_for),
                    f"part {part.id!r} actuates {part.interactable_for!r}, "
                    "which is not a movable part",
                ))

        depth = 0
        stack = [(rid, 1) for rid in roots]
        visited = set()
        while stack:
            node, d = stack.pop()
            if node in visited:
                continue  # guard against mutually-parented pairs
            visited.add(node)
            depth = max(depth, d)
            for child in children.get(node, ()):
                stack.append((child, d + 1))

        reports.append(ObjectReport(obj.id, depth, tuple(violations)))
    return ValidationReport(tuple(reports))
