"""Three-way part-relation accuracy for predicted connectivity graphs."""

from __future__ import annotations

from dataclasses import dataclass

from ..annotation.model import SceneAnnotation
from .instances import EvalError

REL_NONE = "no_relationship"
REL_PARENT = "parent_of"
REL_CHILD = "child_of"
RELATIONS = (REL_NONE, REL_PARENT, REL_CHILD)


def _flip(relation: str) -> str:
    if relation == REL_PARENT:
        return REL_CHILD
    if relation == REL_CHILD:
        return REL_PARENT
    return REL_NONE


@dataclass(frozen=True)
class ObjectConnectivity:
    """Relation of every unordered part pair within one object.

    Keys are canonicalized to (min_id, max_id); the stored relation reads
    left-to-right, so ("a", "b") -> parent_of means a is b's parent.
    """

    object_id: str
    relations: tuple[tuple[tuple[str, str], str], ...]

    def __post_init__(self):
        canon = []
        seen = set()
        for (a, b), rel in self.relations:
            if rel not in RELATIONS:
                raise EvalError(f"unknown relation {rel!r} for pair ({a!r}, {b!r})")
            if a == b:
                raise EvalError(f"pair ({a!r}, {a!r}) relates a part to itself")
            if a > b:
                a, b, rel = b, a, _flip(rel)
            if (a, b) in seen:
                raise EvalError(f"duplicate pair ({a!r}, {b!r}) in {self.object_id!r}")
            seen.add((a, b))
            canon.append(((a, b), rel))
        object.__setattr__(self, "relations", tuple(canon))

    def as_map(self) -> dict[tuple[str, str], str]:
        return dict(self.relations)


def connectivity_from_annotation(scene: SceneAnnotation) -> tuple[ObjectConnectivity, ...]:
    """Ground-truth graphs: direct parent links only, everything else is
    no_relationship."""
    out = []
    for obj in scene.objects:
        parent = {p.id: p.parent_part for p in obj.parts}
        ids = [p.id for p in obj.parts]
        rels = []
        for i in range(len(ids)):
            for j in range(i + 1, len(ids)):
                a, b = ids[i], ids[j]
                if parent[b] == a:
                    rel = REL_PARENT
                elif parent[a] == b:
                    rel = REL_CHILD
                else:
                    rel = REL_NONE
                rels.append(((a, b), rel))
        out.append(ObjectConnectivity(object_id=obj.id, relations=tuple(rels)))
    return tuple(out)


def connectivity_accuracy(preds, gts) -> tuple[float, float]:
    """(Acc_edge, Acc_obj) of predicted part relations against ground truth.

    Acc_edge counts pairs with the correct relation across all objects;
    Acc_obj counts objects whose every pair is correct. Predictions must
    cover every ground-truth pair.
    """
    pred_by_obj = {}
    for p in preds:
        if p.object_id in pred_by_obj:
            raise EvalError(f"duplicate prediction for object {p.object_id!r}")
        pred_by_obj[p.object_id] = p.as_map()

    total_pairs = 0
    correct_pairs = 0
    perfect_objects = 0
    n_objects = 0
    for gt in gts:
        n_objects += 1
        pred = pred_by_obj.get(gt.object_id)
        if pred is None:
            if gt.relations:
                missing = gt.relations[0][0]
                raise EvalError(
                    f"no prediction for object {gt.object_id!r} "
                    f"(missing pair {missing})"
                )
            pred = {}
        all_ok = True
        for pair, rel in gt.relations:
            if pair not in pred:
                raise EvalError(f"missing pair {pair} for object {gt.object_id!r}")
            total_pairs += 1
            if pred[pair] == rel:
                correct_pairs += 1
            else:
                all_ok = False
        if all_ok:
            perfect_objects += 1
    if n_objects == 0:
        raise EvalError("nothing to evaluate: no objects in ground truth")
    acc_edge = correct_pairs / total_pairs if total_pairs else 1.0
    acc_obj = perfect_objects / n_objects
    return acc_edge, acc_obj
