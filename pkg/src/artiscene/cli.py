"""The ``artiscene`` command line.

Batch entry points over the library: convert annotated meshes to scene
descriptions, validate and summarize annotation files, propose annotations,
pose scenes, insert objects, score predictions, and generate synthetic test
fixtures. Data goes to files or standard output; logs go to standard error.
All JSON output is pretty-printed with sorted keys so reruns diff cleanly.
"""

from __future__ import annotations

import argparse
import json
import logging
import sys
from concurrent.futures import ProcessPoolExecutor
from pathlib import Path

import numpy as np

from .annotation import (
    default_mass_table,
    estimate_mass,
    load_annotation,
    propose_fixtures,
    save_annotation,
    scene_stats,
    suggest_hinge_axis,
    suggest_slide_axis,
    validate_connectivity,
)
from .evaluation import (
    evaluate_instances,
    load_gt_instances,
    load_predictions,
    pool_scenes,
)
from .fixtures import write_fixture_files
from .geometry import (
    TriMesh,
    compute_aabb,
    load_ply,
    merge_meshes,
    save_ply,
    submesh,
)
from .kinematics import (
    HttpPlacementAdvisor,
    insert_object,
    pose_scene,
    rule_based_advisor,
)
from .usd import assemble_stage, emit_usda, parse_usda

log = logging.getLogger("artiscene")


def _write_json(doc, out_path: str | None) -> None:
    text = json.dumps(doc, indent=2, sort_keys=True) + "\n"
    if out_path is None or out_path == "-":
        sys.stdout.write(text)
    else:
        Path(out_path).write_text(text)


def _load_scene_inputs(mesh_path: str, annotation_path: str):
    mesh = load_ply(Path(mesh_path).read_bytes())
    annotation = load_annotation(Path(annotation_path).read_bytes(),
                                 n_faces=mesh.n_faces)
    return mesh, annotation


def cmd_convert(args) -> int:
    mesh, annotation = _load_scene_inputs(args.mesh, args.annotation)
    stage = assemble_stage(mesh, annotation)
    Path(args.out).write_text(emit_usda(stage))
    log.info("wrote %s", args.out)
    return 0


def _validate_one(path: str) -> dict:
    annotation = load_annotation(Path(path).read_bytes())
    report = validate_connectivity(annotation)
    doc = report.to_dict()
    doc["file"] = path
    doc["scene_id"] = annotation.scene_id
    return doc


def cmd_validate(args) -> int:
    if args.jobs > 1 and len(args.annotation) > 1:
        with ProcessPoolExecutor(max_workers=args.jobs) as pool:
            reports = list(pool.map(_validate_one, args.annotation))
    else:
        reports = [_validate_one(path) for path in args.annotation]
    failed = [
        r for r in reports
        if r["hard_violation_count"] or (args.strict and r["warning_count"])
    ]
    doc = {"ok": not failed, "scenes": reports, "strict": args.strict}
    _write_json(doc, args.out)
    for r in failed:
        log.error("%s: %d hard violation(s), %d warning(s)", r["file"],
                  r["hard_violation_count"], r["warning_count"])
    return 1 if failed else 0


def _part_mesh(mesh: TriMesh, part) -> TriMesh:
    return submesh(mesh, np.asarray(part.face_indices, dtype=np.int64))


def _find_part(annotation, part_id: str):
    for obj in annotation.objects:
        for part in obj.parts:
            if part.id == part_id:
                return obj, part
    raise SystemExit(f"error: no part with id {part_id!r}")


def cmd_suggest(args) -> int:
    mesh, annotation = _load_scene_inputs(args.mesh, args.annotation)
    table = default_mass_table()

    masses = {}
    for obj in annotation.objects:
        if obj.label not in table:
            continue
        faces = sorted({f for part in obj.parts for f in part.face_indices})
        if not faces:
            continue
        box = compute_aabb(submesh(mesh, np.asarray(faces, np.int64)).vertices)
        volume = box.volume()
        if volume > 0.0:
            masses[obj.id] = estimate_mass(obj.label, volume, table)

    fixtures = [
        {"id": f.id, "attached_to": f.attached_to,
         "attachment_point": list(f.attachment_point)}
        for f in propose_fixtures(annotation, mesh)
    ]

    hinges = {}
    for part_id in args.hinge:
        obj, part = _find_part(annotation, part_id)
        base_id = part.parent_part
        if base_id is None:
            raise SystemExit(
                f"error: part {part_id!r} has no parent to hinge against"
            )
        base = obj.part_by_id(base_id)
        s = suggest_hinge_axis(_part_mesh(mesh, part), _part_mesh(mesh, base))
        hinges[part_id] = {
            "axis": list(s.axis), "origin": list(s.origin),
            "low_confidence": s.low_confidence,
        }

    slides = {}
    for part_id in args.slide:
        _, part = _find_part(annotation, part_id)
        slides[part_id] = suggest_slide_axis(_part_mesh(mesh, part)).tolist()

    doc = {"masses": masses, "fixtures": fixtures,
           "hinges": hinges, "slides": slides}
    _write_json(doc, args.out)
    return 0


def cmd_stats(args) -> int:
    if args.mesh is not None and len(args.annotation) != 1:
        raise SystemExit("error: --mesh needs exactly one annotation file")
    scenes = []
    for path in args.annotation:
        mesh = None
        if args.mesh is not None:
            mesh = load_ply(Path(args.mesh).read_bytes())
        annotation = load_annotation(
            Path(path).read_bytes(),
            n_faces=mesh.n_faces if mesh is not None else None,
        )
        entry = scene_stats(annotation, mesh).to_dict()
        entry["file"] = path
        entry["scene_id"] = annotation.scene_id
        scenes.append(entry)
    _write_json({"n_scenes": len(scenes), "scenes": scenes}, args.out)
    return 0


def _parse_joint_settings(pairs: list[str]) -> dict[str, float]:
    state = {}
    for spec in pairs:
        path, sep, value = spec.rpartition("=")
        if not sep or not path:
            raise SystemExit(f"error: --set expects JOINT=VALUE, got {spec!r}")
        state[path] = float(value)
    return state


def cmd_animate(args) -> int:
    stage = parse_usda(Path(args.stage).read_text())
    state = _parse_joint_settings(args.set)
    posed = pose_scene(stage, state)
    if posed.clamped:
        for path, (requested, applied) in sorted(posed.clamped.items()):
            log.warning("clamped %s: %g -> %g", path, requested, applied)
        if args.strict:
            log.error("%d joint value(s) out of range", len(posed.clamped))
            return 1
    merged = merge_meshes(mesh for _, mesh in sorted(posed.meshes.items()))
    Path(args.out).write_bytes(save_ply(merged))
    log.info("wrote %s", args.out)
    return 0


def cmd_edit(args) -> int:
    mesh, annotation = _load_scene_inputs(args.mesh, args.annotation)
    obj = load_ply(Path(args.object).read_bytes())
    scene_labels = sorted({o.label for o in annotation.objects})
    if args.advisor_url:
        advisor = HttpPlacementAdvisor(args.advisor_url,
                                       fallback=rule_based_advisor)
    else:
        advisor = rule_based_advisor
    advice = advisor(args.label, scene_labels)
    log.info("placing %r on the %s surface of %r", args.label,
             advice.surface, advice.target_label)
    new_mesh, new_annotation = insert_object(
        mesh, annotation, obj, advice, args.seed, object_label=args.label,
    )
    Path(args.out_mesh).write_bytes(save_ply(new_mesh))
    Path(args.out_annotation).write_bytes(save_annotation(new_annotation))
    log.info("wrote %s and %s", args.out_mesh, args.out_annotation)
    return 0


def cmd_eval(args) -> int:
    if len(args.pred) != len(args.gt):
        raise SystemExit("error: need one --pred per --gt")
    pairs = []
    for pred_path, gt_path in zip(args.pred, args.gt):
        pred_id, preds = load_predictions(Path(pred_path).read_text())
        gt_id, gts = load_gt_instances(Path(gt_path).read_text())
        if pred_id != gt_id:
            raise SystemExit(
                f"error: scene mismatch: {pred_path} is {pred_id!r} "
                f"but {gt_path} is {gt_id!r}"
            )
        pairs.append((list(preds), list(gts)))
    if len(pairs) == 1:
        preds, gts = pairs[0]
    else:
        preds, gts = pool_scenes(pairs)
    report = evaluate_instances(preds, gts)
    _write_json(report.to_dict(), args.out)
    return 0


def cmd_gen_fixture(args) -> int:
    paths = write_fixture_files(args.out_dir, seed=args.seed)
    _write_json({"seed": args.seed, "files": paths}, None)
    return 0


def build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(
        prog="artiscene",
        description="Annotated indoor scenes to articulated scene descriptions.",
    )
    sub = parser.add_subparsers(dest="command", required=True)

    p = sub.add_parser("convert", help="mesh + annotation to a .usda stage")
    p.add_argument("mesh", help="scene mesh (.ply)")
    p.add_argument("annotation", help="scene annotation (.json)")
    p.add_argument("-o", "--out", required=True, help="output .usda path")
    p.set_defaults(func=cmd_convert)

    p = sub.add_parser("validate", help="check annotation part connectivity")
    p.add_argument("annotation", nargs="+", help="annotation files (.json)")
    p.add_argument("-o", "--out", default=None, help="report path (default stdout)")
    p.add_argument("--jobs", type=int, default=1, help="parallel workers")
    p.add_argument("--strict", action="store_true",
                   help="fail on warnings, not just hard violations")
    p.set_defaults(func=cmd_validate)

    p = sub.add_parser("suggest", help="propose masses, fixtures, and axes")
    p.add_argument("mesh", help="scene mesh (.ply)")
    p.add_argument("annotation", help="scene annotation (.json)")
    p.add_argument("-o", "--out", default=None, help="output path (default stdout)")
    p.add_argument("--hinge", action="append", default=[], metavar="PART_ID",
                   help="suggest a hinge axis for this part (repeatable)")
    p.add_argument("--slide", action="append", default=[], metavar="PART_ID",
                   help="suggest a slide axis for this part (repeatable)")
    p.set_defaults(func=cmd_suggest)

    p = sub.add_parser("stats", help="summarize annotation files")
    p.add_argument("annotation", nargs="+", help="annotation files (.json)")
    p.add_argument("--mesh", default=None,
                   help="scene mesh for coverage stats (single scene only)")
    p.add_argument("-o", "--out", default=None, help="output path (default stdout)")
    p.set_defaults(func=cmd_stats)

    p = sub.add_parser("animate", help="pose joints and export the moved mesh")
    p.add_argument("stage", help="scene stage (.usda)")
    p.add_argument("--set", action="append", default=[], metavar="JOINT=VALUE",
                   help="joint prim path = value (degrees or meters, repeatable)")
    p.add_argument("-o", "--out", required=True, help="output .ply path")
    p.add_argument("--strict", action="store_true",
                   help="fail when a value lands outside the joint range")
    p.set_defaults(func=cmd_animate)

    p = sub.add_parser("edit", help="insert an object mesh into a scene")
    p.add_argument("mesh", help="scene mesh (.ply)")
    p.add_argument("annotation", help="scene annotation (.json)")
    p.add_argument("object", help="object mesh to insert (.ply)")
    p.add_argument("--label", required=True, help="object label, drives placement")
    p.add_argument("--advisor-url", default=None,
                   help="placement advice service (falls back to the rule table)")
    p.add_argument("--seed", type=int, default=0, help="plane-fit seed")
    p.add_argument("--out-mesh", required=True, help="merged mesh output (.ply)")
    p.add_argument("--out-annotation", required=True,
                   help="updated annotation output (.json)")
    p.set_defaults(func=cmd_edit)

    p = sub.add_parser("eval", help="score predictions against ground truth")
    p.add_argument("--pred", action="append", required=True,
                   help="prediction file (repeat per scene)")
    p.add_argument("--gt", action="append", required=True,
                   help="ground-truth file (repeat per scene)")
    p.add_argument("-o", "--out", default=None, help="report path (default stdout)")
    p.set_defaults(func=cmd_eval)

    p = sub.add_parser("gen-fixture", help="write a synthetic scene with GT")
    p.add_argument("-o", "--out-dir", required=True, help="output directory")
    p.add_argument("--seed", type=int, default=0, help="scene seed")
    p.set_defaults(func=cmd_gen_fixture)

    return parser


def main(argv: list[str] | None = None) -> int:
    logging.basicConfig(stream=sys.stderr, level=logging.INFO,
                        format="%(levelname)s %(message)s")
    args = build_parser().parse_args(argv)
    try:
        return args.func(args)
    except (ValueError, OSError) as exc:
        log.error("%s", exc)
        return 1


if __name__ == "__main__":
    sys.exit(main())
