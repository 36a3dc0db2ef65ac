import numpy as np
import pytest

from artiscene.evaluation import (
    EvalConfig,
    EvalError,
    GtInstance,
    InstancePrediction,
    breakdown_records,
    breakdown_report,
    evaluate_instances,
    pool_scenes,
)

Z = (0.0, 0.0, 1.0)
Y = (0.0, 1.0, 0.0)


def pred(mask, conf=1.0, motion="rotation", axis=Z, origin=(0.0, 0.0, 0.0)):
    if motion == "translation":
        origin = None
    return InstancePrediction(mask=tuple(mask), confidence=conf,
                              motion_type=motion, axis=axis, origin=origin)


def gt(mask, motion="rotation", axis=Z, origin=(0.0, 0.0, 0.0), label=None):
    if motion == "translation":
        origin = None
    return GtInstance(mask=tuple(mask), motion_type=motion, axis=axis,
                      origin=origin, label=label)


def test_records_one_per_gt():
    gts = [gt((0, 1), label="door"), gt((2, 3, 4), motion="translation",
                                        axis=Y, label="drawer")]
    preds = [pred((0, 1))]
    recs = breakdown_records(preds, gts)
    assert len(recs) == 2
    by_label = {r.label: r for r in recs}
    assert by_label["door"].segmented
    assert by_label["door"].size == 2
    assert not by_label["drawer"].segmented
    assert not by_label["drawer"].with_axis


def test_record_gates_layer_on_match():
    off_axis = (np.sin(np.radians(16.0)), 0.0, np.cos(np.radians(16.0)))
    gts = [gt((0, 1))]
    recs = breakdown_records([pred((0, 1), axis=off_axis)], gts)
    (rec,) = recs
    assert rec.segmented and rec.with_origin and not rec.with_axis


def test_missing_label_reported_as_unlabeled():
    recs = breakdown_records([pred((0,))], [gt((0,))])
    assert recs[0].label == "(unlabeled)"


def test_size_buckets_cover_all_records():
    gts = [gt(range(n), label="x") for n in (2, 3, 4, 10, 20, 40)]
    report = breakdown_report(breakdown_records([], gts))
    counts = [row["count"] for row in report["by_size"]]
    assert sum(counts) == len(gts)
    assert len(report["by_size"]) == 3


def test_size_bucket_edges_are_quantiles():
    sizes = [2, 3, 4, 10, 20, 40]
    gts = [gt(range(n)) for n in sizes]
    report = breakdown_report(breakdown_records([], gts))
    cuts = np.quantile(np.array(sizes, float), [1 / 3, 2 / 3])
    rows = report["by_size"]
    assert rows[0]["max_points"] == pytest.approx(float(cuts[0]))
    assert rows[1]["max_points"] == pytest.approx(float(cuts[1]))
    assert rows[0]["min_points"] == 2.0
    assert rows[2]["max_points"] == 40.0


def test_empty_bucket_reports_none_metrics():
    # identical sizes: all quantile cuts coincide, later buckets go empty
    gts = [gt((0, 1)), gt((2, 3)), gt((4, 5))]
    report = breakdown_report(breakdown_records([], gts))
    rows = report["by_size"]
    assert rows[0]["count"] == 3
    assert rows[1]["count"] == 0 and rows[1]["segmentation"] is None
    assert rows[2]["count"] == 0


def test_label_fractions():
    gts = [gt((0, 1), label="door"), gt((2, 3), label="door"),
           gt((4, 5), label="lid")]
    preds = [pred((0, 1))]
    report = breakdown_report(breakdown_records(preds, gts))
    assert report["by_label"]["door"]["count"] == 2
    assert report["by_label"]["door"]["segmentation"] == pytest.approx(0.5)
    assert report["by_label"]["lid"]["segmentation"] == 0.0
    assert list(report["by_label"]) == sorted(report["by_label"])


def test_no_records_rejected():
    with pytest.raises(EvalError, match="no records"):
        breakdown_report([])


def test_evaluate_instances_report_shape(room):
    report = evaluate_instances(list(room.predictions),
                                list(room.gt_instances))
    assert report.ap == report.ap50 == report.ap25 == 1.0
    assert report.ap50_origin == report.ap50_axis == 1.0
    assert report.ap50_origin_axis == 1.0
    assert report.n_gt == len(room.gt_instances)
    assert report.missing_origin_predictions == 0
    assert set(report.per_class) == {"rotation", "translation"}
    doc = report.to_dict()
    assert doc["ap"] == 1.0
    assert "by_size" in doc["breakdown"] and "by_label" in doc["breakdown"]


def test_evaluate_per_class_counts(room):
    report = evaluate_instances(list(room.predictions),
                                list(room.gt_instances))
    assert report.per_class["rotation"]["n_gt"] == 1
    assert report.per_class["translation"]["n_gt"] == 1


def test_pool_scenes_keeps_masks_disjoint():
    scene_a = ([pred((0, 1))], [gt((0, 1))])
    scene_b = ([pred((0, 1))], [gt((0, 1))])
    preds, gts = pool_scenes([scene_a, scene_b])
    assert preds[0].mask == (0, 1)
    assert preds[1].mask == (2, 3)
    assert gts[1].mask == (2, 3)
    report = evaluate_instances(preds, gts)
    assert report.ap50 == 1.0
    assert report.n_gt == 2


def test_pool_scenes_offsets_by_max_index():
    scene_a = ([pred((7,))], [gt((0, 1, 7))])
    scene_b = ([], [gt((0,))])
    preds, gts = pool_scenes([scene_a, scene_b])
    assert gts[1].mask == (8,)
