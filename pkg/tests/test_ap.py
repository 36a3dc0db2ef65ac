import numpy as np
import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

from artiscene.evaluation import (
    MODE_AXIS,
    MODE_ORIGIN,
    MODE_ORIGIN_AXIS,
    EvalConfig,
    EvalError,
    GtInstance,
    InstancePrediction,
    articulated_ap,
    average_precision,
    axis_gate,
    confidence_order,
    count_missing_origins,
    mask_iou,
    match_instances,
    origin_gate,
)

from _oracles import oracle_band_ap, oracle_mean_ap

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


def test_mask_iou_half():
    assert mask_iou((1, 2, 3), (2, 3, 4)) == pytest.approx(0.5)


def test_mask_iou_disjoint():
    assert mask_iou((1, 2), (3, 4)) == 0.0


def test_confidence_order_breaks_ties_by_index():
    preds = [pred((1,), conf=0.5), pred((2,), conf=0.9), pred((3,), conf=0.5)]
    assert confidence_order(preds) == [1, 0, 2]


def test_match_prefers_higher_iou():
    preds = [pred((1, 2, 3, 4))]
    gts = [gt((1, 2)), gt((1, 2, 3, 4, 5))]
    m = match_instances(preds, gts, 0.25)
    assert m.pairs == ((0, 1),)


def test_match_respects_motion_type():
    preds = [pred((1, 2), motion="rotation")]
    gts = [gt((1, 2), motion="translation", axis=Y)]
    m = match_instances(preds, gts, 0.5)
    assert m.pairs == ()
    assert m.unmatched_preds == (0,)
    assert m.unmatched_gts == (0,)


def test_match_consumes_gt_once():
    preds = [pred((1, 2), conf=0.9), pred((1, 2), conf=0.8)]
    gts = [gt((1, 2))]
    m = match_instances(preds, gts, 0.5)
    assert m.pairs == ((0, 0),)
    assert m.unmatched_preds == (1,)


def test_perfect_predictions_score_one(room):
    ap, ap50, ap25 = average_precision(list(room.predictions),
                                       list(room.gt_instances))
    assert (ap, ap50, ap25) == (1.0, 1.0, 1.0)


def test_single_missed_gt_gives_51_of_101():
    gts = [gt((0, 1)), gt((2, 3))]
    preds = [pred((0, 1))]
    _, ap50, _ = average_precision(preds, gts)
    assert ap50 == pytest.approx(51.0 / 101.0)


def test_low_iou_passes_only_loose_threshold():
    gts = [gt(range(10))]
    preds = [pred(range(4))]  # IoU 0.4
    _, ap50, ap25 = average_precision(preds, gts)
    assert ap50 == 0.0
    assert ap25 == 1.0


def test_axis_gate_at_fifteen_degrees():
    config = EvalConfig()
    axis14 = (np.sin(np.radians(14.0)), 0.0, np.cos(np.radians(14.0)))
    axis16 = (np.sin(np.radians(16.0)), 0.0, np.cos(np.radians(16.0)))
    g = gt((0,))
    assert axis_gate(pred((0,), axis=axis14), g, config)
    assert not axis_gate(pred((0,), axis=axis16), g, config)


def test_axis_gate_sign_invariance_default():
    g = gt((0,))
    flipped = pred((0,), axis=(0.0, 0.0, -1.0))
    assert axis_gate(flipped, g, EvalConfig())
    assert not axis_gate(flipped, g, EvalConfig(axis_sign_invariant=False))


def test_origin_gate_at_quarter_meter():
    config = EvalConfig()
    g = gt((0,))
    ok, _ = origin_gate(pred((0,), origin=(0.24, 0.0, 0.0)), g, config)
    assert ok
    ok, _ = origin_gate(pred((0,), origin=(0.26, 0.0, 0.0)), g, config)
    assert not ok


def test_origin_gate_measures_distance_to_axis_line():
    g = gt((0,))
    # offset purely along the rotation axis is free
    ok, _ = origin_gate(pred((0,), origin=(0.0, 0.0, 5.0)), g, EvalConfig())
    assert ok


def test_origin_gate_ignores_translations():
    g = gt((0,), motion="translation", axis=Y)
    p = pred((0,), motion="translation", axis=Y)
    ok, used_missing = origin_gate(p, g, EvalConfig())
    assert ok and not used_missing


def test_missing_origin_counts_and_demotes():
    gts = [gt((0, 1))]
    preds = [InstancePrediction(mask=(0, 1), confidence=1.0,
                                motion_type="rotation", axis=Z, origin=None)]
    assert count_missing_origins(preds, gts) == 1
    assert articulated_ap(preds, gts, MODE_ORIGIN) == 0.0
    # the axis-only gate does not need origins
    assert articulated_ap(preds, gts, MODE_AXIS) == 1.0


def test_articulated_modes_demote_but_consume():
    gts = [gt((0, 1))]
    off_axis = (np.sin(np.radians(16.0)), 0.0, np.cos(np.radians(16.0)))
    preds = [pred((0, 1), conf=0.9, axis=off_axis), pred((0, 1), conf=0.5)]
    # the bad-axis prediction eats the only GT; the good one has nothing left
    assert articulated_ap(preds, gts, MODE_AXIS) == 0.0
    assert articulated_ap(preds, gts, MODE_ORIGIN) == 1.0


def test_hierarchy_on_gated_predictions():
    gts = [gt((0, 1)), gt((2, 3), motion="translation", axis=Y)]
    off_axis = (np.sin(np.radians(16.0)), 0.0, np.cos(np.radians(16.0)))
    preds = [pred((0, 1), conf=0.9, origin=(0.3, 0.0, 0.0)),
             pred((2, 3), conf=0.8, motion="translation", axis=off_axis)]
    plain, _, _ = average_precision(preds, gts)
    for mode in (MODE_ORIGIN, MODE_AXIS, MODE_ORIGIN_AXIS):
        assert articulated_ap(preds, gts, mode) <= 1.0
    both = articulated_ap(preds, gts, MODE_ORIGIN_AXIS)
    assert both <= articulated_ap(preds, gts, MODE_ORIGIN)
    assert both <= articulated_ap(preds, gts, MODE_AXIS)


def test_empty_gt_rejected():
    with pytest.raises(EvalError):
        average_precision([pred((0,))], [])


def test_config_validation():
    with pytest.raises(EvalError):
        EvalConfig(iou_thresholds=())
    with pytest.raises(EvalError):
        EvalConfig(origin_dist_threshold=-1.0)


def _random_case(rng, n_points=10, max_preds=4, max_gts=3):
    def mask():
        size = int(rng.integers(1, n_points + 1))
        return tuple(sorted(int(i) for i in
                            rng.choice(n_points, size, replace=False)))

    def axis():
        v = rng.normal(0, 1, 3)
        while np.linalg.norm(v) < 1e-3:
            v = rng.normal(0, 1, 3)
        return tuple(float(x) for x in v / np.linalg.norm(v))

    gts = []
    pool = list(range(n_points))
    rng.shuffle(pool)
    start = 0
    for _ in range(int(rng.integers(1, max_gts + 1))):
        size = int(rng.integers(1, 4))
        if start + size > n_points:
            break
        motion = "rotation" if rng.random() < 0.5 else "translation"
        chunk = tuple(sorted(pool[start:start + size]))
        start += size
        gts.append(gt(chunk, motion=motion, axis=axis(),
                      origin=tuple(rng.normal(0, 0.3, 3)) if motion == "rotation" else None))
    preds = []
    for _ in range(int(rng.integers(0, max_preds + 1))):
        motion = "rotation" if rng.random() < 0.5 else "translation"
        origin = None
        if motion == "rotation" and rng.random() < 0.85:
            origin = tuple(rng.normal(0, 0.3, 3))
        preds.append(InstancePrediction(
            mask=mask(), confidence=float(rng.uniform(0, 1)),
            motion_type=motion, axis=axis(), origin=origin))
    return preds, gts


@given(st.integers(0, 2**32 - 1))
@settings(max_examples=60, deadline=None)
def test_ap_matches_oracle_on_random_cases(seed):
    rng = np.random.default_rng(seed)
    preds, gts = _random_case(rng)
    config = EvalConfig()
    ap, ap50, ap25 = average_precision(preds, gts, config)
    assert ap == pytest.approx(
        oracle_band_ap(preds, gts, config.iou_thresholds), abs=1e-9)
    assert ap50 == pytest.approx(oracle_mean_ap(preds, gts, 0.50), abs=1e-9)
    assert ap25 == pytest.approx(oracle_mean_ap(preds, gts, 0.25), abs=1e-9)


@given(st.integers(0, 2**32 - 1))
@settings(max_examples=60, deadline=None)
def test_articulated_ap_matches_oracle(seed):
    rng = np.random.default_rng(seed)
    preds, gts = _random_case(rng)
    config = EvalConfig()
    for mode, gates in ((MODE_ORIGIN, dict(check_origin=True)),
                        (MODE_AXIS, dict(check_axis=True)),
                        (MODE_ORIGIN_AXIS, dict(check_origin=True,
                                                check_axis=True))):
        got = articulated_ap(preds, gts, mode, config)
        want = oracle_mean_ap(preds, gts, 0.50, **gates)
        assert got == pytest.approx(want, abs=1e-9), mode


@given(st.integers(0, 2**32 - 1))
@settings(max_examples=60, deadline=None)
def test_gate_hierarchy_holds(seed):
    rng = np.random.default_rng(seed)
    preds, gts = _random_case(rng)
    _, ap50, _ = average_precision(preds, gts)
    with_origin = articulated_ap(preds, gts, MODE_ORIGIN)
    with_axis = articulated_ap(preds, gts, MODE_AXIS)
    with_both = articulated_ap(preds, gts, MODE_ORIGIN_AXIS)
    assert with_origin <= ap50 + 1e-12
    assert with_axis <= ap50 + 1e-12
    assert with_both <= with_origin + 1e-12
    assert with_both <= with_axis + 1e-12
