import numpy as np
import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

from artiscene.fixtures import cube_mesh, grid_patch
from artiscene.geometry import TriMesh
from artiscene.segmentation import (
    MeshGraph,
    SegmentationError,
    SegmentMap,
    build_mesh_graph,
    felzenszwalb,
    load_segment_map,
    match_segmentations,
    save_segment_map,
)


def test_graph_from_flat_grid_has_zero_weights():
    verts, faces = grid_patch(0.0, 1.0, 0.0, 1.0, 0.0, 3, 3)
    graph = build_mesh_graph(TriMesh(verts, faces))
    assert graph.n_faces == 18
    # coplanar faces disagree in nothing
    assert graph.weights.max() < 1e-12


def test_cube_graph_edge_weights_split_by_crease():
    graph = build_mesh_graph(cube_mesh(2))
    w = np.sort(graph.weights)
    # in-face edges are flat, cross-face edges sit on 90 degree creases
    assert w[0] < 1e-12
    assert w[-1] == pytest.approx(0.5)


def test_cube_segments_into_six_faces():
    seg = felzenszwalb(build_mesh_graph(cube_mesh(3)), k=0.1)
    assert seg.n_segments == 6
    labels = seg.labels
    # each segment covers one cube face: equal sizes
    sizes = np.bincount(labels)
    assert (sizes == sizes[0]).all()


def test_huge_k_merges_everything():
    seg = felzenszwalb(build_mesh_graph(cube_mesh(3)), k=1e9)
    assert seg.n_segments == 1


def test_min_size_absorbs_small_components():
    graph = build_mesh_graph(cube_mesh(2))
    seg = felzenszwalb(graph, k=1e-6, min_size=8)
    sizes = np.bincount(seg.labels)
    assert sizes.min() >= 8


def test_segment_count_non_increasing_in_k():
    graph = build_mesh_graph(cube_mesh(3))
    counts = [felzenszwalb(graph, k=k).n_segments
              for k in (0.01, 0.1, 0.3, 1.0, 3.0, 10.0)]
    assert counts == sorted(counts, reverse=True)


def test_felzenszwalb_deterministic():
    graph = build_mesh_graph(cube_mesh(3))
    a = felzenszwalb(graph, k=0.1)
    b = felzenszwalb(graph, k=0.1)
    assert a == b


def test_segment_map_requires_contiguous_ids():
    with pytest.raises(SegmentationError):
        SegmentMap(np.array([0, 2]))


def test_segment_map_round_trip():
    seg = felzenszwalb(build_mesh_graph(cube_mesh(2)), k=0.1)
    assert load_segment_map(save_segment_map(seg)) == seg


def test_match_segmentations_identity():
    seg = felzenszwalb(build_mesh_graph(cube_mesh(2)), k=0.1)
    pairs, score = match_segmentations(seg, seg)
    assert score == pytest.approx(1.0)
    assert all(iou == pytest.approx(1.0) for _, _, iou in pairs)


def test_match_segmentations_disagreement():
    a = SegmentMap(np.array([0, 0, 1, 1]))
    b = SegmentMap(np.array([0, 1, 1, 1]))
    _, score = match_segmentations(a, b)
    assert 0.0 < score < 1.0


def test_graph_rejects_self_edges():
    with pytest.raises(SegmentationError):
        MeshGraph(n_faces=2, edges=np.array([[1, 1]]), weights=np.array([0.0]))


@given(st.integers(0, 10**6))
@settings(max_examples=20, deadline=None)
def test_labels_cover_all_faces(seed):
    rng = np.random.default_rng(seed)
    k = float(rng.uniform(0.01, 10.0))
    graph = build_mesh_graph(cube_mesh(2))
    seg = felzenszwalb(graph, k=k)
    assert len(seg.labels) == graph.n_faces
    assert seg.n_segments >= 1
