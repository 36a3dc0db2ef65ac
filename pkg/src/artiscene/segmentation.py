"""Graph-based mesh oversegmentation and segmentation agreement.

Faces are graph nodes; faces that share an edge are connected with a weight
mixing normal disagreement and face-color distance. Components are grown with
the classic union-find predicate: an edge merges two components when its
weight is at most min(Int(C) + k / |C|) over both sides, followed by a pass
that absorbs undersized components into their lowest-weight neighbor.
"""

from __future__ import annotations

from dataclasses import dataclass

import numpy as np

from .geometry import GeometryError, TriMesh, face_normals


class SegmentationError(ValueError):
    pass


@dataclass(frozen=True, eq=False)
class MeshGraph:
    """Face-adjacency graph: edges (E, 2) int64 with weights (E,) float64."""

    n_faces: int
    edges: np.ndarray
    weights: np.ndarray

    def __post_init__(self):
        edges = np.asarray(self.edges, dtype=np.int64).reshape(-1, 2)
        weights = np.asarray(self.weights, dtype=np.float64).reshape(-1)
        if len(edges) != len(weights):
            raise SegmentationError("edges and weights must have equal length")
        if len(edges) and (edges.min() < 0 or edges.max() >= self.n_faces):
            raise SegmentationError("edge endpoint out of range")
        if len(edges) and (edges[:, 0] == edges[:, 1]).any():
            raise SegmentationError("self-edges are not allowed")
        if len(weights) and (weights.min() < 0.0 or not np.all(np.isfinite(weights))):
            raise SegmentationError("weights must be finite and non-negative")
        edges.setflags(write=False)
        weights.setflags(write=False)
        object.__setattr__(self, "edges", edges)
        object.__setattr__(self, "weights", weights)

    @property
    def n_edges(self) -> int:
        return len(self.edges)


@dataclass(frozen=True, eq=False)
class SegmentMap:
    """Per-face segment labels, contiguous ids 0..n_segments-1."""

    labels: np.ndarray

    def __post_init__(self):
        labels = np.asarray(self.labels, dtype=np.int64).reshape(-1)
        if len(labels):
            present = np.unique(labels)
            expected = np.arange(len(present))
            if present[0] != 0 or not np.array_equal(present, expected):
                raise SegmentationError("segment ids must be contiguous from 0")
        labels.setflags(write=False)
        object.__setattr__(self, "labels", labels)

    @property
    def n_segments(self) -> int:
        return int(self.labels.max()) + 1 if len(self.labels) else 0

    def faces_of(self, segment: int) -> np.ndarray:
        return np.nonzero(self.labels == segment)[0]

    def __eq__(self, other):
        if not isinstance(other, SegmentMap):
            return NotImplemented
        return np.array_equal(self.labels, other.labels)


@dataclass(frozen=True)
class SegmentationPreset:
    k: float
    min_size: int


# Granularity presets for interactive annotation: the coarse graph carves a
# scene into object-scale chunks, the fine one leaves near-raw faces.
COARSE_PRESET = SegmentationPreset(k=50.0, min_size=20)
FINE_PRESET = SegmentationPreset(k=2.0, min_size=1)


def build_mesh_graph(mesh: TriMesh, alpha_normal: float = 1.0,
                     alpha_color: float = 0.5) -> MeshGraph:
    """Face-adjacency graph over ``mesh``.

    Edge weight = alpha_normal * (1 - n_a . n_b) / 2
                + alpha_color * ||c_a - c_b|| / sqrt(3)

    where c is the mean vertex color of a face. The color term is dropped for
    meshes without colors.
    """
    if alpha_normal < 0.0 or alpha_color < 0.0:
        raise SegmentationError("weight coefficients must be non-negative")
    if alpha_normal == 0.0 and alpha_color == 0.0:
        raise SegmentationError("at least one weight coefficient must be positive")
    if mesh.n_faces == 0:
        return MeshGraph(0, np.zeros((0, 2), np.int64), np.zeros(0))

    normals = face_normals(mesh)
    face_colors = None
    if mesh.vertex_colors is not None:
        face_colors = mesh.vertex_colors[mesh.faces].mean(axis=1)

    shared: dict[tuple[int, int], list[int]] = {}
    for fi, (a, b, c) in enumerate(mesh.faces.tolist()):
        for u, v in ((a, b), (b, c), (a, c)):
            key = (u, v) if u < v else (v, u)
            shared.setdefault(key, []).append(fi)

    pairs = set()
    for facelist in shared.values():
        if len(facelist) < 2:
            continue
        for i in range(len(facelist)):
            for j in range(i + 1, len(facelist)):
                fa, fb = facelist[i], facelist[j]
                pairs.add((fa, fb) if fa < fb else (fb, fa))

    if not pairs:
        return MeshGraph(mesh.n_faces, np.zeros((0, 2), np.int64), np.zeros(0))

    edges = np.array(sorted(pairs), dtype=np.int64)
    dots = np.einsum("ij,ij->i", normals[edges[:, 0]], normals[edges[:, 1]])
    weights = alpha_normal * np.maximum(0.0, (1.0 - dots) / 2.0)
    if face_colors is not None and alpha_color > 0.0:
        diff = face_colors[edges[:, 0]] - face_colors[edges[:, 1]]
        weights = weights + alpha_color * np.linalg.norm(diff, axis=1) / np.sqrt(3.0)
    return MeshGraph(mesh.n_faces, edges, weights)


class _UnionFind:
    __slots__ = ("parent", "size", "internal")

    def __init__(self, n: int):
        self.parent = list(range(n))
        self.size = [1] * n
        self.internal = [0.0] * n  # max weight merged inside the component

    def find(self, x: int) -> int:
        root = x
        while self.parent[root] != root:
            root = self.parent[root]
        while self.parent[x] != root:
            self.parent[x], x = root, self.parent[x]
        return root

    def union(self, a: int, b: int, weight: float) -> None:
        if self.size[a] < self.size[b]:
            a, b = b, a
        self.parent[b] = a
        self.size[a] += self.size[b]
        self.internal[a] = max(self.internal[a], self.internal[b], weight)


def felzenszwalb(graph: MeshGraph, k: float, min_size: int = 1) -> SegmentMap:
    """Segment the face graph; larger ``k`` favors larger components.

    Edges are processed in ascending (weight, lower id, higher id) order so
    reruns are bit-identical. Components smaller than ``min_size`` are then
    absorbed along their cheapest outgoing edge.
    """
    if k <= 0.0:
        raise SegmentationError("k must be positive")
    if min_size < 1:
        raise SegmentationError("min_size must be at least 1")

    n = graph.n_faces
    if n == 0:
        return SegmentMap(np.zeros(0, np.int64))

    order = np.lexsort((graph.edges[:, 1], graph.edges[:, 0], graph.weights))
    uf = _UnionFind(n)
    edge_list = graph.edges[order].tolist()
    weight_list = graph.weights[order].tolist()

    for (a, b), w in zip(edge_list, weight_list):
        ra, rb = uf.find(a), uf.find(b)
        if ra == rb:
            continue
        if w <= min(uf.internal[ra] + k / uf.size[ra],
                    uf.internal[rb] + k / uf.size[rb]):
            uf.union(ra, rb, w)

    if min_size > 1:
        # ascending edge order means the first edge leaving a small component
        # is its lowest-weight link to a neighbor
        for (a, b), w in zip(edge_list, weight_list):
            ra, rb = uf.find(a), uf.find(b)
            if ra == rb:
                continue
            if uf.size[ra] < min_size or uf.size[rb] < min_size:
                uf.union(ra, rb, w)

    labels = np.zeros(n, dtype=np.int64)
    next_id = 0
    root_ids: dict[int, int] = {}
    for face in range(n):
        root = uf.find(face)
        if root not in root_ids:
            root_ids[root] = next_id
            next_id += 1
        labels[face] = root_ids[root]
    return SegmentMap(labels)


def match_segmentations(a: SegmentMap, b: SegmentMap) -> tuple[list[tuple[int, int, float]], float]:
    """Greedy one-to-one matching of segments by descending IoU.

    Returns the matched (segment_a, segment_b, iou) triples and the mean IoU
    over the matched pairs. Both maps must label the same face count.
    """
    if len(a.labels) != len(b.labels):
        raise SegmentationError("segment maps cover different face counts")
    if len(a.labels) == 0:
        raise SegmentationError("cannot match empty segmentations")

    pair_ids, counts = np.unique(
        np.stack([a.labels, b.labels], axis=1), axis=0, return_counts=True
    )
    size_a = np.bincount(a.labels, minlength=a.n_segments)
    size_b = np.bincount(b.labels, minlength=b.n_segments)

    candidates = []
    for (sa, sb), inter in zip(pair_ids.tolist(), counts.tolist()):
        union = int(size_a[sa]) + int(size_b[sb]) - inter
        iou = inter / union
        candidates.append((-iou, sa, sb, iou))
    candidates.sort()

    used_a: set[int] = set()
    used_b: set[int] = set()
    pairs = []
    for _, sa, sb, iou in candidates:
        if iou <= 0.0 or sa in used_a or sb in used_b:
            continue
        used_a.add(sa)
        used_b.add(sb)
        pairs.append((sa, sb, iou))
    mean_iou = sum(p[2] for p in pairs) / len(pairs) if pairs else 0.0
    return pairs, mean_iou


def save_segment_map(seg: SegmentMap) -> bytes:
    """One integer per line; line i holds the segment id of face i."""
    return ("\n".join(str(x) for x in seg.labels.tolist()) + "\n").encode("ascii")


def load_segment_map(data: bytes) -> SegmentMap:
    labels = []
    for i, line in enumerate(data.decode("ascii").splitlines(), start=1):
        line = line.strip()
        if not line:
            raise SegmentationError(f"line {i}: blank line in segment map")
        try:
            labels.append(int(line))
        except ValueError:
            raise SegmentationError(f"line {i}: not an integer: {line!r}") from None
    return SegmentMap(np.asarray(labels, dtype=np.int64))
