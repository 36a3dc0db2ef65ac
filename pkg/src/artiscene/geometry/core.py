"""Mesh and point-cloud containers plus the geometric primitives shared by
every pipeline stage.

Conventions used throughout the toolkit:

* all coordinates are metric (meters) in a fixed world frame with +Z as the
  up axis (gravity points along -Z),
* vectors and points are numpy float64 arrays of shape (3,), point sets are
  arrays of shape (N, 3),
* containers are frozen dataclasses whose arrays are marked read-only, so
  values can be shared between scenes without defensive copies,
* angles entering the public API are degrees.
"""

from __future__ import annotations

from dataclasses import dataclass, field

import numpy as np

UNIT_TOL = 1e-9


class GeometryError(ValueError):
    """Raised when a geometric precondition is violated."""


def _as_points(value, name: str = "points") -> np.ndarray:
    arr = np.asarray(value, dtype=np.float64)
    if arr.size == 0:
        arr = arr.reshape(0, 3)
    if arr.ndim != 2 or arr.shape[1] != 3:
        raise GeometryError(f"{name} must have shape (N, 3), got {arr.shape}")
    if not np.all(np.isfinite(arr)):
        raise GeometryError(f"{name} contains non-finite values")
    return arr


def _frozen(arr: np.ndarray) -> np.ndarray:
    out = np.ascontiguousarray(arr)
    out.setflags(write=False)
    return out


def as_vec3(value, name: str = "vector") -> np.ndarray:
    arr = np.asarray(value, dtype=np.float64).reshape(-1)
    if arr.shape != (3,):
        raise GeometryError(f"{name} must have exactly 3 components")
    if not np.all(np.isfinite(arr)):
        raise GeometryError(f"{name} contains non-finite values")
    return arr


def unit(value, name: str = "vector") -> np.ndarray:
    """Normalize to unit length, rejecting (near-)zero input."""
    v = as_vec3(value, name)
    n = float(np.linalg.norm(v))
    if n < 1e-30:
        raise GeometryError(f"{name} has zero length, cannot normalize")
    return v / n

def require_unit(value, name: str = "axis", tol: float = UNIT_TOL) -> np.ndarray:
    v = as_vec3(value, name)
    if abs(float(np.linalg.norm(v)) - 1.0) > tol:
        raise GeometryError(f"{name} must be unit length within {tol}")
    return v


@dataclass(frozen=True, eq=False)
class TriMesh:
    """Triangle mesh: float64 vertices (N, 3), int64 faces (M, 3).

    Optional per-vertex colors live in [0, 1]. Every face index must point at
    an existing vertex and the three indices of a face must be distinct.
    """

    vertices: np.ndarray
    faces: np.ndarray
    vertex_colors: np.ndarray | None = None

    def __post_init__(self):
        verts = _as_points(self.vertices, "vertices")
        faces = np.asarray(self.faces, dtype=np.int64)
        if faces.size == 0:
            faces = faces.reshape(0, 3)
        if faces.ndim != 2 or faces.shape[1] != 3:
            raise GeometryError(f"faces must have shape (M, 3), got {faces.shape}")
        if faces.size:
            if faces.min() < 0 or faces.max() >= len(verts):
                raise GeometryError(
                    f"face indices must lie in [0, {len(verts)}), "
                    f"got range [{faces.min()}, {faces.max()}]"
                )
            degen = (
                (faces[:, 0] == faces[:, 1])
                | (faces[:, 1] == faces[:, 2])
                | (faces[:, 0] == faces[:, 2])
            )
            if degen.any():
                bad = np.nonzero(degen)[0]
                raise GeometryError(f"degenerate faces (repeated index): {bad.tolist()}")
        colors = self.vertex_colors
        if colors is not None:
            colors = _as_points(colors, "vertex_colors")
            if colors.shape != verts.shape:
                raise GeometryError("vertex_colors must match vertices in shape")
            if colors.size and (colors.min() < 0.0 or colors.max() > 1.0):
                raise GeometryError("vertex_colors must lie in [0, 1]")
            colors = _frozen(colors)
        object.__setattr__(self, "vertices", _frozen(verts))
        object.__setattr__(self, "faces", _frozen(faces))
        object.__setattr__(self, "vertex_colors", colors)

    @property
    def n_vertices(self) -> int:
        return len(self.vertices)

    @property
    def n_faces(self) -> int:
        return len(self.faces)

    def __eq__(self, other) -> bool:
        if not isinstance(other, TriMesh):
            return NotImplemented
        if self.vertices.shape != other.vertices.shape:
            return False
        if not (
            np.array_equal(self.vertices, other.vertices)
            and np.array_equal(self.faces, other.faces)
        ):
            return False
        if (self.vertex_colors is None) != (other.vertex_colors is None):
            return False
        if self.vertex_colors is None:
            return True
        return np.array_equal(self.vertex_colors, other.vertex_colors)


@dataclass(frozen=True, eq=False)
class PointCloud:
    """Unordered point set with optional per-point colors in [0, 1]."""

    points: np.ndarray
    colors: np.ndarray | None = None

    def __post_init__(self):
        pts = _as_points(self.points, "points")
        colors = self.colors
        if colors is not None:
            colors = _as_points(colors, "colors")
            if colors.shape != pts.shape:
                raise GeometryError("colors must match points in shape")
            if colors.size and (colors.min() < 0.0 or colors.max() > 1.0):
                raise GeometryError("colors must lie in [0, 1]")
            colors = _frozen(colors)
        object.__setattr__(self, "points", _frozen(pts))
        object.__setattr__(self, "colors", colors)

    def __len__(self) -> int:
        return len(self.points)

    def __eq__(self, other) -> bool:
        if not isinstance(other, PointCloud):
            return NotImplemented
        if self.points.shape != other.points.shape:
            return False
        if not np.array_equal(self.points, other.points):
            return False
        if (self.colors is None) != (other.colors is None):
            return False
        return self.colors is None or np.array_equal(self.colors, other.colors)


@dataclass(frozen=True, eq=False)
class Aabb:
    """Axis-aligned box given by componentwise min/max corners."""

    min_corner: np.ndarray
    max_corner: np.ndarray

    def __post_init__(self):
        lo = as_vec3(self.min_corner, "min_corner")
        hi = as_vec3(self.max_corner, "max_corner")
        if np.any(lo > hi):
            raise GeometryError("min_corner must be <= max_corner componentwise")
        object.__setattr__(self, "min_corner", _frozen(lo))
        object.__setattr__(self, "max_corner", _frozen(hi))

    @property
    def extents(self) -> np.ndarray:
        return self.max_corner - self.min_corner

    @property
    def center(self) -> np.ndarray:
        return 0.5 * (self.min_corner + self.max_corner)

    def volume(self) -> float:
        e = self.extents
        return float(e[0] * e[1] * e[2])

    def distance_to_point(self, point) -> float:
        p = as_vec3(point, "point")
        clamped = np.minimum(np.maximum(p, self.min_corner), self.max_corner)
        return float(np.linalg.norm(p - clamped))

    def gap_to(self, other: "Aabb") -> float:
        """Euclidean separation between two boxes (0 when they touch/overlap)."""
        g = np.maximum(0.0, np.maximum(self.min_corner - other.max_corner,
                                       other.min_corner - self.max_corner))
        return float(np.linalg.norm(g))

    def __eq__(self, other) -> bool:
        if not isinstance(other, Aabb):
            return NotImplemented
        return np.array_equal(self.min_corner, other.min_corner) and np.array_equal(
            self.max_corner, other.max_corner
        )


def compute_aabb(points) -> Aabb:
    pts = _as_points(points)
    if len(pts) == 0:
        raise GeometryError("cannot compute bounding box of an empty point set")
    return Aabb(pts.min(axis=0), pts.max(axis=0))


@dataclass(frozen=True, eq=False)
class Plane:
    """Plane in Hessian normal form: normal . p = offset, with unit normal."""

    normal: np.ndarray
    offset: float

    def __post_init__(self):
        n = require_unit(self.normal, "plane normal")
        object.__setattr__(self, "normal", _frozen(n))
        object.__setattr__(self, "offset", float(self.offset))

    def signed_distance(self, points) -> np.ndarray:
        pts = _as_points(points)
        return pts @ self.normal - self.offset

    def project(self, points) -> np.ndarray:
        pts = _as_points(points)
        d = pts @ self.normal - self.offset
        return pts - d[:, None] * self.normal

    def __eq__(self, other) -> bool:
        if not isinstance(other, Plane):
            return NotImplemented
        return np.array_equal(self.normal, other.normal) and self.offset == other.offset


@dataclass(frozen=True, eq=False)
class RigidTransform:
    """Proper rigid motion p -> R p + t.

    The rotation must be orthonormal with determinant +1 within 1e-9, so a
    composed chain of transforms stays rigid to the tolerance used by the
    kinematics checks.
    """

    rotation: np.ndarray = field(default_factory=lambda: np.eye(3))
    translation: np.ndarray = field(default_factory=lambda: np.zeros(3))

    def __post_init__(self):
        rot = np.asarray(self.rotation, dtype=np.float64)
        if rot.shape != (3, 3):
            raise GeometryError("rotation must be a 3x3 matrix")
        if not np.all(np.isfinite(rot)):
            raise GeometryError("rotation contains non-finite values")
        if np.abs(rot @ rot.T - np.eye(3)).max() > 1e-9:
            raise GeometryError("rotation is not orthonormal within 1e-9")
        if abs(float(np.linalg.det(rot)) - 1.0) > 1e-9:
            raise GeometryError("rotation must have determinant +1")
        tr = as_vec3(self.translation, "translation")
        object.__setattr__(self, "rotation", _frozen(rot))
        object.__setattr__(self, "translation", _frozen(tr))

    @classmethod
    def identity(cls) -> "RigidTransform":
        return cls(np.eye(3), np.zeros(3))

    def apply(self, points) -> np.ndarray:
        pts = np.asarray(points, dtype=np.float64)
        if pts.ndim == 1:
            return self.rotation @ as_vec3(pts) + self.translation
        return _as_points(pts) @ self.rotation.T + self.translation

    def compose(self, other: "RigidTransform") -> "RigidTransform":
        """Transform equal to applying ``other`` first, then ``self``."""
        return RigidTransform(
            self.rotation @ other.rotation,
            self.rotation @ other.translation + self.translation,
        )

    def __eq__(self, other) -> bool:
        if not isinstance(other, RigidTransform):
            return NotImplemented
        return np.array_equal(self.rotation, other.rotation) and np.array_equal(
            self.translation, other.translation
        )


def rotation_about_axis(axis, degrees: float) -> np.ndarray:
    """Rodrigues rotation matrix about a unit axis through the origin."""
    a = require_unit(axis)
    theta = np.radians(float(degrees))
    c, s = np.cos(theta), np.sin(theta)
    skew = np.array([
        [0.0, -a[2], a[1]],
        [a[2], 0.0, -a[0]],
        [-a[1], a[0], 0.0],
    ])
    return c * np.eye(3) + s * skew + (1.0 - c) * np.outer(a, a)


def rotation_about_line(axis, degrees: float, origin) -> RigidTransform:
    """Rigid rotation about the line through ``origin`` with direction ``axis``."""
    rot = rotation_about_axis(axis, degrees)
    o = as_vec3(origin, "origin")
    return RigidTransform(rot, o - rot @ o)


def face_normals(mesh: TriMesh) -> np.ndarray:
    """Unit normals per face, oriented by the stored winding."""
    v = mesh.vertices
    f = mesh.faces
    cross = np.cross(v[f[:, 1]] - v[f[:, 0]], v[f[:, 2]] - v[f[:, 0]])
    norms = np.linalg.norm(cross, axis=1)
    bad = np.nonzero(norms < 1e-30)[0]
    if bad.size:
        raise GeometryError(f"zero-area faces: {bad.tolist()}")
    return cross / norms[:, None]


def face_areas(mesh: TriMesh) -> np.ndarray:
    v = mesh.vertices
    f = mesh.faces
    cross = np.cross(v[f[:, 1]] - v[f[:, 0]], v[f[:, 2]] - v[f[:, 0]])
    return 0.5 * np.linalg.norm(cross, axis=1)


def submesh(mesh: TriMesh, face_indices) -> TriMesh:
    """Mesh restricted to ``face_indices``, vertices compacted in first-use order."""
    idx = np.asarray(face_indices, dtype=np.int64).reshape(-1)
    if idx.size == 0:
        raise GeometryError("submesh needs at least one face")
    if idx.min() < 0 or idx.max() >= mesh.n_faces:
        raise GeometryError("face index out of range for submesh")
    flat = mesh.faces[idx].reshape(-1)
    uniq, first = np.unique(flat, return_index=True)
    order = uniq[np.argsort(first)]
    remap = np.full(mesh.n_vertices, -1, dtype=np.int64)
    remap[order] = np.arange(len(order))
    colors = None if mesh.vertex_colors is None else mesh.vertex_colors[order]
    return TriMesh(mesh.vertices[order], remap[mesh.faces[idx]], colors)


def merge_meshes(meshes) -> TriMesh:
    """Concatenate meshes into one. Colors are kept when any input has them;
    uncolored inputs are filled with mid-gray."""
    meshes = list(meshes)
    if not meshes:
        raise GeometryError("merge_meshes needs at least one mesh")
    any_colors = any(m.vertex_colors is not None for m in meshes)
    verts, faces, colors = [], [], []
    offset = 0
    for m in meshes:
        verts.append(m.vertices)
        faces.append(m.faces + offset)
        if any_colors:
            if m.vertex_colors is not None:
                colors.append(m.vertex_colors)
            else:
                colors.append(np.full((m.n_vertices, 3), 0.5))
        offset += m.n_vertices
    return TriMesh(
        np.concatenate(verts),
        np.concatenate(faces),
        np.concatenate(colors) if any_colors else None,
    )


def voxel_downsample(cloud: PointCloud, voxel: float) -> PointCloud:
    """Average points (and colors) per voxel cell.

    Cell membership is floor(coord / voxel) per axis, so the result does not
    depend on the order of the input points. Output cells are emitted in
    lexicographic cell order.
    """
    if voxel <= 0.0:
        raise GeometryError("voxel size must be positive")
    pts = cloud.points
    if len(pts) == 0:
        raise GeometryError("cannot downsample an empty point cloud")
    cells = np.floor(pts / voxel).astype(np.int64)
    uniq, inverse = np.unique(cells, axis=0, return_inverse=True)
    counts = np.bincount(inverse, minlength=len(uniq)).astype(np.float64)
    sums = np.zeros((len(uniq), 3))
    np.add.at(sums, inverse, pts)
    centroids = sums / counts[:, None]
    colors = None
    if cloud.colors is not None:
        csums = np.zeros((len(uniq), 3))
        np.add.at(csums, inverse, cloud.colors)
        colors = np.clip(csums / counts[:, None], 0.0, 1.0)
    return PointCloud(centroids, colors)


def crop_cuboid(cloud: PointCloud, center_xy, side: float) -> PointCloud:
    """Keep points inside a vertical square column: |x-cx| <= side/2 and
    |y-cy| <= side/2 (inclusive), z unbounded."""
    if side <= 0.0:
        raise GeometryError("crop side must be positive")
    cx, cy = (float(c) for c in center_xy)
    half = side / 2.0
    pts = cloud.points
    keep = (np.abs(pts[:, 0] - cx) <= half) & (np.abs(pts[:, 1] - cy) <= half)
    colors = None if cloud.colors is None else cloud.colors[keep]
    return PointCloud(pts[keep], colors)
