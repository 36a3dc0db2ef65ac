"""Geometry toolbox: containers, PLY I/O, sampling, simplification, fitting."""

from .core import (
    Aabb,
    GeometryError,
    Plane,
    PointCloud,
    RigidTransform,
    TriMesh,
    as_vec3,
    compute_aabb,
    crop_cuboid,
    face_areas,
    face_normals,
    merge_meshes,
    require_unit,
    rotation_about_axis,
    rotation_about_line,
    submesh,
    unit,
    voxel_downsample,
)
from .decimate import DecimationWarning, quadric_decimate
from .ply import PlyParseError, load_ply, save_ply
from .ransac import ransac_plane

__all__ = [
    "Aabb",
    "DecimationWarning",
    "GeometryError",
    "Plane",
    "PlyParseError",
    "PointCloud",
    "RigidTransform",
    "TriMesh",
    "as_vec3",
    "compute_aabb",
    "crop_cuboid",
    "face_areas",
    "face_normals",
    "load_ply",
    "merge_meshes",
    "quadric_decimate",
    "ransac_plane",
    "require_unit",
    "rotation_about_axis",
    "rotation_about_line",
    "save_ply",
    "submesh",
    "unit",
    "voxel_downsample",
]
