import numpy as np
import pytest

from artiscene.fixtures import grid_patch, icosphere
from artiscene.geometry import GeometryError, TriMesh, quadric_decimate


def flat_grid(nx: int, ny: int) -> TriMesh:
    verts, faces = grid_patch(0.0, 1.0, 0.0, 1.0, 0.0, nx, ny)
    return TriMesh(verts, faces)


def test_small_mesh_returned_unchanged():
    mesh = flat_grid(2, 2)
    assert quadric_decimate(mesh, 100) is mesh


def test_decimation_reaches_target():
    mesh = flat_grid(10, 10)
    out = quadric_decimate(mesh, 100)
    assert 4 <= out.n_faces <= 100


def test_planar_mesh_stays_planar():
    mesh = flat_grid(10, 10)
    out = quadric_decimate(mesh, 100)
    assert np.abs(out.vertices[:, 2]).max() < 1e-9


def test_sphere_keeps_rough_shape():
    mesh = icosphere(3)
    out = quadric_decimate(mesh, mesh.n_faces // 4)
    radii = np.linalg.norm(out.vertices, axis=1)
    assert radii.min() > 0.8
    assert radii.max() < 1.2


def test_decimation_is_deterministic():
    mesh = icosphere(2)
    a = quadric_decimate(mesh, 100)
    b = quadric_decimate(mesh, 100)
    assert a == b


def test_tiny_target_rejected():
    with pytest.raises(GeometryError):
        quadric_decimate(flat_grid(3, 3), 3)
