"""RANSAC plane fitting over point sets.

The estimate is a pure function of (points, iterations, inlier_dist, seed):
candidate planes come from 3-point samples drawn from a seeded generator, the
winner is refit to its inliers by least squares, and the normal sign is
canonicalized so repeated runs agree bit for bit.
"""

from __future__ import annotations

import numpy as np

from .core import GeometryError, Plane, _as_points


def _canonical(normal: np.ndarray, offset: float) -> tuple[np.ndarray, float]:
    # fix the sign so the largest-magnitude component is positive
    i = int(np.argmax(np.abs(normal)))
    if normal[i] < 0.0:
        return -normal, -offset
    return normal, offset


def ransac_plane(points, iterations: int, inlier_dist: float, seed: int) -> tuple[Plane, np.ndarray]:
    """Fit the dominant plane; returns (plane, sorted inlier indices).

    The returned plane is the least-squares refit (through the inlier
    centroid, normal from the smallest covariance eigenvector) of the best
    3-point sample's inlier set.
    """
    pts = _as_points(points)
    if len(pts) < 3:
        raise GeometryError("plane fitting needs at least 3 points")
    if iterations < 1:
        raise GeometryError("iterations must be positive")
    if inlier_dist <= 0.0:
        raise GeometryError("inlier_dist must be positive")

    rng = np.random.default_rng(seed)
    best_count = 0
    best_inliers = None
    for _ in range(iterations):
        i, j, k = rng.choice(len(pts), size=3, replace=False)
        normal = np.cross(pts[j] - pts[i], pts[k] - pts[i])
        norm = float(np.linalg.norm(normal))
        if norm < 1e-12:
            continue  # collinear sample
        normal = normal / norm
        offset = float(normal @ pts[i])
        mask = np.abs(pts @ normal - offset) <= inlier_dist
        count = int(mask.sum())
        if count > best_count:
            best_count = count
            best_inliers = np.nonzero(mask)[0]

    if best_inliers is None:
        raise GeometryError("all RANSAC samples were collinear, no plane found")

    inliers = pts[best_inliers]
    centroid = inliers.mean(axis=0)
    centered = inliers - centroid
    cov = centered.T @ centered
    eigvals, eigvecs = np.linalg.eigh(cov)
    normal = eigvecs[:, 0]
    norm = float(np.linalg.norm(normal))
    normal = normal / norm
    offset = float(normal @ centroid)
    normal, offset = _canonical(normal, offset)
    return Plane(normal, offset), best_inliers
