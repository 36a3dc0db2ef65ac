"""Dense-to-instance aggregation of per-point motion predictions."""

from __future__ import annotations

import numpy as np

from .instances import EvalError


def aggregate_axis_prediction(point_axes, query_axis) -> np.ndarray:
    """Fuse per-point axis votes with the query head's axis.

    The point votes are averaged, that mean is averaged again with the
    query prediction, and the result is normalized. Permuting the point
    votes cannot change the outcome.
    """
    axes = np.asarray(point_axes, dtype=np.float64)
    if axes.ndim != 2 or axes.shape[1] != 3 or axes.shape[0] == 0:
        raise EvalError(f"point_axes must be a non-empty (N, 3) array, got {axes.shape}")
    q = np.asarray(query_axis, dtype=np.float64).reshape(-1)
    if q.shape != (3,):
        raise EvalError("query_axis must have 3 components")
    fused = 0.5 * (axes.mean(axis=0) + q)
    norm = float(np.linalg.norm(fused))
    if norm < 1e-12:
        raise EvalError("aggregated axis has zero length")
    return fused / norm


def aggregate_origin_prediction(point_origins) -> np.ndarray:
    """Plain mean of per-point origin votes; the query head plays no part."""
    origins = np.asarray(point_origins, dtype=np.float64)
    if origins.ndim != 2 or origins.shape[1] != 3 or origins.shape[0] == 0:
        raise EvalError(
            f"point_origins must be a non-empty (N, 3) array, got {origins.shape}"
        )
    return origins.mean(axis=0)
