"""Training losses for mask, motion-class, offset, and articulation heads.

All functions are pure and operate on numpy arrays; ``loss_articulation``
also returns its analytic gradients so they can be checked against finite
differences.
"""

from __future__ import annotations

from dataclasses import dataclass

import numpy as np
from scipy.special import logsumexp

from ..annotation.model import MOTION_ROTATION, MOTION_TRANSLATION
from .instances import EvalError

CLASS_BACKGROUND = "background"
CLASSES = (CLASS_BACKGROUND, MOTION_ROTATION, MOTION_TRANSLATION)

PROB_EPS = 1e-7


@dataclass(frozen=True)
class LossWeights:
    dice: float = 2.0
    ce: float = 5.0
    cls: float = 2.0
    aux: float = 1.0
    arti: float = 1.0

    def __post_init__(self):
        for name in ("dice", "ce", "cls", "aux", "arti"):
            v = float(getattr(self, name))
            if v < 0.0 or not np.isfinite(v):
                raise EvalError(f"loss weight {name} must be non-negative, got {v}")
            object.__setattr__(self, name, v)


def _prob_arrays(pred_probs, gt_mask) -> tuple[np.ndarray, np.ndarray]:
    p = np.asarray(pred_probs, dtype=np.float64).reshape(-1)
    g = np.asarray(gt_mask, dtype=np.float64).reshape(-1)
    if p.shape != g.shape:
        raise EvalError(f"length mismatch: {p.shape[0]} probabilities vs "
                        f"{g.shape[0]} mask entries")
    if p.size == 0:
        raise EvalError("empty mask")
    if p.min() < 0.0 or p.max() > 1.0:
        raise EvalError("probabilities must lie in [0, 1]")
    if not np.all((g == 0.0) | (g == 1.0)):
        raise EvalError("gt mask must be binary")
    return np.clip(p, PROB_EPS, 1.0 - PROB_EPS), g


def loss_segmentation(pred_probs, gt_mask, weights: LossWeights = LossWeights()) -> float:
    """Weighted dice + binary cross-entropy over per-point mask probabilities."""
    p, g = _prob_arrays(pred_probs, gt_mask)
    dice = 1.0 - 2.0 * float(p @ g) / (float(p.sum()) + float(g.sum()) + PROB_EPS)
    ce = float(np.mean(-g * np.log(p) - (1.0 - g) * np.log1p(-p)))
    return weights.dice * dice + weights.ce * ce


def loss_aux(pred_shifts, gt_shifts, lam: float = 1.0) -> float:
    """L1 error of per-point center shifts, summed over points and axes."""
    p = np.asarray(pred_shifts, dtype=np.float64)
    g = np.asarray(gt_shifts, dtype=np.float64)
    if p.shape != g.shape:
        raise EvalError(f"length mismatch: shifts {p.shape} vs {g.shape}")
    return float(lam) * float(np.abs(g - p).sum())


def loss_cls(pred_logits, gt_class: str, lam: float = 2.0) -> float:
    """Cross-entropy of the 3-way motion-class head."""
    z = np.asarray(pred_logits, dtype=np.float64).reshape(-1)
    if z.shape != (3,):
        raise EvalError(f"expected 3 logits, got shape {z.shape}")
    if gt_class not in CLASSES:
        raise EvalError(f"gt_class must be one of {CLASSES}, got {gt_class!r}")
    idx = CLASSES.index(gt_class)
    return float(lam) * float(logsumexp(z) - z[idx])


def loss_articulation(pred_axis, pred_origin, gt_axis, gt_origin,
                      motion_type: str, lam: float = 1.0,
                      ) -> tuple[float, np.ndarray, np.ndarray | None]:
    """Axis-direction loss, plus origin-to-axis-line distance for rotation.

    Returns (value, d/d pred_axis, d/d pred_origin). The axis term is
    sign-sensitive: lambda * (1 - cos between predicted and true axis). The
    rotation origin term is lambda * ||gt_axis x (origin - gt_origin)||. The
    origin gradient is the zero vector at the (non-differentiable) minimum.
    """
    lam = float(lam)
    a = np.asarray(pred_axis, dtype=np.float64).reshape(3)
    b = np.asarray(gt_axis, dtype=np.float64).reshape(3)
    norm_a = float(np.linalg.norm(a))
    if norm_a < 1e-12:
        raise EvalError("predicted axis has zero length")
    if abs(float(np.linalg.norm(b)) - 1.0) > 1e-6:
        raise EvalError("gt axis must be unit length")
    a_hat = a / norm_a
    cos = float(a_hat @ b)
    value = lam * (1.0 - cos)
    grad_axis = -lam * (b - cos * a_hat) / norm_a

    if motion_type == MOTION_TRANSLATION:
        return value, grad_axis, None
    if motion_type != MOTION_ROTATION:
        raise EvalError(f"unknown motion type {motion_type!r}")
    if pred_origin is None or gt_origin is None:
        raise EvalError("rotation articulation loss needs both origins")
    o = np.asarray(pred_origin, dtype=np.float64).reshape(3)
    o_star = np.asarray(gt_origin, dtype=np.float64).reshape(3)
    c = np.cross(b, o - o_star)
    dist = float(np.linalg.norm(c))
    value += lam * dist
    if dist < 1e-12:
        grad_origin = np.zeros(3)
    else:
        grad_origin = lam * np.cross(c / dist, b)
    return value, grad_axis, grad_origin


def total_loss(*, mask_probs, gt_mask, class_logits, gt_class,
               pred_shifts=None, gt_shifts=None,
               pred_axis=None, pred_origin=None, gt_axis=None, gt_origin=None,
               motion_type=None, weights: LossWeights = LossWeights()) -> float:
    """Sum of the four heads' losses under one weight set.

    The offset and articulation terms are included when their inputs are
    given; a background instance passes neither.
    """
    total = loss_segmentation(mask_probs, gt_mask, weights)
    total += loss_cls(class_logits, gt_class, weights.cls)
    if (pred_shifts is None) != (gt_shifts is None):
        raise EvalError("pred_shifts and gt_shifts must be given together")
    if pred_shifts is not None:
        total += loss_aux(pred_shifts, gt_shifts, weights.aux)
    if pred_axis is not None:
        if motion_type is None or gt_axis is None:
            raise EvalError("articulation loss needs motion_type and gt_axis")
        value, _, _ = loss_articulation(pred_axis, pred_origin, gt_axis, gt_origin,
                                        motion_type, weights.arti)
        total += value
    return total
