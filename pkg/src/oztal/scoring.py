"""Class matching scores and background-aware refinement."""

from __future__ import annotations

import numpy as np

from .core import TextBank
from .memory import cosine


def class_scores(z: np.ndarray, bank: TextBank, scale: float) -> np.ndarray:
    """Scaled cosine logits between the (enhanced) feature and each class text."""
    z = np.asarray(z, dtype=np.float64)
    if z.shape != (bank.dim,):
        raise ValueError(f"dimension mismatch: expected ({bank.dim},), got {z.shape}")
    nz = np.linalg.norm(z)
    if nz == 0:
        raise ValueError("zero-norm feature")
    return scale * (bank.class_embeddings @ z) / nz


def background_score(z: np.ndarray, bank: TextBank, scale: float) -> float:
    """Scaled cosine logit between the feature and the background prompt."""
    return scale * cosine(np.asarray(z, dtype=np.float64), bank.background)


def refine_scores(k: np.ndarray, r: float) -> np.ndarray:
    """Penalize low-confidence class scores using the background score.

    Per class: alpha = clamp(k / (k + r), 0.5, 1), with alpha = 0.5 when the
    denominator vanishes, then y = alpha * k - (1 - alpha) * r. Equal class
    and background evidence cancels to exactly zero.
    """
    k = np.asarray(k, dtype=np.float64)
    if not np.all(np.isfinite(k)) or not np.isfinite(r):
        raise ValueError("non-finite score input")
    denom = k + r
    with np.errstate(divide="ignore", invalid="ignore"):
        alpha = np.where(denom != 0, k / np.where(denom != 0, denom, 1.0), 0.5)
    alpha = np.clip(alpha, 0.5, 1.0)
    return alpha * k - (1.0 - alpha) * r
