"""Long-term memory bank and memory-guided feature enhancement."""

from __future__ import annotations

from collections import deque

import numpy as np

from .core import LocalizerConfig


def cosine(a: np.ndarray, b: np.ndarray) -> float:
    """Cosine similarity; raises on zero-norm input."""
    a = np.asarray(a, dtype=np.float64)
    b = np.asarray(b, dtype=np.float64)
    if a.shape != b.shape:
        raise ValueError(f"dimension mismatch: {a.shape} vs {b.shape}")
    na = np.linalg.norm(a)
    nb = np.linalg.norm(b)
    if na == 0 or nb == 0:
        raise ValueError("cosine undefined for zero-norm vector")
    return float(np.dot(a, b) / (na * nb))


class MemoryBank:
    """Bounded FIFO of salient historical features.

    A frame is appended only when it looks more like the foreground prompt
    than the background prompt; on overflow the oldest entry is dropped.
    A running sum is kept so the mean summary is O(D) per query.
    """

    def __init__(self, capacity: int, dim: int):
        if capacity < 1:
            raise ValueError("memory capacity must be >= 1")
        self.capacity = capacity
        self.dim = dim
        self._entries: deque = deque()
        self._sum = np.zeros(dim, dtype=np.float64)

    def __len__(self) -> int:
        return len(self._entries)

    @property
    def entries(self) -> list:
        return list(self._entries)

    def update(self, x: np.ndarray, foreground: np.ndarray, background: np.ndarray) -> bool:
        """Append x when cos(x, background) < cos(x, foreground); strict, ties skip.

        Returns True when the feature was stored.
        """
        x = np.asarray(x, dtype=np.float64)
        if x.shape != (self.dim,):
            raise ValueError(f"dimension mismatch: expected ({self.dim},), got {x.shape}")
        if foreground.shape != x.shape or background.shape != x.shape:
            raise ValueError("dimension mismatch: prompt embeddings")
        nx = np.linalg.norm(x)
        if nx == 0:
            raise ValueError("cosine undefined for zero-norm vector")
        toward_fg = np.dot(x, background) / np.linalg.norm(background) < np.dot(
            x, foreground
        ) / np.linalg.norm(foreground)
        if toward_fg:
            if len(self._entries) == self.capacity:
                oldest = self._entries.popleft()
                self._sum -= oldest
            stored = x.copy()
            self._entries.append(stored)
            self._sum += stored
            return True
        return False

    def mean(self) -> np.ndarray:
        """Arithmetic mean over the current fill (not the capacity)."""
        m = len(self._entries)
        if m == 0:
            raise ValueError("empty memory")
        return self._sum / m

    def weighted(self, normalized: bool = False) -> np.ndarray:
        """Temporal-proximity weighted summary; recent entries weigh more.

        Literal mode uses weights (1/m) * 1/(m+1-i) for entry i (1-based,
        oldest first), which sum to H_m/m < 1 for m > 1. Normalized mode
        rescales them to a convex combination.
        """
        m = len(self._entries)
        if m == 0:
            raise ValueError("empty memory")
        weights = 1.0 / (m * np.arange(m, 0, -1, dtype=np.float64))
        if normalized:
            weights = weights / weights.sum()
        return weights @ np.asarray(self._entries)


def enhance_feature(
    bank: MemoryBank, x: np.ndarray, cfg: LocalizerConfig
) -> tuple[np.ndarray, float]:
    """Fuse the current feature with the memory summary when they agree.

    Gate: with an empty bank or cos(x, mean) <= fusion_threshold the feature
    passes through untouched (lambda = 0). Otherwise the fusion weight is
    half the cosine mapped affinely from [-1,1] to [0,1], so lambda stays in
    [0, 0.5], and the result mixes x with the proximity-weighted summary.
    """
    x = np.asarray(x, dtype=np.float64)
    if len(bank) == 0:
        return x, 0.0
    qbar = bank.mean()
    if not np.any(qbar):
        return x, 0.0
    sim = cosine(x, qbar)
    if sim <= cfg.fusion_threshold:
        return x, 0.0
    lam = 0.5 * (sim + 1.0) / 2.0
    qtilde = bank.weighted(normalized=cfg.normalized_memory_weights)
    z = (1.0 - lam) * x + lam * qtilde
    if cfg.renormalize_fused:
        nz = np.linalg.norm(z)
        if nz > 0:
            z = z / nz
    return z, lam
