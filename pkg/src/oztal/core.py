"""Shared domain types and configuration for the streaming localizer."""

from __future__ import annotations

from dataclasses import dataclass, field, replace

import numpy as np


@dataclass(frozen=True)
class FrameFeature:
    """One embedding per stream timestep (the encoded window ending at t)."""

    values: np.ndarray
    t: int

    def __post_init__(self):
        v = np.asarray(self.values, dtype=np.float64)
        object.__setattr__(self, "values", v)
        if v.ndim != 1:
            raise ValueError(f"feature must be a 1-D vector, got shape {v.shape}")
        if self.t < 0:
            raise ValueError(f"timestep must be non-negative, got {self.t}")
        if not np.all(np.isfinite(v)):
            raise ValueError(f"non-finite feature at t={self.t}")
        if not np.any(v):
            raise ValueError(f"zero feature vector at t={self.t}")

    @property
    def dim(self) -> int:
        return self.values.shape[0]


@dataclass(frozen=True)
class TextBank:
    """Per-class text embeddings plus coarse foreground/background embeddings.

    Rows of ``class_embeddings`` and the foreground/background vectors are
    unit L2-normalized on construction.
    """

    class_names: tuple
    class_descriptions: tuple
    class_embeddings: np.ndarray
    foreground: np.ndarray
    background: np.ndarray

    def __post_init__(self):
        names = tuple(self.class_names)
        descs = tuple(self.class_descriptions)
        object.__setattr__(self, "class_names", names)
        object.__setattr__(self, "class_descriptions", descs)
        if len(names) < 1:
            raise ValueError("text bank needs at least one class")
        if len(set(names)) != len(names):
            dupes = sorted({n for n in names if names.count(n) > 1})
            raise ValueError(f"duplicate class name: {dupes[0]}")
        if len(descs) != len(names):
            raise ValueError("class_descriptions length must match class_names")

        emb = np.asarray(self.class_embeddings, dtype=np.float64)
        if emb.shape != (len(names), emb.shape[-1]) or emb.ndim != 2:
            raise ValueError(f"class_embeddings must be K x D, got {emb.shape}")
        fg = np.asarray(self.foreground, dtype=np.float64)
        bg = np.asarray(self.background, dtype=np.float64)
        if fg.shape != (emb.shape[1],) or bg.shape != (emb.shape[1],):
            raise ValueError("foreground/background dimension mismatch with classes")

        for name, mat in (("class_embeddings", emb), ("foreground", fg), ("background", bg)):
            if not np.all(np.isfinite(mat)):
                raise ValueError(f"non-finite values in {name}")

        norms = np.linalg.norm(emb, axis=1)
        if np.any(norms == 0):
            raise ValueError("zero-norm embedding in class_embeddings")
        if np.linalg.norm(fg) == 0 or np.linalg.norm(bg) == 0:
            raise ValueError("zero-norm embedding")

        object.__setattr__(self, "class_embeddings", emb / norms[:, None])
        object.__setattr__(self, "foreground", fg / np.linalg.norm(fg))
        object.__setattr__(self, "background", bg / np.linalg.norm(bg))

    @property
    def num_classes(self) -> int:
        return len(self.class_names)

    @property
    def dim(self) -> int:
        return self.class_embeddings.shape[1]


@dataclass(frozen=True)
class LocalizerConfig:
    """Hyperparameters of the streaming pipeline.

    ``window_len`` is extraction provenance only; no primary computation
    uses it.
    """

    window_len: int = 8
    memory_capacity: int = 20
    fusion_threshold: float = 0.8
    action_threshold: float = 10.0
    logit_scale: float = 100.0
    fps: float = 30.0
    stride: int = 1
    renormalize_fused: bool = True
    normalized_memory_weights: bool = False


def validate_config(cfg: LocalizerConfig) -> LocalizerConfig:
    """Return cfg unchanged if valid, else raise naming the offending field."""
    if cfg.window_len < 1:
        raise ValueError("window_len must be >= 1")
    if cfg.memory_capacity < 1:
        raise ValueError("memory_capacity must be >= 1")
    if not -1.0 <= cfg.fusion_threshold <= 1.0:
        raise ValueError("fusion_threshold outside [-1,1]")
    if not np.isfinite(cfg.action_threshold):
        raise ValueError("action_threshold must be finite")
    if not cfg.logit_scale > 0:
        raise ValueError("logit_scale must be > 0")
    if not cfg.fps > 0:
        raise ValueError("fps must be > 0")
    if cfg.stride < 1:
        raise ValueError("stride must be >= 1")
    return cfg


def timestep_to_seconds(t: int, fps: float, stride: int) -> float:
    return t * stride / fps


@dataclass(frozen=True)
class ActionInstance:
    """A completed action span with its emission bookkeeping."""

    start_t: int
    end_t: int
    class_index: int
    confidence: float
    emit_t: int
    start_sec: float = field(default=0.0)
    end_sec: float = field(default=0.0)

    def __post_init__(self):
        if self.start_t > self.end_t:
            raise ValueError(f"start_t {self.start_t} > end_t {self.end_t}")
        if self.end_t > self.emit_t:
            raise ValueError(f"end_t {self.end_t} > emit_t {self.emit_t}")
        if self.class_index < 0:
            raise ValueError(f"negative class_index {self.class_index}")

    @property
    def is_flush(self) -> bool:
        """Flush emissions close at the emission step; normal ones a step before."""
        return self.end_t == self.emit_t

    def with_seconds(self, fps: float, stride: int) -> "ActionInstance":
        return replace(
            self,
            start_sec=timestep_to_seconds(self.start_t, fps, stride),
            end_sec=timestep_to_seconds(self.end_t, fps, stride),
        )
