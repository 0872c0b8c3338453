"""Encoder registry.

An encoder id is a string naming a backend that embeds video windows and
texts into a shared D-dimensional space. Two deterministic feature-hashing
families ship built in:

- ``hash-image-<D>``: embeds each frame independently; the extractor mean-
  pools per-frame embeddings over a window and renormalizes.
- ``hash-video-<D>``: embeds a whole window at once from its mean intensity
  grid and mean temporal difference.

They need no downloaded weights and are fully deterministic, which is what
the round-trip and reproducibility tests rely on. Real pretrained dual
encoders plug in through :func:`register_encoder` with the same interface.
"""

from __future__ import annotations

import hashlib

import numpy as np

# frames are reduced to this intensity grid before the fixed random projection
GRID = 16


def _seed(*parts: str) -> int:
    digest = hashlib.blake2b("\x1f".join(parts).encode(), digest_size=8).digest()
    return int.from_bytes(digest, "little")


def _unit_rows(mat: np.ndarray) -> np.ndarray:
    norms = np.linalg.norm(mat, axis=-1, keepdims=True)
    if np.any(norms == 0):
        raise ValueError("encoder produced a zero embedding")
    return mat / norms


def _frame_grid(frames: np.ndarray) -> np.ndarray:
    """(N, H, W, 3) uint8 -> (N, GRID*GRID) floats in [0, 1]."""
    import cv2

    out = np.empty((frames.shape[0], GRID * GRID))
    for i, frame in enumerate(frames):
        gray = cv2.cvtColor(frame, cv2.COLOR_RGB2GRAY)
        out[i] = cv2.resize(gray, (GRID, GRID), interpolation=cv2.INTER_AREA).ravel()
    return out / 255.0


class _HashEncoderBase:
    """Shared text path and fixed-projection plumbing."""

    family: str

    def __init__(self, name: str, dim: int, input_size: int):
        if dim < 1:
            raise ValueError(f"encoder dim must be >= 1, got {dim}")
        self.name = name
        self.dim = dim
        rng = np.random.default_rng(_seed(name, str(dim)))
        # +1 input for a constant bias term so all-black frames still embed
        self._projection = rng.standard_normal((dim, input_size + 1))

    def _project(self, inputs: np.ndarray) -> np.ndarray:
        inputs = np.atleast_2d(inputs)
        biased = np.hstack([inputs, np.ones((inputs.shape[0], 1))])
        return _unit_rows(biased @ self._projection.T)

    def encode_texts(self, texts) -> np.ndarray:
        rows = np.empty((len(texts), self.dim))
        for i, text in enumerate(texts):
            rng = np.random.default_rng(_seed(self.name, "text", text))
            rows[i] = rng.standard_normal(self.dim)
        return _unit_rows(rows)


class HashImageEncoder(_HashEncoderBase):
    """Per-frame embeddings from a fixed random projection of the intensity grid."""

    family = "image"

    def __init__(self, dim: int):
        super().__init__("hash-image", dim, GRID * GRID)

    def encode_frames(self, frames: np.ndarray) -> np.ndarray:
        return self._project(_frame_grid(np.asarray(frames)))


class HashVideoEncoder(_HashEncoderBase):
    """Whole-window embeddings from mean appearance plus mean frame-to-frame motion."""

    family = "video"

    def __init__(self, dim: int):
        super().__init__("hash-video", dim, 2 * GRID * GRID)

    def encode_window(self, frames: np.ndarray) -> np.ndarray:
        grids = _frame_grid(np.asarray(frames))
        appearance = grids.mean(axis=0)
        motion = (
            np.abs(np.diff(grids, axis=0)).mean(axis=0)
            if grids.shape[0] > 1
            else np.zeros_like(appearance)
        )
        return self._project(np.concatenate([appearance, motion]))[0]


_REGISTRY: dict = {
    "hash-image": HashImageEncoder,
    "hash-video": HashVideoEncoder,
}


def register_encoder(prefix: str, factory) -> None:
    """Make ``<prefix>-<D>`` resolvable; ``factory(dim)`` must return an encoder."""
    _REGISTRY[prefix] = factory


def list_encoders() -> list:
    return sorted(_REGISTRY)


def get_encoder(encoder_id: str):
    """Resolve an id of the form ``<name>-<D>``, e.g. ``hash-image-64``."""
    prefix, _, dim_part = encoder_id.rpartition("-")
    if prefix in _REGISTRY and dim_part.isdigit():
        return _REGISTRY[prefix](int(dim_part))
    raise ValueError(
        f"unknown encoder id {encoder_id!r}; expected <name>-<D> with name in "
        f"{list_encoders()}"
    )
