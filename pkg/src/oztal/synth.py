"""Seeded synthetic benchmark generator for desk-scale testing.

Builds a near-orthogonal text bank, plants labeled segments in each video,
and emits feature streams whose in-segment rows are noisy copies of the
class embedding and whose background rows are noisy copies of the
background embedding. Everything is derived from one RNG seed, so outputs
are byte-identical across runs.
"""

from __future__ import annotations

import json
from pathlib import Path

import numpy as np

from .core import TextBank
from .io_formats import (
    FeatureManifest,
    ManifestEntry,
    save_manifest,
    save_textbank,
    write_feature_array,
)

# shared foreground component mixed into every class embedding, so the
# foreground prompt gates memory insertion without collapsing class margins
FOREGROUND_MIX = 0.3


def _unit(v: np.ndarray) -> np.ndarray:
    return v / np.linalg.norm(v)


def make_textbank(num_classes: int, dim: int, rng: np.random.Generator) -> TextBank:
    if dim < num_classes + 2:
        raise ValueError(
            f"dim must be at least num_classes + 2 ({num_classes + 2}), got {dim}"
        )
    basis, _ = np.linalg.qr(rng.standard_normal((dim, num_classes + 2)))
    fg_dir = basis[:, num_classes]
    bg_dir = basis[:, num_classes + 1]
    class_rows = np.stack(
        [_unit(basis[:, j] + FOREGROUND_MIX * fg_dir) for j in range(num_classes)]
    )
    return TextBank(
        class_names=tuple(f"class_{j:02d}" for j in range(num_classes)),
        class_descriptions=tuple(
            f"synthetic activity number {j}" for j in range(num_classes)
        ),
        class_embeddings=class_rows,
        foreground=fg_dir,
        background=bg_dir,
    )


def plant_segments(
    timesteps: int, num_classes: int, rng: np.random.Generator
) -> list:
    """Non-overlapping (start_t, end_t, class_index) runs, ends inclusive."""
    segments = []
    t = int(rng.integers(5, 20))
    while True:
        length = int(rng.integers(15, 41))
        if t + length >= timesteps - 5:
            break
        segments.append((t, t + length - 1, int(rng.integers(0, num_classes))))
        t += length + int(rng.integers(10, 41))
    return segments


# strength of the distractor class direction mixed into background frames;
# mimics the motion-bias failure mode that background-aware refinement exists
# to suppress (raw class thresholding fires on these stretches)
DISTRACTOR_MIX = 1.1


def synth_video(
    timesteps: int,
    segments,
    bank: TextBank,
    noise: float,
    rng: np.random.Generator,
) -> np.ndarray:
    """Noisy feature rows; ``noise`` is the norm of an angular perturbation
    added to the unit base direction, so it directly controls cosine margins."""
    dim = bank.dim
    rows = np.empty((timesteps, dim))
    label = np.full(timesteps, -1)
    for start, end, cls in segments:
        label[start : end + 1] = cls
    distractor = bank.class_embeddings[int(rng.integers(0, bank.num_classes))]
    for t in range(timesteps):
        if label[t] < 0:
            base = _unit(bank.background + DISTRACTOR_MIX * distractor)
        else:
            base = bank.class_embeddings[label[t]]
        perturbation = rng.standard_normal(dim)
        rows[t] = _unit(base + noise * _unit(perturbation))
    return rows


def synth_dataset(
    out_dir,
    num_classes: int,
    dim: int,
    num_videos: int,
    seed: int,
    noise: float,
    timesteps: int = 240,
    fps: float = 30.0,
    stride: int = 1,
    window_len: int = 8,
) -> dict:
    """Write manifest + features, text bank, and ground truth under out_dir.

    Returns the paths written, keyed by role.
    """
    out_dir = Path(out_dir)
    (out_dir / "features").mkdir(parents=True, exist_ok=True)
    rng = np.random.default_rng(seed)
    bank = make_textbank(num_classes, dim, rng)

    entries = []
    gt: dict = {}
    duration = (timesteps - 1) * stride / fps
    for v in range(num_videos):
        video_id = f"synth_{v:03d}"
        segments = plant_segments(timesteps, num_classes, rng)
        rows = synth_video(timesteps, segments, bank, noise, rng)
        entry = ManifestEntry(
            video_id=video_id,
            path=f"features/{video_id}.bin",
            timesteps=timesteps,
            dim=dim,
            fps=fps,
            stride=stride,
            window_len=window_len,
        )
        write_feature_array(out_dir, entry, rows)
        entries.append(entry)
        gt[video_id] = {
            "duration": duration,
            "annotations": [
                {
                    "label": bank.class_names[cls],
                    "segment": [start * stride / fps, end * stride / fps],
                }
                for start, end, cls in segments
            ],
        }

    save_manifest(FeatureManifest(root=out_dir, entries=entries))
    textbank_json = out_dir / "textbank.json"
    textbank_bin = out_dir / "textbank.bin"
    save_textbank(
        bank,
        textbank_json,
        textbank_bin,
        prompts={
            "foreground": "a scene with some synthetic activity happening",
            "background": "a scene with no activity",
        },
    )
    gt_path = out_dir / "gt.json"
    gt_path.write_text(json.dumps(gt, indent=2) + "\n")
    return {
        "manifest": out_dir / "manifest.json",
        "textbank_json": textbank_json,
        "textbank_bin": textbank_bin,
        "gt": gt_path,
    }
