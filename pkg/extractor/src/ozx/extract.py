"""Sliding-window video feature extraction."""

from __future__ import annotations

from pathlib import Path

import numpy as np

from .formats import write_feature_bin, write_manifest

FRAME_SIZE = 224
DEFAULT_FPS = 30.0


def decode_video(path) -> tuple[np.ndarray, float]:
    """All frames of a video as (N, 224, 224, 3) uint8 RGB, plus its fps."""
    import cv2

    path = Path(path)
    cap = cv2.VideoCapture(str(path))
    frames = []
    if cap.isOpened():
        while True:
            ok, frame = cap.read()
            if not ok:
                break
            frame = cv2.cvtColor(frame, cv2.COLOR_BGR2RGB)
            frames.append(
                cv2.resize(frame, (FRAME_SIZE, FRAME_SIZE), interpolation=cv2.INTER_AREA)
            )
        fps = cap.get(cv2.CAP_PROP_FPS)
        cap.release()
    else:
        fps = 0.0
    if not frames:
        raise ValueError(f"cannot decode video: {path}")
    return np.stack(frames), float(fps) if fps and fps > 0 else DEFAULT_FPS


def _window_rows(frames: np.ndarray, encoder, window_len: int, stride: int) -> np.ndarray:
    """One row per timestep: the window of ``window_len`` frames ending at that
    frame, with the first windows left-padded by repeating frame 0."""
    n = frames.shape[0]
    anchors = range(0, n, stride)
    if encoder.family == "image":
        per_frame = encoder.encode_frames(frames)
        rows = np.empty((len(anchors), encoder.dim))
        for row, i in enumerate(anchors):
            idx = np.maximum(np.arange(i - window_len + 1, i + 1), 0)
            pooled = per_frame[idx].mean(axis=0)
            rows[row] = pooled / np.linalg.norm(pooled)
    else:
        rows = np.empty((len(anchors), encoder.dim))
        for row, i in enumerate(anchors):
            idx = np.maximum(np.arange(i - window_len + 1, i + 1), 0)
            rows[row] = encoder.encode_window(frames[idx])
    if not np.isfinite(rows).all():
        raise ValueError("encoder produced non-finite features")
    return rows


def extract_video_features(
    video_path,
    out_dir,
    encoder,
    window_len: int = 8,
    stride: int = 1,
    expect_dim: int | None = None,
) -> dict:
    """Extract one video into ``<out_dir>/features/<id>.bin``; returns its
    manifest entry."""
    if window_len < 1:
        raise ValueError(f"window_len must be >= 1, got {window_len}")
    if stride < 1:
        raise ValueError(f"stride must be >= 1, got {stride}")
    if expect_dim is not None and expect_dim != encoder.dim:
        raise ValueError(
            f"encoder {encoder.name}-{encoder.dim} does not produce "
            f"D={expect_dim} features"
        )
    video_path = Path(video_path)
    frames, fps = decode_video(video_path)
    rows = _window_rows(frames, encoder, window_len, stride)
    video_id = video_path.stem
    rel = f"features/{video_id}.bin"
    write_feature_bin(Path(out_dir) / rel, rows)
    return {
        "video_id": video_id,
        "path": rel,
        "T": int(rows.shape[0]),
        "D": int(rows.shape[1]),
        "fps": fps,
        "stride": stride,
        "window_len": window_len,
    }


def write_dataset_manifest(out_dir, entries) -> Path:
    return write_manifest(out_dir, entries)
