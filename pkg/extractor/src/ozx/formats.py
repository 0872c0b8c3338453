"""Writers for the localizer's on-disk formats.

Deliberately independent of the localizer package: the contract between the
two components is the bytes on disk, and the round-trip test loads these
files with the localizer's own readers.
"""

from __future__ import annotations

import json
from pathlib import Path

import numpy as np

MANIFEST_NAME = "manifest.json"
FORMAT_VERSION = 1


def write_feature_bin(path, array: np.ndarray) -> None:
    """Row-major little-endian float32, one row per timestep."""
    path = Path(path)
    path.parent.mkdir(parents=True, exist_ok=True)
    np.asarray(array).astype("<f4").tofile(path)


def write_manifest(root, entries) -> Path:
    """``entries`` are dicts with video_id/path/T/D/fps/stride/window_len."""
    dims = {e["D"] for e in entries}
    if len(dims) > 1:
        raise ValueError(f"manifest would mix feature dimensions: {sorted(dims)}")
    path = Path(root) / MANIFEST_NAME
    payload = {"format_version": FORMAT_VERSION, "entries": list(entries)}
    path.write_text(json.dumps(payload, indent=2) + "\n")
    return path


def write_textbank(
    json_path,
    bin_path,
    class_names,
    class_descriptions,
    foreground_text: str,
    background_text: str,
    matrix: np.ndarray,
) -> None:
    """JSON header plus (K+2) x D binary: class rows, then foreground, background."""
    matrix = np.asarray(matrix)
    k = len(class_names)
    if matrix.shape[0] != k + 2:
        raise ValueError(f"expected {k + 2} embedding rows, got {matrix.shape[0]}")
    meta = {
        "dim": int(matrix.shape[1]),
        "classes": [
            {"name": n, "description": d}
            for n, d in zip(class_names, class_descriptions)
        ],
        "foreground": foreground_text,
        "background": background_text,
    }
    Path(json_path).write_text(json.dumps(meta, indent=2) + "\n")
    matrix.astype("<f4").tofile(bin_path)
