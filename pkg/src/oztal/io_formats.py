"""File formats: feature manifests, text banks, annotations, prediction logs.

All binary payloads are row-major little-endian float32; metadata is JSON.
"""

from __future__ import annotations

import json
import warnings
from dataclasses import dataclass
from pathlib import Path

import numpy as np

from .core import FrameFeature, TextBank
from .evaluation import Detection, DetectionSet, GroundTruthSet, GtSegment, VideoGroundTruth

MANIFEST_NAME = "manifest.json"
FORMAT_VERSION = 1


@dataclass(frozen=True)
class ManifestEntry:
    video_id: str
    path: str
    timesteps: int
    dim: int
    fps: float
    stride: int
    window_len: int


@dataclass
class FeatureManifest:
    root: Path
    entries: list

    @property
    def dim(self) -> int:
        return self.entries[0].dim if self.entries else 0


def load_manifest(directory) -> FeatureManifest:
    directory = Path(directory)
    path = directory / MANIFEST_NAME
    if not path.is_file():
        raise FileNotFoundError(f"manifest not found: {path}")
    data = json.loads(path.read_text())
    if data.get("format_version") != FORMAT_VERSION:
        raise ValueError(f"unsupported manifest format_version: {data.get('format_version')}")
    entries = []
    dims = set()
    for raw in data["entries"]:
        rel = raw["path"]
        if Path(rel).is_absolute() or ".." in Path(rel).parts:
            raise ValueError(f"unsafe feature path in manifest: {rel}")
        entry = ManifestEntry(
            video_id=raw["video_id"],
            path=rel,
            timesteps=int(raw["T"]),
            dim=int(raw["D"]),
            fps=float(raw["fps"]),
            stride=int(raw["stride"]),
            window_len=int(raw["window_len"]),
        )
        dims.add(entry.dim)
        entries.append(entry)
    if len(dims) > 1:
        raise ValueError(f"manifest mixes feature dimensions: {sorted(dims)}")
    return FeatureManifest(root=directory, entries=entries)


def save_manifest(manifest: FeatureManifest) -> None:
    payload = {
        "format_version": FORMAT_VERSION,
        "entries": [
            {
                "video_id": e.video_id,
                "path": e.path,
                "T": e.timesteps,
                "D": e.dim,
                "fps": e.fps,
                "stride": e.stride,
                "window_len": e.window_len,
            }
            for e in manifest.entries
        ],
    }
    (manifest.root / MANIFEST_NAME).write_text(json.dumps(payload, indent=2) + "\n")


def read_feature_array(manifest: FeatureManifest, entry: ManifestEntry) -> np.ndarray:
    """Decode one video's features as a T x D float array, fully validated."""
    path = manifest.root / entry.path
    expected = entry.timesteps * entry.dim * 4
    actual = path.stat().st_size
    if actual != expected:
        raise ValueError(
            f"feature file size mismatch for {entry.video_id}: "
            f"expected {expected} bytes, got {actual}"
        )
    data = np.fromfile(path, dtype="<f4").astype(np.float64)
    data = data.reshape(entry.timesteps, entry.dim)
    finite = np.isfinite(data).all(axis=1)
    if not finite.all():
        raise ValueError(f"non-finite feature at t={int(np.argmin(finite))}")
    nonzero = data.any(axis=1)
    if not nonzero.all():
        raise ValueError(f"zero feature vector at t={int(np.argmin(nonzero))}")
    return data


def read_features(manifest: FeatureManifest, entry: ManifestEntry) -> list:
    array = read_feature_array(manifest, entry)
    return [FrameFeature(row, t) for t, row in enumerate(array)]


def write_feature_array(manifest_root, entry: ManifestEntry, array: np.ndarray) -> None:
    array = np.asarray(array)
    if array.shape != (entry.timesteps, entry.dim):
        raise ValueError(f"array shape {array.shape} does not match manifest entry")
    path = Path(manifest_root) / entry.path
    path.parent.mkdir(parents=True, exist_ok=True)
    array.astype("<f4").tofile(path)


def load_textbank(json_path, bin_path) -> TextBank:
    """Load the JSON header plus (K+2) x D binary of text embeddings.

    Rows 0..K-1 are classes in JSON order, row K the foreground prompt,
    row K+1 the background prompt.
    """
    meta = json.loads(Path(json_path).read_text())
    classes = meta["classes"]
    names = [c["name"] for c in classes]
    descs = [c.get("description", "") for c in classes]
    dim = int(meta["dim"])
    k = len(names)
    raw = np.fromfile(bin_path, dtype="<f4").astype(np.float64)
    if raw.size != (k + 2) * dim:
        raise ValueError(
            f"text bank binary has {raw.size // dim if dim else 0} rows, "
            f"expected K+2 = {k + 2}"
        )
    mat = raw.reshape(k + 2, dim)
    return TextBank(
        class_names=tuple(names),
        class_descriptions=tuple(descs),
        class_embeddings=mat[:k],
        foreground=mat[k],
        background=mat[k + 1],
    )


def save_textbank(bank: TextBank, json_path, bin_path, prompts: dict | None = None) -> None:
    prompts = prompts or {}
    meta = {
        "dim": bank.dim,
        "classes": [
            {"name": n, "description": d}
            for n, d in zip(bank.class_names, bank.class_descriptions)
        ],
        "foreground": prompts.get("foreground", ""),
        "background": prompts.get("background", ""),
    }
    Path(json_path).write_text(json.dumps(meta, indent=2) + "\n")
    mat = np.vstack([bank.class_embeddings, bank.foreground[None], bank.background[None]])
    mat.astype("<f4").tofile(bin_path)


def load_annotations(path) -> GroundTruthSet:
    """ActivityNet-style JSON: {video_id: {duration, annotations: [...]}}.

    Segment ends exceeding the duration by less than 0.1 s are clamped with
    a warning; larger excursions are errors.
    """
    data = json.loads(Path(path).read_text())
    videos = {}
    classes: set = set()
    for vid, raw in data.items():
        duration = float(raw["duration"])
        segments = []
        for i, ann in enumerate(raw.get("annotations", [])):
            start, end = (float(v) for v in ann["segment"])
            label = ann["label"]
            if start >= end:
                raise ValueError(
                    f"segment {i} of video {vid}: start {start} >= end {end}"
                )
            if end > duration:
                if end - duration < 0.1:
                    warnings.warn(
                        f"clamping segment {i} of video {vid} to duration {duration}"
                    )
                    end = duration
                else:
                    raise ValueError(
                        f"segment {i} of video {vid} ends at {end}, "
                        f"beyond duration {duration}"
                    )
            segments.append(GtSegment(start, end, label))
            classes.add(label)
        videos[vid] = VideoGroundTruth(duration=duration, segments=segments)
    return GroundTruthSet(videos=videos, classes=sorted(classes))


def write_predictions(detections, path) -> None:
    """One JSON object per line, seconds rounded to 6 decimal places."""
    with open(path, "w") as fh:
        for d in detections:
            record = {
                "video_id": d.video_id,
                "label": d.label,
                "start": round(d.start, 6),
                "end": round(d.end, 6),
                "score": round(d.score, 6),
                "emit": round(d.emit, 6) if d.emit is not None else None,
            }
            fh.write(json.dumps(record) + "\n")


def read_predictions(path) -> DetectionSet:
    detections = []
    with open(path) as fh:
        for lineno, line in enumerate(fh, start=1):
            line = line.strip()
            if not line:
                continue
            try:
                record = json.loads(line)
                detections.append(
                    Detection(
                        video_id=record["video_id"],
                        label=record["label"],
                        start=float(record["start"]),
                        end=float(record["end"]),
                        score=float(record["score"]),
                        emit=record.get("emit"),
                    )
                )
            except (json.JSONDecodeError, KeyError, TypeError, ValueError) as exc:
                raise ValueError(f"malformed prediction at line {lineno}: {exc}") from exc
    return DetectionSet(detections)
