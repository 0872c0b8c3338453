"""Detection mAP at temporal-IoU thresholds."""

from __future__ import annotations

from collections import defaultdict
from dataclasses import dataclass, field

import numpy as np


@dataclass(frozen=True)
class GtSegment:
    start: float
    end: float
    label: str


@dataclass
class VideoGroundTruth:
    duration: float
    segments: list = field(default_factory=list)


@dataclass
class GroundTruthSet:
    videos: dict  # video_id -> VideoGroundTruth
    classes: list

    def __post_init__(self):
        seen = set(self.classes)
        for vid, v in self.videos.items():
            for i, seg in enumerate(v.segments):
                if not 0 <= seg.start < seg.end <= v.duration + 1e-9:
                    raise ValueError(
                        f"invalid segment {i} in video {vid}: "
                        f"[{seg.start}, {seg.end}] with duration {v.duration}"
                    )
                if seg.label not in seen:
                    raise ValueError(f"unknown class {seg.label!r} in video {vid}")


@dataclass(frozen=True)
class Detection:
    video_id: str
    label: str
    start: float
    end: float
    score: float
    emit: float | None = None

    def __post_init__(self):
        if not self.start < self.end:
            raise ValueError(
                f"detection in {self.video_id}: start {self.start} >= end {self.end}"
            )
        if not np.isfinite(self.score):
            raise ValueError(f"non-finite score in {self.video_id}")


@dataclass
class DetectionSet:
    detections: list = field(default_factory=list)

    def by_class(self) -> dict:
        grouped = defaultdict(list)
        for d in self.detections:
            grouped[d.label].append(d)
        return grouped

    def labels(self) -> set:
        return {d.label for d in self.detections}


def tiou(a, b) -> float:
    """Temporal IoU of two (start, end) intervals; 0 when disjoint."""
    a0, a1 = a
    b0, b1 = b
    if a1 <= a0 or b1 <= b0:
        raise ValueError("degenerate zero-length segment")
    inter = min(a1, b1) - max(a0, b0)
    if inter <= 0:
        return 0.0
    union = max(a1, b1) - min(a0, b0)
    return inter / union


def _sort_key(d: Detection):
    # descending score; ties by earlier start then video id for determinism
    return (-d.score, d.start, d.video_id)


def average_precision(preds, gt_by_video, threshold: float) -> float:
    """AP for one class: greedy score-ordered matching, one GT per detection.

    ``preds`` is a list of Detection; ``gt_by_video`` maps video_id to a
    list of (start, end) tuples. AP is the sum of precision at each true
    positive divided by the number of GT segments.
    """
    if not 0 < threshold <= 1:
        raise ValueError(f"tIoU threshold outside (0,1]: {threshold}")
    n_gt = sum(len(v) for v in gt_by_video.values())
    if n_gt == 0:
        return 0.0
    matched = {vid: np.zeros(len(segs), dtype=bool) for vid, segs in gt_by_video.items()}
    tp = np.zeros(len(preds))
    for rank, det in enumerate(sorted(preds, key=_sort_key)):
        segs = gt_by_video.get(det.video_id, ())
        best_iou, best_i = 0.0, -1
        for i, seg in enumerate(segs):
            if matched[det.video_id][i]:
                continue
            iou = tiou((det.start, det.end), seg)
            if iou > best_iou:
                best_iou, best_i = iou, i
        if best_i >= 0 and best_iou >= threshold:
            matched[det.video_id][best_i] = True
            tp[rank] = 1.0
    if len(preds) == 0:
        return 0.0
    cum_tp = np.cumsum(tp)
    precision = cum_tp / (np.arange(len(preds)) + 1)
    return float(np.sum(precision * tp) / n_gt)


def mean_ap(dets: DetectionSet, gt: GroundTruthSet, thresholds) -> tuple:
    """mAP per tIoU threshold (mean of per-class AP over GT classes) plus
    the arithmetic mean across thresholds."""
    thresholds = list(thresholds)
    if not gt.classes or not any(v.segments for v in gt.videos.values()):
        raise ValueError("empty ground truth set")
    preds_by_class = dets.by_class()

    gt_by_class: dict = {c: defaultdict(list) for c in gt.classes}
    for vid, v in gt.videos.items():
        for seg in v.segments:
            gt_by_class[seg.label][vid].append((seg.start, seg.end))
    # classes with no annotated segments carry no AP (standard TAL protocol)
    eval_classes = [c for c in gt.classes if gt_by_class[c]]

    result = {}
    for thr in thresholds:
        aps = [
            average_precision(preds_by_class.get(c, []), gt_by_class[c], thr)
            for c in eval_classes
        ]
        result[thr] = float(np.mean(aps))
    average = float(np.mean([result[t] for t in thresholds]))
    return result, average
