"""Streaming zero-shot temporal action localization over precomputed embeddings."""

from .core import (
    ActionInstance,
    FrameFeature,
    LocalizerConfig,
    TextBank,
    validate_config,
)
from .evaluation import Detection, DetectionSet, GroundTruthSet, mean_ap, tiou
from .memory import MemoryBank, cosine, enhance_feature
from .scoring import background_score, class_scores, refine_scores
from .spans import SpanStateMachine, segment_confidence
from .stream import StreamSession, run_stream, score_stream, spans_from_scores

__all__ = [
    "ActionInstance",
    "Detection",
    "DetectionSet",
    "FrameFeature",
    "GroundTruthSet",
    "LocalizerConfig",
    "MemoryBank",
    "SpanStateMachine",
    "StreamSession",
    "TextBank",
    "background_score",
    "class_scores",
    "cosine",
    "enhance_feature",
    "mean_ap",
    "refine_scores",
    "run_stream",
    "score_stream",
    "segment_confidence",
    "spans_from_scores",
    "tiou",
    "validate_config",
]

__version__ = "0.1.0"
