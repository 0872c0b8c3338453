"""Per-timestep orchestration of the full streaming pipeline."""

from __future__ import annotations

from dataclasses import dataclass

import numpy as np

from .core import ActionInstance, FrameFeature, LocalizerConfig, TextBank, validate_config
from .memory import MemoryBank, enhance_feature
from .scoring import refine_scores
from .spans import SpanStateMachine


@dataclass
class StepTrace:
    t: int
    fusion_weight: float
    background: float
    max_score: float


class StreamSession:
    """Causal state for one video stream.

    Each processed feature advances the pipeline in fixed order: memory
    update, feature enhancement, class/background scoring, background-aware
    refinement, state-machine step. Only current and past features are ever
    read. ``use_memory`` and ``use_refinement`` exist for ablations.
    """

    def __init__(
        self,
        text_bank: TextBank,
        cfg: LocalizerConfig,
        video_id: str = "",
        trace: bool = False,
        use_memory: bool = True,
        use_refinement: bool = True,
    ):
        self.cfg = validate_config(cfg)
        self.text_bank = text_bank
        self.video_id = video_id
        self.use_memory = use_memory
        self.use_refinement = use_refinement
        self.bank = MemoryBank(cfg.memory_capacity, text_bank.dim)
        self.machine = SpanStateMachine(text_bank.num_classes, cfg.action_threshold)
        self.next_t = 0
        self.trace: list | None = [] if trace else None
        # unit rows cached so per-step scoring is a single matmul
        self._fcls = text_bank.class_embeddings
        self._fg = text_bank.foreground
        self._bg = text_bank.background

    def _scores(self, x: np.ndarray) -> tuple[np.ndarray, float, float]:
        """Stages 1-4: memory update, enhancement, scoring, refinement."""
        if self.use_memory:
            self.bank.update(x, self._fg, self._bg)
            z, lam = enhance_feature(self.bank, x, self.cfg)
        else:
            z, lam = x, 0.0
        nz = np.linalg.norm(z)
        s = self.cfg.logit_scale
        k = s * (self._fcls @ z) / nz
        r = s * float(np.dot(self._bg, z)) / nz
        y = refine_scores(k, r) if self.use_refinement else k
        return y, lam, r

    def process_timestep(self, feature: FrameFeature) -> list:
        """Run one feature through all five stages; returns completed instances."""
        if feature.t != self.next_t:
            raise ValueError(
                f"out-of-order timestep: expected {self.next_t}, got {feature.t}"
            )
        x = feature.values
        if x.shape != (self.text_bank.dim,):
            raise ValueError(
                f"dimension mismatch: expected ({self.text_bank.dim},), got {x.shape}"
            )
        y, lam, r = self._scores(x)
        emitted = self.machine.step(feature.t, y)
        emitted = [i.with_seconds(self.cfg.fps, self.cfg.stride) for i in emitted]
        if self.trace is not None:
            self.trace.append(StepTrace(feature.t, lam, r, float(np.max(y))))
        self.next_t += 1
        return emitted

    def flush(self) -> list:
        """Close and emit any spans still open at the last processed timestep."""
        if self.next_t == 0:
            return []
        emitted = self.machine.flush(self.next_t - 1)
        return [i.with_seconds(self.cfg.fps, self.cfg.stride) for i in emitted]


def run_stream(
    features,
    text_bank: TextBank,
    cfg: LocalizerConfig,
    video_id: str = "",
    trace: bool = False,
    use_memory: bool = True,
    use_refinement: bool = True,
):
    """Process a whole feature stream and flush at its end.

    ``features`` is a sequence of FrameFeature with contiguous timesteps
    from 0, or a T x D array (rows become timesteps 0..T-1). Returns
    (instances ordered by emission time, trace or None).
    """
    session = StreamSession(
        text_bank,
        cfg,
        video_id=video_id,
        trace=trace,
        use_memory=use_memory,
        use_refinement=use_refinement,
    )
    instances: list[ActionInstance] = []
    if isinstance(features, np.ndarray):
        # bulk-validated fast path: rows become timesteps 0..T-1 without
        # per-row FrameFeature wrappers
        features = np.asarray(features, dtype=np.float64)
        if features.ndim != 2 or features.shape[0] == 0:
            raise ValueError("feature array must be non-empty and 2-D")
        finite = np.isfinite(features).all(axis=1)
        if not finite.all():
            raise ValueError(f"non-finite feature at t={int(np.argmin(finite))}")
        nonzero = features.any(axis=1)
        if not nonzero.all():
            raise ValueError(f"zero feature vector at t={int(np.argmin(nonzero))}")
        if features.shape[1] != text_bank.dim:
            raise ValueError(
                f"dimension mismatch: expected ({text_bank.dim},), "
                f"got ({features.shape[1]},)"
            )
        fps, stride = cfg.fps, cfg.stride
        for t in range(features.shape[0]):
            y, lam, r = session._scores(features[t])
            emitted = session.machine.step(t, y)
            if emitted:
                instances.extend(i.with_seconds(fps, stride) for i in emitted)
            if session.trace is not None:
                session.trace.append(StepTrace(t, lam, r, float(np.max(y))))
            session.next_t += 1
    else:
        features = list(features)
        if not features:
            raise ValueError("empty feature stream")
        for feature in features:
            instances.extend(session.process_timestep(feature))
    instances.extend(session.flush())
    return instances, session.trace


def score_stream(
    array: np.ndarray,
    text_bank: TextBank,
    cfg: LocalizerConfig,
    use_memory: bool = True,
    use_refinement: bool = True,
) -> np.ndarray:
    """Refined score rows for a whole stream, without span prediction.

    Feeding the result through a fresh SpanStateMachine (plus flush)
    reproduces run_stream exactly; the sweep command uses this to rescan
    cached scores under many action thresholds.
    """
    array = np.asarray(array, dtype=np.float64)
    if array.ndim != 2 or array.shape[0] == 0:
        raise ValueError("feature array must be non-empty and 2-D")
    session = StreamSession(
        text_bank, cfg, use_memory=use_memory, use_refinement=use_refinement
    )
    out = np.empty((array.shape[0], text_bank.num_classes))
    for t, row in enumerate(array):
        if not np.all(np.isfinite(row)) or not np.any(row):
            raise ValueError(f"invalid feature at t={t}")
        out[t], _, _ = session._scores(row)
        session.next_t += 1
    return out


def spans_from_scores(
    scores: np.ndarray, action_threshold: float, fps: float, stride: int
) -> list:
    """Run only the span predictor over precomputed score rows, flushing at the end."""
    machine = SpanStateMachine(scores.shape[1], action_threshold)
    instances: list[ActionInstance] = []
    for t, row in enumerate(scores):
        instances.extend(machine.step(t, row))
    instances.extend(machine.flush(scores.shape[0] - 1))
    return [i.with_seconds(fps, stride) for i in instances]
