"""Per-class binary state machine turning score streams into action spans."""

from __future__ import annotations

import math

import numpy as np

from .core import ActionInstance


def segment_confidence(sum_y: float, start_t: int, end_t: int) -> float:
    """Sublinear confidence: accumulated score over the square root of length."""
    if end_t < start_t:
        raise ValueError(f"end_t {end_t} < start_t {start_t}")
    return sum_y / math.sqrt(end_t - start_t + 1)


class SpanStateMachine:
    """Tracks one open/closed state bit per class and emits completed spans.

    A class opens when its score strictly exceeds the action threshold and
    closes at the first step at or below it; the closing step is excluded
    from the span. Classes are independent, so overlapping actions of
    different classes coexist.
    """

    def __init__(self, num_classes: int, action_threshold: float):
        if num_classes < 1:
            raise ValueError("num_classes must be >= 1")
        self.num_classes = num_classes
        self.action_threshold = action_threshold
        self._state = np.zeros(num_classes, dtype=bool)
        self._start = np.zeros(num_classes, dtype=np.int64)
        self._sum = np.zeros(num_classes, dtype=np.float64)
        self._last_t = -1

    @property
    def open_classes(self) -> np.ndarray:
        return np.nonzero(self._state)[0]

    def step(self, t: int, y: np.ndarray) -> list:
        """Advance one timestep; returns instances completed at this step."""
        if t <= self._last_t:
            raise ValueError(f"non-monotone timestep: {t} after {self._last_t}")
        y = np.asarray(y, dtype=np.float64)
        if y.shape != (self.num_classes,):
            raise ValueError(
                f"score length mismatch: expected {self.num_classes}, got {y.shape}"
            )
        above = y > self.action_threshold
        closing = self._state & ~above
        opening = above & ~self._state

        emitted = []
        for k in np.nonzero(closing)[0]:
            start = int(self._start[k])
            emitted.append(
                ActionInstance(
                    start_t=start,
                    end_t=t - 1,
                    class_index=int(k),
                    confidence=segment_confidence(float(self._sum[k]), start, t - 1),
                    emit_t=t,
                )
            )
        continuing = above & self._state
        self._sum[continuing] += y[continuing]
        self._sum[opening] = y[opening]
        self._start[opening] = t
        self._state = above
        self._last_t = t
        return emitted

    def flush(self, t_last: int) -> list:
        """Emit every open span as ending at t_last and reset to all-zero."""
        if t_last < self._last_t:
            raise ValueError(f"flush at {t_last} before last step {self._last_t}")
        emitted = []
        for k in np.nonzero(self._state)[0]:
            start = int(self._start[k])
            emitted.append(
                ActionInstance(
                    start_t=start,
                    end_t=t_last,
                    class_index=int(k),
                    confidence=segment_confidence(float(self._sum[k]), start, t_last),
                    emit_t=t_last,
                )
            )
        self._state[:] = False
        self._sum[:] = 0.0
        return emitted
