"""Time-windowed arithmetic mean over recent sensor samples."""

from __future__ import annotations

import math
from collections import deque

from .protocol import SensorKind


class SmoothingWindow:
    """Holds the samples from the trailing ``duration_ms`` and averages them.

    Single-owner mutable state: one writer pushes, the same thread reads.
    Pushes with a timestamp behind the newest sample are dropped and
    counted (``dropped``) so a skewed source clock cannot corrupt the
    window; eviction happens on push, so a quiet window simply keeps its
    last samples, which is exactly the hold-last behavior downstream wants.
    """

    def __init__(self, kind: SensorKind, duration_ms: int = 3000) -> None:
        if duration_ms <= 0:
            raise ValueError(f"duration_ms must be positive: {duration_ms}")
        self.kind = kind
        self.duration_ms = int(duration_ms)
        self.dropped = 0
        self._samples: deque[tuple[int, float]] = deque()

    def __len__(self) -> int:
        return len(self._samples)

    @property
    def samples(self) -> list[tuple[int, float]]:
        return list(self._samples)

    def push(self, t_ms: int, value: float) -> bool:
        """Append a sample and evict everything older than the window.

        Returns False (and counts the drop) when ``t_ms`` is behind the
        newest retained sample.
        """
        if self._samples and t_ms < self._samples[-1][0]:
            self.dropped += 1
            return False
        self._samples.append((int(t_ms), float(value)))
        cutoff = t_ms - self.duration_ms
        while self._samples[0][0] < cutoff:
            self._samples.popleft()
        return True

    def average(self) -> float | None:
        """Arithmetic mean of the retained samples, or None when empty.

        Uses correctly-rounded summation and clamps into the sample hull:
        naive float summation can land the mean an ulp outside
        [min(samples), max(samples)].
        """
        if not self._samples:
            return None
        values = [v for _, v in self._samples]
        mean = math.fsum(values) / len(values)
        return min(max(mean, min(values)), max(values))

    def last(self) -> float | None:
        """Newest retained value, or None when empty."""
        if not self._samples:
            return None
        return self._samples[-1][1]

    def clear(self) -> None:
        self._samples.clear()
