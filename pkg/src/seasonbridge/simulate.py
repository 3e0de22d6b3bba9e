"""Scripted virtual sensors, session logs, and paced replay.

Scenarios produce deterministic frame sequences (ramps, holds, triangle
oscillations, and composites of those) so every pipeline behavior can be
exercised with no hardware attached.  Sessions record to a plain-text log
of timestamped wire lines and replay from it at any speed.
"""

from __future__ import annotations

import enum
import random
import time
from dataclasses import dataclass
from pathlib import Path
from typing import BinaryIO, Callable, Iterable, Iterator

from .protocol import (
    ProtocolError,
    SensorFrame,
    SensorKind,
    SEQ_MODULO,
    VALUE_RANGES,
    decode_frame,
    encode_frame,
    format_log_record,
    kind_from_json_name,
    parse_log_record,
    quantize,
)


class ScenarioKind(enum.Enum):
    RAMP = "ramp"
    HOLD = "hold"
    OSCILLATE = "oscillate"
    COMPOSITE = "composite"


@dataclass
class ScenarioSpec:
    """One scripted sensor stream.

    Ramp interpolates linearly from ``start`` to ``end`` over the
    duration; Oscillate follows a triangle wave between them with the
    given period; Hold stays at ``start``; Composite plays its parts in
    sequence.  Optional uniform noise of +/-``noise`` is drawn from the
    seeded generator at emit time.
    """

    kind: ScenarioKind
    sensor: SensorKind = SensorKind.TEMPERATURE
    start: float = 0.0
    end: float | None = None
    duration_s: float = 0.0
    period_s: float | None = None
    rate_hz: float = 5.0
    noise: float = 0.0
    parts: tuple["ScenarioSpec", ...] = ()

    def __post_init__(self) -> None:
        if self.kind is ScenarioKind.COMPOSITE:
            if not self.parts:
                raise ValueError("composite scenario needs at least one part")
            sensors = {p.sensor for p in self.parts}
            if len(sensors) != 1:
                raise ValueError("composite parts must share one sensor kind")
            self.sensor = self.parts[0].sensor
            self.duration_s = sum(p.duration_s for p in self.parts)
            return
        if self.end is None:
            self.end = self.start
        if self.duration_s <= 0:
            raise ValueError(f"duration_s must be positive: {self.duration_s}")
        if self.rate_hz <= 0:
            raise ValueError(f"rate_hz must be positive: {self.rate_hz}")
        if self.noise < 0:
            raise ValueError(f"noise must be non-negative: {self.noise}")
        if self.kind is ScenarioKind.OSCILLATE and (
            self.period_s is None or self.period_s <= 0
        ):
            raise ValueError(f"oscillate needs a positive period_s: {self.period_s}")
        lo, hi = VALUE_RANGES[self.sensor]
        for name in ("start", "end"):
            v = getattr(self, name)
            if not lo <= v <= hi:
                raise ValueError(
                    f"{name}: outside [{lo}, {hi}] for {self.sensor.name}: {v}"
                )

    @classmethod
    def from_dict(cls, d: dict) -> "ScenarioSpec":
        known = {
            "kind",
            "sensor",
            "start",
            "end",
            "duration_s",
            "period_s",
            "rate_hz",
            "noise",
            "parts",
        }
        unknown = set(d) - known
        if unknown:
            raise ValueError(f"unknown scenario key: {sorted(unknown)[0]}")
        try:
            kind = ScenarioKind(d.get("kind", ""))
        except ValueError:
            raise ValueError(f"unknown scenario kind: {d.get('kind')!r}") from None
        sensor = kind_from_json_name(d.get("sensor", "temperature"))
        if sensor is None:
            raise ValueError(f"unknown sensor: {d.get('sensor')!r}")
        parts = tuple(cls.from_dict(p) for p in d.get("parts", ()))
        return cls(
            kind=kind,
            sensor=sensor,
            start=float(d.get("start", 0.0)),
            end=float(d["end"]) if "end" in d else None,
            duration_s=float(d.get("duration_s", 0.0)),
            period_s=float(d["period_s"]) if "period_s" in d else None,
            rate_hz=float(d.get("rate_hz", 5.0)),
            noise=float(d.get("noise", 0.0)),
            parts=parts,
        )


def load_scenario_file(path: str | Path) -> list[ScenarioSpec]:
    """Read a scenario file: ``{"scenarios": [<spec>, ...]}`` in JSON.

    Each entry is one sensor stream; streams run concurrently.
    """
    import json

    with open(path, "r", encoding="utf-8") as f:
        doc = json.load(f)
    if not isinstance(doc, dict) or "scenarios" not in doc:
        raise ValueError("scenario file must be an object with a 'scenarios' list")
    entries = doc["scenarios"]
    if not isinstance(entries, list) or not entries:
        raise ValueError("'scenarios' must be a non-empty list")
    return [ScenarioSpec.from_dict(e) for e in entries]


# -- Generation ---------------------------------------------------------------


def generate(
    spec: ScenarioSpec, seed: int, *, start_seq: int = 0, t0_ms: int = 0
) -> list[SensorFrame]:
    """Produce the scripted frame sequence, timestamped from ``t0_ms``.

    Values are quantized to wire precision so every generated frame
    round-trips through the codec unchanged; identical (spec, seed) pairs
    produce identical sequences.
    """
    rng = random.Random(seed)
    frames, _, _ = _generate(spec, rng, start_seq, t0_ms)
    return frames


def _generate(
    spec: ScenarioSpec, rng: random.Random, seq: int, t0_ms: int
) -> tuple[list[SensorFrame], int, int]:
    if spec.kind is ScenarioKind.COMPOSITE:
        frames: list[SensorFrame] = []
        for part in spec.parts:
            sub, seq, _ = _generate(part, rng, seq, t0_ms)
            frames.extend(sub)
            t0_ms += int(round(part.duration_s * 1000.0))
        return frames, seq, t0_ms

    lo, hi = VALUE_RANGES[spec.sensor]
    n = max(1, int(round(spec.duration_s * spec.rate_hz)))
    frames = []
    for i in range(n):
        t_s = i / spec.rate_hz
        if spec.kind is ScenarioKind.HOLD:
            v = spec.start
        elif spec.kind is ScenarioKind.RAMP:
            f = i / (n - 1) if n > 1 else 0.0
            v = spec.start + (spec.end - spec.start) * f
        else:  # OSCILLATE: triangle wave starting at `start`
            phase = (t_s % spec.period_s) / spec.period_s
            if phase <= 0.5:
                v = spec.start + (spec.end - spec.start) * (phase * 2.0)
            else:
                v = spec.end - (spec.end - spec.start) * ((phase - 0.5) * 2.0)
        if spec.noise > 0:
            v += rng.uniform(-spec.noise, spec.noise)
        v = quantize(spec.sensor, min(max(v, lo), hi))
        frames.append(
            SensorFrame(
                seq=seq % SEQ_MODULO,
                kind=spec.sensor,
                value=v,
                received_at=t0_ms + int(round(t_s * 1000.0)),
            )
        )
        seq += 1
    return frames, seq, t0_ms


def merge_streams(streams: Iterable[list[SensorFrame]]) -> list[SensorFrame]:
    """Interleave concurrent streams by timestamp and renumber seq, as a
    single multiplexed link would carry them."""
    merged = sorted(
        (f for stream in streams for f in stream), key=lambda f: f.received_at
    )
    for i, f in enumerate(merged):
        f.seq = i % SEQ_MODULO
    return merged


# -- Session logs -------------------------------------------------------------


@dataclass(frozen=True)
class LogRecord:
    received_at_ms: int
    line: bytes


class RecordError(OSError):
    """A sink write failed partway; ``records_written`` were flushed."""

    def __init__(self, records_written: int, message: str) -> None:
        super().__init__(message)
        self.records_written = records_written


def record(frames: Iterable[SensorFrame], sink: BinaryIO | str | Path) -> int:
    """Write frames to a session log; returns the record count."""
    own = isinstance(sink, (str, Path))
    f = open(sink, "wb") if own else sink
    count = 0
    try:
        for frame in frames:
            rec = format_log_record(frame.received_at, encode_frame(frame))
            try:
                f.write(rec)
            except OSError as exc:
                raise RecordError(count, f"log write failed after {count} records") from exc
            count += 1
        try:
            f.flush()
        except OSError as exc:
            raise RecordError(count, "log flush failed") from exc
    finally:
        if own:
            f.close()
    return count


def frames_to_records(frames: Iterable[SensorFrame]) -> list[LogRecord]:
    """Encode frames into in-memory log records (testing and virtual runs)."""
    return [LogRecord(f.received_at, encode_frame(f)) for f in frames]


def load_log(source: BinaryIO | str | Path) -> tuple[list[LogRecord], int]:
    """Read a session log; malformed records are skipped and counted.

    Lines are returned raw: decode failures surface later, where the
    pipeline's usual drop-and-count policy applies.
    """
    own = isinstance(source, (str, Path))
    f = open(source, "rb") if own else source
    records: list[LogRecord] = []
    skipped = 0
    try:
        for raw in f:
            if not raw.strip():
                continue
            try:
                ts, line = parse_log_record(raw)
            except ProtocolError:
                skipped += 1
                continue
            records.append(LogRecord(ts, line))
    finally:
        if own:
            f.close()
    return records, skipped


# -- Replay -------------------------------------------------------------------


class LogReplayer:
    """Re-emits a recorded session, optionally time-scaled.

    Inter-record delays shrink by 1/speed and each frame's receive stamp
    is reassigned from the caller's clock, so downstream smoothing sees
    the pace frames actually arrive at.  Undecodable lines are skipped
    and counted in ``skipped``.
    """

    def __init__(self, records: list[LogRecord], speed: float = 1.0) -> None:
        if speed <= 0:
            raise ValueError(f"speed must be positive: {speed}")
        self.records = records
        self.speed = speed
        self.skipped = 0

    def frames(
        self,
        now_ms: Callable[[], int] | None = None,
        sleep: Callable[[float], None] = time.sleep,
    ) -> Iterator[SensorFrame]:
        if now_ms is None:
            now_ms = lambda: int(time.monotonic() * 1000.0)
        prev: int | None = None
        for rec in self.records:
            if prev is not None:
                gap_s = max(rec.received_at_ms - prev, 0) / 1000.0
                if gap_s > 0:
                    sleep(gap_s / self.speed)
            prev = rec.received_at_ms
            try:
                yield decode_frame(rec.line, now_ms())
            except ProtocolError:
                self.skipped += 1
