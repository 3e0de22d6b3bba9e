"""Deterministic bridge core: windows -> season machine -> scene.

The core is advanced purely by explicit timestamps (``ingest_*`` for
frames, ``tick`` for state recomputation), so the same code path serves
the live wall-clock server, accelerated log replay, and offline tests,
and a given frame timeline always produces the same state, transition,
and broadcast sequences.

Timeline contract (shared by every driver): ticks fire at k/tick_hz from
the core's epoch, k = 1, 2, ...; a frame whose timestamp equals a tick's
fires first, so that tick sees it.  The season machine initializes on
the first tick that has a temperature average; if none arrives within
one smoothing-window of startup, a mid-band default is assumed so the
scene still runs unplugged.  Empty windows hold their last known value.
"""

from __future__ import annotations

import json
import time
from dataclasses import dataclass, field
from typing import Callable, Iterable, Iterator

from .config import Config
from .protocol import (
    VALUE_RANGES,
    ProtocolError,
    SensorFrame,
    SensorKind,
    decode_frame,
    quantize,
)
from .scene import FlameBoost, SceneState, apply_flame, compose, effective_temperature
from .seasons import SeasonTransition, init_season, progress, step
from .simulate import LogRecord
from .smoothing import SmoothingWindow

PROTOCOL_VERSION = 1

# Fallbacks when a sensor has never reported: mid-band ambient and dry air.
DEFAULT_AMBIENT_C = 20.0
DEFAULT_HUMIDITY_PCT = 50.0

# Smoothed flame level at or above this counts as "flame seen" (digital
# modules emit 0/1; analog brightness sits far above it when lit).
FLAME_ACTIVE_LEVEL = 0.5


@dataclass
class Diagnostics:
    decode_errors: int = 0
    value_clamps: int = 0
    dropped_samples: int = 0
    frames: int = 0
    injected: int = 0

    def as_dict(self) -> dict:
        return {
            "decode_errors": self.decode_errors,
            "value_clamps": self.value_clamps,
            "dropped_samples": self.dropped_samples,
            "frames": self.frames,
            "injected": self.injected,
        }


def state_message(scene: SceneState) -> dict:
    """The broadcast State message for a scene, with wire field names."""
    return {
        "type": "state",
        "v": PROTOCOL_VERSION,
        "tick": scene.tick,
        "season": scene.season.value,
        "progress": scene.progress,
        "temperature_c": scene.temperature_c,
        "humidity_pct": scene.humidity_pct,
        "foliage_rgb": list(scene.foliage_rgb),
        "precipitation": {
            "kind": scene.precipitation.kind.value,
            "intensity": scene.precipitation.intensity,
        },
        "flame": scene.flame,
    }


def dump_message(message: dict) -> str:
    return json.dumps(message, separators=(",", ":"))


class BridgeCore:
    """Single authoritative pipeline state; one writer, explicit clock."""

    def __init__(self, config: Config) -> None:
        config.validate()
        self.config = config
        self.windows = {
            kind: SmoothingWindow(kind, config.window_ms) for kind in SensorKind
        }
        self.diagnostics = Diagnostics()
        self.events: list[SeasonTransition] = []
        self.season_state = None
        self.flame_boost = FlameBoost()
        self.last_scene: SceneState | None = None
        self.last_message: dict | None = None
        self.last_payload: str | None = None
        self._held: dict[SensorKind, float | None] = {k: None for k in SensorKind}
        self._tick_no = 0
        self._last_tick_ms = 0
        self._init_deadline_ms = config.window_ms
        self._inject_seq = 0

    # -- ingestion -------------------------------------------------------

    def ingest_line(self, line: bytes, now_ms: int) -> SensorFrame | None:
        """Decode one wire line and feed it in; errors are counted, never raised."""
        try:
            frame = decode_frame(line, now_ms)
        except ProtocolError:
            self.diagnostics.decode_errors += 1
            return None
        self.ingest_frame(frame)
        return frame

    def ingest_frame(self, frame: SensorFrame) -> None:
        if frame.clamped:
            self.diagnostics.value_clamps += 1
        self.diagnostics.frames += 1
        if not self.windows[frame.kind].push(frame.received_at, frame.value):
            self.diagnostics.dropped_samples += 1

    def inject(self, kind: SensorKind, value: float, now_ms: int) -> SensorFrame:
        """Turn a client steering message into a frame on the normal path."""
        lo, hi = VALUE_RANGES[kind]
        clamped = not lo <= value <= hi
        v = quantize(kind, min(max(value, lo), hi))
        frame = SensorFrame(
            seq=self._inject_seq,
            kind=kind,
            value=v,
            received_at=now_ms,
            clamped=clamped,
        )
        self._inject_seq = (self._inject_seq + 1) % 65536
        self.diagnostics.injected += 1
        self.ingest_frame(frame)
        return frame

    # -- tick ------------------------------------------------------------

    def tick(self, now_ms: int) -> tuple[SceneState | None, list[SeasonTransition]]:
        """Recompute and stage one broadcast at ``now_ms``.

        Returns (scene, transitions); scene is None only during the
        startup grace before any temperature has arrived.
        """
        dt_s = max(now_ms - self._last_tick_ms, 0) / 1000.0
        self._last_tick_ms = now_ms

        for kind in SensorKind:
            # Temperature and humidity smooth over the window; flame is a
            # level signal where the newest reading wins, so releasing the
            # lighter clears on the very next broadcast.
            if kind is SensorKind.FLAME:
                value = self.windows[kind].last()
            else:
                value = self.windows[kind].average()
            if value is not None:
                self._held[kind] = value

        flame_level = self._held[SensorKind.FLAME]
        flame_active = flame_level is not None and flame_level >= FLAME_ACTIVE_LEVEL
        fl = self.config.flame
        self.flame_boost = apply_flame(
            self.flame_boost,
            flame_active,
            dt_s,
            rise_per_s=fl.rise_per_s,
            decay_per_s=fl.decay_per_s,
            max_offset=fl.max_offset,
        )

        base_temp = self._held[SensorKind.TEMPERATURE]
        if base_temp is None:
            if now_ms < self._init_deadline_ms:
                return None, []
            base_temp = DEFAULT_AMBIENT_C
        t_eff = effective_temperature(base_temp, self.flame_boost)

        if self.season_state is None:
            self.season_state = init_season(
                t_eff, self.config.thresholds, self.config.rng_seed
            )
            transitions: list[SeasonTransition] = []
        else:
            self.season_state, transitions = step(
                self.season_state, t_eff, self.config.thresholds
            )
        self.events.extend(transitions)

        humidity = self._held[SensorKind.HUMIDITY]
        if humidity is None:
            humidity = DEFAULT_HUMIDITY_PCT

        self._tick_no += 1
        scene = compose(
            tick=self._tick_no,
            season=self.season_state.season,
            progress=progress(t_eff, self.config.thresholds),
            temperature_c=t_eff,
            humidity_pct=humidity,
            flame_active=flame_active,
            anchors=self.config.anchors,
            rain_at=self.config.humidity_bands.rain,
            storm_at=self.config.humidity_bands.storm,
        )
        self.last_scene = scene
        self.last_message = state_message(scene)
        self.last_payload = dump_message(self.last_message)
        return scene, transitions

    # -- observation -----------------------------------------------------

    def snapshot(self) -> dict:
        """Point-in-time copy for the status endpoint."""
        diag = self.diagnostics.as_dict()
        diag["dropped_samples"] += sum(w.dropped for w in self.windows.values())
        diag["ticks"] = self._tick_no
        diag["transitions"] = len(self.events)
        return {"state": self.last_message, "diagnostics": diag}


# -- Deterministic timelines --------------------------------------------------


def tick_times_ms(tick_hz: float) -> Iterator[int]:
    """Tick instants on the core clock: round(k * 1000 / tick_hz), k >= 1."""
    k = 1
    while True:
        yield int(round(k * 1000.0 / tick_hz))
        k += 1


def timeline(
    records: Iterable[LogRecord], tick_hz: float, *, rebase: bool = True
) -> Iterator[tuple[str, int, bytes | None]]:
    """Merge log records with tick instants on the records' own clock.

    Yields ("line", ts, line) and ("tick", ts, None) in time order.  A
    record sharing a tick's timestamp is delivered first, so the tick
    sees it; ticks run from the (rebased) epoch through the last record.
    """
    ticks = tick_times_ms(tick_hz)
    next_tick = next(ticks)
    base: int | None = None
    last_ts = 0
    for rec in records:
        if base is None:
            base = rec.received_at_ms if rebase else 0
        ts = rec.received_at_ms - base
        while next_tick < ts:
            yield ("tick", next_tick, None)
            next_tick = next(ticks)
        yield ("line", ts, rec.line)
        last_ts = max(last_ts, ts)
    if base is None:
        return
    while next_tick <= last_ts:
        yield ("tick", next_tick, None)
        next_tick = next(ticks)


@dataclass
class RunResult:
    """Everything a deterministic run produced, in order."""

    scenes: list[SceneState] = field(default_factory=list)
    payloads: list[str] = field(default_factory=list)
    transitions: list[SeasonTransition] = field(default_factory=list)


def run_records(
    core: BridgeCore,
    records: Iterable[LogRecord],
    *,
    speed: float | None = None,
    sleep: Callable[[float], None] = time.sleep,
    on_tick: Callable[[SceneState | None, list[SeasonTransition]], None] | None = None,
) -> RunResult:
    """Drive a core over a recorded timeline and collect what it broadcast.

    ``speed`` paces the run against the wall clock (sleeps are coalesced
    so very high speeds are not defeated by timer granularity); None runs
    flat out.
    """
    result = RunResult()
    wall0 = time.monotonic()
    for event, ts, line in timeline(records, core.config.tick_hz):
        if speed is not None:
            lag = wall0 + ts / 1000.0 / speed - time.monotonic()
            if lag > 0.005:
                sleep(lag)
        if event == "line":
            core.ingest_line(line, ts)
            continue
        scene, transitions = core.tick(ts)
        if on_tick is not None:
            on_tick(scene, transitions)
        if scene is not None:
            result.scenes.append(scene)
            result.payloads.append(core.last_payload)
        result.transitions.extend(transitions)
    return result
