"""Deterministic core: grace, hold-last, injection, timeline interleaving."""

import json

from seasonbridge.config import Config
from seasonbridge.core import (
    DEFAULT_AMBIENT_C,
    BridgeCore,
    dump_message,
    run_records,
    timeline,
)
from seasonbridge.protocol import SensorFrame, SensorKind, encode_frame
from seasonbridge.seasons import Season
from seasonbridge.simulate import (
    LogRecord,
    ScenarioKind,
    ScenarioSpec,
    frames_to_records,
    generate,
)


def make_core(**overrides):
    cfg = Config(**overrides)
    return BridgeCore(cfg)


def hold_frames(value=12.0, duration=10.0, kind=SensorKind.TEMPERATURE, rate=5.0):
    spec = ScenarioSpec(
        kind=ScenarioKind.HOLD, sensor=kind, start=value, duration_s=duration, rate_hz=rate
    )
    return generate(spec, seed=0)


# -- startup -----------------------------------------------------------------


def test_no_broadcast_during_startup_grace():
    core = make_core()
    scene, _ = core.tick(100)
    assert scene is None
    scene, _ = core.tick(2900)
    assert scene is None


def test_default_ambient_after_grace_with_no_frames():
    core = make_core()
    scene, _ = core.tick(3000)
    assert scene is not None
    assert scene.temperature_c == DEFAULT_AMBIENT_C
    assert scene.season in (Season.SPRING, Season.AUTUMN)
    assert scene.humidity_pct == 50.0


def test_init_from_first_average():
    core = make_core()
    core.ingest_frame(SensorFrame(0, SensorKind.TEMPERATURE, 12.0, received_at=50))
    scene, _ = core.tick(100)
    assert scene is not None
    assert scene.season is Season.WINTER
    assert scene.temperature_c == 12.0


def test_holds_last_value_when_frames_stop():
    core = make_core()
    core.ingest_frame(SensorFrame(0, SensorKind.TEMPERATURE, 18.0, received_at=50))
    first, _ = core.tick(100)
    # Long silence: window contents age out of nothing new; value holds.
    later, _ = core.tick(60_000)
    assert later.temperature_c == first.temperature_c == 18.0


# -- injection -----------------------------------------------------------------


def test_inject_clamps_and_counts():
    core = make_core()
    frame = core.inject(SensorKind.HUMIDITY, 200.0, now_ms=10)
    assert frame.value == 100.0
    assert frame.clamped
    assert core.diagnostics.value_clamps == 1
    assert core.diagnostics.injected == 1


def test_inject_flame_sets_flag_on_next_tick():
    core = make_core()
    core.ingest_frame(SensorFrame(0, SensorKind.TEMPERATURE, 20.0, received_at=10))
    core.inject(SensorKind.FLAME, 1.0, now_ms=20)
    scene, _ = core.tick(100)
    assert scene.flame is True
    # Released: flame frames with value 0 clear the flag.
    core.inject(SensorKind.FLAME, 0.0, now_ms=150)
    scene, _ = core.tick(200)
    assert scene.flame is False


def test_injected_frames_merge_into_the_same_window():
    core = make_core()
    core.ingest_frame(SensorFrame(0, SensorKind.TEMPERATURE, 20.0, received_at=10))
    core.inject(SensorKind.TEMPERATURE, 30.0, now_ms=20)
    scene, _ = core.tick(100)
    assert scene.temperature_c == 25.0


# -- decode path ---------------------------------------------------------------


def test_ingest_line_counts_decode_errors():
    core = make_core()
    assert core.ingest_line(b"garbage\n", 10) is None
    assert core.diagnostics.decode_errors == 1
    frame = core.ingest_line(encode_frame(SensorFrame(0, SensorKind.TEMPERATURE, 21.0)), 20)
    assert frame is not None
    assert core.diagnostics.frames == 1


def test_ingest_line_counts_wire_clamps():
    core = make_core()
    from harness import make_line

    core.ingest_line(make_line(0, "T", "75.0"), 10)
    assert core.diagnostics.value_clamps == 1


# -- tick bookkeeping -----------------------------------------------------------


def test_tick_numbers_increase_only_on_broadcast():
    core = make_core()
    core.tick(100)  # grace, no broadcast
    core.ingest_frame(SensorFrame(0, SensorKind.TEMPERATURE, 20.0, received_at=150))
    first, _ = core.tick(200)
    second, _ = core.tick(300)
    assert (first.tick, second.tick) == (1, 2)


def test_snapshot_mirrors_last_payload_exactly():
    core = make_core()
    core.ingest_frame(SensorFrame(0, SensorKind.TEMPERATURE, 22.0, received_at=10))
    core.tick(100)
    snap = core.snapshot()
    assert dump_message(snap["state"]) == core.last_payload
    assert snap["diagnostics"]["ticks"] == 1


def test_snapshot_counters_are_monotone():
    core = make_core()
    core.ingest_line(b"junk\n", 5)
    before = core.snapshot()["diagnostics"]
    core.ingest_line(b"junk\n", 6)
    core.ingest_frame(SensorFrame(0, SensorKind.TEMPERATURE, 20.0, received_at=10))
    core.tick(100)
    after = core.snapshot()["diagnostics"]
    assert all(after[key] >= before[key] for key in before)


# -- timeline ------------------------------------------------------------------


def test_timeline_interleaves_ticks_and_frames():
    records = [LogRecord(0, b"a"), LogRecord(250, b"b"), LogRecord(300, b"c")]
    events = list(timeline(records, tick_hz=10.0))
    assert events == [
        ("line", 0, b"a"),
        ("tick", 100, None),
        ("tick", 200, None),
        ("line", 250, b"b"),
        ("line", 300, b"c"),  # frame first on the shared instant
        ("tick", 300, None),
    ]


def test_timeline_rebases_to_first_record():
    records = [LogRecord(5000, b"a"), LogRecord(5150, b"b")]
    events = list(timeline(records, tick_hz=10.0))
    assert events[0] == ("line", 0, b"a")
    assert ("tick", 100, None) in events
    assert events[-1] == ("line", 150, b"b")


def test_run_records_frame_on_tick_instant_is_seen_by_that_tick():
    core = make_core()
    frames = [
        SensorFrame(0, SensorKind.TEMPERATURE, 10.0, received_at=0),
        SensorFrame(1, SensorKind.TEMPERATURE, 20.0, received_at=100),
    ]
    result = run_records(core, frames_to_records(frames))
    assert len(result.scenes) == 1
    assert result.scenes[0].temperature_c == 15.0


def test_run_records_collects_transitions_in_order():
    core = make_core()
    spec = ScenarioSpec(
        kind=ScenarioKind.RAMP,
        sensor=SensorKind.TEMPERATURE,
        start=10.0,
        end=30.0,
        duration_s=60.0,
    )
    result = run_records(core, frames_to_records(generate(spec, seed=0)))
    assert [(t.from_season.value, t.to_season.value) for t in result.transitions] == [
        ("winter", "spring"),
        ("spring", "summer"),
    ]
    assert result.transitions == core.events
    assert [json.loads(p)["tick"] for p in result.payloads] == list(
        range(1, len(result.payloads) + 1)
    )
