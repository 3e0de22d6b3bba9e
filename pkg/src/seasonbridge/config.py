"""Bridge configuration: defaults, JSON loading, and validation.

Config files are JSON with the same shape the ``/config`` endpoint
serves.  Missing keys fall back to defaults, unknown keys are rejected
(operators edit these live; typos must surface), and every invariant of
the owning subsystem is re-checked at load with the offending key named.
"""

from __future__ import annotations

import json
from dataclasses import dataclass, field
from pathlib import Path

from .scene import (
    ColorAnchors,
    FLAME_DECAY_PER_S,
    FLAME_MAX_OFFSET_C,
    FLAME_RISE_PER_S,
    RAIN_AT_PCT,
    STORM_AT_PCT,
)
from .seasons import Thresholds

DEFAULT_LISTEN_HOST = "127.0.0.1"
DEFAULT_LISTEN_PORT = 8777


class ConfigError(ValueError):
    """Invalid configuration; the message names the offending key."""


@dataclass
class HumidityBands:
    rain: float = RAIN_AT_PCT
    storm: float = STORM_AT_PCT


@dataclass
class FlameRates:
    rise_per_s: float = FLAME_RISE_PER_S
    decay_per_s: float = FLAME_DECAY_PER_S
    max_offset: float = FLAME_MAX_OFFSET_C


@dataclass
class Config:
    thresholds: Thresholds = field(default_factory=Thresholds)
    window_ms: int = 3000
    tick_hz: float = 10.0
    listen_host: str = DEFAULT_LISTEN_HOST
    listen_port: int = DEFAULT_LISTEN_PORT
    anchors: ColorAnchors = field(default_factory=ColorAnchors)
    humidity_bands: HumidityBands = field(default_factory=HumidityBands)
    flame: FlameRates = field(default_factory=FlameRates)
    rng_seed: int = 0

    def validate(self) -> None:
        try:
            self.thresholds.validate()
        except ValueError as exc:
            raise ConfigError(f"thresholds: {exc}") from None
        if not isinstance(self.window_ms, int) or self.window_ms <= 0:
            raise ConfigError(f"window_ms: must be a positive integer: {self.window_ms!r}")
        if not 0 < self.tick_hz <= 1000:
            raise ConfigError(f"tick_hz: must be in (0, 1000]: {self.tick_hz!r}")
        if not self.listen_host:
            raise ConfigError("listen: empty host")
        if not isinstance(self.listen_port, int) or not 0 <= self.listen_port <= 65535:
            raise ConfigError(f"listen: port outside [0, 65535]: {self.listen_port!r}")
        try:
            self.anchors.validate()
        except ValueError as exc:
            raise ConfigError(f"anchors.{exc}") from None
        b = self.humidity_bands
        if not 0.0 <= b.rain < b.storm <= 100.0:
            raise ConfigError(
                f"humidity_bands: need 0 <= rain < storm <= 100, got {b.rain}/{b.storm}"
            )
        fl = self.flame
        if fl.rise_per_s < 0 or fl.decay_per_s < 0:
            raise ConfigError(
                f"flame: rates must be non-negative: {fl.rise_per_s}/{fl.decay_per_s}"
            )
        if not 0.0 <= fl.max_offset <= 10.0:
            raise ConfigError(f"flame.max_offset: outside [0, 10]: {fl.max_offset}")
        if not isinstance(self.rng_seed, int) or not 0 <= self.rng_seed < 2**64:
            raise ConfigError(f"rng_seed: outside [0, 2**64): {self.rng_seed!r}")

    def to_dict(self) -> dict:
        return {
            "thresholds": {
                "t_low": self.thresholds.t_low,
                "t_high": self.thresholds.t_high,
                "hysteresis": self.thresholds.hysteresis,
            },
            "window_ms": self.window_ms,
            "tick_hz": self.tick_hz,
            "listen": f"{self.listen_host}:{self.listen_port}",
            "anchors": {
                "winter": list(self.anchors.winter),
                "spring": list(self.anchors.spring),
                "summer": list(self.anchors.summer),
                "autumn": list(self.anchors.autumn),
            },
            "humidity_bands": {
                "rain": self.humidity_bands.rain,
                "storm": self.humidity_bands.storm,
            },
            "flame": {
                "rise_per_s": self.flame.rise_per_s,
                "decay_per_s": self.flame.decay_per_s,
                "max_offset": self.flame.max_offset,
            },
            "rng_seed": self.rng_seed,
        }


def _check_keys(d: dict, known: set[str], prefix: str = "") -> None:
    for key in d:
        if key not in known:
            raise ConfigError(f"unknown key: {prefix}{key}")


def _number(d: dict, key: str, default: float, prefix: str = "") -> float:
    v = d.get(key, default)
    if isinstance(v, bool) or not isinstance(v, (int, float)):
        raise ConfigError(f"{prefix}{key}: must be a number: {v!r}")
    return float(v)


def _rgb(value: object, key: str) -> tuple[int, int, int]:
    if (
        not isinstance(value, list)
        or len(value) != 3
        or any(isinstance(c, bool) or not isinstance(c, int) for c in value)
    ):
        raise ConfigError(f"{key}: must be a list of three integers: {value!r}")
    return (value[0], value[1], value[2])


def config_from_dict(doc: dict) -> Config:
    """Build a Config from a parsed JSON document, merging with defaults."""
    if not isinstance(doc, dict):
        raise ConfigError("config document must be a JSON object")
    _check_keys(
        doc,
        {
            "thresholds",
            "window_ms",
            "tick_hz",
            "listen",
            "anchors",
            "humidity_bands",
            "flame",
            "rng_seed",
        },
    )
    cfg = Config()

    th = doc.get("thresholds", {})
    if not isinstance(th, dict):
        raise ConfigError("thresholds: must be an object")
    _check_keys(th, {"t_low", "t_high", "hysteresis"}, "thresholds.")
    cfg.thresholds = Thresholds(
        t_low=_number(th, "t_low", cfg.thresholds.t_low, "thresholds."),
        t_high=_number(th, "t_high", cfg.thresholds.t_high, "thresholds."),
        hysteresis=_number(th, "hysteresis", cfg.thresholds.hysteresis, "thresholds."),
    )

    if "window_ms" in doc:
        v = doc["window_ms"]
        if isinstance(v, bool) or not isinstance(v, int):
            raise ConfigError(f"window_ms: must be an integer: {v!r}")
        cfg.window_ms = v
    cfg.tick_hz = _number(doc, "tick_hz", cfg.tick_hz)

    if "listen" in doc:
        v = doc["listen"]
        if not isinstance(v, str) or ":" not in v:
            raise ConfigError(f"listen: must be 'host:port': {v!r}")
        host, _, port_text = v.rpartition(":")
        if not port_text.isdigit():
            raise ConfigError(f"listen: port not decimal: {v!r}")
        cfg.listen_host, cfg.listen_port = host, int(port_text)

    an = doc.get("anchors", {})
    if not isinstance(an, dict):
        raise ConfigError("anchors: must be an object")
    _check_keys(an, {"winter", "spring", "summer", "autumn"}, "anchors.")
    cfg.anchors = ColorAnchors(
        winter=_rgb(an["winter"], "anchors.winter") if "winter" in an else cfg.anchors.winter,
        spring=_rgb(an["spring"], "anchors.spring") if "spring" in an else cfg.anchors.spring,
        summer=_rgb(an["summer"], "anchors.summer") if "summer" in an else cfg.anchors.summer,
        autumn=_rgb(an["autumn"], "anchors.autumn") if "autumn" in an else cfg.anchors.autumn,
    )

    hb = doc.get("humidity_bands", {})
    if not isinstance(hb, dict):
        raise ConfigError("humidity_bands: must be an object")
    _check_keys(hb, {"rain", "storm"}, "humidity_bands.")
    cfg.humidity_bands = HumidityBands(
        rain=_number(hb, "rain", cfg.humidity_bands.rain, "humidity_bands."),
        storm=_number(hb, "storm", cfg.humidity_bands.storm, "humidity_bands."),
    )

    fl = doc.get("flame", {})
    if not isinstance(fl, dict):
        raise ConfigError("flame: must be an object")
    _check_keys(fl, {"rise_per_s", "decay_per_s", "max_offset"}, "flame.")
    cfg.flame = FlameRates(
        rise_per_s=_number(fl, "rise_per_s", cfg.flame.rise_per_s, "flame."),
        decay_per_s=_number(fl, "decay_per_s", cfg.flame.decay_per_s, "flame."),
        max_offset=_number(fl, "max_offset", cfg.flame.max_offset, "flame."),
    )

    if "rng_seed" in doc:
        v = doc["rng_seed"]
        if isinstance(v, bool) or not isinstance(v, int):
            raise ConfigError(f"rng_seed: must be an integer: {v!r}")
        cfg.rng_seed = v

    cfg.validate()
    return cfg


def load_config(path: str | Path) -> Config:
    """Load and validate a JSON config file; ``{}`` yields pure defaults."""
    try:
        with open(path, "r", encoding="utf-8") as f:
            doc = json.load(f)
    except OSError as exc:
        raise ConfigError(f"{path}: {exc.strerror or exc}") from None
    except json.JSONDecodeError as exc:
        raise ConfigError(f"{path}:{exc.lineno}: {exc.msg}") from None
    return config_from_dict(doc)
