"""Mapping from smoothed sensor state to render parameters.

Foliage color blends along one of two anchor paths (white -> light green
-> dark green while warming, dark green -> dark yellow -> white while
cooling), precipitation follows humidity bands and turns to snow in
winter, and a flame reading contributes a decaying temperature boost so
holding a lighter near the sensor visibly warms the scene.
"""

from __future__ import annotations

import enum
from dataclasses import dataclass

from .seasons import Season

RGB = tuple[int, int, int]

# Rates for the flame-driven warmth offset, degC per second.
FLAME_RISE_PER_S = 0.5
FLAME_DECAY_PER_S = 0.2
FLAME_MAX_OFFSET_C = 10.0

# Humidity bands (percent RH): precipitation starts above RAIN_AT and
# upgrades to a rainstorm at STORM_AT.
RAIN_AT_PCT = 60.0
STORM_AT_PCT = 85.0


@dataclass(frozen=True)
class ColorAnchors:
    """Per-season foliage colors; overridable, referenced symbolically."""

    winter: RGB = (245, 245, 245)
    spring: RGB = (144, 214, 120)
    summer: RGB = (20, 100, 40)
    autumn: RGB = (196, 150, 26)

    def validate(self) -> None:
        for name in ("winter", "spring", "summer", "autumn"):
            rgb = getattr(self, name)
            if len(rgb) != 3 or any(not isinstance(c, int) or not 0 <= c <= 255 for c in rgb):
                raise ValueError(f"{name}: channels must be integers in [0, 255]: {rgb!r}")


class PrecipitationKind(enum.Enum):
    NONE = "none"
    RAIN = "rain"
    RAINSTORM = "rainstorm"
    SNOW = "snow"


@dataclass(frozen=True)
class Precipitation:
    kind: PrecipitationKind
    intensity: float


@dataclass(frozen=True)
class FlameBoost:
    active: bool = False
    offset: float = 0.0


@dataclass(frozen=True)
class SceneState:
    """One broadcast record: everything a client needs to draw a frame."""

    tick: int
    season: Season
    progress: float
    temperature_c: float
    humidity_pct: float
    foliage_rgb: RGB
    precipitation: Precipitation
    flame: bool

    def validate(self) -> None:
        if self.tick < 0:
            raise ValueError(f"tick: negative: {self.tick}")
        if not 0.0 <= self.progress <= 1.0:
            raise ValueError(f"progress: outside [0, 1]: {self.progress}")
        if not 0.0 <= self.temperature_c <= 50.0:
            raise ValueError(f"temperature_c: outside [0, 50]: {self.temperature_c}")
        if not 0.0 <= self.humidity_pct <= 100.0:
            raise ValueError(f"humidity_pct: outside [0, 100]: {self.humidity_pct}")
        if any(not 0 <= c <= 255 for c in self.foliage_rgb):
            raise ValueError(f"foliage_rgb: channel outside [0, 255]: {self.foliage_rgb}")
        if not 0.0 <= self.precipitation.intensity <= 1.0:
            raise ValueError(f"precipitation.intensity: outside [0, 1]")
        if self.precipitation.kind is PrecipitationKind.NONE:
            if self.precipitation.intensity != 0.0:
                raise ValueError("precipitation: intensity must be 0 when kind is none")
        elif self.precipitation.intensity <= 0.0:
            raise ValueError("precipitation: intensity must be > 0 when kind is set")


# -- Foliage color ------------------------------------------------------------

_RISING_NEXT = (Season.SPRING, Season.SUMMER)


def _lerp_channel(a: int, b: int, t: float) -> int:
    return int(a + (b - a) * t + 0.5)


def _lerp(a: RGB, b: RGB, t: float) -> RGB:
    return (
        _lerp_channel(a[0], b[0], t),
        _lerp_channel(a[1], b[1], t),
        _lerp_channel(a[2], b[2], t),
    )


def foliage_color(
    season: Season,
    progress: float,
    anchors: ColorAnchors,
    next_season: Season | None = None,
) -> RGB:
    """Blend the foliage color for a season at a blend position.

    The warming path runs winter -> spring -> summer and the cooling path
    winter -> autumn -> summer, each split at progress 0.5 and linear per
    channel within a segment; both paths agree at the endpoints, so every
    season change is color-continuous.  The path follows the season
    (winter/spring warm, summer/autumn cool) unless ``next_season``
    explicitly picks a direction.
    """
    p = min(max(progress, 0.0), 1.0)
    if next_season is not None:
        rising = next_season in _RISING_NEXT
    else:
        rising = season in (Season.WINTER, Season.SPRING)
    mid = anchors.spring if rising else anchors.autumn
    if p <= 0.5:
        return _lerp(anchors.winter, mid, p * 2.0)
    return _lerp(mid, anchors.summer, (p - 0.5) * 2.0)


# -- Precipitation ------------------------------------------------------------


def precipitation(
    humidity_pct: float,
    season: Season,
    rain_at: float = RAIN_AT_PCT,
    storm_at: float = STORM_AT_PCT,
) -> Precipitation:
    """Humidity-banded precipitation; winter turns any of it into snow.

    Intensity scales linearly from the rain band edge to saturation at
    100%.  The lower band edge is exclusive so an active kind always has
    positive intensity.
    """
    if humidity_pct <= rain_at:
        return Precipitation(PrecipitationKind.NONE, 0.0)
    if season is Season.WINTER:
        kind = PrecipitationKind.SNOW
    elif humidity_pct >= storm_at:
        kind = PrecipitationKind.RAINSTORM
    else:
        kind = PrecipitationKind.RAIN
    intensity = min(max((humidity_pct - rain_at) / (100.0 - rain_at), 0.0), 1.0)
    return Precipitation(kind, intensity)


# -- Flame warmth -------------------------------------------------------------


def apply_flame(
    boost: FlameBoost,
    flame_active: bool,
    dt_s: float,
    rise_per_s: float = FLAME_RISE_PER_S,
    decay_per_s: float = FLAME_DECAY_PER_S,
    max_offset: float = FLAME_MAX_OFFSET_C,
) -> FlameBoost:
    """Advance the warmth offset by one interval: grow while the flame is
    seen, decay back to zero otherwise.

    The offset is kept on a 1e-9 decimal grid: accumulated rate*dt sums
    must land exactly on threshold boundaries regardless of how many
    ticks they were accumulated over.
    """
    if flame_active:
        offset = min(boost.offset + rise_per_s * dt_s, max_offset)
    else:
        offset = max(boost.offset - decay_per_s * dt_s, 0.0)
    return FlameBoost(active=flame_active, offset=round(offset, 9))


def effective_temperature(smoothed_c: float, boost: FlameBoost) -> float:
    """Smoothed temperature plus flame warmth, clamped to the sensor range.

    This value, not the raw average, is what the season machine sees.
    """
    return min(max(smoothed_c + boost.offset, 0.0), 50.0)


# -- Assembly -----------------------------------------------------------------


def compose(
    tick: int,
    season: Season,
    progress: float,
    temperature_c: float,
    humidity_pct: float,
    flame_active: bool,
    anchors: ColorAnchors,
    rain_at: float = RAIN_AT_PCT,
    storm_at: float = STORM_AT_PCT,
) -> SceneState:
    """Assemble one broadcast record from the already-derived pieces."""
    return SceneState(
        tick=tick,
        season=season,
        progress=progress,
        temperature_c=temperature_c,
        humidity_pct=humidity_pct,
        foliage_rgb=foliage_color(season, progress, anchors),
        precipitation=precipitation(humidity_pct, season, rain_at, storm_at),
        flame=flame_active,
    )
