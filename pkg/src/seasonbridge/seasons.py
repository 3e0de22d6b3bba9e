"""Four-season threshold state machine with hysteresis.

Initialization picks winter below the low threshold, summer above the
high one, and a seeded random choice of spring or autumn in between.
Steady-state transitions cross the same boundaries, with a small
hysteresis band on the mid-band re-entries (winter->spring and
summer->autumn) so a windowed average hovering at a threshold cannot
flap the scene every tick.
"""

from __future__ import annotations

import enum
from dataclasses import dataclass


class Season(enum.Enum):
    WINTER = "winter"
    SPRING = "spring"
    SUMMER = "summer"
    AUTUMN = "autumn"


class Boundary(enum.Enum):
    LOW = "low"
    HIGH = "high"


class Direction(enum.Enum):
    RISING = "rising"
    FALLING = "falling"


@dataclass(frozen=True)
class Thresholds:
    """Season boundaries in degC plus the re-entry hysteresis band."""

    t_low: float = 15.0
    t_high: float = 25.0
    hysteresis: float = 0.5

    def validate(self) -> None:
        if not 0.0 <= self.t_low < self.t_high <= 50.0:
            raise ValueError(
                f"t_low/t_high: need 0 <= t_low < t_high <= 50, "
                f"got {self.t_low}/{self.t_high}"
            )
        if not 0.0 <= self.hysteresis < (self.t_high - self.t_low) / 2.0:
            raise ValueError(
                f"hysteresis: need 0 <= hysteresis < (t_high - t_low)/2, "
                f"got {self.hysteresis}"
            )


@dataclass(frozen=True)
class Crossing:
    boundary: Boundary
    direction: Direction


@dataclass(frozen=True)
class SeasonTransition:
    from_season: Season
    to_season: Season
    at_temp: float


@dataclass(frozen=True)
class SeasonState:
    season: Season
    last_crossing: Crossing | None
    rng_seed: int


# Knuth's MMIX linear congruential generator; one step of it decides the
# mid-band init draw, keyed by the configured seed, so the "random" choice
# is reproducible.
_LCG_MULTIPLIER = 6364136223846793005
_LCG_INCREMENT = 1442695040888963407
_MASK64 = (1 << 64) - 1


def _lcg_next(state: int) -> int:
    return (_LCG_MULTIPLIER * state + _LCG_INCREMENT) & _MASK64


def init_season(avg_temp: float, thresholds: Thresholds, rng_seed: int) -> SeasonState:
    """Pick the starting season from the ambient average temperature.

    At or below ``t_low`` -> winter; at or above ``t_high`` -> summer;
    otherwise spring or autumn with equal probability, decided by one
    LCG step over ``rng_seed``.
    """
    if avg_temp <= thresholds.t_low:
        season = Season.WINTER
    elif avg_temp >= thresholds.t_high:
        season = Season.SUMMER
    elif (_lcg_next(rng_seed & _MASK64) >> 63) == 0:
        season = Season.SPRING
    else:
        season = Season.AUTUMN
    return SeasonState(season=season, last_crossing=None, rng_seed=rng_seed)


def step(
    state: SeasonState, avg_temp: float, thresholds: Thresholds
) -> tuple[SeasonState, list[SeasonTransition]]:
    """Advance the machine one tick; at most one transition is emitted.

    Exits toward the extremes use the plain thresholds so they agree with
    the init table; re-entries into the mid-band add the hysteresis band.
    Re-entry comparisons are inclusive: a value landing exactly on the
    boundary transitions on that tick.  A jump across two boundaries
    resolves over successive calls.
    """
    t_low, t_high, hyst = thresholds.t_low, thresholds.t_high, thresholds.hysteresis
    season = state.season
    target: Season | None = None
    crossing: Crossing | None = None

    if season is Season.WINTER:
        if avg_temp >= t_low + hyst:
            target = Season.SPRING
            crossing = Crossing(Boundary.LOW, Direction.RISING)
    elif season is Season.SPRING:
        if avg_temp >= t_high:
            target = Season.SUMMER
            crossing = Crossing(Boundary.HIGH, Direction.RISING)
        elif avg_temp <= t_low:
            target = Season.WINTER
            crossing = Crossing(Boundary.LOW, Direction.FALLING)
    elif season is Season.SUMMER:
        if avg_temp <= t_high - hyst:
            target = Season.AUTUMN
            crossing = Crossing(Boundary.HIGH, Direction.FALLING)
    else:  # AUTUMN
        if avg_temp <= t_low:
            target = Season.WINTER
            crossing = Crossing(Boundary.LOW, Direction.FALLING)
        elif avg_temp >= t_high:
            target = Season.SUMMER
            crossing = Crossing(Boundary.HIGH, Direction.RISING)

    if target is None:
        return state, []
    new_state = SeasonState(season=target, last_crossing=crossing, rng_seed=state.rng_seed)
    return new_state, [SeasonTransition(season, target, avg_temp)]


def progress(avg_temp: float, thresholds: Thresholds) -> float:
    """Normalized position of the temperature inside [t_low, t_high].

    0 at or below the low threshold, 1 at or above the high one, linear
    in between; drives the continuous color blend.
    """
    span = thresholds.t_high - thresholds.t_low
    p = (avg_temp - thresholds.t_low) / span
    return min(max(p, 0.0), 1.0)
