"""Color blending, precipitation bands, and flame warmth."""

import math
import random

import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

from seasonbridge.scene import (
    ColorAnchors,
    FlameBoost,
    Precipitation,
    PrecipitationKind,
    SceneState,
    apply_flame,
    compose,
    effective_temperature,
    foliage_color,
    precipitation,
)
from seasonbridge.seasons import Season

from harness import lerp_oracle

ANCHORS = ColorAnchors()


# -- foliage color --------------------------------------------------------


def test_rising_path_endpoints_are_exact_anchors():
    assert foliage_color(Season.WINTER, 0.0, ANCHORS) == ANCHORS.winter
    assert foliage_color(Season.SPRING, 1.0, ANCHORS) == ANCHORS.summer
    assert foliage_color(Season.SPRING, 0.5, ANCHORS) == ANCHORS.spring


def test_falling_path_endpoints_are_exact_anchors():
    assert foliage_color(Season.AUTUMN, 0.0, ANCHORS) == ANCHORS.winter
    assert foliage_color(Season.SUMMER, 1.0, ANCHORS) == ANCHORS.summer
    assert foliage_color(Season.AUTUMN, 0.5, ANCHORS) == ANCHORS.autumn


def test_quarter_progress_is_winter_spring_midpoint():
    got = foliage_color(Season.WINTER, 0.25, ANCHORS)
    assert got == lerp_oracle(ANCHORS.winter, ANCHORS.spring, 0.5)


def test_next_season_selects_the_path():
    # Summer at saturated progress, heading back down: cooling path.
    cooling = foliage_color(Season.SUMMER, 0.6, ANCHORS, next_season=Season.AUTUMN)
    warming = foliage_color(Season.SPRING, 0.6, ANCHORS, next_season=Season.SUMMER)
    assert cooling == lerp_oracle(ANCHORS.autumn, ANCHORS.summer, 0.2)
    assert warming == lerp_oracle(ANCHORS.spring, ANCHORS.summer, 0.2)


@settings(derandomize=True)
@given(st.sampled_from(list(Season)), st.floats(0, 1))
def test_foliage_matches_independent_lerp_oracle(season, p):
    rising = season in (Season.WINTER, Season.SPRING)
    mid = ANCHORS.spring if rising else ANCHORS.autumn
    if p <= 0.5:
        want = lerp_oracle(ANCHORS.winter, mid, p * 2.0)
    else:
        want = lerp_oracle(mid, ANCHORS.summer, (p - 0.5) * 2.0)
    assert foliage_color(season, p, ANCHORS) == want


@given(st.sampled_from(list(Season)), st.integers(0, 99))
def test_foliage_is_continuous_in_progress(season, i):
    p = i / 100.0
    a = foliage_color(season, p, ANCHORS)
    b = foliage_color(season, p + 0.01, ANCHORS)
    for ch_a, ch_b, lo_ch, mid_ch, hi_ch in zip(
        a, b, ANCHORS.winter,
        ANCHORS.spring if season in (Season.WINTER, Season.SPRING) else ANCHORS.autumn,
        ANCHORS.summer,
    ):
        span = max(abs(mid_ch - lo_ch), abs(hi_ch - mid_ch))
        assert abs(ch_a - ch_b) <= math.ceil(span * 0.02) + 1


def test_anchor_validation():
    with pytest.raises(ValueError, match="spring"):
        ColorAnchors(spring=(0, 300, 0)).validate()
    ANCHORS.validate()


# -- precipitation --------------------------------------------------------


def test_dry_air_means_no_precipitation():
    assert precipitation(40.0, Season.SUMMER) == Precipitation(PrecipitationKind.NONE, 0.0)


def test_band_edge_is_exclusive():
    assert precipitation(60.0, Season.SUMMER).kind is PrecipitationKind.NONE
    just_over = precipitation(60.1, Season.SUMMER)
    assert just_over.kind is PrecipitationKind.RAIN
    assert just_over.intensity > 0


def test_storm_band():
    got = precipitation(90.0, Season.SUMMER)
    assert got.kind is PrecipitationKind.RAINSTORM
    assert got.intensity == pytest.approx(0.75)


def test_winter_turns_precipitation_to_snow():
    got = precipitation(90.0, Season.WINTER)
    assert got.kind is PrecipitationKind.SNOW
    assert got.intensity == pytest.approx(0.75)
    assert precipitation(70.0, Season.WINTER).kind is PrecipitationKind.SNOW


@given(st.floats(0, 100), st.sampled_from(list(Season)))
def test_intensity_invariants(h, season):
    got = precipitation(h, season)
    assert 0.0 <= got.intensity <= 1.0
    if got.kind is PrecipitationKind.NONE:
        assert got.intensity == 0.0
    else:
        assert got.intensity > 0.0


@given(st.floats(0, 99.5), st.sampled_from(list(Season)))
def test_intensity_monotone_in_humidity(h, season):
    assert precipitation(h + 0.5, season).intensity >= precipitation(h, season).intensity


# -- flame boost ----------------------------------------------------------


def test_flame_rises_at_half_degree_per_second():
    boost = apply_flame(FlameBoost(False, 0.0), True, dt_s=2.0)
    assert boost == FlameBoost(True, 1.0)


def test_flame_caps_at_ten_degrees():
    boost = apply_flame(FlameBoost(True, 10.0), True, dt_s=5.0)
    assert boost.offset == 10.0


def test_flame_decays_to_floor():
    boost = apply_flame(FlameBoost(True, 1.0), False, dt_s=10.0)
    assert boost == FlameBoost(False, 0.0)


def test_flame_accumulation_lands_exactly_on_grid():
    boost = FlameBoost(False, 0.0)
    for _ in range(70):
        boost = apply_flame(boost, True, dt_s=0.1)
    assert boost.offset == 3.5


@given(st.lists(st.tuples(st.booleans(), st.floats(0.001, 30.0)), max_size=200))
def test_flame_offset_always_within_bounds(schedule):
    boost = FlameBoost(False, 0.0)
    for active, dt in schedule:
        boost = apply_flame(boost, active, dt)
        assert 0.0 <= boost.offset <= 10.0
        assert boost.active == active


# -- effective temperature --------------------------------------------------


def test_effective_temperature_addition_and_clamp():
    assert effective_temperature(12.0, FlameBoost(False, 0.0)) == 12.0
    assert effective_temperature(12.0, FlameBoost(True, 5.0)) == 17.0
    assert effective_temperature(48.0, FlameBoost(True, 10.0)) == 50.0


# -- compose ----------------------------------------------------------------


def default_scene(tick=0):
    return compose(
        tick=tick,
        season=Season.SPRING,
        progress=0.4,
        temperature_c=19.0,
        humidity_pct=50.0,
        flame_active=False,
        anchors=ANCHORS,
    )


def test_compose_echoes_inputs():
    scene = default_scene()
    assert scene.tick == 0
    assert scene.season is Season.SPRING
    assert scene.temperature_c == 19.0
    assert scene.humidity_pct == 50.0
    assert scene.flame is False
    assert scene.precipitation.kind is PrecipitationKind.NONE


def test_compose_is_pure_modulo_tick():
    a, b = default_scene(tick=1), default_scene(tick=2)
    assert a.tick != b.tick
    assert (a.season, a.progress, a.foliage_rgb, a.precipitation, a.flame) == (
        b.season,
        b.progress,
        b.foliage_rgb,
        b.precipitation,
        b.flame,
    )


@given(
    st.integers(0, 10**6),
    st.sampled_from(list(Season)),
    st.floats(0, 1),
    st.floats(0, 50),
    st.floats(0, 100),
    st.booleans(),
)
def test_composed_scene_always_satisfies_invariants(tick, season, p, t, h, flame):
    scene = compose(tick, season, p, t, h, flame, ANCHORS)
    scene.validate()
