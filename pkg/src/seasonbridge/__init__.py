"""Sensor-to-scene bridge: environmental readings drive a four-season
virtual scene streamed to interactive clients."""

from .config import Config, ConfigError, load_config
from .core import BridgeCore, run_records, state_message
from .protocol import (
    BadChecksum,
    BadSyntax,
    EncodeError,
    ProtocolError,
    SensorFrame,
    SensorKind,
    UnknownKind,
    checksum,
    decode_frame,
    encode_frame,
)
from .scene import (
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
from .seasons import Season, SeasonState, SeasonTransition, Thresholds, init_season, progress, step
from .server import BridgeServer
from .simulate import LogRecord, LogReplayer, ScenarioKind, ScenarioSpec, generate, load_log, record
from .smoothing import SmoothingWindow

__version__ = "0.1.0"
