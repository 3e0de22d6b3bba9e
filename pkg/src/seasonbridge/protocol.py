"""ASCII line codec for sensor frames.

One frame per newline-terminated line:

    $TW,<seq>,<K>,<value>*<HH>\n

``seq`` is a wrapping 16-bit counter, ``K`` is ``T`` (temperature, degC),
``H`` (relative humidity, %) or ``F`` (flame level), ``value`` carries
exactly one fractional digit for T/H and is an integer for F, and ``HH``
is the XOR of all bytes strictly between ``$`` and ``*`` as two uppercase
hex digits.  Everything is printable ASCII so a stock microcontroller
sketch can emit frames with plain print statements over a 9600-baud 8N1
link.

Decoding is total: any byte string either yields a frame or raises one of
the ``ProtocolError`` subclasses, which callers count and drop.
"""

from __future__ import annotations

import enum
import math
import re
from dataclasses import dataclass, field
from decimal import ROUND_HALF_UP, Decimal

SEQ_MODULO = 65536

# Hard ceiling on accepted line length; real frames are under 32 bytes.
MAX_LINE_BYTES = 256

_TENTHS = Decimal("0.1")


class ProtocolError(ValueError):
    """Base for decode failures; the offending line is dropped, never fatal."""


class BadSyntax(ProtocolError):
    """Line does not match the frame grammar."""


class BadChecksum(ProtocolError):
    """Well-formed line whose checksum does not fold to the stated value."""


class UnknownKind(ProtocolError):
    """Well-formed, checksummed line carrying an unassigned kind code."""


class EncodeError(ValueError):
    """Frame field outside its encodable range."""


class SensorKind(enum.Enum):
    """The three sensor channels multiplexed over one serial link."""

    TEMPERATURE = "T"
    HUMIDITY = "H"
    FLAME = "F"

    @property
    def json_name(self) -> str:
        return self.name.lower()


# Post-clamp value ranges: the DHT11 spans 0-50 degC and 0-100 %RH; flame
# modules emit 0/1 digital or 0-1023 analog brightness levels.
VALUE_RANGES: dict[SensorKind, tuple[float, float]] = {
    SensorKind.TEMPERATURE: (0.0, 50.0),
    SensorKind.HUMIDITY: (0.0, 100.0),
    SensorKind.FLAME: (0.0, 1023.0),
}

_KINDS_BY_JSON_NAME = {k.json_name: k for k in SensorKind}


def kind_from_json_name(name: str) -> SensorKind | None:
    return _KINDS_BY_JSON_NAME.get(name)


@dataclass
class SensorFrame:
    """One reading from one sensor.

    ``received_at`` is stamped by the receiver in milliseconds on its own
    monotonic clock; it is not on the wire and is excluded from equality,
    as is the ``clamped`` diagnostic flag.
    """

    seq: int
    kind: SensorKind
    value: float
    received_at: int = field(default=0, compare=False)
    clamped: bool = field(default=False, compare=False)


# -- Checksum -----------------------------------------------------------------


def checksum(data: bytes) -> int:
    """XOR fold of all bytes; 0 for empty input."""
    total = 0
    for b in data:
        total ^= b
    return total


# -- Encoding -----------------------------------------------------------------


def quantize(kind: SensorKind, value: float) -> float:
    """Round a value to wire precision: one decimal for T/H, integer for F.

    Ties round half-up.  Values that already sit on the wire grid pass
    through exactly, so quantized frames round-trip bit-for-bit.
    """
    d = Decimal(repr(float(value)))
    if kind is SensorKind.FLAME:
        return float(d.to_integral_value(rounding=ROUND_HALF_UP))
    return float(d.quantize(_TENTHS, rounding=ROUND_HALF_UP))


def _format_value(kind: SensorKind, value: float) -> str:
    d = Decimal(repr(float(value)))
    if kind is SensorKind.FLAME:
        return str(int(d.to_integral_value(rounding=ROUND_HALF_UP)))
    return str(d.quantize(_TENTHS, rounding=ROUND_HALF_UP))


def encode_frame(frame: SensorFrame) -> bytes:
    """Build the full wire line for a frame, trailing newline included.

    Raises:
        EncodeError: naming the offending field when seq or value is out
            of range (values are validated before wire quantization).
    """
    if not isinstance(frame.kind, SensorKind):
        raise EncodeError(f"kind: not a SensorKind: {frame.kind!r}")
    if not isinstance(frame.seq, int) or not 0 <= frame.seq < SEQ_MODULO:
        raise EncodeError(f"seq: outside [0, {SEQ_MODULO}): {frame.seq!r}")
    lo, hi = VALUE_RANGES[frame.kind]
    if not math.isfinite(frame.value) or not lo <= frame.value <= hi:
        raise EncodeError(
            f"value: outside [{lo}, {hi}] for {frame.kind.name}: {frame.value!r}"
        )
    text = _format_value(frame.kind, frame.value)
    payload = f"TW,{frame.seq},{frame.kind.value},{text}".encode("ascii")
    return b"$%s*%02X\n" % (payload, checksum(payload))


# -- Decoding -----------------------------------------------------------------

# Strict grammar: uppercase hex checksum and at most one exact newline
# terminator, so any single-byte corruption of a valid line is rejected.
_LINE_RE = re.compile(
    rb"\A\$TW,([0-9]{1,5}),([A-Z]),([0-9]+(?:\.[0-9]+)?)\*([0-9A-F]{2})(?:\r\n|\n)?\Z"
)

_KIND_CODES = {k.value.encode("ascii"): k for k in SensorKind}


def decode_frame(line: bytes | str, now: int) -> SensorFrame:
    """Parse one wire line; ``received_at`` is set to ``now``.

    Out-of-range values clamp silently to the kind's range with the
    frame's ``clamped`` flag set, so glitching hardware never stalls the
    pipeline; the caller counts clamps and decode errors.

    Raises:
        BadSyntax: the line does not match the grammar.
        BadChecksum: the XOR fold disagrees with the stated checksum.
        UnknownKind: syntax and checksum pass but the kind code is unassigned.
    """
    if isinstance(line, str):
        try:
            line = line.encode("ascii")
        except UnicodeEncodeError as exc:
            raise BadSyntax(f"non-ascii line: {line!r}") from exc
    if len(line) > MAX_LINE_BYTES:
        raise BadSyntax(f"line too long: {len(line)} bytes")
    m = _LINE_RE.match(line)
    if m is None:
        raise BadSyntax(f"unparseable line: {line!r}")
    payload = line[1 : m.start(4) - 1]
    want = int(m.group(4), 16)
    got = checksum(payload)
    if got != want:
        raise BadChecksum(f"stated {want:02X}, payload folds to {got:02X}")
    kind = _KIND_CODES.get(m.group(2))
    if kind is None:
        raise UnknownKind(f"unassigned kind code {m.group(2).decode('ascii')!r}")
    seq = int(m.group(1))
    if seq >= SEQ_MODULO:
        raise BadSyntax(f"seq outside [0, {SEQ_MODULO}): {seq}")
    value, clamped = _parse_value(kind, m.group(3))
    return SensorFrame(seq=seq, kind=kind, value=value, received_at=now, clamped=clamped)


def _parse_value(kind: SensorKind, text: bytes) -> tuple[float, bool]:
    d = Decimal(text.decode("ascii"))
    lo, hi = VALUE_RANGES[kind]
    # Clamp before rounding: huge digit strings would overflow the
    # quantize context (and a float conversion).
    if d > Decimal(int(hi)):
        return hi, True
    if d < Decimal(int(lo)):
        return lo, True
    if kind is SensorKind.FLAME:
        d = d.to_integral_value(rounding=ROUND_HALF_UP)
    else:
        d = d.quantize(_TENTHS, rounding=ROUND_HALF_UP)
    return float(d), False


# -- Session log records ------------------------------------------------------


def format_log_record(received_at_ms: int, line: bytes) -> bytes:
    """One log record: ``<received_at_ms> <encoded line>``.

    The encoded line keeps its own trailing newline, which terminates the
    record.
    """
    if received_at_ms < 0:
        raise EncodeError(f"received_at_ms: negative: {received_at_ms}")
    return b"%d %s" % (received_at_ms, line)


def parse_log_record(record: bytes) -> tuple[int, bytes]:
    """Split a log record into (received_at_ms, wire line).

    The wire line is returned unvalidated; decode it separately so the
    caller can apply its usual drop-and-count policy.
    """
    sp = record.find(b" ")
    if sp <= 0:
        raise BadSyntax(f"log record missing timestamp prefix: {record[:40]!r}")
    stamp = record[:sp]
    if not stamp.isdigit():
        raise BadSyntax(f"log record timestamp not decimal: {stamp[:40]!r}")
    return int(stamp), record[sp + 1 :]
