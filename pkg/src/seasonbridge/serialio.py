"""Serial line source: newline-delimited ASCII at 9600 8N1.

Uses stdlib termios directly so the bridge runs on a bare interpreter;
the link contract is fixed (8 data bits, no parity, 1 stop bit) and only
the baud rate varies.
"""

from __future__ import annotations

import os
import termios
from typing import BinaryIO, Iterator

from .protocol import MAX_LINE_BYTES

_BAUD_CONSTANTS = {
    1200: termios.B1200,
    2400: termios.B2400,
    4800: termios.B4800,
    9600: termios.B9600,
    19200: termios.B19200,
    38400: termios.B38400,
    57600: termios.B57600,
    115200: termios.B115200,
}


def open_serial(path: str, baud: int = 9600) -> BinaryIO:
    """Open a serial device raw at ``baud`` 8N1 and return a binary stream."""
    if baud not in _BAUD_CONSTANTS:
        raise ValueError(f"unsupported baud rate: {baud}")
    fd = os.open(path, os.O_RDWR | os.O_NOCTTY)
    try:
        attrs = termios.tcgetattr(fd)
        iflag, oflag, cflag, lflag, _, _, cc = attrs
        iflag = 0
        oflag = 0
        lflag = 0
        cflag &= ~(termios.CSIZE | termios.PARENB | termios.CSTOPB)
        cflag |= termios.CS8 | termios.CREAD | termios.CLOCAL
        speed = _BAUD_CONSTANTS[baud]
        cc = list(cc)
        cc[termios.VMIN] = 1
        cc[termios.VTIME] = 0
        termios.tcsetattr(fd, termios.TCSANOW, [iflag, oflag, cflag, lflag, speed, speed, cc])
    except termios.error as exc:
        os.close(fd)
        raise OSError(f"{path}: not a serial device ({exc})") from None
    return os.fdopen(fd, "rb", buffering=0)


def read_lines(stream: BinaryIO, max_len: int = MAX_LINE_BYTES) -> Iterator[bytes]:
    """Yield newline-terminated lines from a raw byte stream.

    A run longer than ``max_len`` without a newline is flushed as one
    (undecodable) line so a jammed transmitter cannot grow the buffer
    without bound.  Ends when the stream does.
    """
    buf = bytearray()
    while True:
        chunk = stream.read(1024)
        if not chunk:
            if buf:
                yield bytes(buf)
            return
        for b in chunk:
            buf.append(b)
            if b == 0x0A or len(buf) >= max_len:
                yield bytes(buf)
                buf.clear()
