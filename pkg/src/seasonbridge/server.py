"""The running bridge: ingestion, fixed-rate tick, and client streaming.

One asyncio loop owns everything, which gives the single-writer guarantee
for free: frame sources and websocket handlers mutate the core only from
loop context, the tick task alone advances season/scene state, and each
client drains its own bounded queue so one stalled connection can never
hold up the others (its queue overflows and it is disconnected).

Transport: websocket at ``/ws`` carrying one JSON object per text
message; plain HTTP GET ``/status`` and ``/config`` answer on the same
port.  The server greets every client with a version-1 hello.
"""

from __future__ import annotations

import asyncio
import json
import logging
import math
import threading
from dataclasses import replace
from http import HTTPStatus
from typing import Callable, Iterable

from websockets.asyncio.server import serve
from websockets.exceptions import ConnectionClosed

from .config import Config
from .core import (
    PROTOCOL_VERSION,
    BridgeCore,
    RunResult,
    dump_message,
    timeline,
)
from .protocol import SensorFrame, kind_from_json_name
from .serialio import open_serial, read_lines
from .simulate import LogRecord

log = logging.getLogger(__name__)

# Broadcasts a client may fall behind before it is disconnected.
DEFAULT_QUEUE_LIMIT = 32

_HELLO = dump_message({"type": "hello", "v": PROTOCOL_VERSION})


class Hub:
    """Fan-out of broadcast payloads to bounded per-client queues."""

    def __init__(self, queue_limit: int = DEFAULT_QUEUE_LIMIT) -> None:
        self.queue_limit = queue_limit
        self.kicked = 0
        self._clients: dict[int, tuple[asyncio.Queue, Callable[[], None]]] = {}
        self._next_id = 0

    def __len__(self) -> int:
        return len(self._clients)

    def attach(self, on_kick: Callable[[], None]) -> tuple[int, asyncio.Queue]:
        cid = self._next_id
        self._next_id += 1
        queue: asyncio.Queue = asyncio.Queue(maxsize=self.queue_limit)
        self._clients[cid] = (queue, on_kick)
        return cid, queue

    def detach(self, cid: int) -> None:
        self._clients.pop(cid, None)

    def publish(self, payload: str) -> None:
        """Queue a payload for every client; overflowing clients are kicked."""
        for cid, (queue, on_kick) in list(self._clients.items()):
            try:
                queue.put_nowait(payload)
            except asyncio.QueueFull:
                self.kicked += 1
                self.detach(cid)
                on_kick()


class BridgeServer:
    """Owns the core, the listening socket, and the concurrent roles."""

    def __init__(self, config: Config, *, queue_limit: int = DEFAULT_QUEUE_LIMIT) -> None:
        self.config = config
        self.core = BridgeCore(config)
        self.hub = Hub(queue_limit)
        self.unknown_messages = 0
        self.version_mismatches = 0
        self.port: int | None = None
        self._server = None
        self._epoch: float | None = None
        self._virtual_now: int | None = None
        self._tasks: list[asyncio.Task] = []
        self._stopped = asyncio.Event()

    # -- clock -----------------------------------------------------------

    def now_ms(self) -> int:
        """Milliseconds on the bridge clock (wall since start, or the
        virtual instant during a recorded run)."""
        if self._virtual_now is not None:
            return self._virtual_now
        return int((asyncio.get_running_loop().time() - self._epoch) * 1000.0)

    # -- lifecycle -------------------------------------------------------

    async def start(self) -> None:
        loop = asyncio.get_running_loop()
        self._epoch = loop.time()
        self._server = await serve(
            self._handler,
            self.config.listen_host,
            self.config.listen_port,
            process_request=self._process_request,
        )
        self.port = self._server.sockets[0].getsockname()[1]
        log.info("listening on ws://%s:%d/ws", self.config.listen_host, self.port)

    async def stop(self) -> None:
        self._stopped.set()
        for task in self._tasks:
            task.cancel()
        if self._tasks:
            await asyncio.gather(*self._tasks, return_exceptions=True)
        self._tasks.clear()
        if self._server is not None:
            self._server.close()
            await self._server.wait_closed()
            self._server = None

    async def run_until_stopped(self) -> None:
        await self._stopped.wait()

    # -- wall-clock roles --------------------------------------------------

    def start_ticking(self, *, from_ms: int = 0) -> None:
        """Start the fixed-rate tick role on the wall clock."""
        self._tasks.append(asyncio.create_task(self._tick_loop(from_ms)))

    async def _tick_loop(self, from_ms: int) -> None:
        loop = asyncio.get_running_loop()
        period = 1.0 / self.config.tick_hz
        k = int(from_ms / 1000.0 / period) + 1
        while True:
            target = self._epoch + k * period
            delay = target - loop.time()
            if delay > 0:
                await asyncio.sleep(delay)
            elif delay < -period:
                # Fell behind (suspended laptop, debugger): realign, no burst.
                k = int((loop.time() - self._epoch) / period) + 1
                continue
            self._tick_once(self.now_ms())
            k += 1

    def _tick_once(self, now_ms: int) -> None:
        scene, _ = self.core.tick(now_ms)
        if scene is not None:
            self.hub.publish(self.core.last_payload)

    async def feed_frames(self, frames: Iterable[SensorFrame], speed: float = 1.0) -> None:
        """Deliver scripted/replayed frames at their own pace on the wall
        clock, re-stamped with the live receive time."""
        loop = asyncio.get_running_loop()
        start = loop.time()
        base: int | None = None
        for frame in frames:
            if base is None:
                base = frame.received_at
            target = start + (frame.received_at - base) / 1000.0 / speed
            delay = target - loop.time()
            if delay > 0:
                await asyncio.sleep(delay)
            self.core.ingest_frame(replace(frame, received_at=self.now_ms()))

    def start_feeding(self, frames: Iterable[SensorFrame], speed: float = 1.0) -> None:
        self._tasks.append(asyncio.create_task(self.feed_frames(frames, speed)))

    def attach_serial(self, path: str, baud: int = 9600) -> None:
        """Spawn the blocking serial reader; lines land on the loop."""
        stream = open_serial(path, baud)  # startup error propagates
        loop = asyncio.get_running_loop()

        def deliver(line: bytes) -> None:
            self.core.ingest_line(line, self.now_ms())

        def reader() -> None:
            try:
                for line in read_lines(stream):
                    loop.call_soon_threadsafe(deliver, line)
            except OSError:
                pass  # device unplugged; scene holds last values
            finally:
                stream.close()

        threading.Thread(target=reader, name="serial-reader", daemon=True).start()

    # -- recorded timeline role --------------------------------------------

    async def run_recorded(self, records: list[LogRecord], speed: float | None = None) -> RunResult:
        """Drive the core over a recorded timeline on its virtual clock.

        ``speed`` paces the run against the wall (sleeps coalesced so high
        speeds are not defeated by timer granularity); None runs flat out.
        Broadcasts flow to connected clients exactly as live ticks do.
        """
        loop = asyncio.get_running_loop()
        result = RunResult()
        wall0 = loop.time()
        breaths = 0
        self._virtual_now = 0
        try:
            for event, ts, line in timeline(records, self.config.tick_hz):
                if speed is not None:
                    lag = wall0 + ts / 1000.0 / speed - loop.time()
                    if lag > 0.005:
                        await asyncio.sleep(lag)
                elif (breaths := breaths + 1) % 256 == 0:
                    await asyncio.sleep(0)
                self._virtual_now = ts
                if event == "line":
                    self.core.ingest_line(line, ts)
                    continue
                scene, transitions = self.core.tick(ts)
                if scene is not None:
                    self.hub.publish(self.core.last_payload)
                    result.scenes.append(scene)
                    result.payloads.append(self.core.last_payload)
                result.transitions.extend(transitions)
            return result
        finally:
            end_ms = self._virtual_now or 0
            self._virtual_now = None
            # Wall clock continues from the virtual end, keeping now_ms monotone.
            self._epoch = loop.time() - end_ms / 1000.0

    # -- websocket handling ------------------------------------------------

    async def _handler(self, ws) -> None:
        def kick() -> None:
            asyncio.get_running_loop().create_task(ws.close(1013, "too slow"))

        cid, queue = self.hub.attach(kick)
        try:
            await ws.send(_HELLO)
            pump = asyncio.create_task(self._pump(queue, ws))
            try:
                async for raw in ws:
                    self._on_message(raw)
            except ConnectionClosed:
                pass
            finally:
                pump.cancel()
                await asyncio.gather(pump, return_exceptions=True)
        except ConnectionClosed:
            pass
        finally:
            self.hub.detach(cid)

    async def _pump(self, queue: asyncio.Queue, ws) -> None:
        try:
            while True:
                await ws.send(await queue.get())
        except ConnectionClosed:
            return

    def _on_message(self, raw) -> None:
        """Apply one client message; malformed input is counted, never fatal."""
        try:
            msg = json.loads(raw)
        except (ValueError, TypeError):
            self.unknown_messages += 1
            return
        if not isinstance(msg, dict):
            self.unknown_messages += 1
            return
        mtype = msg.get("type")
        if mtype == "hello":
            if msg.get("v") != PROTOCOL_VERSION:
                self.version_mismatches += 1
            return
        if mtype == "inject":
            kind = kind_from_json_name(msg.get("kind", ""))
            value = msg.get("value")
            if kind is None or isinstance(value, bool) or not isinstance(value, (int, float)) \
                    or not math.isfinite(value):
                self.unknown_messages += 1
                return
            self.core.inject(kind, float(value), self.now_ms())
            return
        self.unknown_messages += 1

    # -- plain HTTP --------------------------------------------------------

    def snapshot(self) -> dict:
        snap = self.core.snapshot()
        snap["diagnostics"].update(
            {
                "unknown_messages": self.unknown_messages,
                "version_mismatches": self.version_mismatches,
                "kicked_clients": self.hub.kicked,
                "clients": len(self.hub),
            }
        )
        return snap

    def _process_request(self, connection, request):
        path = request.path.split("?", 1)[0]
        if path == "/status":
            return self._json_response(connection, self.snapshot())
        if path == "/config":
            doc = self.config.to_dict()
            if self.port is not None:
                doc["listen"] = f"{self.config.listen_host}:{self.port}"
            return self._json_response(connection, doc)
        if path == "/ws":
            return None  # proceed with the websocket handshake
        return connection.respond(HTTPStatus.NOT_FOUND, "not found\n")

    @staticmethod
    def _json_response(connection, payload: dict):
        response = connection.respond(HTTPStatus.OK, json.dumps(payload) + "\n")
        del response.headers["Content-Type"]
        response.headers["Content-Type"] = "application/json"
        return response
