"""Operator entry point: run, record, replay, and config checking.

Exit codes: 0 success, 1 usage, 2 config error, 3 runtime error.
"""

from __future__ import annotations

import argparse
import asyncio
import json
import sys
import time

from .config import Config, ConfigError, load_config
from .serialio import open_serial, read_lines
from .server import BridgeServer
from .simulate import generate, load_log, load_scenario_file, merge_streams, record
from .protocol import format_log_record

EXIT_OK = 0
EXIT_USAGE = 1
EXIT_CONFIG = 2
EXIT_RUNTIME = 3


class _UsageError(Exception):
    pass


class _Parser(argparse.ArgumentParser):
    def error(self, message):  # argparse defaults to exit code 2
        raise _UsageError(message)


def build_parser() -> _Parser:
    parser = _Parser(prog="seasonbridge", description=__doc__)
    parser.add_argument("--config", metavar="FILE", help="JSON config file")
    sub = parser.add_subparsers(dest="command", required=True)

    bridge = sub.add_parser("bridge", help="run the bridge service")
    src = bridge.add_mutually_exclusive_group(required=True)
    src.add_argument("--serial", metavar="PATH", help="serial device to read")
    src.add_argument("--simulate", metavar="FILE", help="scenario file to play")
    bridge.add_argument("--baud", type=int, default=9600, help="serial baud rate")
    bridge.add_argument("--seed", type=int, default=0, help="simulator noise seed")
    bridge.add_argument("--listen", metavar="HOST:PORT", help="override listen address")

    rec = sub.add_parser("record", help="record a session log")
    rec.add_argument("--out", metavar="FILE", required=True)
    rsrc = rec.add_mutually_exclusive_group(required=True)
    rsrc.add_argument("--serial", metavar="PATH")
    rsrc.add_argument("--simulate", metavar="FILE")
    rec.add_argument("--baud", type=int, default=9600)
    rec.add_argument("--seed", type=int, default=0)
    rec.add_argument("--count", type=int, default=0, help="stop after N serial lines (0 = until interrupt)")

    rep = sub.add_parser("replay", help="serve a recorded session")
    rep.add_argument("--log", metavar="FILE", required=True)
    rep.add_argument("--speed", type=float, default=1.0)
    rep.add_argument("--exit-at-end", action="store_true", help="print transitions and exit when the log ends")
    rep.add_argument("--listen", metavar="HOST:PORT", help="override listen address")

    chk = sub.add_parser("check-config", help="validate a config file")
    chk.add_argument("path", metavar="FILE")
    return parser


def _apply_listen(config: Config, listen: str | None) -> None:
    if listen is None:
        return
    host, _, port_text = listen.rpartition(":")
    if not host or not port_text.isdigit():
        raise ConfigError(f"listen: must be 'host:port': {listen!r}")
    config.listen_host, config.listen_port = host, int(port_text)
    config.validate()


def _simulated_frames(path: str, seed: int):
    specs = load_scenario_file(path)
    streams = [generate(spec, seed + i) for i, spec in enumerate(specs)]
    return merge_streams(streams)


async def _run_bridge(config: Config, args) -> None:
    frames = None if args.serial else _simulated_frames(args.simulate, args.seed)
    server = BridgeServer(config)
    await server.start()
    print(f"listening on ws://{config.listen_host}:{server.port}/ws", flush=True)
    if args.serial:
        server.attach_serial(args.serial, args.baud)
    else:
        server.start_feeding(frames)
    server.start_ticking()
    try:
        await server.run_until_stopped()
    finally:
        await server.stop()


async def _run_replay(config: Config, args) -> int:
    records, skipped = load_log(args.log)
    if not records:
        print(f"{args.log}: no readable records", file=sys.stderr)
        return EXIT_RUNTIME
    if skipped:
        print(f"warning: skipped {skipped} malformed log records", file=sys.stderr)
    server = BridgeServer(config)
    await server.start()
    print(f"listening on ws://{config.listen_host}:{server.port}/ws", flush=True)
    try:
        result = await server.run_recorded(records, speed=args.speed)
        if args.exit_at_end:
            for t in result.transitions:
                print(json.dumps(
                    {"from": t.from_season.value, "to": t.to_season.value, "at_temp": t.at_temp}
                ))
            return EXIT_OK
        # Keep serving with the last scene held.
        server.start_ticking(from_ms=server.now_ms())
        await server.run_until_stopped()
        return EXIT_OK
    finally:
        await server.stop()


def _cmd_record(config: Config, args) -> int:
    if args.simulate:
        frames = _simulated_frames(args.simulate, args.seed)
        count = record(frames, args.out)
        print(f"wrote {count} records to {args.out}")
        return EXIT_OK
    stream = open_serial(args.serial, args.baud)
    start = time.monotonic()
    count = 0
    try:
        with open(args.out, "wb") as sink:
            for line in read_lines(stream):
                now_ms = int((time.monotonic() - start) * 1000.0)
                sink.write(format_log_record(now_ms, line))
                count += 1
                if args.count and count >= args.count:
                    break
    except KeyboardInterrupt:
        pass
    finally:
        stream.close()
    print(f"wrote {count} records to {args.out}")
    return EXIT_OK


def main(argv: list[str] | None = None) -> int:
    parser = build_parser()
    try:
        args = parser.parse_args(argv)
    except _UsageError as exc:
        print(f"error: {exc}", file=sys.stderr)
        parser.print_usage(sys.stderr)
        return EXIT_USAGE

    if args.command == "check-config":
        try:
            load_config(args.path)
        except ConfigError as exc:
            print(f"config error: {exc}", file=sys.stderr)
            return EXIT_CONFIG
        print("config ok")
        return EXIT_OK

    try:
        config = load_config(args.config) if args.config else Config()
        _apply_listen(config, getattr(args, "listen", None))
    except ConfigError as exc:
        print(f"config error: {exc}", file=sys.stderr)
        return EXIT_CONFIG

    try:
        if args.command == "bridge":
            asyncio.run(_run_bridge(config, args))
            return EXIT_OK
        if args.command == "replay":
            return asyncio.run(_run_replay(config, args))
        if args.command == "record":
            return _cmd_record(config, args)
    except KeyboardInterrupt:
        return EXIT_OK
    except (OSError, ValueError) as exc:
        print(f"error: {exc}", file=sys.stderr)
        return EXIT_RUNTIME
    raise AssertionError(f"unhandled command {args.command!r}")


if __name__ == "__main__":
    sys.exit(main())
