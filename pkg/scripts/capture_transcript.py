#!/usr/bin/env python3
"""Capture a State-message transcript from a deterministic run, one JSON
message per line. The frontend replays these headlessly in its render
tests.

    python scripts/capture_transcript.py --scenario scripts/scenarios/hold_20.json --out transcript.jsonl
"""

import argparse
import sys
from pathlib import Path

sys.path.insert(0, str(Path(__file__).parent.parent / "src"))

from seasonbridge.config import Config, load_config
from seasonbridge.core import BridgeCore, run_records
from seasonbridge.simulate import frames_to_records, generate, load_scenario_file, merge_streams


def main() -> int:
    parser = argparse.ArgumentParser(description=__doc__)
    parser.add_argument("--scenario", metavar="FILE", required=True)
    parser.add_argument("--out", metavar="FILE", required=True)
    parser.add_argument("--config", metavar="FILE")
    parser.add_argument("--seed", type=int, default=0)
    parser.add_argument("--limit", type=int, default=0, help="keep only the first N states")
    args = parser.parse_args()

    config = load_config(args.config) if args.config else Config()
    specs = load_scenario_file(args.scenario)
    frames = merge_streams([generate(s, args.seed + i) for i, s in enumerate(specs)])
    result = run_records(BridgeCore(config), frames_to_records(frames))
    payloads = result.payloads[: args.limit] if args.limit else result.payloads
    with open(args.out, "w", encoding="ascii") as f:
        for payload in payloads:
            f.write(payload + "\n")
    print(f"wrote {len(payloads)} states to {args.out}")
    return 0


if __name__ == "__main__":
    sys.exit(main())
