#!/usr/bin/env python3
"""Fold a session log (or a scenario) offline and print what happened:
season transitions, scene extremes, and diagnostics. No server involved.

    python scripts/offline_summary.py --log session.log
    python scripts/offline_summary.py --scenario scripts/scenarios/day_cycle.json
"""

import argparse
import sys
from pathlib import Path

sys.path.insert(0, str(Path(__file__).parent.parent / "src"))

from seasonbridge.config import Config
from seasonbridge.core import BridgeCore, run_records
from seasonbridge.simulate import frames_to_records, generate, load_log, load_scenario_file, merge_streams


def main() -> int:
    parser = argparse.ArgumentParser(description=__doc__)
    source = parser.add_mutually_exclusive_group(required=True)
    source.add_argument("--log", metavar="FILE")
    source.add_argument("--scenario", metavar="FILE")
    parser.add_argument("--config", metavar="FILE")
    parser.add_argument("--seed", type=int, default=0)
    args = parser.parse_args()

    from seasonbridge.config import load_config

    config = load_config(args.config) if args.config else Config()
    if args.log:
        records, skipped = load_log(args.log)
        if skipped:
            print(f"skipped {skipped} malformed records", file=sys.stderr)
    else:
        specs = load_scenario_file(args.scenario)
        frames = merge_streams([generate(s, args.seed + i) for i, s in enumerate(specs)])
        records = frames_to_records(frames)
    if not records:
        print("no records to fold", file=sys.stderr)
        return 1

    core = BridgeCore(config)
    result = run_records(core, records)

    print(f"{len(records)} records, {len(result.scenes)} ticks")
    for t in result.transitions:
        print(f"  {t.from_season.value:>6} -> {t.to_season.value:<6} at {t.at_temp:.2f} degC")
    if result.scenes:
        temps = [s.temperature_c for s in result.scenes]
        print(f"effective temperature: min {min(temps):.1f}, max {max(temps):.1f} degC")
        wet = [s for s in result.scenes if s.precipitation.kind.value != "none"]
        if wet:
            kinds = sorted({s.precipitation.kind.value for s in wet})
            print(f"precipitation in {len(wet)} ticks: {', '.join(kinds)}")
    diag = core.snapshot()["diagnostics"]
    print(f"diagnostics: {diag}")
    return 0


if __name__ == "__main__":
    sys.exit(main())
