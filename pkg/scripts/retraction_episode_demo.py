#!/usr/bin/env python3
"""Run the canonical retraction and growth episodes and dump their logs.

Four episodes on the reference body at 2 kPa: a 1 m straight body that
retracts fully, a 3 m body that buckles immediately, the same 3 m body
rescued by the tip device, and a growth episode to 3 m that records where
the retractability envelope flips.

Usage: python scripts/retraction_episode_demo.py [--out-dir out]
"""

import argparse
import sys
from pathlib import Path

sys.path.insert(0, str(Path(__file__).resolve().parent.parent / "src"))

from vinebuckle import (  # noqa: E402
    BodySpec,
    DeviceSpec,
    Scenario,
    emit_episode_csv,
    simulate_growth,
    simulate_retraction,
)


def main() -> int:
    parser = argparse.ArgumentParser(description=__doc__)
    parser.add_argument("--out-dir", default="out")
    args = parser.parse_args()
    out = Path(args.out_dir)
    out.mkdir(parents=True, exist_ok=True)

    body = BodySpec()
    device = DeviceSpec()
    episodes = [
        ("retract_1m", simulate_retraction, Scenario(body=body, initial_length=1.0, pressure=2e3)),
        ("retract_3m", simulate_retraction, Scenario(body=body, initial_length=3.0, pressure=2e3)),
        (
            "retract_3m_device",
            simulate_retraction,
            Scenario(body=body, initial_length=3.0, pressure=2e3, device=device),
        ),
        (
            "grow_3m",
            simulate_growth,
            Scenario(body=body, initial_length=0.0, pressure=2e3, target_length=3.0),
        ),
    ]
    for name, runner, scenario in episodes:
        log = runner(scenario)
        path = out / f"episode_{name}.csv"
        path.write_bytes(emit_episode_csv(log))
        where = "" if log.terminal.length is None else f" at {log.terminal.length * 100:.0f} cm"
        print(f"{name:18s}  {log.terminal.kind.value}{where}  ({len(log.steps)} steps) -> {path}")
    return 0


if __name__ == "__main__":
    sys.exit(main())
