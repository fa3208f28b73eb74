#!/usr/bin/env python3
"""
Regenerate the figure data sets from the committed manifests in presets/.

Writes <output-dir>/<preset>.csv and prints each run's summary block.
"""
import argparse
import dataclasses
import os
import sys
from pathlib import Path

# Add parent directory to path
sys.path.insert(0, os.path.dirname(os.path.dirname(os.path.abspath(__file__))))

from exceptions import QuantumWalkError  # noqa: E402
from utils.csv_output import write_result  # noqa: E402
from utils.run_config import build_run_config, load_manifest  # noqa: E402
from utils.runner import execute  # noqa: E402

PRESETS_DIR = Path(__file__).resolve().parent.parent / "presets"


def reproduce(preset: Path, output_dir: Path) -> bool:
    print(f"🔄 {preset.stem}")
    try:
        run = build_run_config(load_manifest(preset))
        run = dataclasses.replace(run, output=output_dir / f"{preset.stem}.csv")
        write_result(execute(run), summary_stream=sys.stdout)
    except QuantumWalkError as e:
        print(f"❌ {preset.stem}: {e}")
        return False
    print(f"✅ {preset.stem} -> {output_dir / (preset.stem + '.csv')}\n")
    return True


def main() -> int:
    parser = argparse.ArgumentParser(description="Reproduce figure data from presets/*.env")
    parser.add_argument("--output-dir", type=Path, default=Path("figures"))
    parser.add_argument("presets", nargs="*", help="preset names (default: all)")
    args = parser.parse_args()

    names = args.presets or sorted(p.stem for p in PRESETS_DIR.glob("*.env"))
    results = [reproduce(PRESETS_DIR / f"{name}.env", args.output_dir) for name in names]
    return 0 if all(results) else 1


if __name__ == "__main__":
    sys.exit(main())
