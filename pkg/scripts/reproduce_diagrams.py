#!/usr/bin/env python3
"""
Regenerate the branch diagram data files

Writes one sweep CSV per reference segment into a target directory:
- diagram_2.csv: a = tan²(74.33°)/4 ≈ 3.17690918, the reference segment
- diagram_3.csv: a = 2.5, whose branches leave a gap over the no-solution region

Usage: python scripts/reproduce_diagrams.py [target_dir] [--step 0.01]
"""

import argparse
import logging
import sys
from pathlib import Path

sys.path.insert(0, str(Path(__file__).resolve().parent.parent))

from config import DEFAULT_SWEEP_STEP  # noqa: E402
from paraboloid import SegmentShape, export_curve, sweep_branches  # noqa: E402
from utils import configure_logging  # noqa: E402

logger = logging.getLogger("reproduce_diagrams")

REFERENCE_SHAPES = {
    "diagram_2.csv": SegmentShape.from_base_angle(74.33),
    "diagram_3.csv": SegmentShape(2.5),
}


def write_diagram(shape: SegmentShape, path: Path, step: float) -> int:
    """Sweep one segment and write its CSV; returns the number of points"""
    curve = sweep_branches(shape, step)
    path.write_bytes(export_curve(curve, "csv"))
    logger.info(f"{path.name}: a={shape.a:.8f}, {len(curve.points)} points on {len(curve.branch_ids)} branches")
    return len(curve.points)


def main() -> int:
    parser = argparse.ArgumentParser(description="Regenerate the branch diagram CSV files")
    parser.add_argument("target", nargs="?", default=".", help="Directory receiving the CSV files")
    parser.add_argument("--step", type=float, default=DEFAULT_SWEEP_STEP, help="Spacing of the X grid")
    args = parser.parse_args()
    configure_logging()

    target = Path(args.target)
    target.mkdir(parents=True, exist_ok=True)
    for name, shape in REFERENCE_SHAPES.items():
        write_diagram(shape, target / name, args.step)
    print(f"Wrote {len(REFERENCE_SHAPES)} diagram files to {target.resolve()}")
    return 0


if __name__ == "__main__":
    sys.exit(main())
