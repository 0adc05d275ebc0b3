#!/usr/bin/env python3
"""Print the feature-target correlation ranking for drifted vs still data.

Shows how a block-ordered recording session makes the ambient channels
(temperature, pressure) spuriously predictive of the class label, and that
the correlation vanishes once the session drift is removed.

Usage:
    python scripts/drift_report.py [--samples N] [--seed S]
"""

import argparse

from enose.preprocess import feature_target_correlation
from enose.synth import default_spec, generate


def main() -> int:
    parser = argparse.ArgumentParser(description=__doc__.split("\n", 1)[0])
    parser.add_argument("--samples", type=int, default=1000, help="samples per class")
    parser.add_argument("--seed", type=int, default=0)
    args = parser.parse_args()

    for label, enabled in (("drift enabled", True), ("drift disabled", False)):
        data = generate(default_spec(args.samples, args.seed, drift_enabled=enabled))
        print(f"{label} ({data.n} samples):")
        for name, r in feature_target_correlation(data):
            print(f"  {name:>12s}  r = {r:+.4f}")
        print()
    return 0


if __name__ == "__main__":
    import sys

    sys.exit(main())
