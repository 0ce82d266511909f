#!/usr/bin/env python3
"""Device sizing across an applied-field range.

Shows how the pair budget and the maximal element size shrink as the
addressing field grows, and where the geometry stays below the London
penetration depth.
"""

import argparse
import sys
from pathlib import Path

sys.path.insert(0, str(Path(__file__).resolve().parents[1] / "src"))

import numpy as np

from chiralqubit.device import MaterialParams, sizing_report


def main() -> int:
    parser = argparse.ArgumentParser(description=__doc__)
    parser.add_argument("--fields", type=float, nargs="+", default=list(np.logspace(-1, 2, 7)))
    parser.add_argument("--mass-ratio", type=float, default=4.0)
    args = parser.parse_args()

    params = MaterialParams(mass_ratio=args.mass_ratio)
    print(f"{'H (G)':>10} {'eps (eV)':>12} {'n_pairs':>10} {'V (A^3)':>12} {'L (nm)':>8}  fits")
    for field in args.fields:
        report = sizing_report(params, float(field))
        geometry = report.geometry
        fits = "yes" if geometry.within_lambda else "NO"
        print(
            f"{field:10.3g} {report.eps_ev:12.4g} {report.n_pairs:10d} "
            f"{geometry.volume_a3:12.4g} {geometry.lx_a / 10.0:8.1f}  {fits}"
        )
    return 0


if __name__ == "__main__":
    sys.exit(main())
