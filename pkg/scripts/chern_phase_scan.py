#!/usr/bin/env python3
"""Scan the chirality number across the chemical-potential transition.

Runs both invariant estimators (cross-validated) over a mu grid for both
chirality signs and prints the phase table; optionally writes CSV.
"""

import argparse
import sys
from pathlib import Path

sys.path.insert(0, str(Path(__file__).resolve().parents[1] / "src"))

import numpy as np

from chiralqubit.chirality import cross_validate
from chiralqubit.kspace import GapParams


def main() -> int:
    parser = argparse.ArgumentParser(description=__doc__)
    parser.add_argument("--delta", type=float, default=1.0, help="gap magnitude")
    parser.add_argument("--mu-min", type=float, default=-2.0)
    parser.add_argument("--mu-max", type=float, default=2.0)
    parser.add_argument("--points", type=int, default=9)
    parser.add_argument("--out", type=Path, default=None, help="optional CSV path")
    args = parser.parse_args()

    rows = ["mu,chi,n_integer,raw_plaquette,raw_quadrature,n_grid"]
    print(f"{'mu':>8} {'chi':>4} {'N':>3}   raw(plaquette)        raw(quadrature)")
    for mu in np.linspace(args.mu_min, args.mu_max, args.points):
        if abs(mu) < 1e-9:
            continue  # transition point, invariant undefined
        for chi in (+1, -1):
            report = cross_validate(GapParams(args.delta, float(mu), chi))
            print(
                f"{mu:8.3f} {chi:+4d} {report.n_integer:+3d}   "
                f"{report.plaquette.raw:+.15f} {report.quadrature.raw:+.12f}"
            )
            rows.append(
                f"{mu!r},{chi},{report.n_integer},{report.plaquette.raw!r},"
                f"{report.quadrature.raw!r},{report.plaquette.grid_size}"
            )
    if args.out is not None:
        args.out.write_text("\n".join(rows) + "\n", encoding="utf-8")
        print(f"wrote {args.out}")
    return 0


if __name__ == "__main__":
    sys.exit(main())
