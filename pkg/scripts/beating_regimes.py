#!/usr/bin/env python3
"""Quantum beating of a single chirality qubit across damping regimes.

Writes one CSV per gamma/delta ratio (underdamped through overdamped) and
prints the fitted envelope decay rate where oscillations survive.
"""

import argparse
import sys
from pathlib import Path

sys.path.insert(0, str(Path(__file__).resolve().parents[1] / "src"))

import numpy as np

from chiralqubit.dynamics import DensityMatrix, QubitState, TwoLevelParams, evolve_damped


def main() -> int:
    parser = argparse.ArgumentParser(description=__doc__)
    parser.add_argument("--delta", type=float, default=0.5)
    parser.add_argument("--ratios", type=float, nargs="+", default=[0.02, 0.2, 2.0, 20.0])
    parser.add_argument("--t-max", type=float, default=60.0)
    parser.add_argument("--dt", type=float, default=0.004)
    parser.add_argument("--outdir", type=Path, default=Path("beating_out"))
    args = parser.parse_args()

    args.outdir.mkdir(parents=True, exist_ok=True)
    rho0 = DensityMatrix.from_state(QubitState.plus())
    for ratio in args.ratios:
        gamma = ratio * args.delta
        params = TwoLevelParams(delta=args.delta, gamma=gamma)
        times, rhos = evolve_damped(rho0, params, args.t_max, args.dt)
        p_diff = (rhos[:, 1, 1] - rhos[:, 0, 0]).real
        purity = np.einsum("tij,tji->t", rhos, rhos).real

        path = args.outdir / f"damped_ratio_{ratio:g}.csv"
        with path.open("w", encoding="utf-8") as handle:
            handle.write("t,p_diff,purity\n")
            for k in range(len(times)):
                handle.write(f"{times[k]!r},{p_diff[k]!r},{purity[k]!r}\n")

        peaks = [
            i
            for i in range(1, len(p_diff) - 1)
            if p_diff[i] > p_diff[i - 1] and p_diff[i] > p_diff[i + 1] and p_diff[i] > 0.05
        ]
        if len(peaks) >= 3:
            rate = -np.polyfit(times[peaks], np.log(p_diff[peaks]), 1)[0]
            note = f"envelope decay {rate:.4f} (gamma = {gamma:.4f})"
        else:
            note = "overdamped, no oscillation"
        print(f"gamma/delta = {ratio:6g}: {note} -> {path}")
    return 0


if __name__ == "__main__":
    sys.exit(main())
