"""Optimize the robust rotation family and store it as package data.

Anchors sit at transfer probabilities 0.1, 0.2, ..., 1.0; extra small angles down to
0.01 rad let arbitrary rotations be interpolated for benchmarking.
"""

import argparse
import time
from pathlib import Path

import numpy as np

from robustpulse.io import write_json
from robustpulse.optimize import (TWO_PI, OptimizerConfig, TargetRotation, anchor_angles, build_family,
                                  family_to_dict, transfer_plateau)

DEFAULT_OUT = Path(__file__).resolve().parents[1] / "src" / "robustpulse" / "data" / "rotation_family.json"
EXTRA_ANGLES = (0.5, 0.35, 0.2, 0.1, 0.05, 0.02, 0.01)


def main():
    ap = argparse.ArgumentParser()
    ap.add_argument("--out", type=Path, default=DEFAULT_OUT)
    ap.add_argument("--window", type=float, default=0.2)
    ap.add_argument("--harmonics", type=int, default=4)
    ap.add_argument("--seed", type=int, default=0)
    args = ap.parse_args()
    cfg = OptimizerConfig(harmonics=args.harmonics, window_fraction=args.window, seed=args.seed)
    t0 = time.time()

    def report(s):
        p = TargetRotation(s.angle).transfer_probability
        pl = transfer_plateau(s, p)
        width = (pl[1] - pl[0]) / TWO_PI if pl else 0.0
        print(f"theta={s.angle:.4f} P1={p:.3f} objective={s.objective:.5f} "
              f"Omega0={s.amplitude / TWO_PI:.4f} a={np.round(np.array(s.coefficients) / TWO_PI, 4)} "
              f"plateau={width:.3f} ({time.time() - t0:.0f} s)", flush=True)

    fam = build_family(list(anchor_angles()) + list(EXTRA_ANGLES), cfg, progress=report)
    write_json(args.out, family_to_dict(fam, cfg))
    print(f"wrote {args.out}")


if __name__ == "__main__":
    main()
