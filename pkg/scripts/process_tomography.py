"""Process-matrix diagonals across the amplitude window for a chirped transfer pulse and the robust pi gate."""

import numpy as np

from _common import O, parser, write_csv
from robustpulse.analysis import chirp_pulse
from robustpulse.optimize import load_family
from robustpulse.propagator import NoiseModel
from robustpulse.tomo import simulate_qpt


def main():
    ap = parser(__doc__)
    ap.add_argument("--noise", action="store_true", help="T = 120 ns, T1 = 7 us, T2 = 5 us")
    args = ap.parse_args()
    noise = NoiseModel(7000 / 120, 5000 / 120) if args.noise else None
    sol = load_family()[-1]
    scales = np.linspace(0.8, 1.2, 17)
    rows = []
    for s in scales:
        chirp = simulate_qpt(chirp_pulse("super_gaussian", s * 3.5 * O, 10.8 * O), noise, steps=args.steps)
        robust = simulate_qpt(sol.pulse(amplitude=s * sol.amplitude), noise, steps=args.steps)
        rows.append((float(s), *map(float, chirp.diagonal), *map(float, robust.diagonal)))
    header = ["scale"] + [f"chirp_{p}{p}" for p in "IXYZ"] + [f"robust_{p}{p}" for p in "IXYZ"]
    path = write_csv(args.out / "qpt_diagonals.csv", header, rows)
    data = np.array(rows)
    print(f"chirp chi_XX spread {np.ptp(data[:, 2]):.3f}; robust min chi_XX {data[:, 6].min():.4f}; {path}")


if __name__ == "__main__":
    main()
