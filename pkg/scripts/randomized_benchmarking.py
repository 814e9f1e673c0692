"""Randomized benchmarking of robust and Rabi gates at T = 120 ns, T1 = 7 us, T2 = 5 us."""

import numpy as np

from _common import parser, write_csv
from robustpulse.analysis import run_randomized_benchmarking
from robustpulse.propagator import NoiseModel


def main():
    ap = parser(__doc__)
    ap.add_argument("--trials", type=int, default=50)
    ap.add_argument("--amplitude-error", type=float, default=0.0)
    args = ap.parse_args()
    noise = NoiseModel(7000 / 120, 5000 / 120)
    lengths = [1, 3, 7, 15, 30, 50, 75, 100]
    rows = []
    for source in ("robust", "rabi"):
        r = run_randomized_benchmarking(source, lengths, args.trials, noise, amplitude_error=args.amplitude_error)
        rows += [(source, int(n), float(m), float(s)) for n, m, s in zip(r.lengths, r.mean_population,
                                                                          r.std_population)]
        lo, hi = r.loss_interval()
        print(f"{source}: loss per gate {r.loss:.4f} (95% interval {lo:.4f} to {hi:.4f})")
    print(write_csv(args.out / f"rb_err{args.amplitude_error:g}.csv", ["gate", "N", "mean_P0", "std_P0"], rows))


if __name__ == "__main__":
    main()
