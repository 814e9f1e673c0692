"""Adiabatic-basis traces at the brightest points of the rectangular-pulse fringes."""

import numpy as np

from _common import O, parser, write_csv
from robustpulse.analysis import adiabatic_trace, chirp_pulse, stripe_labels, sweep_transfer_map


def main():
    ap = parser(__doc__)
    ap.add_argument("--grid", type=int, default=101)
    args = ap.parse_args()
    om = np.linspace(0, 4, args.grid) * O
    dm = np.linspace(0, 8, args.grid) * O
    g = sweep_transfer_map("rectangular", om, dm, steps=args.steps)
    labels, n = stripe_labels(g.values)
    rows = []
    for k in range(1, n + 1):
        i, j = np.argwhere(labels == k)[np.argmax(g.values[labels == k])]
        tr = adiabatic_trace(chirp_pulse("rectangular", om[i], dm[j]), steps=args.steps)
        rows += [(k, float(t), float(pm), float(pp), float(ph), float(p1))
                 for t, pm, pp, ph, p1 in zip(tr.times, tr.p_minus, tr.p_plus, tr.relative_phase, tr.p1)]
        print(f"stripe {k}: Omega {om[i] / O:.2f}, Delta_max {dm[j] / O:.2f}, "
              f"final phase {tr.final_phase / np.pi:.3f} pi, P1 {tr.p1[-1]:.4f}")
    path = write_csv(args.out / "fringe_traces.csv", ["stripe", "t [T]", "p_minus", "p_plus", "phase [rad]", "P1"],
                     rows)
    print(path)


if __name__ == "__main__":
    main()
