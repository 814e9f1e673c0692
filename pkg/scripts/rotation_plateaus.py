"""Transfer versus amplitude for each packaged robust rotation, with plateau widths."""

import numpy as np

from _common import O, parser, write_csv
from robustpulse.optimize import anchor_angles, load_family, qubit_frame_unitaries, transfer_plateau


def main():
    args = parser(__doc__).parse_args()
    fam = load_family()
    anchors = anchor_angles()
    amps = np.linspace(0.01, 6, 600) * O
    rows = []
    for sol in fam:
        if np.min(np.abs(anchors - sol.angle)) > 1e-12:
            continue
        target = np.sin(sol.angle / 2) ** 2
        us = qubit_frame_unitaries(amps, sol.coefficients, 1.0, np.pi / 2, args.steps)
        rows += [(float(target), float(a / O), float(abs(u[0, 1]) ** 2)) for a, u in zip(amps, us)]
        lo, hi = transfer_plateau(sol, target, steps=args.steps)
        print(f"P1 = {target:.1f}: Omega_0 = {sol.amplitude / O:.3f}, plateau width {(hi - lo) / O:.3f} Omega_2pi")
    path = write_csv(args.out / "plateaus.csv", ["target", "omega [Omega_2pi]", "P1"], rows)
    print(path)


if __name__ == "__main__":
    main()
