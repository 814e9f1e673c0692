"""Amplitude and static-detuning cuts through the super-Gaussian plateau, with the Rabi reference."""

import numpy as np

from _common import O, parser, save_grid
from robustpulse.analysis import (chirp_pulse, contiguous_window, rabi_detuning_window, sweep_detuning,
                                  sweep_transfer_map)


def main():
    args = parser(__doc__).parse_args()
    amp = sweep_transfer_map("super_gaussian", np.linspace(0, 6, 241) * O, [10.8 * O], steps=args.steps)
    save_grid(args.out / "amplitude_cut.csv", amp)
    om = amp.axis1
    win = contiguous_window(om, amp.values[:, 0] > 0.999, 3.5 * O)
    print("amplitude window P1 > 0.999:", None if win is None else np.round(np.array(win) / O, 3))
    deltas = np.linspace(-5, 5, 201) * O
    det = sweep_detuning(chirp_pulse("super_gaussian", 2.5 * O, 10.8 * O), deltas, steps=args.steps)
    save_grid(args.out / "detuning_cut.csv", det)
    win = contiguous_window(deltas, det.values > 0.999, 0.0)
    print("detuning window P1 > 0.999:", None if win is None else np.round(np.array(win) / O, 3))
    print("Rabi pi pulse detuning window:", np.round(np.array(rabi_detuning_window()) / O, 4))


if __name__ == "__main__":
    main()
