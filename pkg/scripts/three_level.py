"""Level populations versus static detuning for a transmon with E_C = 340 MHz and T = 200 ns."""

import numpy as np

from _common import O, parser, save_grid
from robustpulse.analysis import chirp_pulse, sweep_detuning
from robustpulse.model import ThreeLevelModel, TwoLevelModel


def main():
    args = parser(__doc__).parse_args()
    ec = O * 340e6 * 200e-9
    p = chirp_pulse("super_gaussian", 2.5 * O, 10.8 * O)
    deltas = np.linspace(-50, 20, 281) * O
    for name, model in (("two_level", TwoLevelModel()), ("three_level", ThreeLevelModel(ec))):
        g = sweep_detuning(p, deltas, model, args.steps)
        save_grid(args.out / f"detuning_{name}.csv", g)
        if "P2" in g.extra:
            i = int(np.argmax(g.extra["P2"]))
            print(f"{name}: P2 peaks at {deltas[i] / O:.2f} Omega_2pi (-E_C/2 = {-ec / 2 / O:.2f})")


if __name__ == "__main__":
    main()
