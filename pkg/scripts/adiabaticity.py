"""Peak adiabaticity parameter for super-Gaussian and Gaussian chirps on a common grid."""

import numpy as np

from _common import O, parser, save_grid
from robustpulse.analysis import eta_map


def main():
    ap = parser(__doc__)
    ap.add_argument("--grid", type=int, default=41)
    args = ap.parse_args()
    om = np.linspace(1, 5, args.grid) * O
    dm = np.linspace(5, 30, args.grid) * O
    maps = {k: eta_map(k, om, dm, steps=args.steps) for k in ("super_gaussian", "gaussian")}
    for k, g in maps.items():
        save_grid(args.out / f"eta_{k}.csv", g)
    frac = np.mean(maps["super_gaussian"].values < maps["gaussian"].values)
    print(f"fraction of cells where the super-Gaussian peak eta is lower: {frac:.3f}")


if __name__ == "__main__":
    main()
