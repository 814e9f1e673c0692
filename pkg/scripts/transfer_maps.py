"""Transfer probability maps over (amplitude, chirp) for the three envelopes."""

import numpy as np

from _common import O, parser, save_grid
from robustpulse.analysis import count_stripes, sweep_transfer_map


def main():
    ap = parser(__doc__)
    ap.add_argument("--grid", type=int, default=101)
    args = ap.parse_args()
    om = np.linspace(0, 5, args.grid) * O
    dm = np.linspace(0, 12, args.grid) * O
    for kind in ("super_gaussian", "gaussian", "rectangular"):
        g = sweep_transfer_map(kind, om, dm, steps=args.steps)
        path = save_grid(args.out / f"transfer_{kind}.csv", g)
        print(f"{kind}: plateau fraction {np.mean(g.values >= 0.99):.3f}, "
              f"stripes {count_stripes(g.values)}; {path}")


if __name__ == "__main__":
    main()
