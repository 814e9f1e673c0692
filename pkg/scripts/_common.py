import argparse
from pathlib import Path

from robustpulse.io import write_csv, write_json

O = 6.283185307179586


def parser(doc):
    ap = argparse.ArgumentParser(description=doc)
    ap.add_argument("--out", type=Path, default=Path("figdata"))
    ap.add_argument("--steps", type=int, default=2048)
    return ap


def save_grid(path, grid):
    """Long-format CSV with axes in Omega_2pi units."""
    naxes = 1 if grid.axis2 is None else 2
    rows = [tuple(v / O for v in r[:naxes]) + tuple(r[naxes:]) for r in grid.long_rows()]
    header = [h.replace("[rad/T]", "[Omega_2pi]") for h in grid.header()]
    return write_csv(path, header, rows)


__all__ = ["O", "parser", "save_grid", "write_csv", "write_json"]
