"""File formats: long-format CSV grids and JSON artifacts, written atomically."""

from __future__ import annotations

import csv
import io as _io
import json
import os
import tempfile
from pathlib import Path

import numpy as np


def atomic_write_text(path, text: str) -> Path:
    path = Path(path)
    path.parent.mkdir(parents=True, exist_ok=True)
    fd, tmp = tempfile.mkstemp(dir=path.parent, prefix=f".{path.name}.", suffix=".tmp")
    try:
        with os.fdopen(fd, "w", newline="") as fh:
            fh.write(text)
        os.replace(tmp, path)
    except BaseException:
        if os.path.exists(tmp):
            os.unlink(tmp)
        raise
    return path


def _to_jsonable(obj):
    if isinstance(obj, dict):
        return {str(k): _to_jsonable(v) for k, v in obj.items()}
    if isinstance(obj, (list, tuple)):
        return [_to_jsonable(v) for v in obj]
    if isinstance(obj, np.ndarray):
        if np.iscomplexobj(obj):
            return {"real": _to_jsonable(obj.real), "imag": _to_jsonable(obj.imag)}
        return _to_jsonable(obj.tolist())
    if isinstance(obj, (np.bool_, bool)):
        return bool(obj)
    if isinstance(obj, (np.integer,)):
        return int(obj)
    if isinstance(obj, (np.floating, float)):
        return float(obj)
    if isinstance(obj, complex):
        return {"real": obj.real, "imag": obj.imag}
    return obj


def dumps_json(obj) -> str:
    # repr-exact floats make re-serialization bit-identical
    return json.dumps(_to_jsonable(obj), indent=2, sort_keys=True, allow_nan=False) + "\n"


def write_json(path, obj) -> Path:
    return atomic_write_text(path, dumps_json(obj))


def read_json(path):
    with open(path) as fh:
        return json.load(fh)


def complex_from_json(d) -> np.ndarray:
    return np.asarray(d["real"], dtype=float) + 1j * np.asarray(d["imag"], dtype=float)


def format_float(x: float) -> str:
    return repr(float(x))


def csv_text(header, rows) -> str:
    buf = _io.StringIO()
    w = csv.writer(buf, lineterminator="\n")
    w.writerow(header)
    for r in rows:
        w.writerow([format_float(v) if isinstance(v, (float, np.floating)) else v for v in r])
    return buf.getvalue()


def write_csv(path, header, rows) -> Path:
    return atomic_write_text(path, csv_text(header, rows))


def read_csv(path):
    """Header list and a float array of the rows."""
    with open(path, newline="") as fh:
        r = csv.reader(fh)
        header = next(r)
        data = np.array([[float(v) for v in row] for row in r], dtype=float)
    return header, data.reshape(-1, len(header))
