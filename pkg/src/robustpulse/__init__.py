"""Robust phase-modulated qubit pulses."""

import os as _os

# the TBB layer shipped with some numba wheels is too old; fall back quietly
_os.environ.setdefault("NUMBA_THREADING_LAYER", "workqueue")

__version__ = "0.1.0"
