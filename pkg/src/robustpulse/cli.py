"""Command-line front end.

All physics inputs carry units. Frequencies given in MHz/GHz/kHz are cyclic and
are multiplied by 2 pi internally; ``O2pi`` means multiples of Omega_2pi = 2 pi / T.
Angles accept ``rad``, ``deg`` or expressions in ``pi`` such as ``2pi/3``.
Internally time is measured in units of the pulse duration T.
"""

from __future__ import annotations

import argparse
import configparser
import math
import re
import sys
from dataclasses import asdict, dataclass, field
from pathlib import Path
from typing import Optional

import numpy as np

from . import __version__
from .errors import AliasingError, InvalidInputError, RobustPulseError

COMMANDS = ("sweep-transfer", "sweep-detuning", "trajectory", "optimize-rotation", "qpt", "rb", "eta",
            "adiabatic-trace", "export-waveform")

EXIT_OK, EXIT_CONFIG, EXIT_NUMERICAL = 0, 2, 3

FREQ_UNITS = {"hz": 1.0, "khz": 1e3, "mhz": 1e6, "ghz": 1e9}
TIME_UNITS = {"s": 1.0, "ms": 1e-3, "us": 1e-6, "ns": 1e-9}
_NUM = r"[-+]?(?:\d+\.?\d*|\.\d+)(?:[eE][-+]?\d+)?"


class ConfigError(Exception):
    def __init__(self, problems):
        self.problems = list(problems)
        super().__init__("; ".join(self.problems))


# ---------------------------------------------------------------------------
# unit parsing
# ---------------------------------------------------------------------------

def _split(text: str):
    m = re.fullmatch(rf"\s*({_NUM})\s*([A-Za-z/0-9]*)\s*", str(text))
    if not m:
        raise ValueError(f"cannot parse quantity {text!r}")
    return float(m.group(1)), m.group(2)


def parse_time(text: str) -> float:
    """Seconds."""
    v, u = _split(text)
    if u.lower() not in TIME_UNITS:
        raise ValueError(f"time {text!r} needs a unit ({', '.join(TIME_UNITS)})")
    return v * TIME_UNITS[u.lower()]


def parse_frequency(text: str, duration_s: float) -> float:
    """Angular frequency in rad per T."""
    v, u = _split(text)
    if u.lower() in FREQ_UNITS:
        return 2 * math.pi * v * FREQ_UNITS[u.lower()] * duration_s
    if u.lower() == "o2pi":
        return 2 * math.pi * v
    raise ValueError(f"frequency {text!r} needs a unit (MHz, GHz, kHz, Hz or O2pi)")


def parse_angle(text: str) -> float:
    s = str(text).strip().replace(" ", "")
    m = re.fullmatch(rf"({_NUM}|[-+]?)\*?pi(?:/({_NUM}))?", s)
    if m:
        k = m.group(1)
        k = -1.0 if k == "-" else 1.0 if k in ("", "+") else float(k)
        return k * math.pi / (float(m.group(2)) if m.group(2) else 1.0)
    v, u = _split(s)
    if u.lower() == "rad":
        return v
    if u.lower() == "deg":
        return math.radians(v)
    raise ValueError(f"angle {text!r} needs a unit (rad, deg) or a multiple of pi")


def parse_range(text: str, parse):
    """'lo:hi unit' or 'lo unit:hi unit'."""
    parts = str(text).split(":")
    if len(parts) != 2:
        raise ValueError(f"range {text!r} must look like 'lo:hi unit'")
    lo, hi = (p.strip() for p in parts)
    _, unit_hi = _split(hi)
    try:
        _, unit_lo = _split(lo)
    except ValueError:
        unit_lo = ""
    if not unit_lo:
        lo = f"{lo} {unit_hi}"
    a, b = parse(lo), parse(hi)
    if not b > a:
        raise ValueError(f"range {text!r} is empty")
    return a, b


# ---------------------------------------------------------------------------
# configuration
# ---------------------------------------------------------------------------

@dataclass
class RunConfig:
    """Validated run parameters. Frequencies in rad/T, times in units of T."""

    command: str
    duration_s: float = 200e-9
    envelope: str = "super_gaussian"
    omega: float = 2.5 * 2 * math.pi
    delta_max: float = 10.8 * 2 * math.pi
    delta: float = 0.0
    anharmonicity: Optional[float] = None
    dipole_ratio: float = -math.sqrt(2.0)
    t1: Optional[float] = None
    t2: Optional[float] = None
    theta: float = math.pi
    phi: float = math.pi / 2
    omega_range: tuple = (0.0, 5 * 2 * math.pi)
    delta_max_range: tuple = (0.0, 12 * 2 * math.pi)
    delta_range: tuple = (-5 * 2 * math.pi, 5 * 2 * math.pi)
    grid: int = 101
    steps: int = 2048
    seed: int = 0
    threads: Optional[int] = None
    out: Optional[str] = None
    gate: str = "robust"
    lengths: tuple = (1, 3, 7, 15, 30, 50, 75, 100)
    trials: int = 50
    amplitude_error: float = 0.0
    readout_noise: bool = False
    sample_rate: float = 1e9
    if_frequency: float = 0.0
    amplitude_axis: str = "mean"
    family: Optional[str] = None
    extras: dict = field(default_factory=dict)

    @property
    def levels(self) -> int:
        return 2 if self.anharmonicity is None else 3


# config key -> (section, parser kind)
_KEYS = {
    "T": ("system", "time"), "ec": ("system", "freq"), "lambda": ("system", "float"),
    "t1": ("system", "time"), "t2": ("system", "time"),
    "envelope": ("pulse", "str"), "omega": ("pulse", "freq"), "delta_max": ("pulse", "freq"),
    "delta": ("pulse", "freq"), "theta": ("pulse", "angle"), "phi": ("pulse", "angle"),
    "gate": ("pulse", "str"), "amplitude_axis": ("pulse", "str"),
    "omega_range": ("sweep", "freqrange"), "delta_max_range": ("sweep", "freqrange"),
    "delta_range": ("sweep", "freqrange"), "grid": ("sweep", "int"),
    "lengths": ("rb", "ints"), "trials": ("rb", "int"), "amplitude_error": ("rb", "float"),
    "readout_noise": ("qpt", "bool"),
    "sample_rate": ("waveform", "freq_hz"), "if_frequency": ("waveform", "freq"),
    "steps": ("run", "int"), "seed": ("run", "int"), "threads": ("run", "int"), "out": ("run", "str"),
    "command": ("run", "str"), "family": ("run", "str"),
}


def _read_ini(path) -> dict:
    cp = configparser.ConfigParser()
    cp.optionxform = str
    if not cp.read(path):
        raise ConfigError([f"cannot read config file {path}"])
    raw = {}
    for section in cp.sections():
        for key, value in cp.items(section):
            raw[key] = (section, value)
    return raw


def _flag_values(args) -> dict:
    """Flag overrides as raw strings with units attached."""
    raw = {}
    if args.T_ns is not None:
        raw["T"] = f"{args.T_ns} ns"
    if args.t1_us is not None:
        raw["t1"] = f"{args.t1_us} us"
    if args.t2_us is not None:
        raw["t2"] = f"{args.t2_us} us"
    if args.ec_mhz is not None:
        raw["ec"] = f"{args.ec_mhz} MHz"
    if args.sample_rate_gsps is not None:
        raw["sample_rate"] = f"{args.sample_rate_gsps} GHz"
    if args.if_mhz is not None:
        raw["if_frequency"] = f"{args.if_mhz} MHz"
    for name in ("omega", "delta_max", "delta", "theta", "phi", "envelope", "gate", "omega_range",
                 "delta_max_range", "delta_range", "grid", "steps", "seed", "threads", "out", "lengths",
                 "trials", "amplitude_error", "amplitude_axis", "family", "lambda_"):
        v = getattr(args, name, None)
        if v is not None:
            raw[name.rstrip("_")] = str(v)
    if args.readout_noise:
        raw["readout_noise"] = "true"
    return {k: ("flags", v) for k, v in raw.items()}


def build_config(command: str, raw: dict) -> RunConfig:
    """Validate raw key/value strings; every problem is collected before raising."""
    problems = []
    unknown = [k for k in raw if k not in _KEYS]
    problems += [f"unknown setting {k!r} in [{raw[k][0]}]" for k in unknown]
    vals = {}
    # duration first: frequency conversions depend on it
    duration_s = 200e-9
    if "T" in raw:
        try:
            duration_s = parse_time(raw["T"][1])
            if duration_s <= 0:
                raise ValueError("T must be positive")
        except ValueError as exc:
            problems.append(f"T: {exc}")
    for key, (section, text) in raw.items():
        if key in unknown or key in ("T", "command"):
            continue
        kind = _KEYS[key][1]
        try:
            if kind == "time":
                vals[key] = parse_time(text) / duration_s
            elif kind == "freq":
                vals[key] = parse_frequency(text, duration_s)
            elif kind == "freq_hz":
                vals[key] = parse_frequency(text, duration_s) / (2 * math.pi)  # samples per T
            elif kind == "angle":
                vals[key] = parse_angle(text)
            elif kind == "freqrange":
                vals[key] = parse_range(text, lambda s: parse_frequency(s, duration_s))
            elif kind == "int":
                vals[key] = int(text)
            elif kind == "ints":
                vals[key] = tuple(int(x) for x in str(text).split(","))
            elif kind == "float":
                vals[key] = float(text)
            elif kind == "bool":
                vals[key] = str(text).strip().lower() in ("1", "true", "yes", "on")
            else:
                vals[key] = str(text).strip()
        except ValueError as exc:
            problems.append(f"{key}: {exc}")
    rename = {"ec": "anharmonicity", "lambda": "dipole_ratio"}
    kwargs = {rename.get(k, k): v for k, v in vals.items()}
    cfg = RunConfig(command=command, duration_s=duration_s, **kwargs)
    problems += _semantic_problems(cfg)
    if problems:
        raise ConfigError(problems)
    return cfg


def _semantic_problems(cfg: RunConfig):
    out = []
    if cfg.command not in COMMANDS:
        out.append(f"unknown command {cfg.command!r}")
    if cfg.envelope not in ("rectangular", "super_gaussian", "gaussian"):
        out.append(f"envelope must be rectangular, super_gaussian or gaussian, got {cfg.envelope!r}")
    if cfg.gate not in ("robust", "rabi", "chirp"):
        out.append(f"gate must be robust, rabi or chirp, got {cfg.gate!r}")
    if cfg.amplitude_axis not in ("mean", "peak"):
        out.append("amplitude_axis must be mean or peak")
    if cfg.omega < 0:
        out.append("omega must be >= 0")
    if cfg.grid < 2:
        out.append("grid must be >= 2")
    if cfg.steps < 64:
        out.append("steps must be >= 64")
    if cfg.threads is not None and cfg.threads < 1:
        out.append("threads must be >= 1")
    if (cfg.t1 is None) != (cfg.t2 is None):
        out.append("t1 and t2 must be given together")
    if cfg.t1 is not None and cfg.t2 is not None:
        if cfg.t1 <= 0 or cfg.t2 <= 0:
            out.append("t1 and t2 must be positive")
        elif cfg.t2 > 2 * cfg.t1:
            out.append("t2 must not exceed 2 t1")
    if cfg.command == "rb":
        if cfg.t1 is None:
            out.append("rb needs t1 and t2")
        if cfg.trials < 20:
            out.append("trials must be >= 20")
        if list(cfg.lengths) != sorted(set(cfg.lengths)) or min(cfg.lengths) < 0:
            out.append("lengths must be non-negative and strictly ascending")
        if cfg.gate == "chirp":
            out.append("rb gate must be robust or rabi")
    if cfg.command == "export-waveform" and cfg.sample_rate <= 0:
        out.append("sample rate must be positive")
    return out


# ---------------------------------------------------------------------------
# commands
# ---------------------------------------------------------------------------

O2PI = 2 * math.pi


def _model(cfg):
    from .model import ThreeLevelModel, TwoLevelModel

    if cfg.anharmonicity is None:
        return TwoLevelModel()
    return ThreeLevelModel(cfg.anharmonicity, cfg.dipole_ratio)


def _chirp(cfg, omega=None, delta_max=None, offset=None):
    from .analysis import chirp_pulse

    return chirp_pulse(cfg.envelope, cfg.omega if omega is None else omega,
                       cfg.delta_max if delta_max is None else delta_max, 1.0,
                       cfg.delta if offset is None else offset, cfg.amplitude_axis)


def _out(cfg, suffix):
    return Path(cfg.out) if cfg.out else Path(f"{cfg.command}{suffix}")


def _write_grid(cfg, grid, scale_axes=True):
    from .io import write_csv

    rows = []
    for r in grid.long_rows():
        naxes = 1 if grid.axis2 is None else 2
        rows.append(tuple(v / O2PI for v in r[:naxes]) + tuple(r[naxes:]))
    header = grid.header()
    header = [h.replace("[rad/T]", "[Omega_2pi]") for h in header]
    return write_csv(_out(cfg, ".csv"), header, rows)


def cmd_sweep_transfer(cfg):
    from .analysis import sweep_transfer_map

    om = np.linspace(*cfg.omega_range, cfg.grid)
    dm = np.linspace(*cfg.delta_max_range, cfg.grid)
    g = sweep_transfer_map(cfg.envelope, om, dm, model=_model(cfg), steps=cfg.steps,
                           amplitude_axis=cfg.amplitude_axis, offset=cfg.delta)
    path = _write_grid(cfg, g)
    frac = float(np.mean(g.values >= 0.99))
    return f"sweep-transfer: plateau fraction (P1 >= 0.99) = {frac:.4f}; wrote {path}"


def cmd_sweep_detuning(cfg):
    from .analysis import contiguous_window, sweep_detuning

    d = np.linspace(*cfg.delta_range, cfg.grid)
    g = sweep_detuning(_chirp(cfg, offset=0.0), d, _model(cfg), cfg.steps)
    path = _write_grid(cfg, g)
    w = contiguous_window(d, g.values > 0.999, 0.0)
    ws = "none" if w is None else f"[{w[0] / O2PI:.4f}, {w[1] / O2PI:.4f}] Omega_2pi"
    msg = f"sweep-detuning: P1 > 0.999 window = {ws}"
    if "P2" in g.extra:
        msg += f"; max P2 = {np.max(g.extra['P2']):.4g} at {d[np.argmax(g.extra['P2'])] / O2PI:.3f} Omega_2pi"
    return msg + f"; wrote {path}"


def cmd_trajectory(cfg):
    from .io import write_csv
    from .propagator import bloch_trajectory, propagate_unitary

    res = propagate_unitary(_chirp(cfg), steps=cfg.steps, trajectory=True)
    drive = bloch_trajectory(res, "drive_rotating")
    qubit = bloch_trajectory(res, "qubit_rotating")
    rows = np.column_stack([drive, qubit[:, 1:]])
    path = write_csv(_out(cfg, ".csv"), ["t [T]", "x_drive", "y_drive", "z_drive", "x_qubit", "y_qubit",
                                          "z_qubit"], [tuple(map(float, r)) for r in rows])
    return f"trajectory: final P1 = {(1 + drive[-1, 3]) / 2:.6f}; wrote {path}"


def cmd_optimize_rotation(cfg):
    from .io import write_json
    from .optimize import OptimizerConfig, TargetRotation, optimize_rotation, robust_objective

    ocfg = OptimizerConfig(steps=cfg.steps, seed=cfg.seed)
    target = TargetRotation(cfg.theta, cfg.phi)
    sol = optimize_rotation(target, ocfg)
    objective = robust_objective(sol.params, target, sol.window, ocfg.n_samples, 1.0, ocfg.steps) \
        if sol.amplitude > 0 else sol.objective
    doc = {"target": {"theta": target.angle, "phi": target.axis_angle}, "optimizer": asdict(ocfg),
           "solution": sol.to_dict(), "objective_reevaluated": objective,
           "units": "amplitude and coefficients in rad/T; divide by 2 pi for Omega_2pi"}
    path = write_json(_out(cfg, ".json"), doc)
    return (f"optimize-rotation: objective = {sol.objective:.6g} (converged={sol.converged}), "
            f"Omega_0 = {sol.amplitude / O2PI:.4f} Omega_2pi; wrote {path}")


def _gate_pulse(cfg):
    from .analysis import GateFactory

    if cfg.gate == "chirp":
        return _chirp(cfg)
    family = None
    if cfg.family:
        from .optimize import load_family

        family = load_family(cfg.family)
    return GateFactory(cfg.gate, 1.0, family)(cfg.theta, cfg.phi)


def cmd_qpt(cfg):
    from .io import write_json
    from .optimize import TargetRotation
    from .propagator import NoiseModel
    from .tomo import chi_from_unitary, process_fidelity, simulate_qpt

    noise = NoiseModel(cfg.t1, cfg.t2) if cfg.t1 is not None else None
    rng = np.random.default_rng(cfg.seed)
    chi = simulate_qpt(_gate_pulse(cfg), noise, cfg.readout_noise, rng, cfg.steps)
    ideal = chi_from_unitary(TargetRotation(cfg.theta, cfg.phi).unitary)
    f = process_fidelity(ideal, chi)
    doc = {"gate": cfg.gate, "theta": cfg.theta, "phi": cfg.phi, "chi": chi.chi, "diagonal": chi.diagonal,
           "basis": ["I", "X", "Y", "Z"], "fidelity_vs_target": f}
    path = write_json(_out(cfg, ".json"), doc)
    d = chi.diagonal
    return (f"qpt: chi diag (I, X, Y, Z) = ({d[0]:.4f}, {d[1]:.4f}, {d[2]:.4f}, {d[3]:.4f}), "
            f"fidelity vs target = {f:.5f}; wrote {path}")


def cmd_rb(cfg):
    from .analysis import run_randomized_benchmarking
    from .io import write_csv, write_json
    from .optimize import load_family
    from .propagator import NoiseModel

    family = load_family(cfg.family) if cfg.family else None
    r = run_randomized_benchmarking(cfg.gate, cfg.lengths, cfg.trials, NoiseModel(cfg.t1, cfg.t2), cfg.seed,
                                    1.0, cfg.amplitude_error, family)
    path = write_csv(_out(cfg, ".csv"), ["N", "mean_P0", "std_P0"],
                     [(int(n), float(m), float(s)) for n, m, s in zip(r.lengths, r.mean_population,
                                                                     r.std_population)])
    write_json(path.with_suffix(".json"), {"gate": cfg.gate, "amplitude": r.amplitude, "rate": r.rate,
                                           "offset": r.offset, "loss": r.loss, "loss_stderr": r.loss_stderr,
                                           "fit_ok": r.fit_ok, "diagnostic": r.diagnostic})
    if not r.fit_ok:
        return f"rb: fit failed ({r.diagnostic}); raw data in {path}"
    return f"rb: per-gate loss = {r.loss:.5f} +- {r.loss_stderr:.5f}; wrote {path}"


def cmd_eta(cfg):
    from .analysis import adiabaticity_eta, eta_map
    from .io import write_csv

    if cfg.extras.get("map"):
        g = eta_map(cfg.envelope, np.linspace(*cfg.omega_range, cfg.grid),
                    np.linspace(*cfg.delta_max_range, cfg.grid), 1.0, cfg.steps, cfg.amplitude_axis)
        path = _write_grid(cfg, g)
        return f"eta: max over grid = {np.nanmax(g.values):.5g}; wrote {path}"
    s = adiabaticity_eta(_chirp(cfg), cfg.steps)
    path = write_csv(_out(cfg, ".csv"), ["t [T]", "eta"], [(float(t), float(e)) for t, e in zip(s.times, s.eta)])
    return f"eta: max eta = {s.max_eta:.5g}; wrote {path}"


def cmd_adiabatic_trace(cfg):
    from .analysis import adiabatic_trace
    from .io import write_csv

    tr = adiabatic_trace(_chirp(cfg), steps=cfg.steps)
    cols = (tr.times, tr.p_minus, tr.p_plus, tr.relative_phase, tr.p1, tr.mixing_angle, tr.dynamical_phase)
    path = write_csv(_out(cfg, ".csv"), ["t [T]", "p_minus", "p_plus", "relative_phase [rad]", "P1",
                                          "mixing_angle [rad]", "dynamical_phase [rad]"],
                     [tuple(float(c[i]) for c in cols) for i in range(tr.times.size)])
    return (f"adiabatic-trace: final relative phase = {tr.final_phase / math.pi:.4f} pi, "
            f"final P1 = {tr.p1[-1]:.6f}; wrote {path}")


def cmd_export_waveform(cfg):
    from .io import write_csv, write_json
    from .pulses import synthesize_iq

    p = _chirp(cfg)
    wf = synthesize_iq(p, lo_frequency=-cfg.if_frequency, sample_rate=cfg.sample_rate)
    scale = 1.0 / (O2PI * cfg.duration_s * 1e6)  # rad/T -> MHz
    path = write_csv(_out(cfg, ".csv"), ["time_s", "i", "q"],
                     [(float(t * cfg.duration_s), float(i * scale), float(q * scale))
                      for t, i, q in zip(wf.times, wf.i_samples, wf.q_samples)])
    write_json(path.with_suffix(".json"), {
        "sample_rate_hz": cfg.sample_rate / cfg.duration_s,
        "lo_offset_hz": -cfg.if_frequency / (O2PI * cfg.duration_s),
        "if_frequency_hz": cfg.if_frequency / (O2PI * cfg.duration_s),
        "amplitude_unit": "MHz (Omega / 2 pi)",
        "rows": len(wf),
        "pulse": {"duration_s": cfg.duration_s, "envelope": cfg.envelope, "omega_mhz": cfg.omega * scale,
                  "delta_max_mhz": cfg.delta_max * scale, "delta_mhz": cfg.delta * scale,
                  "amplitude_axis": cfg.amplitude_axis},
    })
    return f"export-waveform: {len(wf)} samples; wrote {path}"


DISPATCH = {
    "sweep-transfer": cmd_sweep_transfer, "sweep-detuning": cmd_sweep_detuning, "trajectory": cmd_trajectory,
    "optimize-rotation": cmd_optimize_rotation, "qpt": cmd_qpt, "rb": cmd_rb, "eta": cmd_eta,
    "adiabatic-trace": cmd_adiabatic_trace, "export-waveform": cmd_export_waveform,
}


def run(cfg: RunConfig) -> str:
    if cfg.threads:
        import numba

        numba.set_num_threads(min(cfg.threads, numba.config.NUMBA_NUM_THREADS))
    return DISPATCH[cfg.command](cfg)


def build_parser():
    ap = argparse.ArgumentParser(prog="robustpulse", description=__doc__.splitlines()[0])
    ap.add_argument("--version", action="version", version=__version__)
    sub = ap.add_subparsers(dest="command", required=True)
    for name in COMMANDS:
        p = sub.add_parser(name)
        p.add_argument("--config", type=Path)
        p.add_argument("--out")
        p.add_argument("--seed", type=int)
        p.add_argument("--threads", type=int)
        p.add_argument("--steps", type=int)
        p.add_argument("--T-ns", dest="T_ns", type=float)
        p.add_argument("--omega", help="e.g. '2.5 O2pi' or '12.5 MHz'")
        p.add_argument("--delta-max", dest="delta_max")
        p.add_argument("--delta", help="static drive offset, drive minus qubit")
        p.add_argument("--theta")
        p.add_argument("--phi")
        p.add_argument("--t1-us", dest="t1_us", type=float)
        p.add_argument("--t2-us", dest="t2_us", type=float)
        p.add_argument("--ec-mhz", dest="ec_mhz", type=float)
        p.add_argument("--lambda", dest="lambda_", type=float, help="Omega_12 / Omega_01")
        p.add_argument("--grid", type=int)
        p.add_argument("--envelope")
        p.add_argument("--amplitude-axis", dest="amplitude_axis", help="mean or peak")
        p.add_argument("--omega-range", dest="omega_range", help="e.g. '0:5 O2pi'")
        p.add_argument("--delta-max-range", dest="delta_max_range")
        p.add_argument("--delta-range", dest="delta_range")
        p.add_argument("--gate", help="robust, rabi or chirp")
        p.add_argument("--family", help="rotation family JSON (default: packaged)")
        p.add_argument("--lengths", help="comma-separated sequence lengths")
        p.add_argument("--trials", type=int)
        p.add_argument("--amplitude-error", dest="amplitude_error", type=float)
        p.add_argument("--readout-noise", dest="readout_noise", action="store_true")
        p.add_argument("--sample-rate-gsps", dest="sample_rate_gsps", type=float)
        p.add_argument("--if-mhz", dest="if_mhz", type=float, help="qubit minus LO frequency")
        if name == "eta":
            p.add_argument("--map", action="store_true", help="max eta over the omega/delta_max grid")
    return ap


def main(argv=None) -> int:
    args = build_parser().parse_args(argv)
    try:
        raw = _read_ini(args.config) if args.config else {}
        raw.pop("command", None)
        raw.update(_flag_values(args))
        cfg = build_config(args.command, raw)
        if args.command == "eta":
            cfg.extras["map"] = args.map
    except ConfigError as exc:
        for p in exc.problems:
            print(f"config error: {p}", file=sys.stderr)
        return EXIT_CONFIG
    try:
        print(run(cfg))
    except (InvalidInputError, AliasingError) as exc:
        print(f"config error: {exc}", file=sys.stderr)
        return EXIT_CONFIG
    except (RobustPulseError, FloatingPointError, np.linalg.LinAlgError) as exc:
        print(f"numerical failure: {exc}", file=sys.stderr)
        return EXIT_NUMERICAL
    return EXIT_OK


if __name__ == "__main__":
    sys.exit(main())
