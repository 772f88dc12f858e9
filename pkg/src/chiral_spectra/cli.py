"""Batch command-line front end.

One flat JSON config per scenario; numeric output as CSV or JSON in units
of the population decay rate gamma.  Exit codes: 0 success, 2 bad
configuration or usage, 3 numerical failure inside an engine.

Config document keys (all optional, all numbers in gamma units)::

    molecule  six relaxation rates (Gamma31, Gamma21, Gamma32,
              gamma12, gamma13, gamma23); default: closed three-level
              system with unit population decay on every transition
    drive     omega21_abs, omega31_abs, omega32_abs, delta, theta
    medium    p_plus (p_minus derived), zeta, dipole_ratio
    sweep     delta_min, delta_max, points
    engine    "linear" | "full"
    doppler   ku21, ku32, nodes
    table     zeta, omega32, dp (lists overriding the default grid)
"""

from __future__ import annotations

import argparse
import json
import sys

import numpy as np

from .bloch import steady_state
from .doppler import DopplerConfig, averaged_spectrum
from .errors import NumericalError
from .model import (DriveConfig, Handedness, MediumConfig, MoleculeParams,
                    SpectrumResult)
from .spectra import (DEFAULT_STEP, extract_peaks, forward_curve, invert_ee,
                      sweep, table_one)

__all__ = ["run", "main"]

_RATE_KEYS = ("Gamma31", "Gamma21", "Gamma32", "gamma12", "gamma13", "gamma23")


def _fmt(x: float) -> str:
    return f"{float(x):.12g}"


def _load_config(path):
    if path is None:
        return {}
    with open(path) as fh:
        cfg = json.load(fh)
    if not isinstance(cfg, dict):
        raise ValueError("config document must be a JSON object")
    return cfg


def _molecule(cfg) -> MoleculeParams:
    section = cfg.get("molecule")
    if section is None:
        return MoleculeParams.default_closed()
    return MoleculeParams(**{k: float(section[k]) for k in _RATE_KEYS})


def _drive(cfg, delta_default: float = 0.0) -> DriveConfig:
    d = cfg.get("drive", {})
    return DriveConfig(omega21_abs=float(d.get("omega21_abs", 0.1)),
                       omega31_abs=float(d.get("omega31_abs", 0.1)),
                       omega32_abs=float(d.get("omega32_abs", 10.0)),
                       delta=float(d.get("delta", delta_default)),
                       theta=float(d.get("theta", 0.0)))


def _medium(cfg, zeta_override=None) -> MediumConfig:
    m = cfg.get("medium", {})
    p_plus = float(m.get("p_plus", 0.5))
    p_minus = float(m.get("p_minus", 1.0 - p_plus))
    zeta = float(m.get("zeta", 0.2)) if zeta_override is None else float(zeta_override)
    return MediumConfig(p_plus=p_plus, p_minus=p_minus, zeta=zeta,
                        dipole_ratio=float(m.get("dipole_ratio", 1.0)))


def _engine(cfg, args) -> str:
    if getattr(args, "engine", None):
        return args.engine
    return cfg.get("engine", "full")


def _grid(cfg) -> np.ndarray:
    s = cfg.get("sweep", {})
    lo = float(s.get("delta_min", -8.0))
    hi = float(s.get("delta_max", 8.0))
    n = int(s.get("points", 321))
    if n < 2 or not hi > lo:
        raise ValueError("sweep must satisfy delta_max > delta_min and points >= 2")
    return np.linspace(lo, hi, n)


def _emit(text: str, args) -> None:
    if args.out:
        with open(args.out, "w", newline="") as fh:
            fh.write(text)
        if not args.quiet:
            print(f"wrote {args.out}", file=sys.stderr)
    else:
        sys.stdout.write(text)


def _spectrum_csv(result: SpectrumResult) -> str:
    lines = ["delta,T,I,I_norm"]
    for row in zip(result.delta, result.transmission, result.absorption,
                   result.absorption_norm):
        lines.append(",".join(_fmt(v) for v in row))
    return "\n".join(lines) + "\n"


def _read_spectrum_csv(path):
    with open(path, newline="") as fh:
        header = fh.readline().strip()
        cols = header.split(",")
        if "delta" not in cols or "I" not in cols:
            raise ValueError(f"{path}: expected a header with delta and I columns")
        i_delta, i_abs = cols.index("delta"), cols.index("I")
        delta, absorb = [], []
        for line in fh:
            line = line.strip()
            if not line:
                continue
            parts = line.split(",")
            delta.append(float(parts[i_delta]))
            absorb.append(float(parts[i_abs]))
    return np.asarray(delta), np.asarray(absorb)


def _cmd_steady(args) -> int:
    cfg = _load_config(args.config)
    mol = _molecule(cfg)
    drive = _drive(cfg)
    hand = Handedness(args.handedness)
    dm = steady_state(mol, drive, hand)
    m = dm.matrix
    payload = {
        "handedness": hand.value,
        "delta": drive.delta,
        "populations": [float(p) for p in dm.populations],
        "matrix": {f"sigma{i + 1}{j + 1}": [float(m[i, j].real), float(m[i, j].imag)]
                   for i in range(3) for j in range(3)},
    }
    _emit(json.dumps(payload, indent=2) + "\n", args)
    return 0


def _cmd_spectrum(args) -> int:
    cfg = _load_config(args.config)
    result = sweep(_medium(cfg, args.zeta), _molecule(cfg), _drive(cfg),
                   _grid(cfg), engine=_engine(cfg, args), step=DEFAULT_STEP)
    _emit(_spectrum_csv(result), args)
    return 0


def _peaks_payload(h_plus, h_minus, ht_plus, ht_minus, dp_prime):
    return {"h_plus": h_plus, "h_minus": h_minus, "h_tilde_plus": ht_plus,
            "h_tilde_minus": ht_minus, "dp_prime": dp_prime}


def _cmd_peaks(args) -> int:
    cfg = _load_config(args.config)
    drive = _drive(cfg)
    if args.spectrum_csv:
        points = _read_spectrum_csv(args.spectrum_csv)
        values = extract_peaks(points, drive.omega32_abs)
    else:
        result = sweep(_medium(cfg, args.zeta), _molecule(cfg), drive,
                       _grid(cfg), engine=_engine(cfg, args), step=DEFAULT_STEP)
        values = extract_peaks(result, drive.omega32_abs)
    _emit(json.dumps(_peaks_payload(*values), indent=2) + "\n", args)
    return 0


def _cmd_invert(args) -> int:
    cfg = _load_config(args.config)
    curve = forward_curve(_medium(cfg, args.zeta), _molecule(cfg), _drive(cfg),
                          engine=_engine(cfg, args), step=DEFAULT_STEP)
    dp = invert_ee(args.dp_prime, curve)
    payload = {"dp_prime": args.dp_prime, "dp": dp}
    _emit(json.dumps(payload, indent=2) + "\n", args)
    return 0


def _cmd_table(args) -> int:
    cfg = _load_config(args.config)
    section = cfg.get("table", {})
    zetas = [float(z) for z in section.get("zeta", (0.05, 0.1, 0.2))]
    if args.zeta is not None:
        zetas = [float(args.zeta)]
    omegas = [float(o) for o in section.get("omega32", (10.0, 100.0))]
    dps = [float(d) for d in section.get("dp", np.linspace(-1.0, 1.0, 9))]
    medium = cfg.get("medium", {})
    drive = _drive(cfg)
    rows = table_one(zetas, omegas, dps, mol=_molecule(cfg),
                     probe_abs=drive.omega21_abs, theta=drive.theta,
                     dipole_ratio=float(medium.get("dipole_ratio", 0.2)),
                     engine=_engine(cfg, args), step=DEFAULT_STEP)
    lines = ["zeta,omega32,dp,dp_prime"]
    for r in rows:
        lines.append(",".join(_fmt(v) for v in
                              (r.zeta, r.omega32_abs, r.dp, r.dp_prime)))
    _emit("\n".join(lines) + "\n", args)
    return 0


def _cmd_doppler_spectrum(args) -> int:
    cfg = _load_config(args.config)
    section = cfg.get("doppler")
    if section is None:
        raise ValueError("config must contain a 'doppler' section")
    dcfg = DopplerConfig(ku21=float(section.get("ku21", 0.0)),
                         ku32=float(section.get("ku32", 0.0)),
                         node_count=int(section.get("nodes", 1536)))
    result = averaged_spectrum(_medium(cfg, args.zeta), _molecule(cfg),
                               _drive(cfg), _grid(cfg), dcfg)
    _emit(_spectrum_csv(result), args)
    return 0


def _add_common(sub, engine=True, zeta=True):
    sub.add_argument("--config", metavar="PATH", help="JSON scenario file")
    sub.add_argument("--out", metavar="PATH", help="output file (default stdout)")
    sub.add_argument("--quiet", action="store_true",
                     help="suppress informational messages")
    if engine:
        sub.add_argument("--engine", choices=("linear", "full"),
                         help="override the config engine selection")
    if zeta:
        sub.add_argument("--zeta", type=float, help="override the optical depth")


def build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(
        prog="chiral-spectra",
        description="Chirality-resolved absorption spectra of cyclic "
                    "three-level molecules: steady states, detuning sweeps, "
                    "characteristic peaks and enantiomeric-excess recovery.")
    subs = parser.add_subparsers(dest="command", required=True)

    p = subs.add_parser("steady", help="steady-state density matrix of one enantiomer")
    _add_common(p, engine=False, zeta=False)
    p.add_argument("--handedness", choices=("left", "right"), default="left")
    p.set_defaults(func=_cmd_steady)

    p = subs.add_parser("spectrum", help="transmission/absorption sweep as CSV")
    _add_common(p)
    p.set_defaults(func=_cmd_spectrum)

    p = subs.add_parser("peaks", help="characteristic peak heights as JSON")
    _add_common(p)
    p.add_argument("--spectrum-csv", metavar="PATH",
                   help="read a previously computed spectrum instead of sweeping")
    p.set_defaults(func=_cmd_peaks)

    p = subs.add_parser("invert", help="recover the excess from a measured dp'")
    _add_common(p)
    p.add_argument("--dp-prime", type=float, required=True,
                   help="measured normalized peak-height difference")
    p.set_defaults(func=_cmd_invert)

    p = subs.add_parser("table", help="recovered-vs-true excess grid as CSV")
    _add_common(p)
    p.set_defaults(func=_cmd_table)

    p = subs.add_parser("doppler-spectrum",
                        help="velocity-averaged sweep as CSV (linearized transport)")
    _add_common(p, engine=False)
    p.set_defaults(func=_cmd_doppler_spectrum)

    return parser


def run(argv=None) -> int:
    """Entry point returning the process exit code."""
    parser = build_parser()
    try:
        args = parser.parse_args(argv)
    except SystemExit as exc:
        return int(exc.code or 0)
    try:
        return args.func(args)
    except NumericalError as exc:
        print(f"error: {exc}", file=sys.stderr)
        return 3
    except (ValueError, KeyError, TypeError, OSError,
            json.JSONDecodeError) as exc:
        print(f"error: {exc}", file=sys.stderr)
        return 2


def main() -> None:
    sys.exit(run())


if __name__ == "__main__":
    main()
