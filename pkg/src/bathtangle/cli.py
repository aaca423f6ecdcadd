"""Command-line entry point: amplitudes, scans, fits, ED checks and special functions."""

from __future__ import annotations

import argparse
import csv
import io
import json
import math
import sys
from dataclasses import dataclass

import numpy as np

from . import analysis, continuum, edoracle, perturb
from .entangle import two_tangle
from .model import BathConfig, random_plane_wave_bath, validate
from .numerics import bessel_j0, bessel_j1, cos_integral, sin_integral

SCHEMA_VERSION = 1

METHODS = ["closed", "quad", "smoothed", "residue", "pv"]
CONVENTIONS = {"full-line": continuum.Convention.FULL_LINE, "abs-k": continuum.Convention.ABS_K}
SPECFUNS = {"j0": bessel_j0, "j1": bessel_j1, "si": sin_integral, "ci": cos_integral}


class UsageError(Exception):
    pass


@dataclass(frozen=True)
class RunConfig:
    bath: BathConfig
    method: str | None
    convention: continuum.Convention
    r_min: float | None = None
    r_max: float | None = None
    points: int = 123
    log_spacing: bool = False
    seed: int = 42
    output: str | None = None

    def radii(self) -> np.ndarray:
        if self.r_min is None or self.r_max is None:
            raise UsageError("scan needs --rmin and --rmax")
        if not 0 < self.r_min < self.r_max:
            raise UsageError("need 0 < rmin < rmax")
        if self.points < 2:
            raise UsageError("--points must be >= 2")
        if self.log_spacing:
            return np.logspace(math.log10(self.r_min), math.log10(self.r_max), self.points)
        return np.linspace(self.r_min, self.r_max, self.points)


def fmt(x: float) -> str:
    """17 significant digits: round-trips every double exactly."""
    return format(float(x), ".17g")


def _float_list(text: str) -> list[float]:
    try:
        return [float(s) for s in text.split(",") if s.strip()]
    except ValueError:
        raise argparse.ArgumentTypeError(f"not a comma-separated list of numbers: {text!r}")


def _common(p):
    p.add_argument("--config", help="JSON file with defaults (keys are flag names)")
    p.add_argument("--output", help="write to this file instead of stdout")


def _bath_flags(p):
    p.add_argument("--dim", type=int, choices=[1, 2, 3], default=3)
    p.add_argument("--nu", type=float, default=0.5)
    p.add_argument("--k0", type=float, default=1.0)
    p.add_argument("--kc", type=float, default=1000.0, help="cutoff; 'inf' for none")
    p.add_argument("--g", type=float, default=1.0)
    p.add_argument("--method", choices=METHODS, default=None,
                   help="default: closed (d=3, nu in {0, 1/2}; smoothed if kc=inf), residue (d=1), quad otherwise")
    p.add_argument("--convention", choices=sorted(CONVENTIONS), default="full-line")


def build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(prog="bathtangle",
                                     description="Bath-mediated entanglement of two spins.")
    sub = parser.add_subparsers(dest="command", required=True)

    p = sub.add_parser("amplitude", help="continuum amplitude at one separation")
    _bath_flags(p)
    p.add_argument("--r", type=float, required=True)
    _common(p)

    p = sub.add_parser("tangle", help="continuum tangle at one separation")
    _bath_flags(p)
    p.add_argument("--r", type=float, required=True)
    _common(p)

    p = sub.add_parser("scan", help="amplitude and tangle over a range of separations")
    _bath_flags(p)
    p.add_argument("--rmin", type=float, required=True)
    p.add_argument("--rmax", type=float, required=True)
    p.add_argument("--points", type=int, default=123)
    p.add_argument("--log", action="store_true", help="log-spaced separations")
    _common(p)

    p = sub.add_parser("fit", help="power-law fit of a scan CSV")
    p.add_argument("input", help="CSV with an r column and y, tangle or amp_re/amp_im")
    p.add_argument("--column", choices=["auto", "y", "abs_amp", "tangle"], default="auto")
    p.add_argument("--claimed", type=float, default=None)
    p.add_argument("--tol", type=float, default=0.1)
    p.add_argument("--windows", type=int, default=1, help="sliding windows of one decade")
    p.add_argument("--envelope", action="store_true", help="fit local maxima of |y|")
    _common(p)

    p = sub.add_parser("ed-check", help="exact diagonalisation versus second-order theory")
    p.add_argument("--modes", type=int, default=1)
    p.add_argument("--nmax", type=int, default=2)
    p.add_argument("--glist", type=_float_list, default=[1e-2, 5e-3, 2.5e-3])
    p.add_argument("--k0", type=float, default=1.0)
    p.add_argument("--nu", type=float, default=0.0)
    p.add_argument("--r", type=float, default=0.5)
    p.add_argument("--seed", type=int, default=42)
    _common(p)

    p = sub.add_parser("specfun", help="evaluate a special function")
    p.add_argument("name", choices=sorted(SPECFUNS))
    p.add_argument("x", type=float)
    _common(p)
    return parser


def _apply_config(parser, argv):
    """Parse with the JSON config installed as defaults of the chosen subcommand."""
    argv = list(sys.argv[1:] if argv is None else argv)
    pre = argparse.ArgumentParser(add_help=False)
    pre.add_argument("--config")
    known, _ = pre.parse_known_args(argv)
    command = argv[0] if argv and argv[0] in COMMANDS else None
    if not known.config or command is None:
        return parser.parse_args(argv)
    try:
        with open(known.config) as fh:
            values = json.load(fh)
    except (OSError, json.JSONDecodeError) as exc:
        parser.error(f"cannot read config {known.config}: {exc}")
    if not isinstance(values, dict):
        parser.error("config must be a JSON object")
    sub = next(a for a in parser._subparsers._group_actions if a.dest == "command")
    subparser = sub.choices[command]
    known = {a.dest for a in subparser._actions}
    unknown = sorted(set(values) - known - {"config"})
    if unknown:
        parser.error(f"unknown config keys: {', '.join(unknown)}")
    if "glist" in values and isinstance(values["glist"], str):
        values["glist"] = _float_list(values["glist"])
    subparser.set_defaults(**values)
    # required flags supplied by the config are no longer required on the line
    for action in subparser._actions:
        if action.dest in values:
            action.required = False
    return parser.parse_args(argv)


def _run_config(args) -> RunConfig:
    bath = BathConfig(args.dim, args.nu, args.k0, args.kc, args.g)
    validate(bath)
    return RunConfig(bath, args.method, CONVENTIONS[args.convention],
                     getattr(args, "rmin", None), getattr(args, "rmax", None),
                     getattr(args, "points", 123), getattr(args, "log", False),
                     output=args.output)


def _amplitude(rc: RunConfig, r: float) -> continuum.Amplitude:
    return continuum.continuum_amplitude(rc.bath, r, rc.method, rc.convention)


def _csv_text(header, rows) -> str:
    buf = io.StringIO()
    w = csv.writer(buf, lineterminator="\n")
    w.writerow(header)
    w.writerows(rows)
    return buf.getvalue()


def cmd_amplitude(args) -> str:
    rc = _run_config(args)
    a = _amplitude(rc, args.r)
    b = rc.bath
    row = [b.dimension, fmt(b.nu), fmt(b.k0), fmt(b.kc), fmt(args.r), a.method.value,
           fmt(a.value.real), fmt(a.value.imag), fmt(a.abs_error_estimate)]
    return _csv_text(["d", "nu", "k0", "kc", "r", "method", "amp_re", "amp_im", "abs_err"], [row])


def cmd_tangle(args) -> str:
    rc = _run_config(args)
    a = _amplitude(rc, args.r)
    b = rc.bath
    tau = continuum.tangle_from_amplitude(a.value, b.k0)
    row = [b.dimension, fmt(b.nu), fmt(b.k0), fmt(b.kc), fmt(b.g), fmt(args.r), a.method.value, fmt(tau)]
    return _csv_text(["d", "nu", "k0", "kc", "g", "r", "method", "tangle"], [row])


def scan_rows(rc: RunConfig) -> list[list[str]]:
    rows = []
    for r in rc.radii():
        a = _amplitude(rc, float(r))
        tau = continuum.tangle_from_amplitude(a.value, rc.bath.k0)
        rows.append([fmt(r), fmt(a.value.real), fmt(a.value.imag), fmt(tau), a.method.value])
    return rows


def cmd_scan(args) -> str:
    rc = _run_config(args)
    return _csv_text(["r", "amp_re", "amp_im", "tangle", "method"], scan_rows(rc))


class DataError(ValueError):
    pass


def read_scan(path: str, column: str = "auto") -> list[tuple[float, float]]:
    """Read (r, y) pairs from a CSV; errors name the offending line."""
    try:
        fh = open(path, newline="")
    except OSError as exc:
        raise DataError(f"cannot read {path}: {exc.strerror}") from exc
    with fh:
        reader = csv.DictReader(fh)
        fields = reader.fieldnames or []
        if "r" not in fields:
            raise DataError(f"{path}:1: missing 'r' column")
        if column == "auto":
            column = "y" if "y" in fields else "abs_amp" if "amp_re" in fields else "tangle"
        needed = ["amp_re", "amp_im"] if column == "abs_amp" else [column]
        for name in needed:
            if name not in fields:
                raise DataError(f"{path}:1: missing '{name}' column")
        points = []
        for row in reader:
            line = reader.line_num
            try:
                r = float(row["r"])
                if column == "abs_amp":
                    y = abs(complex(float(row["amp_re"]), float(row["amp_im"])))
                else:
                    y = float(row[column])
            except (TypeError, ValueError):
                raise DataError(f"{path}:{line}: malformed number") from None
            if not (math.isfinite(r) and math.isfinite(y)):
                raise DataError(f"{path}:{line}: non-finite value")
            points.append((r, y))
    if len(points) < 3:
        raise DataError(f"{path}: fewer than 3 data rows")
    return points


def fit_report(points, claimed=None, tol=0.1, windows=1, use_envelope=False) -> dict:
    if use_envelope:
        points = analysis.envelope(points)
        if len(points) < 3:
            raise ValueError(f"envelope has {len(points)} local maxima; need at least 3 (is the data oscillating?)")
    else:
        points = [(r, abs(y)) for r, y in points]
    fits = analysis.window_sweep(points, windows)
    if claimed is None:
        best, status = fits[0], "n/a"
    else:
        rep = analysis.claim_report(fits, claimed, tol)
        best, status = rep.best, rep.status
    return {
        "schema_version": SCHEMA_VERSION,
        "exponent": best.exponent,
        "intercept": best.intercept,
        "r_squared": best.r_squared,
        "window": list(best.window),
        "n_points": best.n_points,
        "claimed": claimed,
        "tol": tol if claimed is not None else None,
        "status": status,
    }


def cmd_fit(args) -> str:
    points = read_scan(args.input, args.column)
    try:
        report = fit_report(points, args.claimed, args.tol, args.windows, args.envelope)
    except ValueError as exc:
        raise DataError(f"{args.input}: {exc}") from exc
    return json.dumps(report, indent=2) + "\n"


def _rel(a, b):
    return abs(a - b) / abs(b) if b != 0 else None


def ed_check_report(n_modes, n_max, g_list, k0=1.0, nu=0.0, r=0.5, seed=42) -> dict:
    rows = []
    for g in g_list:
        bath = random_plane_wave_bath(n_modes, k0, g, r, nu, seed)
        res = edoracle.solve(edoracle.EDModel(bath, n_max))
        pert_tangle = two_tangle(perturb.reduced_state(perturb.dressed_state(bath)))
        ed_shift = res.energy + k0
        pert_shift = perturb.energy_shift2(bath)
        rows.append({
            "g": g,
            "ed_tangle": res.tangle,
            "pert_tangle": pert_tangle,
            "simple_form_tangle": perturb.discrete_tangle(bath),
            "ed_energy_shift": ed_shift,
            "pert_energy_shift": pert_shift,
            "tangle_rel_error": _rel(pert_tangle, res.tangle),
            "energy_rel_error": _rel(pert_shift, ed_shift),
        })
    for prev, row in zip([None] + rows[:-1], rows):
        for key, out in (("tangle_rel_error", "tangle_ratio"), ("energy_rel_error", "energy_ratio")):
            ok = prev is not None and prev[key] and row[key]
            row[out] = prev[key] / row[key] if ok else None
    return {"schema_version": SCHEMA_VERSION, "modes": n_modes, "nmax": n_max, "k0": k0,
            "nu": nu, "r": r, "seed": seed, "rows": rows}


def cmd_ed_check(args) -> str:
    report = ed_check_report(args.modes, args.nmax, args.glist, args.k0, args.nu, args.r, args.seed)
    return json.dumps(report, indent=2) + "\n"


def cmd_specfun(args) -> str:
    return fmt(SPECFUNS[args.name](args.x)) + "\n"


COMMANDS = {
    "amplitude": cmd_amplitude, "tangle": cmd_tangle, "scan": cmd_scan, "fit": cmd_fit,
    "ed-check": cmd_ed_check, "specfun": cmd_specfun,
}


def main(argv=None) -> int:
    parser = build_parser()
    try:
        args = _apply_config(parser, argv)
    except SystemExit as exc:
        return int(exc.code or 0)
    try:
        text = COMMANDS[args.command](args)
    except UsageError as exc:
        parser.print_usage(sys.stderr)
        print(f"bathtangle: error: {exc}", file=sys.stderr)
        return 2
    except (ValueError, ArithmeticError, RuntimeError, OSError) as exc:
        print(f"bathtangle: error: {exc}", file=sys.stderr)
        return 1
    if args.output:
        try:
            with open(args.output, "w", newline="") as fh:
                fh.write(text)
        except OSError as exc:
            print(f"bathtangle: error: cannot write {args.output}: {exc.strerror}", file=sys.stderr)
            return 1
    else:
        sys.stdout.write(text)
    return 0


if __name__ == "__main__":
    sys.exit(main())
