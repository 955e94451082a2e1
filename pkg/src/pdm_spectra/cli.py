"""Command-line front end.

Subcommands: solve, sweep, figure, thermo, oracle, report.  A run is fully
specified by a JSON config (--config) plus flag overrides; identical inputs
produce byte-identical outputs (CSV: UTF-8, LF, comma-separated, floats at 17
significant digits; JSON verdicts sorted).  PDM_SPECTRA_THREADS caps the
parallel fan-out of multi-figure runs.

Exit codes: 0 success, 2 usage/config errors, 3 solver domain errors (with a
machine-readable JSON object on stderr).
"""

from __future__ import annotations

import argparse
import json
import os
import sys as _sys
import tempfile
from concurrent.futures import ThreadPoolExecutor
from typing import Dict, List, Optional

from . import figures, oracle, report, spectra, thermo
from .model import (
    ExponentialMass,
    FieldConfig,
    InverseSquareMass,
    ParameterError,
    PhysicalConstants,
    PotentialParams,
    QuantumNumbers,
    SystemParams,
)

_DOMAIN_ERRORS = (
    ParameterError,
    spectra.BranchError,
    spectra.ScanError,
    spectra.DegenerateParameterError,
    thermo.ApproximationDomainError,
    thermo.ThetaRangeError,
    oracle.IntegrationError,
    oracle.EvanescentOriginError,
)

_SYSTEM_KEYS = ("case", "a", "V1", "V2", "V3", "lambda", "B", "Phi_AB", "n", "m")
_DEFAULTS = {
    "case": "exponential",
    "a": 0.5, "V1": 0.5, "V2": 0.5, "V3": 0.5, "lambda": 0.1,
    "B": 1.0, "Phi_AB": 1.0, "n": 1, "m": 0,
    "e_lo": spectra.DEFAULT_E_LO, "e_hi": spectra.DEFAULT_E_HI,
    "n_grid": spectra.DEFAULT_N_GRID, "mode": spectra.MODE_LITERAL,
}
_INVSQ_DEFAULTS = {"a": 1.0, "V1": 0.01, "V2": 0.01, "V3": 0.0, "lambda": 1.0,
                   "B": 2.0, "Phi_AB": 2.0}


def _threads() -> int:
    raw = os.environ.get("PDM_SPECTRA_THREADS", "1")
    try:
        return max(1, int(raw))
    except ValueError:
        return 1


def _load_config(path: Optional[str]) -> Dict:
    if not path:
        return {}
    with open(path, "r", encoding="utf-8") as fh:
        doc = json.load(fh)
    if not isinstance(doc, dict):
        raise ValueError("config must be a JSON object")
    return doc


def _merged(args: argparse.Namespace, base: Optional[Dict] = None) -> Dict:
    """Defaults < per-command base < config file < explicit flags."""
    file_cfg = dict(_load_config(getattr(args, "config", None)))
    case = (getattr(args, "case", None) or file_cfg.get("case")
            or (base or {}).get("case") or _DEFAULTS["case"])
    cfg = dict(_DEFAULTS)
    if case == "inverse-square":
        cfg.update(_INVSQ_DEFAULTS)
    if base:
        cfg.update(base)
    cfg["case"] = case
    cfg["constants"] = file_cfg.pop("constants", {})
    solver = file_cfg.pop("solver", {})
    cfg.update({k: v for k, v in file_cfg.items() if k in _DEFAULTS})
    cfg.update({k: v for k, v in solver.items() if k in ("e_lo", "e_hi", "n_grid", "mode")})
    for key in ("a", "V1", "V2", "V3", "B", "n", "m", "e_lo", "e_hi", "n_grid", "mode"):
        v = getattr(args, key, None)
        if v is not None:
            cfg[key] = v
    if getattr(args, "lam", None) is not None:
        cfg["lambda"] = args.lam
    if getattr(args, "Phi", None) is not None:
        cfg["Phi_AB"] = args.Phi
    return cfg


def _system_from(cfg: Dict) -> SystemParams:
    constants = PhysicalConstants(**cfg.get("constants", {}))
    pot = PotentialParams(V1=float(cfg["V1"]), V2=float(cfg["V2"]),
                          V3=float(cfg["V3"]), lam=float(cfg["lambda"]))
    fields = FieldConfig(B=float(cfg["B"]), Phi_AB=float(cfg["Phi_AB"]))
    q = QuantumNumbers(n=int(cfg["n"]), m=int(cfg["m"]))
    if cfg["case"] == "exponential":
        mass = ExponentialMass(float(cfg["a"]))
    elif cfg["case"] == "inverse-square":
        mass = InverseSquareMass(float(cfg["a"]))
    else:
        raise ParameterError(f"unknown case {cfg['case']!r}")
    return SystemParams(mass=mass, potential=pot, fields=fields, quantum=q, constants=constants)


def _write_atomic(path: str, content: str) -> None:
    if path == "-":
        _sys.stdout.write(content)
        return
    directory = os.path.dirname(os.path.abspath(path)) or "."
    os.makedirs(directory, exist_ok=True)
    fd, tmp = tempfile.mkstemp(dir=directory, prefix=".pdm-spectra-")
    try:
        with os.fdopen(fd, "w", encoding="utf-8", newline="\n") as fh:
            fh.write(content)
        os.replace(tmp, path)
    except BaseException:
        if os.path.exists(tmp):
            os.unlink(tmp)
        raise


def _add_system_flags(p: argparse.ArgumentParser) -> None:
    p.add_argument("--config", help="JSON config file; flags override its fields")
    p.add_argument("--case", choices=("exponential", "inverse-square"))
    p.add_argument("--a", type=float, help="mass-law constant")
    p.add_argument("--V1", type=float)
    p.add_argument("--V2", type=float)
    p.add_argument("--V3", type=float)
    p.add_argument("--lam", type=float, help="potential range lambda")
    p.add_argument("--B", type=float, help="magnetic field")
    p.add_argument("--Phi", type=float, help="Aharonov-Bohm flux")
    p.add_argument("--n", type=int)
    p.add_argument("--m", type=int)
    p.add_argument("--e-lo", dest="e_lo", type=float)
    p.add_argument("--e-hi", dest="e_hi", type=float)
    p.add_argument("--n-grid", dest="n_grid", type=int)
    p.add_argument("--mode", choices=(spectra.MODE_LITERAL, spectra.MODE_DERIVED))
    p.add_argument("--out", default="-", help="output path ('-' = stdout)")


def _cmd_solve(args) -> int:
    cfg = _merged(args)
    system = _system_from(cfg)
    if isinstance(system.mass, InverseSquareMass):
        levels = [spectra.inverse_square_level(system)]
    else:
        scan = spectra.solve_exponential_levels(system, float(cfg["e_lo"]), float(cfg["e_hi"]),
                                                int(cfg["n_grid"]), str(cfg["mode"]))
        levels = list(scan.levels)
        for note in scan.notes:
            print(f"note: {note.kind}: {note.detail}", file=_sys.stderr)
    _write_atomic(args.out, spectra.levels_to_csv(levels, system))
    return 0


def _cmd_sweep(args) -> int:
    cfg = _merged(args)
    system = _system_from(cfg)
    spec = spectra.SweepSpec(vary=args.vary, lo=args.lo, hi=args.hi, steps=args.steps,
                             system=system, e_lo=float(cfg["e_lo"]), e_hi=float(cfg["e_hi"]),
                             n_grid=int(cfg["n_grid"]), mode=str(cfg["mode"]))
    _write_atomic(args.out, spectra.sweep_to_csv(spectra.sweep(spec)))
    return 0


def _figure_outputs(res: figures.FigureResult) -> Dict[str, str]:
    out: Dict[str, str] = {}
    for curve in res.curves:
        out[f"fig{res.fig_id:02d}_{curve.label}.csv"] = curve.csv
    out[f"fig{res.fig_id:02d}_verdicts.json"] = res.verdict_json()
    return out


def _cmd_figure(args) -> int:
    if args.id == "all":
        ids = sorted(figures.FIGURES)
    else:
        try:
            fid = int(args.id)
        except ValueError:
            print(f"error: figure id must be 1..12 or 'all', got {args.id!r}", file=_sys.stderr)
            return 2
        if fid not in figures.FIGURES:
            print(f"error: unknown figure id {fid} (valid: 1..12)", file=_sys.stderr)
            return 2
        ids = [fid]
    workers = min(_threads(), len(ids))
    if workers > 1:
        with ThreadPoolExecutor(max_workers=workers) as pool:
            results = list(pool.map(figures.evaluate_figure, ids))
    else:
        results = [figures.evaluate_figure(i) for i in ids]
    outdir = args.out if args.out != "-" else "figures_out"
    for res in results:
        for name, content in sorted(_figure_outputs(res).items()):
            _write_atomic(os.path.join(outdir, name), content)
    print(f"wrote {sum(len(_figure_outputs(r)) for r in results)} files to {outdir}")
    return 0


_THERMO_BASE = {"case": "inverse-square", "a": 1.0, "V1": 0.01, "V2": 0.01,
                "V3": 0.0, "lambda": 1.0, "B": 1.0, "Phi_AB": 1.0}


def _cmd_thermo(args) -> int:
    cfg = _merged(args, base=_THERMO_BASE)
    system = _system_from(cfg)
    if args.T is not None:
        temps = [args.T]
    else:
        steps = args.T_steps
        lo, hi = args.T_lo, args.T_hi
        temps = [lo + (hi - lo) * i / (steps - 1) for i in range(steps)]
    records = thermo.temperature_table(system, temps)
    _write_atomic(args.out, thermo.records_to_csv(records))
    return 0


def _cmd_oracle(args) -> int:
    cfg = _merged(args)
    system = _system_from(cfg)
    rep = oracle.compare_with_closed_form(system, args.which, (args.window_lo, args.window_hi),
                                          max_states=args.max_states, n_scan=args.n_scan,
                                          rtol=args.rtol)
    _write_atomic(args.out, oracle.comparison_to_csv(rep))
    return 0


def _cmd_report(args) -> int:
    _write_atomic(args.out, report.build_report())
    return 0


def build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(
        prog="pdm-spectra",
        description="Bound-state spectra and canonical thermodynamics for a "
                    "position-dependent-mass charged particle in a Morse-plus-Coulomb "
                    "potential under magnetic and Aharonov-Bohm flux fields "
                    "(natural units by default).")
    sub = parser.add_subparsers(dest="command", required=True)

    p_solve = sub.add_parser("solve", help="energy levels for one parameter set")
    _add_system_flags(p_solve)
    p_solve.set_defaults(fn=_cmd_solve)

    p_sweep = sub.add_parser("sweep", help="energy along one swept parameter")
    _add_system_flags(p_sweep)
    p_sweep.add_argument("--vary", required=True, choices=spectra.SWEEP_VARY)
    p_sweep.add_argument("--lo", type=float, required=True)
    p_sweep.add_argument("--hi", type=float, required=True)
    p_sweep.add_argument("--steps", type=int, required=True)
    p_sweep.set_defaults(fn=_cmd_sweep)

    p_fig = sub.add_parser("figure", help="bundled figure datasets with trend verdicts")
    p_fig.add_argument("--id", required=True, help="figure id 1..12 or 'all'")
    p_fig.add_argument("--out", default="figures_out", help="output directory")
    p_fig.set_defaults(fn=_cmd_figure)

    p_th = sub.add_parser("thermo", help="thermodynamic table (inverse-square case)")
    _add_system_flags(p_th)
    p_th.add_argument("--T", type=float, help="single temperature")
    p_th.add_argument("--T-lo", dest="T_lo", type=float, default=0.5)
    p_th.add_argument("--T-hi", dest="T_hi", type=float, default=5.0)
    p_th.add_argument("--T-steps", dest="T_steps", type=int, default=19)
    p_th.set_defaults(fn=_cmd_thermo)

    p_or = sub.add_parser("oracle", help="shooting-oracle comparison against the closed forms")
    _add_system_flags(p_or)
    p_or.add_argument("--which", required=True, choices=oracle.WHICH_CHOICES)
    p_or.add_argument("--window-lo", dest="window_lo", type=float, default=-30.0)
    p_or.add_argument("--window-hi", dest="window_hi", type=float, default=5.0)
    p_or.add_argument("--max-states", dest="max_states", type=int, default=4)
    p_or.add_argument("--n-scan", dest="n_scan", type=int, default=48)
    p_or.add_argument("--rtol", type=float, default=1e-8)
    p_or.set_defaults(fn=_cmd_oracle)

    p_rep = sub.add_parser("report", help="write the discrepancy report")
    p_rep.add_argument("--out", default="DISCREPANCIES.md")
    p_rep.set_defaults(fn=_cmd_report)

    return parser


def run(argv: Optional[List[str]] = None) -> int:
    parser = build_parser()
    try:
        args = parser.parse_args(argv)
    except SystemExit as exc:
        return int(exc.code) if exc.code is not None else 2
    try:
        return args.fn(args)
    except _DOMAIN_ERRORS as exc:
        payload = {"error": type(exc).__name__, "message": str(exc)}
        print(json.dumps(payload, sort_keys=True), file=_sys.stderr)
        return 3
    except (OSError, ValueError, json.JSONDecodeError) as exc:
        print(f"error: {exc}", file=_sys.stderr)
        return 2


def main() -> None:
    raise SystemExit(run())
