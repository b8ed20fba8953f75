"""Experiment runner: every study the package supports, emitted as CSV.

Subcommands mirror the analyses the library exposes: coefficient tables,
symbol curves, per-mode convergence radii, GMRES runs with residual
histories, subdomain-count and wavenumber sweeps, iteration-operator
spectra, and the pole-count bound.  All numeric output is CSV with a
header row and 17-significant-digit floats so downstream plotting can
round-trip values losslessly; identical invocations produce identical
bytes.  Exit codes: 0 success, 2 usage or configuration error, 3 a
numerical failure surfaced by the library (resonance, pole hit,
singular subproblem, stalled eigensolve).

The wavenumber can be given directly or as the ratio length/wavelength;
when the excited-mode count is not given it defaults to twice the number
of propagating modes, which reproduces the benchmark sizing at every
sweep point.
"""

from __future__ import annotations

import argparse
import math
import sys
import warnings
from concurrent.futures import ThreadPoolExecutor
from dataclasses import dataclass, fields, replace
from pathlib import Path

from .convergence import IllPosed, n_min_pole, radius_nonoverlap, radius_overlap
from .krylov import GmresReport, MaxIterations, gmres, interface_system, spectrum
from .rational import pade_cot_coefficients, write_table_file
from .schwarz import (
    CavityConfig,
    InterfaceState,
    Partition,
    ResonantConfig,
    closed_form_solution,
    error_l2,
    mode_set,
    reconstruct_solution,
)
from .symbols import PoleHit, _at_cutoff, apply_spec, parse_operator

__all__ = ["ExperimentConfig", "UsageError", "main"]

EXIT_OK = 0
EXIT_USAGE = 2
EXIT_NUMERICAL = 3


class UsageError(Exception):
    """Bad flags, bad config file, or an inconsistent experiment setup."""


@dataclass
class ExperimentConfig:
    """Everything a cavity experiment needs, resolved from file plus flags."""

    length: float = 1.0
    height: float = 0.5
    wavenumber: float | None = None
    l_over_lambda: float | None = None
    subdomains: int = 2
    excitation_modes: int | None = None
    max_modes: int | None = None
    operators: tuple = ()
    tol: float = 1e-6
    ortho: str = "modified"
    overlap: float = 0.0
    output: str | None = None

    def resolved_wavenumber(self) -> float:
        if self.wavenumber is not None and self.l_over_lambda is not None:
            raise UsageError("give either wavenumber or l-over-lambda, not both")
        if self.wavenumber is not None:
            return self.wavenumber
        if self.l_over_lambda is not None:
            return 2.0 * math.pi * self.l_over_lambda / self.length
        raise UsageError("a wavenumber (or l-over-lambda) is required")

    def cavity(self) -> CavityConfig:
        k = self.resolved_wavenumber()
        excited = self.excitation_modes
        if excited is None:
            excited = 2 * _propagating_count(k, self.height)
            if excited == 0:
                raise UsageError(
                    "wavenumber is below the first cutoff; give excitation-modes")
        return CavityConfig(length=self.length, height=self.height,
                            wavenumber=k, excitation_modes=excited,
                            max_modes=0 if self.max_modes is None else self.max_modes)

    def partition(self, subdomains: int | None = None) -> Partition:
        d = self.subdomains if subdomains is None else subdomains
        if d < 2:
            raise UsageError("at least 2 subdomains are required")
        return Partition.uniform(self.length, d, overlap_delta=self.overlap)

    def operator_specs(self):
        if not self.operators:
            raise UsageError("at least one --operator is required")
        return [parse_operator(text) for text in self.operators]


def _propagating_count(k: float, height: float) -> int:
    x = k * height / math.pi
    n = int(math.floor(x))
    if n >= 1 and abs(n - x) < 1e-12:
        n -= 1  # a mode exactly at cutoff does not propagate
    return max(n, 0)


_CONFIG_KEYS = {f.name.replace("_", "-"): f.name for f in fields(ExperimentConfig)}


def _read_config_file(path: str) -> dict:
    values = {}
    try:
        text = Path(path).read_text()
    except OSError as exc:
        raise UsageError(f"cannot read config file: {exc}")
    for lineno, raw in enumerate(text.splitlines(), start=1):
        line = raw.split("#", 1)[0].strip()
        if not line:
            continue
        if "=" not in line:
            raise UsageError(f"{path}:{lineno}: expected key = value")
        key, _, value = line.partition("=")
        key, value = key.strip(), value.strip()
        if key not in _CONFIG_KEYS:
            raise UsageError(f"{path}:{lineno}: unknown key {key!r}")
        values[_CONFIG_KEYS[key]] = value
    return values


def _coerce(name: str, value):
    if isinstance(value, str):
        if name in ("length", "height", "wavenumber", "l_over_lambda",
                    "tol", "overlap"):
            try:
                return float(value)
            except ValueError:
                raise UsageError(f"{name}: not a number: {value!r}")
        if name in ("subdomains", "excitation_modes", "max_modes"):
            try:
                return int(value)
            except ValueError:
                raise UsageError(f"{name}: not an integer: {value!r}")
        if name == "operators":
            return tuple(part.strip() for part in value.split(",") if part.strip())
    return value


def _resolve_config(args) -> ExperimentConfig:
    """File values first, then any flag that was actually given on top."""
    merged = {}
    if getattr(args, "config", None):
        for name, value in _read_config_file(args.config).items():
            merged[name] = _coerce(name, value)
    for name in _CONFIG_KEYS.values():
        flag = getattr(args, name, None)
        if flag is not None and flag != []:
            merged[name] = _coerce(name, tuple(flag) if name == "operators" else flag)
    cfg = ExperimentConfig(**merged)
    if cfg.length <= 0 or cfg.height <= 0:
        raise UsageError("lengths must be positive")
    if not 0.0 < cfg.tol:
        raise UsageError("tol must be positive")
    if cfg.ortho not in ("classical", "modified"):
        raise UsageError("ortho must be classical or modified")
    return cfg


# --- CSV plumbing -------------------------------------------------------------------

def _fmt(value) -> str:
    if isinstance(value, bool):
        return "yes" if value else "no"
    if isinstance(value, int):
        return str(value)
    if isinstance(value, float):
        return f"{value:.17g}"
    return str(value)


def _emit(output: str | None, header, rows) -> None:
    lines = [",".join(header)]
    lines.extend(",".join(_fmt(cell) for cell in row) for row in rows)
    text = "\n".join(lines) + "\n"
    if output in (None, "-"):
        sys.stdout.write(text)
    else:
        Path(output).write_text(text)


def _branch_label(s: float, k: float) -> str:
    if _at_cutoff(s, k):
        return "cutoff"
    return "propagating" if s < k else "evanescent"


# --- subcommands --------------------------------------------------------------------

def cmd_pade_table(args) -> int:
    rows = []
    tables = []
    for n in args.n:
        if n < 1:
            raise UsageError("N must be at least 1")
        coeffs = pade_cot_coefficients(n, precision_bits=args.precision)
        tables.append(coeffs)
        c0 = float(coeffs.c0)
        for i in range(n):
            b = float(coeffs.b[i])
            rows.append((n, i + 1, c0, float(coeffs.a[i]), b, math.sqrt(b)))
    _emit(args.output, ("n", "i", "c0", "a_i", "b_i", "sqrt_b_i"), rows)
    if args.table_file:
        write_table_file(args.table_file, tables)
    return EXIT_OK


def cmd_symbols(args) -> int:
    cfg = _resolve_config(args)
    specs = cfg.operator_specs()
    k = cfg.resolved_wavenumber()
    part = cfg.partition()
    op_length = part.operator_length(0, 0)
    s_max = args.s_max if args.s_max is not None else 2.0 * k
    if s_max <= 0 or args.points < 2:
        raise UsageError("need s-max > 0 and at least 2 grid points")
    grid = sorted({s_max * i / (args.points - 1) for i in range(args.points)} | {k})
    rows = []
    for spec, text in zip(specs, cfg.operators):
        for s in grid:
            value = apply_spec(spec, s, k, op_length)
            rows.append((s, s / k, value.real, value.imag,
                         _branch_label(s, k), text))
    _emit(cfg.output, ("s", "s_over_k", "re", "im", "branch", "operator"), rows)
    return EXIT_OK


def cmd_radius(args) -> int:
    cfg = _resolve_config(args)
    specs = cfg.operator_specs()
    cavity = cfg.cavity()
    part = cfg.partition()
    l01, l10, l01p, l10p = part.analysis_widths(0)
    k = cavity.wavenumber
    rows = []
    for spec, text in zip(specs, cfg.operators):
        results = []
        for mode in mode_set(cavity):
            lam01 = apply_spec(spec, mode.s, k, part.operator_length(0, 0))
            lam10 = apply_spec(spec, mode.s, k, part.operator_length(0, 1))
            if cfg.overlap > 0:
                rho = radius_overlap(lam01, lam10, mode.s, k,
                                     l01, l10, l01p, l10p)
            else:
                rho = radius_nonoverlap(lam01, lam10, mode.s, k, l01, l10)
            results.append((mode.s, rho.rho_abs))
        if args.max_over_modes:
            s, rho_abs = max(results, key=lambda item: item[1])
            rows.append((s, s / k, rho_abs, _branch_label(s, k), text))
        else:
            for s, rho_abs in results:
                rows.append((s, s / k, rho_abs, _branch_label(s, k), text))
    _emit(cfg.output, ("s", "s_over_k", "rho_abs", "branch", "operator"), rows)
    return EXIT_OK


def _run_one(cfg: ExperimentConfig, spec, subdomains: int):
    """One GMRES solve; returns (report, error_l2)."""
    cavity = cfg.cavity()
    part = cfg.partition(subdomains)
    specs = [spec] * (part.subdomains - 1)
    op, b = interface_system(cavity, part, specs)
    if cfg.tol >= 1.0:
        # already below tolerance before the first Arnoldi step
        report = GmresReport(iterations=0, residual_history=[1.0],
                             converged=True, ortho=cfg.ortho)
        state = InterfaceState.zero(cavity, part)
    else:
        with warnings.catch_warnings():
            warnings.simplefilter("ignore", MaxIterations)
            x, report = gmres(op, b, tol=cfg.tol, ortho=cfg.ortho)
        state = InterfaceState(x, cavity.max_modes, part.subdomains - 1)
    solution = reconstruct_solution(state, cavity, part, specs)
    err = error_l2(solution, closed_form_solution(cavity), cavity)
    return report, err


def cmd_run(args) -> int:
    cfg = _resolve_config(args)
    specs = cfg.operator_specs()
    rows = []
    for spec, text in zip(specs, cfg.operators):
        report, err = _run_one(cfg, spec, cfg.subdomains)
        for i, residual in enumerate(report.residual_history):
            rows.append((i, residual, text))
        print(f"operator={text} D={cfg.subdomains} "
              f"iterations={report.iterations} error_l2={err:.17g} "
              f"converged={'yes' if report.converged else 'no'}",
              file=sys.stderr)
    _emit(cfg.output, ("iter", "relative_residual", "operator"), rows)
    return EXIT_OK


def _sweep(cfg: ExperimentConfig, cells, runner):
    """Evaluate cells in a worker pool, keep input order, NA the failures."""
    def safe(cell):
        try:
            return runner(cell)
        except (PoleHit, IllPosed, ResonantConfig, ArithmeticError, UsageError) as exc:
            return exc

    with ThreadPoolExecutor(max_workers=min(8, max(1, len(cells)))) as pool:
        outcomes = list(pool.map(safe, cells))
    rows = []
    for cell, outcome in zip(cells, outcomes):
        if isinstance(outcome, Exception):
            warnings.warn(f"cell {cell}: {outcome}", stacklevel=2)
            rows.append(cell + ("NA",))
        else:
            rows.append(cell + (outcome,))
    return rows


def cmd_sweep_d(args) -> int:
    cfg = _resolve_config(args)
    specs = {text: spec for text, spec in zip(cfg.operators, cfg.operator_specs())}
    if not args.d:
        raise UsageError("at least one --d value is required")
    cells = [(d, text) for d in args.d for text in cfg.operators]

    def runner(cell):
        d, text = cell
        report, _ = _run_one(cfg, specs[text], d)
        if not report.converged:
            raise IllPosed(f"no convergence within {report.iterations} iterations")
        return report.iterations

    rows = _sweep(cfg, cells, runner)
    _emit(cfg.output, ("D", "operator", "iterations"), rows)
    return EXIT_OK


def cmd_sweep_k(args) -> int:
    cfg = _resolve_config(args)
    specs = {text: spec for text, spec in zip(cfg.operators, cfg.operator_specs())}
    if not args.ratio:
        raise UsageError("at least one --ratio value is required")
    cells = [(ratio, text) for ratio in args.ratio for text in cfg.operators]

    def runner(cell):
        ratio, text = cell
        point = replace(cfg, wavenumber=None, l_over_lambda=ratio,
                        excitation_modes=None, max_modes=None)
        report, _ = _run_one(point, specs[text], cfg.subdomains)
        if not report.converged:
            raise IllPosed(f"no convergence within {report.iterations} iterations")
        return report.iterations

    rows = _sweep(cfg, cells, runner)
    _emit(cfg.output, ("l_over_lambda", "operator", "iterations"), rows)
    return EXIT_OK


def cmd_spectrum(args) -> int:
    cfg = _resolve_config(args)
    specs = cfg.operator_specs()
    cavity = cfg.cavity()
    part = cfg.partition()
    rows = []
    for spec, text in zip(specs, cfg.operators):
        result = spectrum(cavity, part, [spec] * (part.subdomains - 1))
        for mi in range(cavity.max_modes):
            for value in result.mode_block(mi):
                rows.append((mi + 1, value.real, value.imag, text, cfg.subdomains))
    _emit(cfg.output, ("mode_index", "re", "im", "operator", "D"), rows)
    return EXIT_OK


def cmd_nmin(args) -> int:
    cfg = _resolve_config(args)
    k = cfg.resolved_wavenumber()
    part = cfg.partition()
    longest = max(part.operator_length(q, direction)
                  for q in range(part.subdomains - 1) for direction in (0, 1))
    wavelength = 2.0 * math.pi / k
    _emit(cfg.output, ("l_ij", "lambda_w", "n_min"),
          [(longest, wavelength, n_min_pole(longest, wavelength))])
    return EXIT_OK


# --- argument parsing ----------------------------------------------------------------

def _add_cavity_flags(sub: argparse.ArgumentParser) -> None:
    sub.add_argument("--config", help="key = value file; flags override it")
    sub.add_argument("--length", type=float)
    sub.add_argument("--height", type=float)
    sub.add_argument("--wavenumber", type=float)
    sub.add_argument("--l-over-lambda", dest="l_over_lambda", type=float)
    sub.add_argument("--subdomains", type=int)
    sub.add_argument("--excitation-modes", dest="excitation_modes", type=int)
    sub.add_argument("--max-modes", dest="max_modes", type=int)
    sub.add_argument("--operator", dest="operators", action="append", default=[],
                     metavar="SPEC", help="repeatable, e.g. pade-c:32")
    sub.add_argument("--tol", type=float)
    sub.add_argument("--ortho", choices=("classical", "modified"))
    sub.add_argument("--overlap", type=float)
    sub.add_argument("--output", "-o", help="CSV path; stdout when omitted")


def _build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(
        prog="cavity-schwarz",
        description="Schwarz transmission-operator experiments on a "
                    "rectangular Helmholtz cavity")
    commands = parser.add_subparsers(dest="command", required=True)

    pade = commands.add_parser("pade-table", help="coefficient table rows")
    pade.add_argument("--n", type=int, action="append", required=True,
                      metavar="N", help="repeatable expansion order")
    pade.add_argument("--precision", type=int, default=None, metavar="BITS")
    pade.add_argument("--table-file", help="also write the reusable table file")
    pade.add_argument("--output", "-o")
    pade.set_defaults(func=cmd_pade_table)

    symbols_cmd = commands.add_parser("symbols", help="symbol curves over s")
    _add_cavity_flags(symbols_cmd)
    symbols_cmd.add_argument("--s-max", dest="s_max", type=float)
    symbols_cmd.add_argument("--points", type=int, default=200)
    symbols_cmd.set_defaults(func=cmd_symbols)

    radius = commands.add_parser("radius", help="per-mode convergence radii")
    _add_cavity_flags(radius)
    radius.add_argument("--max-over-modes", action="store_true",
                        help="one row per operator at its worst mode")
    radius.set_defaults(func=cmd_radius)

    run = commands.add_parser("run", help="GMRES solve with residual history")
    _add_cavity_flags(run)
    run.set_defaults(func=cmd_run)

    sweep_d = commands.add_parser("sweep-d", help="iterations vs subdomain count")
    _add_cavity_flags(sweep_d)
    sweep_d.add_argument("--d", type=int, action="append", default=[],
                         metavar="D", help="repeatable subdomain count")
    sweep_d.set_defaults(func=cmd_sweep_d)

    sweep_k = commands.add_parser("sweep-k", help="iterations vs wavenumber ratio")
    _add_cavity_flags(sweep_k)
    sweep_k.add_argument("--ratio", type=float, action="append", default=[],
                         metavar="R", help="repeatable length/wavelength ratio")
    sweep_k.set_defaults(func=cmd_sweep_k)

    spectrum_cmd = commands.add_parser("spectrum", help="eigenvalues of I - A")
    _add_cavity_flags(spectrum_cmd)
    spectrum_cmd.set_defaults(func=cmd_spectrum)

    nmin = commands.add_parser("nmin", help="pole-count bound for the geometry")
    _add_cavity_flags(nmin)
    nmin.set_defaults(func=cmd_nmin)

    return parser


def main(argv=None) -> int:
    parser = _build_parser()
    try:
        args = parser.parse_args(argv)
    except SystemExit as exc:
        return exc.code if isinstance(exc.code, int) else EXIT_USAGE
    try:
        return args.func(args)
    except UsageError as exc:
        print(f"error: {exc}", file=sys.stderr)
        return EXIT_USAGE
    except (PoleHit, IllPosed, ResonantConfig, ArithmeticError) as exc:
        print(f"numerical failure: {exc}", file=sys.stderr)
        return EXIT_NUMERICAL
    except ValueError as exc:
        print(f"error: {exc}", file=sys.stderr)
        return EXIT_USAGE


if __name__ == "__main__":
    sys.exit(main())
