#!/usr/bin/env python3
"""
Two-Phase Quantum Walk Tool

Simulates the one-defect two-phase quantum walk and evaluates its
stationary and time-averaged limit measures.

Commands:
1. evolve        distribution at time T
2. time-average  (1/T) sum_{t<T} P(X_t = x)
3. stationary    closed-form stationary measure for eigenpair j and scale c
4. limit         time-averaged limit measure
5. singular      unit-circle singular points and residue norms
6. verify        full invariant suite (exit code 3 on any failure)
7. compare       simulation, limit measure and scaled stationary measures side by side

Usage:
    python tools/two_phase_qw.py limit --sigma-plus 0 --sigma-minus 0 --init 1,0
    python tools/two_phase_qw.py time-average --sigma-plus 1.5pi --sigma-minus 1pi --init 1,0 --T 1
    python tools/two_phase_qw.py compare --sigma-plus 1.5pi --sigma-minus 1pi --init 1,0 --T 10000
    python tools/two_phase_qw.py verify --sigma-plus 0.3 --sigma-minus 2 --polar 0.6,0.2,0.8,-1
"""

import argparse
import cmath
import csv
import io
import json
import logging
import math
import sys
from dataclasses import dataclass
from pathlib import Path
from typing import Callable, Dict, List, Optional, Sequence, Tuple

from coin_model import ModelParams, QubitState
from evolution import Measure, distribution_at, time_average
from gf_limit import (
    capital_lambda,
    correspondence_rows,
    limit_measure,
    residue_norm_sq,
    residue_norm_sq_from_derivative,
    singular_points,
)
from qw_config import (
    DEFAULT_TOLERANCE,
    NORMALIZATION_TOLERANCE,
    RENORMALIZE_TOLERANCE,
    configure_logging,
    resolve_tolerance,
)
from qw_errors import ConfigError
from sgf_spectral import eigenpair, stationary_measure
from verify_suite import InvariantSuite

logger = logging.getLogger(__name__)

EXIT_OK = 0
EXIT_CONFIG = 2
EXIT_VERIFY_FAILED = 3
EXIT_IO = 4
EXIT_UNKNOWN_COMMAND = 5

FORMATS = ("csv", "json")


@dataclass(frozen=True)
class RunConfig:
    """Parsed command-line configuration for one run."""

    command: str
    params: ModelParams
    phi0: QubitState
    horizon: int = 100
    radius: int = 10
    eigen_index: int = 1
    scale_c: complex = 1.0 + 0j
    output: Optional[Path] = None
    fmt: str = "csv"
    tol: float = DEFAULT_TOLERANCE
    grid: int = 1_000_000

    @property
    def extent(self) -> int:
        """Half-width of emitted measures: max(T, L)."""
        return max(self.horizon, self.radius)


@dataclass
class Table:
    """Rows ready for CSV/JSON emission."""

    columns: List[str]
    rows: List[Tuple]
    extra: Optional[dict] = None
    ok: bool = True
    rows_key: str = "rows"


def parse_angle(text: str) -> float:
    """Radians from '0.25', '1.5pi', 'pi' or '-0.5pi'."""
    raw = text.strip().lower()
    try:
        if raw.endswith("pi"):
            coefficient = raw[:-2].strip().rstrip("*")
            if coefficient in ("", "+"):
                factor = 1.0
            elif coefficient == "-":
                factor = -1.0
            else:
                factor = float(coefficient)
            value = factor * math.pi
        else:
            value = float(raw)
    except ValueError as exc:
        raise ConfigError(f"invalid angle: {text!r}") from exc
    if not math.isfinite(value):
        raise ConfigError(f"angle must be finite: {text!r}")
    return value


def parse_complex(text: str) -> complex:
    """Complex number in Python syntax; 'i' is accepted as the imaginary unit."""
    raw = text.strip().replace(" ", "").replace("i", "j")
    try:
        value = complex(raw)
    except ValueError as exc:
        raise ConfigError(f"invalid complex number: {text!r}") from exc
    if not (math.isfinite(value.real) and math.isfinite(value.imag)):
        raise ConfigError(f"complex number must be finite: {text!r}")
    return value


def parse_init(init: Optional[str], polar: Optional[str]) -> QubitState:
    """
    Initial coin state from ``--init alpha,beta`` or ``--polar a,phi1,b,phi2``.

    States off by at most 1e-6 in norm are renormalized (with a warning past
    1e-9); anything further off is rejected.
    """
    if init is not None and polar is not None:
        raise ConfigError("use either --init or --polar, not both")
    if polar is not None:
        parts = polar.split(",")
        if len(parts) != 4:
            raise ConfigError(f"--polar expects a,phi1,b,phi2; got {polar!r}")
        a, b = parse_angle(parts[0]), parse_angle(parts[2])
        if a < 0 or b < 0:
            raise ConfigError("--polar moduli a and b must be non-negative")
        state = QubitState.from_polar(a, parse_angle(parts[1]), b, parse_angle(parts[3]))
    else:
        parts = (init or "1,0").split(",")
        if len(parts) != 2:
            raise ConfigError(f"--init expects alpha,beta; got {init!r}")
        state = QubitState(parse_complex(parts[0]), parse_complex(parts[1]))

    deviation = abs(state.norm_sq - 1.0)
    if deviation > RENORMALIZE_TOLERANCE:
        raise ConfigError(
            f"initial state has |alpha|^2+|beta|^2 = {state.norm_sq:.17g}, expected 1"
        )
    if deviation > NORMALIZATION_TOLERANCE:
        logger.warning("Renormalizing initial state (norm deviation %.3g)", deviation)
    return state.normalized() if deviation > 0.0 else state


def build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(
        description="One-defect two-phase quantum walk: simulation, stationary and limit measures",
        formatter_class=argparse.RawDescriptionHelpFormatter,
        epilog=__doc__,
    )
    parser.add_argument("command", help=f"one of: {', '.join(COMMANDS)}")
    parser.add_argument("--sigma-plus", default="0", help="phase for x >= 1 (e.g. 0.3, 1.5pi)")
    parser.add_argument("--sigma-minus", default="0", help="phase for x <= -1")
    parser.add_argument("--init", help="initial state alpha,beta (default 1,0)")
    parser.add_argument("--polar", help="initial state a,phi1,b,phi2")
    parser.add_argument("--T", dest="horizon", type=int, default=100, help="time horizon")
    parser.add_argument("--L", dest="radius", type=int, default=10, help="window radius")
    parser.add_argument("--j", dest="eigen_index", type=int, default=1, choices=[1, 2, 3, 4])
    parser.add_argument("--c", dest="scale_c", default="1", help="eigenvector scale c")
    parser.add_argument("--output", "-o", help="output file (default: stdout)")
    parser.add_argument("--format", dest="fmt", choices=FORMATS, default="csv")
    parser.add_argument(
        "--tol", type=float, help="equality tolerance of the verify checks (overrides QW_TOL)"
    )
    parser.add_argument("--grid", type=int, default=1_000_000, help="singular scan resolution")
    parser.add_argument("--log-level", default="WARNING", help="logging level")
    return parser


def build_config(args: argparse.Namespace) -> RunConfig:
    if args.horizon < 1:
        raise ConfigError(f"--T must be >= 1, got {args.horizon}")
    if args.radius < 0:
        raise ConfigError(f"--L must be >= 0, got {args.radius}")
    if args.grid < 1000:
        raise ConfigError(f"--grid must be >= 1000, got {args.grid}")
    try:
        params = ModelParams(parse_angle(args.sigma_plus), parse_angle(args.sigma_minus))
    except ValueError as exc:
        raise ConfigError(str(exc)) from exc
    return RunConfig(
        command=args.command,
        params=params,
        phi0=parse_init(args.init, args.polar),
        horizon=args.horizon,
        radius=args.radius,
        eigen_index=args.eigen_index,
        scale_c=parse_complex(args.scale_c),
        output=Path(args.output) if args.output else None,
        fmt=args.fmt,
        tol=resolve_tolerance(args.tol),
        grid=args.grid,
    )


def _measure_table(m: Measure) -> Table:
    return Table(["x", "value"], [(x, v) for x, v in m.rows()])


def cmd_evolve(config: RunConfig) -> Table:
    m = distribution_at(config.params, config.phi0, config.horizon)
    return _measure_table(m.padded(-config.extent, config.extent))


def cmd_time_average(config: RunConfig) -> Table:
    m = time_average(config.params, config.phi0, config.horizon)
    return _measure_table(m.padded(-config.extent, config.extent))


def cmd_stationary(config: RunConfig) -> Table:
    pair = eigenpair(config.params, config.eigen_index, config.scale_c)
    xs = range(-config.extent, config.extent + 1)
    values = [stationary_measure(pair, config.params, x) for x in xs]
    m = Measure.from_values(-config.extent, values)
    table = _measure_table(m)
    table.extra = {"j": config.eigen_index, "lambda": [pair.lam.real, pair.lam.imag]}
    return table


def cmd_limit(config: RunConfig) -> Table:
    xs = range(-config.extent, config.extent + 1)
    values = [limit_measure(config.params, config.phi0, x) for x in xs]
    return _measure_table(Measure.from_values(-config.extent, values))


def cmd_singular(config: RunConfig) -> Table:
    sset = singular_points(config.params)
    rows = []
    for label, z in sset.points():
        which = label[:-1]
        theta = cmath.phase(z)
        rows.append(
            (
                label,
                z.real,
                z.imag,
                theta,
                residue_norm_sq(config.params, which),
                residue_norm_sq_from_derivative(config.params, which),
                abs(capital_lambda(theta, config.params)),
            )
        )
    columns = [
        "label",
        "re",
        "im",
        "theta",
        "residue_norm_sq",
        "residue_norm_sq_derivative",
        "capital_lambda_abs",
    ]
    extra = {"theta1_present": sset.theta1_present, "theta2_present": sset.theta2_present}
    return Table(columns, rows, extra)


def cmd_verify(config: RunConfig) -> Table:
    suite = InvariantSuite(
        config.params, config.phi0, horizon=config.horizon, grid=config.grid, tol=config.tol
    )
    results = suite.run()
    columns = ["name", "passed", "value", "threshold", "detail"]
    rows = [(r.name, r.passed, r.value, r.threshold, r.detail) for r in results]

    print("=" * 60, file=sys.stderr)
    for r in results:
        mark = "ℹ️ " if r.informational else ("✅" if r.passed else "❌")
        print(f"{mark} {r.name}: {r.value:.3g} (threshold {r.threshold:.3g})", file=sys.stderr)
    print("=" * 60, file=sys.stderr)
    failed = [r.name for r in results if not r.passed]
    if failed:
        print(f"❌ {len(failed)} check(s) failed: {', '.join(failed)}", file=sys.stderr)
    else:
        print(f"✅ All {len(results)} checks passed", file=sys.stderr)
    return Table(columns, rows, {"passed": not failed}, ok=not failed, rows_key="checks")


def cmd_compare(config: RunConfig) -> Table:
    extent = config.extent
    simulated = time_average(config.params, config.phi0, config.horizon)
    report = {r.x: r for r in correspondence_rows(config.params, config.phi0, extent)}
    rows = []
    for x in range(-extent, extent + 1):
        r = report[x]
        thm = r.nu_plus + r.nu_minus
        sim = simulated.value(x)
        rows.append(
            (
                x,
                sim,
                thm,
                r.stationary_j1_scaled,
                r.stationary_j3_scaled,
                abs(sim - thm),
                r.gap_plus,
                r.gap_minus,
            )
        )
    columns = [
        "x",
        "simulated",
        "thm2",
        "stationary_j1_scaled",
        "stationary_j3_scaled",
        "gap_simulated_thm2",
        "gap_j1",
        "gap_j3",
    ]
    return Table(columns, rows)


COMMANDS: Dict[str, Callable[[RunConfig], Table]] = {
    "evolve": cmd_evolve,
    "time-average": cmd_time_average,
    "stationary": cmd_stationary,
    "limit": cmd_limit,
    "singular": cmd_singular,
    "verify": cmd_verify,
    "compare": cmd_compare,
}


def _format_cell(value) -> str:
    if isinstance(value, bool):
        return "true" if value else "false"
    if isinstance(value, float):
        return format(value, ".17g")
    return str(value)


def render(table: Table, fmt: str, command: str, params: ModelParams) -> str:
    """CSV with a header row, or JSON {params, command, rows}."""
    if fmt == "csv":
        buffer = io.StringIO()
        writer = csv.writer(buffer, lineterminator="\n")
        writer.writerow(table.columns)
        for row in table.rows:
            writer.writerow([_format_cell(v) for v in row])
        return buffer.getvalue()

    payload = {
        "params": params.as_dict(),
        "command": command,
        table.rows_key: [dict(zip(table.columns, row)) for row in table.rows],
    }
    if table.extra:
        payload.update(table.extra)
    return json.dumps(payload, indent=2) + "\n"


def write_output(text: str, path: Optional[Path]) -> None:
    if path is None:
        sys.stdout.write(text)
        return
    try:
        with open(path, "w", encoding="utf-8", newline="") as f:
            f.write(text)
    except OSError as exc:
        raise OSError(f"cannot write {path}: {exc.strerror or exc}") from exc
    logger.info("Wrote %s", path)


def emit_measure(
    m: Measure,
    fmt: str,
    path: Optional[Path],
    command: str = "measure",
    params: Optional[ModelParams] = None,
) -> None:
    """Write a measure as CSV (x,value) or JSON rows, one per site in ascending order."""
    if fmt not in FORMATS:
        raise ConfigError(f"unknown format: {fmt!r}")
    params = params or ModelParams(0.0, 0.0)
    write_output(render(_measure_table(m), fmt, command, params), path)


def read_measure_csv(text: str) -> Measure:
    """Inverse of the CSV form of emit_measure."""
    reader = csv.reader(io.StringIO(text))
    header = next(reader)
    if header != ["x", "value"]:
        raise ValueError(f"unexpected header: {header}")
    rows = [(int(x), float(v)) for x, v in reader]
    if not rows:
        return Measure.from_values(0, [])
    return Measure.from_values(rows[0][0], [v for _, v in rows])


def run(config: RunConfig) -> int:
    """Dispatch one command and emit its output; returns the exit status."""
    handler = COMMANDS.get(config.command)
    if handler is None:
        print(f"❌ ERROR: unknown command {config.command!r}", file=sys.stderr)
        return EXIT_UNKNOWN_COMMAND
    logger.info("Running %s with %s", config.command, config.params)
    table = handler(config)
    write_output(render(table, config.fmt, config.command, config.params), config.output)
    if not table.ok:
        return EXIT_VERIFY_FAILED
    return EXIT_OK


def main(argv: Optional[Sequence[str]] = None) -> int:
    parser = build_parser()
    args = parser.parse_args(argv)

    if args.command not in COMMANDS:
        print(f"❌ ERROR: unknown command {args.command!r}", file=sys.stderr)
        print(f"   expected one of: {', '.join(COMMANDS)}", file=sys.stderr)
        return EXIT_UNKNOWN_COMMAND

    try:
        configure_logging(args.log_level)
        config = build_config(args)
    except ConfigError as exc:
        print(f"❌ ERROR: {exc}", file=sys.stderr)
        return EXIT_CONFIG

    try:
        return run(config)
    except OSError as exc:
        print(f"❌ ERROR: {exc}", file=sys.stderr)
        return EXIT_IO


if __name__ == "__main__":
    sys.exit(main())
