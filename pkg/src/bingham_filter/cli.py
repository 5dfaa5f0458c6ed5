"""Command-line entry point.

Exit codes: 0 success, 1 invalid arguments, 2 config parse failure,
3 numeric failure.
"""

from __future__ import annotations

import argparse
import logging
import os
import sys
import tempfile
from contextlib import contextmanager
from pathlib import Path

from . import selftest
from .errors import BinghamError
from .evalsuite import (
    ScenarioConfig,
    figure_kld_data,
    figure_pdf_data,
    simulate,
    with_seed,
    write_errors_csv,
    write_rows_csv,
)
from .filter import Convention

log = logging.getLogger("bingham_filter")

EXIT_OK, EXIT_USAGE, EXIT_CONFIG, EXIT_NUMERIC = 0, 1, 2, 3
DEFAULT_FIGURE_Z1 = (-2.0, -8.0, -50.0)


class UsageError(Exception):
    pass


class _Parser(argparse.ArgumentParser):
    def error(self, message):
        self.print_usage(sys.stderr)
        raise UsageError(f"{self.prog}: error: {message}")


def build_parser() -> argparse.ArgumentParser:
    common = _Parser(add_help=False)
    verbosity = common.add_mutually_exclusive_group()
    verbosity.add_argument("-q", "--quiet", action="store_const", const="quiet", dest="verbosity")
    verbosity.add_argument("-v", "--verbose", action="store_const", const="verbose", dest="verbosity")
    common.set_defaults(verbosity="normal")

    parser = _Parser(prog="bingham-filter", description="Bingham orientation filter tools.")
    sub = parser.add_subparsers(dest="command", required=True, parser_class=_Parser)

    sim = sub.add_parser("simulate", parents=[common], help="Monte-Carlo comparison against a Kalman baseline")
    sim.add_argument("--config", required=True, type=Path, help="key = value scenario file")
    sim.add_argument("--out", required=True, type=Path, help="per-step error CSV")
    sim.add_argument("--seed", type=int, help="override the config seed")
    sim.add_argument(
        "--convention",
        choices=[c.value for c in Convention],
        default=Convention.MODEL.value,
        help="measurement rotation used by the update step",
    )

    fig = sub.add_parser("figures", parents=[common], help="pdf curves and KL-divergence table")
    fig.add_argument("--z1", type=float, action="append", help="concentration (repeatable)")
    fig.add_argument("--resolution", type=int, default=720, help="angles per curve")
    fig.add_argument("--out", required=True, type=Path, help="pdf CSV")
    fig.add_argument("--kld-out", type=Path, help="KL divergence CSV (negative z1 only)")

    st = sub.add_parser("selftest", parents=[common], help="run the numeric self-check battery")
    st.add_argument("--out", type=Path, help="also write the report here")
    return parser


@contextmanager
def atomic_writer(path: Path):
    """Write to a temp file next to ``path``; rename only on success."""
    fd, tmp = tempfile.mkstemp(dir=path.parent, prefix=f".{path.name}.", suffix=".tmp")
    try:
        with os.fdopen(fd, "w", newline="") as fh:
            yield fh
        os.replace(tmp, path)
    except BaseException:
        Path(tmp).unlink(missing_ok=True)
        raise


def _check_output(path: Path | None):
    if path is not None and not path.parent.is_dir():
        raise UsageError(f"output directory does not exist: {path.parent}")


def _threads() -> int:
    raw = os.environ.get("BINGHAM_THREADS")
    if raw is None:
        return 1
    try:
        n = int(raw)
    except ValueError:
        n = 0
    if n < 1:
        raise UsageError(f"BINGHAM_THREADS must be a positive integer, got {raw!r}")
    return n


def _cmd_simulate(args) -> int:
    threads = _threads()
    try:
        cfg = ScenarioConfig.from_text(args.config.read_text())
    except (OSError, ValueError) as exc:
        print(f"bingham-filter: config error in {args.config}: {exc}", file=sys.stderr)
        return EXIT_CONFIG
    if args.seed is not None:
        cfg = with_seed(cfg, args.seed)
    log.info("simulating %d runs x %d steps with %d thread(s)", cfg.runs, cfg.steps, threads)
    metrics = simulate(cfg, threads=threads, convention=Convention(args.convention))
    log.info("wallclock %.2f s", metrics.wallclock)
    with atomic_writer(args.out) as fh:
        write_errors_csv(metrics, fh)
    if args.verbosity != "quiet":
        print(f"mean_err_bingham_rad {metrics.mean_err_bingham:.15g}")
        print(f"mean_err_kalman_rad {metrics.mean_err_kalman:.15g}")
    return EXIT_OK


def _cmd_figures(args) -> int:
    z1s = args.z1 or list(DEFAULT_FIGURE_Z1)
    if args.resolution < 2:
        raise UsageError("--resolution must be at least 2")
    if any(z > 0 for z in z1s):
        raise UsageError("--z1 values must be <= 0")
    rows = figure_pdf_data(z1s, args.resolution)
    kld_rows = figure_kld_data([z for z in z1s if z < 0]) if args.kld_out else None
    with atomic_writer(args.out) as fh:
        write_rows_csv(fh, ["theta_rad", "z1", "pdf"], rows)
    if kld_rows is not None:
        with atomic_writer(args.kld_out) as fh:
            write_rows_csv(fh, ["z1", "kld_nats"], kld_rows)
    return EXIT_OK


def _cmd_selftest(args) -> int:
    results = selftest.run_all()
    report = "".join(r.line() + "\n" for r in results)
    if args.verbosity != "quiet":
        sys.stdout.write(report)
    if args.out is not None:
        with atomic_writer(args.out) as fh:
            fh.write(report)
    return EXIT_OK if all(r.passed for r in results) else EXIT_NUMERIC


_COMMANDS = {"simulate": _cmd_simulate, "figures": _cmd_figures, "selftest": _cmd_selftest}


def run(argv: list[str] | None = None) -> int:
    parser = build_parser()
    args = None
    try:
        args = parser.parse_args(argv)
        level = {"quiet": logging.ERROR, "normal": logging.WARNING, "verbose": logging.INFO}
        logging.basicConfig(level=level[args.verbosity], format="%(levelname)s %(message)s")
        log.setLevel(level[args.verbosity])
        _check_output(getattr(args, "out", None))
        _check_output(getattr(args, "kld_out", None))
        return _COMMANDS[args.command](args)
    except UsageError as exc:
        print(exc, file=sys.stderr)
        return EXIT_USAGE
    except SystemExit as exc:  # --help
        return exc.code if isinstance(exc.code, int) else EXIT_USAGE
    except BinghamError as exc:
        command = getattr(args, "command", "?")
        print(f"bingham-filter {command}: {type(exc).__name__}: {exc}", file=sys.stderr)
        return EXIT_NUMERIC


def main() -> None:
    sys.exit(run())
