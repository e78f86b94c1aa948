"""
Command-line front end for odqkd.

Subcommands
- verify-tables: exhaustive checks of the sifting rules; optionally re-sift a record stream.
- detector-params: equivalent detector for the configured hardware.
- sweep: analytic key rate over (p, distance) grids with zero-rate cutoffs.
- montecarlo: seeded network session, statistics and the analytic cross-check.

Exit status
- 0 success, 1 verification failure, 2 usage or configuration error, 3 I/O error.

Notes
- Report lines go to stdout; diagnostics go to the log (stderr), configured once per command.
- Configuration precedence: flags > --config file (or ./odqkd.toml) > defaults.
"""

from __future__ import annotations

import argparse
import logging
import sys
from collections.abc import Callable
from dataclasses import asdict
from typing import Any

from pydantic import ValidationError

from odqkd.core.constants import MAX_STATE_QUBITS
from odqkd.core.errors import (
    CapacityError,
    ContractViolation,
    ParameterError,
    UndefinedRateError,
    VersionMismatch,
)
from odqkd.core.hashing import json_dumps_canonical
from odqkd.detector.model import equivalent_detector
from odqkd.io.config import Config
from odqkd.io.errors import IoConfigError, IoError
from odqkd.io.write import read_records, write_records, write_stats, write_sweep
from odqkd.keyrate.sweep import sweep
from odqkd.netsim.session import run_session, sift_records
from odqkd.netsim.stats import Estimate, SessionStats, compare_with_analytic, estimate_statistics
from odqkd.netsim.topology import Topology, resource_budget
from odqkd.protocol.oracle import verify_all
from odqkd.protocol.sifting import flip_decision

__all__ = ["main", "build_argparser", "LOG_FORMAT"]

logger = logging.getLogger(__name__)

LOG_FORMAT = "%(asctime)s [%(levelname)s] [%(name)s] %(message)s"

EXIT_OK = 0
EXIT_VERIFY = 1
EXIT_USAGE = 2
EXIT_IO = 3


def _base_parser(prog: str, description: str) -> argparse.ArgumentParser:
    p = argparse.ArgumentParser(prog=prog, description=description)
    p.add_argument("--config", type=str, default=None, help="TOML config (default ./odqkd.toml).")
    p.add_argument(
        "--log-level",
        type=str.upper,
        default="WARNING",
        choices=["DEBUG", "INFO", "WARNING", "ERROR"],
        help="Logging level for diagnostics on stderr.",
    )
    return p


def _add_output(p: argparse.ArgumentParser) -> None:
    p.add_argument("--out", type=str, default=None, help="Artifact path (default: stdout/none).")
    p.add_argument("--format", dest="fmt", choices=["csv", "json"], default=None)


def _setup_logging(level: str) -> None:
    logging.basicConfig(level=getattr(logging, level), format=LOG_FORMAT)


def _comm_users(text: str) -> tuple[int, ...]:
    """Parse "0,1" or "0,2,3"."""
    try:
        users = tuple(int(s) for s in text.split(",") if s.strip())
    except ValueError as exc:
        raise argparse.ArgumentTypeError(f"expected comma-separated indices, got {text!r}") from exc
    if len(users) not in (2, 3):
        raise argparse.ArgumentTypeError("give two users, or three for a conference key")
    return users


def _fmt_estimate(est: Estimate) -> str:
    if est.value is None or est.stderr is None:
        return "n/a (0 trials)"
    return f"{est.value:.6g} ± {est.stderr:.2g} ({est.successes}/{est.trials})"


def _fmt_rate(rate: float | None) -> str:
    return "n/a" if rate is None else f"{rate:.6g}"


def _print_stats(stats: SessionStats) -> None:
    discards = " ".join(f"{k}={v}" for k, v in sorted(stats.discarded.items()))
    print(f"users={stats.num_users} comm_users={list(stats.comm_users)}")
    print(f"rounds={stats.rounds} kept={stats.kept} {discards}")
    print(f"gain_zz={_fmt_estimate(stats.gain_zz)}")
    print(f"heralded_gain_zz={_fmt_estimate(stats.heralded_gain_zz)}")
    print(f"qber_z={_fmt_estimate(stats.qber_z)}")
    print(f"qber_x={_fmt_estimate(stats.qber_x)}")
    if stats.conference is not None:
        conf = stats.conference
        print(f"conference error_12={_fmt_estimate(conf.error_12)}")
        print(f"conference error_13={_fmt_estimate(conf.error_13)}")
        print(f"conference_rate={_fmt_rate(conf.rate)}")
    else:
        print(f"key_rate={_fmt_rate(stats.key_rate)}")


# ---------------------------------------------------------------------------------------------
# Subcommands
# ---------------------------------------------------------------------------------------------


def _cmd_verify_tables(argv: list[str]) -> int:
    p = _base_parser(
        "verify-tables", description="Exhaustively verify the sifting rules against exact states."
    )
    p.add_argument("--records", type=str, default=None, help="Also re-sift an NDJSON stream.")
    args = p.parse_args(argv)
    _setup_logging(args.log_level)

    reports = verify_all(flip_decision)
    for report in reports:
        print(report.summary())
        for mismatch in report.mismatches:
            print(f"  {report.name}: {mismatch}")
    failed = [r.name for r in reports if not r.passed]
    print(f"{len(reports) - len(failed)}/{len(reports)} checks passed")

    if args.records:
        cfg = Config.load(args.config)
        header, records = read_records(args.records)
        logger.info("verify-tables: re-sifting %d records (%s)", len(records), header)
        stats = estimate_statistics(records, sift_records(records), f=cfg.detector.f)
        _print_stats(stats)

    if failed:
        print(f"FAILED: {', '.join(failed)}")
        return EXIT_VERIFY
    return EXIT_OK


def _cmd_detector_params(argv: list[str]) -> int:
    p = _base_parser("detector-params", description="Equivalent detector parameters.")
    p.add_argument("--eta-d", type=float, default=None, help="Detector efficiency.")
    p.add_argument("--dark-count", type=float, default=None, help="Dark count probability.")
    p.add_argument("--format", dest="fmt", choices=["text", "json"], default="text")
    args = p.parse_args(argv)
    _setup_logging(args.log_level)

    cfg = Config.load(args.config, {"detector": {"eta_d": args.eta_d, "p_d": args.dark_count}})
    equiv = equivalent_detector(cfg.detector)
    rounded = dict(zip(("eta_z", "eta_x", "dark"), equiv.rounded(2), strict=True))
    if args.fmt == "json":
        doc = {
            "params": cfg.detector.model_dump(),
            "full": equiv.model_dump(),
            "rounded": rounded,
        }
        print(json_dumps_canonical(doc))
        return EXIT_OK
    print(f"# equivalent detector for eta_d={cfg.detector.eta_d!r} p_d={cfg.detector.p_d!r}")
    for name in ("eta_z", "eta_x", "dark"):
        print(f"{name}={getattr(equiv, name)!r} rounded={rounded[name]!r}")
    return EXIT_OK


def _cmd_sweep(argv: list[str]) -> int:
    p = _base_parser("sweep", description="Analytic key rate versus distance.")
    p.add_argument("--p", dest="p_values", type=float, action="append", default=None)
    p.add_argument("--distance", type=float, default=None, help="Evaluate a single distance.")
    p.add_argument("--relay-at-midpoint", action="store_const", const=True, default=None)
    _add_output(p)
    args = p.parse_args(argv)
    _setup_logging(args.log_level)

    sweep_over: dict[str, Any] = {"p_values": args.p_values}
    if args.distance is not None:
        sweep_over.update(distance_min_km=args.distance, distance_max_km=args.distance)
    cfg = Config.load(
        args.config,
        {
            "sweep": sweep_over,
            "topology": {"relay_at_midpoint": args.relay_at_midpoint},
            "output": {"path": args.out, "format": args.fmt},
        },
    )
    report = sweep(
        cfg.sweep.p_values,
        cfg.sweep.distances(),
        cfg.detector,
        relay_at_midpoint=cfg.topology.relay_at_midpoint,
    )
    if cfg.output.path is None:
        sys.stdout.write(report.to_csv() if cfg.output.format == "csv" else report.to_json() + "\n")
    else:
        out = write_sweep(report, cfg.output.path, cfg.output.format)
        print(f"wrote {len(report.points)} points to {out}")
    for cut in report.cutoffs:
        where = "none" if cut.cutoff_km is None else f"{cut.cutoff_km:.1f}"
        print(f"p={cut.p:g} cutoff_km={where}")
    return EXIT_OK


def _print_comparison(stats: SessionStats, topology: Topology) -> None:
    try:
        comparison = compare_with_analytic(stats, topology)
    except UndefinedRateError as exc:
        logger.info("montecarlo: %s", exc)
        print("delta: n/a (analytic yield vanishes)")
        return
    for d in comparison.deltas:
        sigma = "n/a" if d.sigma is None else f"{d.sigma:.2f}"
        analytic = f"{d.analytic:.6g}"
        print(f"delta {d.name}: simulated={d.simulated} analytic={analytic} sigma={sigma}")


def _cmd_montecarlo(argv: list[str]) -> int:
    p = _base_parser("montecarlo", description="Seeded network session and statistics.")
    p.add_argument("--seed", type=int, default=None)
    p.add_argument("--rounds", type=int, default=None)
    p.add_argument("--workers", type=int, default=None)
    p.add_argument("--users", type=int, default=None)
    p.add_argument("--comm-users", type=_comm_users, default=None, help='e.g. "0,1" or "0,1,2".')
    p.add_argument("--p", dest="source_p", type=float, default=None, help="Werner weight.")
    p.add_argument("--distance", type=float, default=None, help="User-to-user distance (km).")
    p.add_argument("--relay-at-midpoint", action="store_const", const=True, default=None)
    p.add_argument("--aux-uniform", action="store_const", const=True, default=None)
    p.add_argument("--records-out", type=str, default=None, help="NDJSON record stream path.")
    _add_output(p)
    args = p.parse_args(argv)
    _setup_logging(args.log_level)

    cfg = Config.load(
        args.config,
        {
            "topology": {
                "users": args.users,
                "comm_users": args.comm_users,
                "distance_km": args.distance,
                "source_p": args.source_p,
                "relay_at_midpoint": args.relay_at_midpoint,
            },
            "session": {
                "rounds": args.rounds,
                "seed": args.seed,
                "workers": args.workers,
                "aux_uniform": args.aux_uniform,
            },
            "output": {"path": args.out, "format": args.fmt, "records_path": args.records_out},
        },
    )
    topology = cfg.topology.build(cfg.detector)
    budget = resource_budget(topology.num_users)
    print(
        f"resources: relays={budget.relays_open_destination} "
        f"(pairwise {budget.relays_pairwise}) detectors={budget.detectors_open_destination} "
        f"(conventional {budget.detectors_conventional})"
    )

    result = run_session(topology, cfg.session)
    _print_stats(result.stats)
    if not topology.conference:
        _print_comparison(result.stats, topology)

    # workers/chunk_size stay out of the artifacts so they match across partitions
    context = {
        "seed": cfg.session.seed,
        "topology": asdict(cfg.topology),
        "detector": cfg.detector.model_dump(),
    }
    if cfg.output.records_path is not None:
        write_records(result.records, cfg.output.records_path, meta=context)
        print(f"wrote records to {cfg.output.records_path}")
    if cfg.output.path is not None:
        out = write_stats(result.stats, cfg.output.path, cfg.output.format, **context)
        print(f"wrote stats to {out}")
    return EXIT_OK


_COMMANDS: dict[str, Callable[[list[str]], int]] = {
    "verify-tables": _cmd_verify_tables,
    "detector-params": _cmd_detector_params,
    "sweep": _cmd_sweep,
    "montecarlo": _cmd_montecarlo,
}


def build_argparser() -> argparse.ArgumentParser:
    p = argparse.ArgumentParser(prog="odqkd", description="Open-destination MDI-QKD toolkit.")
    sub = p.add_subparsers(dest="cmd", required=True)
    for name in _COMMANDS:
        sub.add_parser(name)
    return p


def _run(handler: Callable[[list[str]], int], argv: list[str]) -> int:
    """Run one subcommand and map library errors onto exit codes."""
    try:
        return handler(argv)
    except CapacityError as exc:
        print(
            f"error: {exc} (sessions support 2..{MAX_STATE_QUBITS} users; reduce --users)",
            file=sys.stderr,
        )
        return EXIT_USAGE
    except (
        IoConfigError,
        ParameterError,
        ValidationError,
        ContractViolation,
        UndefinedRateError,
    ) as exc:
        print(f"error: {exc}", file=sys.stderr)
        return EXIT_USAGE
    except (IoError, VersionMismatch, OSError) as exc:
        print(f"I/O error: {exc}", file=sys.stderr)
        return EXIT_IO


def main(argv: list[str] | None = None) -> None:
    argv = list(sys.argv[1:] if argv is None else argv)
    if not argv or argv[0] in ("-h", "--help"):
        build_argparser().print_help()
        return
    cmd, rest = argv[0], argv[1:]
    handler = _COMMANDS.get(cmd)
    if handler is None:
        print(f"Unknown command: {cmd}", file=sys.stderr)
        code = EXIT_USAGE
    else:
        code = _run(handler, rest)
    raise SystemExit(code)


if __name__ == "__main__":
    main()
