"""
cli.py
------

Command line front end of the verification harness::

    python -m qentry40 [--suite SUITE] [--seed N] [--trials N]
                       [--precision BITS] [--format text|json] [--output PATH]
                       [--explain ID] [--list]

Exit status is 0 when every trial passes, 1 when some identity fails and
2 for usage errors or when the report cannot be written.  Defaults come
from ``~/.qentry40rc`` and ``QENTRY40_PRECISION`` (see
``config_loader``); flags override both.
"""

from __future__ import annotations

import argparse
import logging
import sys
from dataclasses import dataclass
from typing import List, Optional, Sequence

from . import verify
from .config_loader import FORMATS, load_qentry40_config, resolve_defaults
from .qcore import MIN_PRECISION
from .report import VerifyReport

logger = logging.getLogger("qentry40.cli")
if not logger.handlers:
    _handler = logging.StreamHandler()
    _formatter = logging.Formatter("%(asctime)s %(levelname)s: %(message)s")
    _handler.setFormatter(_formatter)
    logger.addHandler(_handler)
    logger.setLevel(logging.INFO)

EXIT_OK = 0
EXIT_FAILURES = 1
EXIT_ERROR = 2
#: relative perturbation applied to a_1 by --inject-fault
FAULT_SIZE = 1e-6


@dataclass(frozen=True)
class RunConfig:
    precision_bits: int = 256
    seed: int = 1
    trials: int = 20
    suite: str = verify.ALL
    format: str = "text"
    output: Optional[str] = None
    explain: Optional[str] = None
    list_only: bool = False
    inject_fault: bool = False

    def sample_config(self) -> verify.SampleConfig:
        return verify.SampleConfig(
            seed=self.seed,
            trials=self.trials,
            precision_bits=self.precision_bits,
            fault=FAULT_SIZE if self.inject_fault else 0.0,
        )


def _bounded_int(minimum: int, what: str):
    def parse(text: str) -> int:
        try:
            value = int(text)
        except ValueError:
            raise argparse.ArgumentTypeError(f"{what} must be an integer, got {text!r}")
        if value < minimum:
            raise argparse.ArgumentTypeError(f"{what} must be at least {minimum}, got {value}")
        return value

    return parse


def _selector(text: str) -> str:
    if text == verify.ALL or text in verify.SUITES:
        return text
    raise argparse.ArgumentTypeError(f"unknown suite {text!r}; choose from all, {', '.join(verify.SUITES)}")


def build_parser(defaults: dict) -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(
        prog="qentry40",
        description="High-precision verification of q-continued fractions and their contiguous relations.",
    )
    parser.add_argument("--suite", type=_selector, default=defaults["suite"], help="all or one suite name")
    parser.add_argument("--seed", type=_bounded_int(0, "seed"), default=defaults["seed"])
    parser.add_argument("--trials", type=_bounded_int(0, "trials"), default=defaults["trials"])
    parser.add_argument(
        "--precision",
        dest="precision_bits",
        type=_bounded_int(MIN_PRECISION, "precision"),
        default=defaults["precision_bits"],
        help=f"working precision in bits (at least {MIN_PRECISION})",
    )
    parser.add_argument("--format", choices=FORMATS, default=defaults["format"])
    parser.add_argument("--output", "-o", default=None, help="write the report here instead of stdout")
    modes = parser.add_mutually_exclusive_group()
    modes.add_argument("--explain", metavar="ID", default=None, help="describe one identity and exit")
    modes.add_argument("--list", dest="list_only", action="store_true", help="list identity ids per suite and exit")
    parser.add_argument("--inject-fault", action="store_true", help=argparse.SUPPRESS)
    return parser


def parse_args(argv: Optional[Sequence[str]] = None, rc_path: Optional[str] = None) -> RunConfig:
    """Validated ``RunConfig``; usage errors exit with status 2 through argparse."""
    defaults = resolve_defaults(load_qentry40_config(rc_path))
    parser = build_parser(defaults)
    args = parser.parse_args(list(argv) if argv is not None else None)
    if args.explain is not None and args.explain not in verify.REGISTRY:
        parser.error(f"unknown identity {args.explain!r}; see --list")
    return RunConfig(
        precision_bits=args.precision_bits,
        seed=args.seed,
        trials=args.trials,
        suite=args.suite,
        format=args.format,
        output=args.output,
        explain=args.explain,
        list_only=args.list_only,
        inject_fault=args.inject_fault,
    )


def listing() -> str:
    lines: List[str] = []
    for suite in verify.SUITES:
        ids = [info.id for info in verify.REGISTRY.values() if info.suite == suite]
        lines.append(f"{suite}: {' '.join(ids)}")
    return "\n".join(lines) + "\n"


def _emit(text: str, output: Optional[str]) -> None:
    if output is None:
        sys.stdout.write(text)
        return
    with open(output, "w", encoding="utf-8") as fh:
        fh.write(text)
    logger.info(f"Report written to {output}")


def run(config: RunConfig) -> int:
    """Run the selected suite and write the report; returns the exit status."""
    if config.list_only:
        sys.stdout.write(listing())
        return EXIT_OK
    if config.explain is not None:
        sys.stdout.write(verify.explain(config.explain) + "\n")
        return EXIT_OK
    sample_config = config.sample_config()
    results = verify.run_suite(sample_config, config.suite)
    report = VerifyReport.build(sample_config, config.suite, results)
    text = report.to_json() if config.format == "json" else report.render_text()
    try:
        _emit(text, config.output)
    except OSError as exc:
        logger.error(f"Cannot write report: {exc}")
        return EXIT_ERROR
    return EXIT_OK if report.passed else EXIT_FAILURES


def main(argv: Optional[Sequence[str]] = None) -> int:
    return run(parse_args(argv))


__all__ = ["RunConfig", "build_parser", "parse_args", "run", "main", "listing"]
