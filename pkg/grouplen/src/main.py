"""
grouplen command line.

    python -m grouplen analyze <file> [--sigma S] [--primes 2,3,5,7] [--formation F ...]
    python -m grouplen verify [<file>] [--config cfg.json] [--workers K] [--out report.json]
    python -m grouplen construct --sigma S --p P --n N [--seed K] [--out DIR]
"""

from __future__ import annotations

import argparse
import logging
import sys
from pathlib import Path
from typing import List, Optional, Sequence

from .config.settings import Config
from .core.errors import ContractViolationError
from .core.structure import SigmaPartition
from .services.analysis import analyze
from .services.construction import ChainConstructionService, format_difference_table
from .services.corpus import BUNDLED_CORPUS, load_corpus
from .services.registry import available_formations
from .services.verification import verify
from .utils.logger import set_level, setup_logger

logger = setup_logger(__name__)


def _primes(text: str) -> List[int]:
    try:
        values = [int(part) for part in text.split(',') if part.strip()]
    except ValueError:
        raise argparse.ArgumentTypeError(f"expected a comma list of primes, got {text!r}") from None
    if not values:
        raise argparse.ArgumentTypeError("empty prime list")
    return values


def build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(prog="grouplen", description="Lengths of finite groups and their maximal subgroups.")
    parser.add_argument("-v", "--verbose", action="store_true", help="debug logging")
    commands = parser.add_subparsers(dest="command", required=True)

    analyze_cmd = commands.add_parser("analyze", help="report structure, radicals and lengths of each group in a file")
    analyze_cmd.add_argument("file", type=Path)
    analyze_cmd.add_argument("--sigma", default=None, help="sigma partition, e.g. '*' or '2,3|5|*'")
    analyze_cmd.add_argument("--primes", type=_primes, default=None)
    analyze_cmd.add_argument("--formation", action="append", default=[],
                             help=f"formation residual to report: {', '.join(available_formations)}")
    analyze_cmd.add_argument("--group", default=None, help="analyze only the named group")
    analyze_cmd.add_argument("--out", type=Path, default=None, help="write JSON here instead of stdout")

    verify_cmd = commands.add_parser("verify", help="run the verification suites over a corpus")
    verify_cmd.add_argument("file", type=Path, nargs="?", default=BUNDLED_CORPUS)
    verify_cmd.add_argument("--config", type=Path, default=None, help="JSON file of configuration overrides")
    verify_cmd.add_argument("--sigma", default=None)
    verify_cmd.add_argument("--primes", type=_primes, default=None)
    verify_cmd.add_argument("--workers", type=int, default=None)
    verify_cmd.add_argument("--out", type=Path, default=None)

    construct_cmd = commands.add_parser("construct", help="build the counterexample chain")
    construct_cmd.add_argument("--sigma", default=None)
    construct_cmd.add_argument("--p", type=int, required=True)
    construct_cmd.add_argument("--n", type=int, required=True)
    construct_cmd.add_argument("--seed", type=int, default=None)
    construct_cmd.add_argument("--final-remarks", type=int, default=None, metavar="K",
                               help="also report residual heights for p-closed soluble groups of height <= K")
    construct_cmd.add_argument("--out", type=Path, default=Path("."))
    return parser


def _sigma(text: Optional[str]) -> SigmaPartition:
    return SigmaPartition.parse(text if text is not None else Config.DEFAULT_SIGMA)


def _emit(text: str, out: Optional[Path]) -> None:
    if out is None:
        sys.stdout.write(text)
    else:
        out.write_text(text, encoding='utf-8')
        logger.info(f"Wrote {out}")


def run_analyze(args: argparse.Namespace) -> int:
    specs = load_corpus(args.file)
    if args.group is not None:
        specs = [s for s in specs if s.name == args.group]
        if not specs:
            raise ContractViolationError(f"no group named {args.group!r} in {args.file}")
    sigma = _sigma(args.sigma)
    reports = [analyze(spec, sigma, args.primes, args.formation) for spec in specs]
    _emit("".join(r.to_json() for r in reports), args.out)
    return 0


def run_verify(args: argparse.Namespace) -> int:
    if args.config is not None:
        try:
            applied = Config.load_json(args.config)
        except (KeyError, ValueError) as e:
            raise ContractViolationError(f"bad config file {args.config}: {e}") from None
        logger.info(f"Applied configuration overrides: {sorted(applied)}")
    specs = load_corpus(args.file)
    report = verify(specs, _sigma(args.sigma), args.primes, args.workers)
    _emit(report.to_json(), args.out)
    return 1 if report.summary.failed else 0


def run_construct(args: argparse.Namespace) -> int:
    service = ChainConstructionService(_sigma(args.sigma), args.p, args.n, args.seed, args.final_remarks)
    output = service.construct()
    service.write(output, args.out)
    print(format_difference_table(output.table))
    if output.provenance.final_remarks is not None:
        remarks = output.provenance.final_remarks
        print(f"final remarks (k = {remarks['k']}): difference {remarks['difference']} ({remarks['mode']})")
    return 0


COMMANDS = {
    "analyze": run_analyze,
    "verify": run_verify,
    "construct": run_construct,
}


def main(argv: Optional[Sequence[str]] = None) -> int:
    args = build_parser().parse_args(argv)
    if args.verbose:
        set_level(logging.DEBUG)
        Config.log_config(logger)
    return COMMANDS[args.command](args)
