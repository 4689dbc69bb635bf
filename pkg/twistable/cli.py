"""
Command-line front door: ``twistable <command> --surface S1,2 --family sep``.

Every command prints (or writes to ``--out``) one JSON report. Exit status is
0 when the report's verdict holds, 1 when it fails and 2 on configuration
errors.
"""

import argparse
import json
import logging
import sys
from pathlib import Path
from typing import Optional, Sequence

from twistable.api import COMMANDS, Twistable
from twistable.classes.config import RunConfig
from twistable.exceptions import ConfigurationError, TwistableException

logger = logging.getLogger(__name__)

EXIT_PASS, EXIT_FAIL, EXIT_CONFIG = 0, 1, 2


def build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(prog="twistable", description="Graphs of multicurves at desk scale.")
    parser.add_argument("command", choices=sorted(COMMANDS))
    parser.add_argument("--surface", type=str, default="S1,1", help="Surface id S<g>,<b>.")
    parser.add_argument("--family", type=str, default="curve_graph", help="Graph family, e.g. sep or k_of(pants).")
    parser.add_argument("--delta", type=str, default=None, help="Comma separated boundary labels forming Δ.")
    parser.add_argument("--pool-words", dest="pool_words", type=int, default=2)
    parser.add_argument("--pool-cap", dest="pool_cap", type=int, default=400)
    parser.add_argument("--samples", type=int, default=50)
    parser.add_argument("--cutoff", type=int, default=3)
    parser.add_argument("--seed", type=int, default=0)
    parser.add_argument("--radius", type=int, default=2, help="Ball radius.")
    parser.add_argument("--neighbour-cap", dest="neighbour_cap", type=int, default=None, help="Ball neighbour cap.")
    parser.add_argument("--certify", action="store_true", help="Certify distance formula distances by pool saturation.")
    parser.add_argument("--kappa-ceiling", dest="kappa_ceiling", type=float, default=10)
    parser.add_argument("--bgi-ceiling", dest="bgi_ceiling", type=float, default=100)
    parser.add_argument("--cache", type=str, default=None, help="Directory of cached pools and balls.")
    parser.add_argument("--out", type=str, default=None, help="Report path; stdout when missing.")
    parser.add_argument("--verbose", action="store_true")
    return parser


def emit(report, out: Optional[str]) -> None:
    text = json.dumps(report, indent=2, sort_keys=True, default=str)

    if out is None:
        sys.stdout.write(text + "\n")
        return

    target = Path(out)
    target.parent.mkdir(parents=True, exist_ok=True)
    with open(target, "w+") as file:
        file.write(text + "\n")


def run(command: str, config: RunConfig) -> int:
    try:
        report = Twistable(config).run(command)
    except ConfigurationError as e:
        logger.error("configuration error: %s", e.message)
        emit({"error": e.message, "details": e.details}, config.out)
        return EXIT_CONFIG
    except TwistableException as e:
        logger.error("%s: %s", type(e).__name__, e.message)
        emit({"error": e.message, "kind": type(e).__name__, "details": e.details}, config.out)
        return EXIT_FAIL

    emit(report, config.out)
    return EXIT_PASS if report["verdict"] else EXIT_FAIL


def main(argv: Optional[Sequence[str]] = None) -> int:
    args = build_parser().parse_args(argv)

    logging.basicConfig(
        level=logging.INFO if args.verbose else logging.WARNING,
        format="%(asctime)s %(levelname)s %(name)s: %(message)s",
    )

    try:
        config = RunConfig.from_args(args)
    except (AssertionError, ConfigurationError) as e:
        logger.error("invalid configuration: %s", e)
        return EXIT_CONFIG

    return run(args.command, config)


if __name__ == "__main__":  # pragma: no cover
    sys.exit(main())
