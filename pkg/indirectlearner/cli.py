from typing import Callable, List, Optional
import argparse
import logging
import sys
from .exceptions import (ConfigurationError, RequestError, SizeError,
                         ValidationError)
from .configmanager import ExperimentConfig, load_config
from .experimentrunner import ExperimentRunner
from .report import FORMATS


logger = logging.getLogger(__name__)

EXIT_OK = 0
EXIT_CONFIG = 2
EXIT_VIOLATION = 3

COMMANDS = ("learn", "invert-suite", "amplify")

RunnerFactory = Callable[[ExperimentConfig], ExperimentRunner]


def build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(
        prog="indirectlearn",
        description="Learn over samplable distributions by learning over "
                    "the uniform distribution and inverting the sampler.")
    parser.add_argument("command", choices=COMMANDS)
    parser.add_argument("--config", action="append", default=[],
                        help="key = value or JSON file, or an http(s) url; "
                             "repeat to merge")
    parser.add_argument("--seed", type=int, default=None)
    parser.add_argument("--out", default=None,
                        help="report path, stdout when omitted")
    parser.add_argument("--format", choices=FORMATS, default="json")
    parser.add_argument("--set", dest="overrides", action="append",
                        default=[], metavar="KEY=VALUE")
    parser.add_argument("--timing", action="store_true",
                        help="include wall time in the report")
    parser.add_argument("-v", "--verbose", action="store_true")
    return parser


def run_command(argv: List[str],
                runner: RunnerFactory = ExperimentRunner,
                stdout=None) -> int:
    """
    Run one CLI invocation.

    Returns:
        int - 0 on success, 2 on a configuration or size error, 3 when the
              report records a bound violation.
    """
    args = build_parser().parse_args(argv)
    if args.verbose:
        logging.getLogger().setLevel(logging.DEBUG)
    stdout = stdout or sys.stdout
    try:
        config = load_config(*args.config, overrides=args.overrides,
                             seed=args.seed)
        report = runner(config).run(args.command)
    except (ValidationError, ConfigurationError, SizeError,
            RequestError, OSError) as e:
        logger.error("{}: {}".format(type(e).__name__, e))
        return EXIT_CONFIG
    text = report.render(args.format, timing=args.timing)
    if args.out:
        with open(args.out, 'w', encoding='utf-8') as f:
            f.write(text)
    else:
        stdout.write(text)
    return EXIT_OK if report.passed else EXIT_VIOLATION


def main(argv: Optional[List[str]] = None):
    logging.basicConfig()
    sys.exit(run_command(sys.argv[1:] if argv is None else argv))
