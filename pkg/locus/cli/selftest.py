import argparse

from locus.cli.options import build_config, common_parser
from locus.services.selftest import run_selftest


def handle(args: argparse.Namespace):
    return run_selftest(build_config(args))


def register(subparsers) -> None:
    parser = subparsers.add_parser(
        "selftest",
        parents=[common_parser()],
        help="field and code algebra checks",
    )
    parser.add_argument("--t", type=int, help="field degree, GF(2^t)")
    parser.set_defaults(handler=handle)
