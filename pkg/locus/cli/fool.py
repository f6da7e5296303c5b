import argparse

from locus.cli.options import add_code_flags, build_config, common_parser
from locus.services.fool import run_fool


def handle(args: argparse.Namespace):
    return run_fool(build_config(args))


def register(subparsers) -> None:
    parser = subparsers.add_parser(
        "fool",
        parents=[common_parser()],
        help="heavy/light attack on a nonadaptive decoder",
    )
    add_code_flags(parser)
    parser.add_argument("--target", help="m<i> or c<u>, 0-based; defaults to every message symbol")
    parser.set_defaults(handler=handle)
