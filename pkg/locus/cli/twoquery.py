import argparse

from locus.cli.options import add_code_flags, build_config, common_parser
from locus.services.twoquery import run_twoquery


def handle(args: argparse.Namespace):
    return run_twoquery(build_config(args))


def register(subparsers) -> None:
    parser = subparsers.add_parser(
        "twoquery",
        parents=[common_parser()],
        help="two-query decoder reduction",
    )
    add_code_flags(parser)
    parser.add_argument("--variant", choices=["rldc", "rlcc"], help="decoder or corrector")
    parser.set_defaults(handler=handle)
