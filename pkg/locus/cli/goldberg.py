import argparse

from locus.cli.options import add_code_flags, build_config, common_parser
from locus.services.goldberg import run_goldberg


def handle(args: argparse.Namespace):
    return run_goldberg(build_config(args))


def register(subparsers) -> None:
    parser = subparsers.add_parser(
        "goldberg",
        parents=[common_parser()],
        help="adaptive to nonadaptive conversion on random toy decoders",
    )
    add_code_flags(parser)
    parser.add_argument("--toys", type=int, help="number of random adaptive decoders")
    parser.set_defaults(handler=handle)
