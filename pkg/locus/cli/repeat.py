import argparse

from locus.cli.options import add_code_flags, build_config, common_parser
from locus.services.repeat import run_repeat


def handle(args: argparse.Namespace):
    return run_repeat(build_config(args))


def register(subparsers) -> None:
    parser = subparsers.add_parser(
        "repeat",
        parents=[common_parser()],
        help="soundness amplification by sequential repetition",
    )
    add_code_flags(parser)
    parser.add_argument("--repetitions", type=int, help="number of independent runs")
    parser.set_defaults(handler=handle)
