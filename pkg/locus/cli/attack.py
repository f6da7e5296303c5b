import argparse

from locus.cli.options import add_line_flags, build_config, common_parser
from locus.services.attack import run_attack


def handle(args: argparse.Namespace):
    return run_attack(build_config(args))


def register(subparsers) -> None:
    parser = subparsers.add_parser(
        "attack",
        parents=[common_parser()],
        help="erase every line through a point and measure line-query decoders",
    )
    add_line_flags(parser)
    parser.add_argument("--line-decoder", dest="line_decoder",
                        help="constant, interpolating, greedy, through-point or all")
    parser.set_defaults(handler=handle)
