import argparse

from locus.cli.options import add_line_flags, build_config, common_parser
from locus.services.linecode import ACTIONS, run_linecode


def handle(args: argparse.Namespace):
    return run_linecode(build_config(args))


def register(subparsers) -> None:
    parser = subparsers.add_parser(
        "linecode",
        parents=[common_parser()],
        help="line-code decoding experiments",
    )
    parser.add_argument("action", choices=ACTIONS)
    add_line_flags(parser)
    parser.add_argument("--rho", type=float, help="fraction of corrupted symbols")
    parser.add_argument("--r1", type=int, help="BLR linearity-test rounds on the decoded line's block")
    parser.add_argument("--r2", type=int, help="consistency rounds against a second line")
    parser.add_argument("--no-reuse", dest="reuse", action="store_const", const=False,
                        help="self-correct the final read instead of reusing the first consistency round's random point")
    parser.add_argument("--delta", help="corruption fraction for the eta envelope")
    parser.set_defaults(handler=handle)
