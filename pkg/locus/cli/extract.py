import argparse

from locus.cli.options import add_code_flags, build_config, common_parser
from locus.services.extract import run_extract


def handle(args: argparse.Namespace):
    return run_extract(build_config(args))


def register(subparsers) -> None:
    parser = subparsers.add_parser(
        "extract",
        parents=[common_parser()],
        help="smooth decoder extraction and locally decodable certificates",
    )
    add_code_flags(parser)
    parser.add_argument("--epsilon", help="soundness slack")
    parser.add_argument("--alpha", help="margin below the attack bound")
    parser.set_defaults(handler=handle)
