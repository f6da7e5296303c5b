import argparse

from locus.services.report import run_report


def handle(args: argparse.Namespace):
    return run_report(args.paths)


def register(subparsers) -> None:
    parser = subparsers.add_parser("report", help="summarize JSON-lines reports")
    parser.add_argument("paths", nargs="+")
    parser.add_argument("--out", help="write the table here instead of stdout")
    parser.add_argument("--verbose", "-v", action="store_true")
    parser.set_defaults(handler=handle)
