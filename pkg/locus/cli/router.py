import argparse

from locus.cli import attack, extract, fool, goldberg, linecode, repeat, report, selftest, twoquery

COMMANDS = (selftest, fool, extract, goldberg, twoquery, linecode, attack, repeat, report)


def build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(
        prog="locus",
        description="Experiments on local decoders of linear codes over GF(2^t)",
    )
    subparsers = parser.add_subparsers(dest="command", required=True)
    for command in COMMANDS:
        command.register(subparsers)
    return parser
