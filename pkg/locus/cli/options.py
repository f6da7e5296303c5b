import argparse

from locus.core.config import get_settings
from locus.schemas.config import ExperimentConfig


def common_parser() -> argparse.ArgumentParser:
    """Flags shared by every experiment subcommand; defaults are None so only given flags override the config file."""
    parser = argparse.ArgumentParser(add_help=False)
    parser.add_argument("--config", help="experiment config file (key = value lines)")
    parser.add_argument("--seed", type=int, help="master seed (default: LOCUS_SEED)")
    parser.add_argument("--trials", type=int, help="Monte Carlo trial count")
    parser.add_argument("--mode", choices=["exact", "monte_carlo"], help="exact enumeration or sampling")
    parser.add_argument("--out", help="write the JSON-lines report here instead of stdout")
    parser.add_argument("--verbose", "-v", action="store_true", help="debug logging")
    return parser


def add_code_flags(parser: argparse.ArgumentParser) -> None:
    parser.add_argument("--code", help="code file; defaults to the built-in [3, 2] code")
    parser.add_argument("--field", help="field of the built-in code, e.g. GF(3) or GF(2^2)")
    parser.add_argument("--decoder", help="nonadaptive decoder file; defaults to the canonical decoder")
    parser.add_argument("--q", type=int, help="query bound of the default decoder")
    parser.add_argument("--delta", help="corruption fraction, e.g. 1/4 or 0.25")


def add_line_flags(parser: argparse.ArgumentParser) -> None:
    parser.add_argument("--t", type=int, help="field degree, GF(2^t)")
    parser.add_argument("--n", type=int, help="number of variables")
    parser.add_argument("--d", type=int, help="degree bound")
    parser.add_argument("--point", help="comma-separated coordinates of x*")
    parser.add_argument("--alpha-star", dest="alpha_star", type=int, help="field element alpha* as an integer")
    parser.add_argument("--bit", type=int, help="bit index i* of pi(alpha* f(x*))")


def build_config(args: argparse.Namespace) -> ExperimentConfig:
    """Config file values, overridden by every flag that was given."""
    overrides = {
        key: getattr(args, key)
        for key in ExperimentConfig.model_fields
        if getattr(args, key, None) is not None
    }
    if "seed" not in overrides and not args.config:
        overrides["seed"] = get_settings().LOCUS_SEED
    return ExperimentConfig.from_file(args.config, overrides)
