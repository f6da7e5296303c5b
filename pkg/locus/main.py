import logging
import sys
from pathlib import Path
from typing import List, Optional, Sequence, Union

from locus.cli.router import build_parser
from locus.core.config import get_settings
from locus.core.errors import BudgetExceeded, ConfigError, InvariantViolation, LocusError
from locus.schemas.reports import ReportRecord

logger = logging.getLogger(__name__)

EXIT_OK = 0
EXIT_INVARIANT = 1
EXIT_USAGE = 2


def configure_logging(verbose: bool = False) -> None:
    level = logging.DEBUG if verbose else getattr(logging, get_settings().LOCUS_LOG_LEVEL.upper(), logging.INFO)
    logging.basicConfig(
        level=level,
        format='%(asctime)s - %(name)s - %(levelname)s - %(message)s',
        handlers=[
            logging.StreamHandler()  # stderr; stdout carries the report
        ],
        force=True,
    )


def write_output(output: Union[str, List[ReportRecord]], out: Optional[str]) -> None:
    text = output if isinstance(output, str) else "".join(record.to_line() + "\n" for record in output)
    if out:
        try:
            Path(out).write_text(text)
        except OSError as e:
            raise ConfigError(f"cannot write {out}: {e}") from e
        logger.info(f"✅ Report written to {out}")
    else:
        sys.stdout.write(text)


def _fail(kind: str, error: Exception, code: int) -> int:
    logger.error(f"❌ {kind}: {error}")
    print(f"locus: {kind}: {error}", file=sys.stderr)
    return code


def run(argv: Optional[Sequence[str]] = None) -> int:
    """Parse argv, run one command, and map failures to exit codes."""
    parser = build_parser()
    try:
        args = parser.parse_args(argv)
    except SystemExit as e:
        return EXIT_OK if e.code in (0, None) else EXIT_USAGE

    configure_logging(getattr(args, "verbose", False))
    try:
        write_output(args.handler(args), getattr(args, "out", None))
    except InvariantViolation as e:
        return _fail("invariant violated", e, EXIT_INVARIANT)
    except ConfigError as e:
        return _fail("configuration error", e, EXIT_USAGE)
    except BudgetExceeded as e:
        return _fail("budget exceeded", e, EXIT_USAGE)
    except LocusError as e:
        return _fail(type(e).__name__, e, EXIT_USAGE)
    except ValueError as e:
        return _fail("invalid argument", e, EXIT_USAGE)
    return EXIT_OK


def main() -> None:
    sys.exit(run())


if __name__ == "__main__":
    main()
