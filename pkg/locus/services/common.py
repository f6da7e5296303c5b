import itertools
import logging
from fractions import Fraction
from pathlib import Path
from typing import List, Optional

from locus.core.codealg import LinearCode, in_span, load_code, scalar_field
from locus.core.decoder import (
    NonadaptiveDecoder,
    QueryDistribution,
    Target,
    TargetKind,
    all_targets,
    load_decoder,
    target_vector,
)
from locus.core.errors import ConfigError, HypothesisViolation
from locus.schemas.config import ExperimentConfig

logger = logging.getLogger(__name__)

# [3, 2] code: both message symbols plus their sum
DEFAULT_ROWS = ((1, 0), (0, 1), (1, 1))


def banner(title: str, details: str = "") -> None:
    logger.info("=" * 80)
    logger.info(title)
    if details:
        logger.info(f"   {details}")
    logger.info("=" * 80)


def read_text(path: str, what: str) -> str:
    try:
        return Path(path).read_text()
    except OSError as e:
        raise ConfigError(f"cannot read {what} file {path}: {e}") from e


def default_code(field: str = "GF(2)") -> LinearCode:
    return LinearCode.from_rows(scalar_field(field), DEFAULT_ROWS)


def load_code_for(config: ExperimentConfig) -> LinearCode:
    """The code named by the config, or the built-in [3, 2] code over config.field."""
    if config.code:
        return load_code(read_text(config.code, "code"))
    return default_code(config.field)


def determining_sets(code: LinearCode, target: Target, q: int) -> List[tuple]:
    """Inclusion-minimal coordinate sets of size <= q whose rows span the target vector."""
    vstar = target_vector(code, target)
    found: List[tuple] = []
    for size in range(1, min(q, code.n) + 1):
        for subset in itertools.combinations(range(code.n), size):
            if any(set(s) <= set(subset) for s in found):
                continue
            if in_span(vstar, subset, code) is not None:
                found.append(subset)
    if not found:
        raise HypothesisViolation(f"no set of at most {q} coordinates determines {target}")
    return found


def canonical_decoder(code: LinearCode, q: int, kind: TargetKind = TargetKind.MESSAGE) -> NonadaptiveDecoder:
    """Uniform over the minimal determining sets of every target."""
    distributions = {}
    for target in all_targets(code, kind):
        sets = determining_sets(code, target, q)
        distributions[target] = QueryDistribution.from_weights([(s, Fraction(1, len(sets))) for s in sets])
    return NonadaptiveDecoder(code, distributions, q=q)


def load_decoder_for(config: ExperimentConfig, code: LinearCode, kind: TargetKind = TargetKind.MESSAGE) -> NonadaptiveDecoder:
    if config.decoder:
        return load_decoder(read_text(config.decoder, "decoder"), code)
    return canonical_decoder(code, config.q, kind)


def targets_for(config: ExperimentConfig, decoder, kind: Optional[TargetKind] = None) -> List[Target]:
    if config.target is None:
        return [t for t in decoder.targets if kind is None or t.kind is kind]
    try:
        target = Target.parse(config.target)
    except ValueError as e:
        raise ConfigError(str(e)) from e
    target.validate(decoder.code)
    if target not in decoder.targets:
        raise ConfigError(f"decoder has no distribution for target {target}")
    return [target]


def fraction_or(value, default) -> Fraction:
    return Fraction(default) if value is None else Fraction(value)
