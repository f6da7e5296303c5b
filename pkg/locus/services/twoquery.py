import logging
from math import floor
from typing import List

from locus.core.decoder import BOTTOM, RandomFlipAdversary, TargetKind, eval_decoder
from locus.core.errors import InvariantViolation
from locus.core.twoquery import reduce
from locus.schemas.config import ExperimentConfig
from locus.schemas.reports import ReductionRecord, ReportRecord, rational
from locus.services.common import banner, canonical_decoder, load_code_for, load_decoder_for

logger = logging.getLogger(__name__)


def run_twoquery(config: ExperimentConfig) -> List[ReportRecord]:
    """Reduce a 2-query relaxed decoder and check the reduced decoder exhaustively at the certified radius."""
    banner("✂️ TWO-QUERY REDUCTION", f"variant: {config.variant} | delta: {config.delta}")
    code = load_code_for(config)
    kind = TargetKind.MESSAGE if config.variant == "rldc" else TargetKind.CODEWORD
    if config.decoder:
        decoder = load_decoder_for(config, code, kind)
    else:
        decoder = canonical_decoder(code, 2, kind)

    reduction = reduce(code, decoder, config.delta)
    bound = floor(2 / config.delta)
    if reduction.mode == "rldc" and reduction.k_prime < reduction.k - bound:
        raise InvariantViolation(f"k' = {reduction.k_prime} < k - floor(2/delta) = {reduction.k - bound}")

    report = eval_decoder(reduction.decoder, "exact", RandomFlipAdversary(), reduction.certificate.radius, ldc=True)
    for target in reduction.decoder.targets:
        for message in reduction.code.messages():
            if BOTTOM in reduction.decoder.outcome_distribution(target, reduction.code.encode(message)):
                raise InvariantViolation(f"reduced decoder aborts on {target}")
    if report.soundness_error > reduction.certificate.soundness:
        raise InvariantViolation(
            f"reduced error {report.soundness_error} exceeds input soundness {reduction.certificate.soundness}"
        )
    logger.info(f"✅ Reduced error {report.soundness_error} <= {reduction.certificate.soundness}")

    return [ReductionRecord(
        mode=reduction.mode,
        X=[str(t) for t in reduction.X],
        k=reduction.k,
        k_prime=reduction.k_prime,
        radius=rational(reduction.certificate.radius),
        soundness=rational(reduction.certificate.soundness),
        measured=rational(report.soundness_error),
        class_mass={
            str(target): {cls.value: rational(mass) for cls, mass in sorted(masses.items())}
            for target, masses in reduction.class_mass.items()
        },
    )]
