import logging
from typing import List

from locus.core.decoder import RandomFlipAdversary, Target, TargetKind, estimate_error, eval_decoder, repeat_decoder
from locus.core.errors import InvariantViolation
from locus.schemas.config import ExperimentConfig
from locus.schemas.reports import RepeatRecord, ReportRecord, rational
from locus.services.common import banner, load_code_for, load_decoder_for

logger = logging.getLogger(__name__)


def run_repeat(config: ExperimentConfig) -> List[ReportRecord]:
    """
    Sequential repetition: exact soundness of the repeated decoder against the base decoder's power.

    Over F_2 the two are equal; over larger fields the repeated error is at
    most the power. A seeded estimate on the base decoder's witness word is
    reported alongside.
    """
    banner("🔁 REPETITION", f"repetitions: {config.repetitions} | delta: {config.delta} | seed: {config.seed}")
    code = load_code_for(config)
    decoder = load_decoder_for(config, code, TargetKind.MESSAGE)
    adversary = RandomFlipAdversary()

    base = eval_decoder(decoder, "exact", adversary, config.delta)
    repeated = repeat_decoder(decoder, config.repetitions)
    report = eval_decoder(repeated, "exact", adversary, config.delta)
    expected = base.soundness_error ** config.repetitions

    if base.completeness == 1 and report.completeness != 1:
        raise InvariantViolation(f"repetition lost perfect completeness: {report.completeness}")
    if report.soundness_error > expected or (code.order == 2 and report.soundness_error != expected):
        raise InvariantViolation(f"repeated soundness {report.soundness_error}, expected {expected}")
    logger.info(f"✅ soundness {base.soundness_error} -> {report.soundness_error} after {config.repetitions} repetitions")

    estimate, width = None, None
    if config.trials and base.witness is not None:
        witness = base.witness
        estimate, width = estimate_error(
            repeated,
            Target.parse(witness["target"]),
            witness["message"],
            witness["word"],
            config.trials,
            config.seed,
        )
        logger.info(f"🔍 sampled error on the witness word {estimate:.4f} ± {width:.4f}")

    return [RepeatRecord(
        repetitions=config.repetitions,
        base_soundness=rational(base.soundness_error),
        soundness=rational(report.soundness_error),
        expected=rational(expected),
        estimate=estimate,
        half_width=width,
    )]
