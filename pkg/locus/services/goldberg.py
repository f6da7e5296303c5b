import logging
from typing import List

from locus.core.decoder import RandomFlipAdversary
from locus.core.errors import InvariantViolation, LocusError
from locus.core.goldberg import goldberg_pipeline, random_adaptive_decoder, relabel_steps, rerandomize
from locus.core.runner import trial_rng
from locus.schemas.config import ExperimentConfig
from locus.schemas.reports import GoldbergStageRecord, ReportRecord, rational
from locus.services.common import banner, load_code_for

logger = logging.getLogger(__name__)


def run_goldberg(config: ExperimentConfig) -> List[ReportRecord]:
    """
    Push seeded random adaptive decoders through the nonadaptive conversion.

    Every toy is evaluated exactly after each stage; the per-leaf relabeling
    bookkeeping is checked on the rerandomized input.
    """
    banner("🌳 ADAPTIVE TO NONADAPTIVE", f"toys: {config.toys} | q: {config.q} | delta: {config.delta} | seed: {config.seed}")
    code = load_code_for(config)
    adversary = RandomFlipAdversary()
    records: List[ReportRecord] = []

    for toy in range(config.toys):
        decoder = random_adaptive_decoder(code, config.q, trial_rng(config.seed, toy))
        try:
            result = goldberg_pipeline(decoder, adversary, config.delta)
            broken = [s for s in relabel_steps(rerandomize(decoder), adversary, config.delta) if not s.holds]
        except LocusError as e:
            logger.error(f"❌ Toy {toy} failed: {e}")
            raise
        if broken:
            step = broken[0]
            raise InvariantViolation(
                f"toy {toy}: relabeling {step.target} leaf {step.query_set}/{step.view} raised soundness "
                f"{step.soundness_before} -> {step.soundness_after} with completeness error "
                f"{step.epsilon_before} -> {step.epsilon_after}"
            )

        conversion = result.conversion
        for stage in result.stages:
            records.append(GoldbergStageRecord(
                toy=toy,
                stage=stage.stage,
                completeness=rational(stage.completeness),
                soundness=rational(stage.soundness),
                toxic_rate=rational(stage.toxic_rate),
                q_max=stage.q_max,
                certified=rational(conversion.certified_soundness) if stage.stage == "nonadaptive" else None,
            ))
        logger.info(f"✅ Toy {toy}: soundness {result.stages[0].soundness} -> {result.stages[-1].soundness}")
    return records
