import logging
from fractions import Fraction
from typing import List

from locus.core.codealg import LinearCode, random_message
from locus.core.decoder import NonadaptiveDecoder, Target, TargetKind, target_vector, truth
from locus.core.errors import InvariantViolation, LocusError
from locus.core.fool import AttackResult, FoolingInstance, analyze, attack_rldc, success_probability
from locus.core.runner import trial_rng
from locus.schemas.config import ExperimentConfig
from locus.schemas.reports import AttackWitnessRecord, FoolingRecord, ReportRecord, rational
from locus.services.common import banner, load_code_for, load_decoder_for, targets_for

logger = logging.getLogger(__name__)


def fooling_records(code: LinearCode, decoder: NonadaptiveDecoder, target: Target, message, result: AttackResult, exact: bool) -> List[FoolingRecord]:
    """Per bad query set: the fooling instance with H = Q & heavy, L = Q - heavy, and its success probability."""
    vstar = target_vector(code, target)
    value = truth(code, target, message)
    sigma = next(s for s in range(code.order) if s != value)
    records = []
    for query_set in result.bad_sets:
        heavy = tuple(j for j in query_set if j in result.heavy)
        light = tuple(j for j in query_set if j not in result.heavy)
        inst = FoolingInstance(code, query_set, heavy, light, vstar, sigma, message)
        analysis = analyze(inst)
        headline = Fraction(1, code.order ** min(len(heavy), len(light)))
        lower = success_probability(inst, "lower_bound")
        probability = success_probability(inst, "exact") if exact else None
        if probability is not None and probability < max(lower, headline):
            raise InvariantViolation(f"{target} on {query_set}: success {probability} below {max(lower, headline)}")
        records.append(FoolingRecord(
            target=str(target),
            Q=list(query_set),
            H=list(heavy),
            L=list(light),
            sigma=sigma,
            quotient=analysis.quotient,
            exact=rational(probability),
            lower_bound=rational(lower),
            headline_bound=rational(headline),
        ))
    return records


def run_fool(config: ExperimentConfig) -> List[ReportRecord]:
    """
    Attack every requested target of a relaxed decoder with heavy-set corruptions.

    Args:
        config: Uses code, decoder, target, delta, mode, trials and seed

    Returns:
        One attack witness per target followed by its fooling instances
    """
    banner("🎯 FOOLING ATTACK", f"delta: {config.delta} | mode: {config.mode} | seed: {config.seed}")
    code = load_code_for(config)
    decoder = load_decoder_for(config, code, TargetKind.MESSAGE)
    exact = config.mode == "exact"
    message = random_message(code, trial_rng(config.seed, 0))
    logger.info(f"🔍 {code!r}, q={decoder.q}, message {message.tolist()}")

    records: List[ReportRecord] = []
    for index, target in enumerate(targets_for(config, decoder)):
        try:
            result = attack_rldc(
                decoder,
                target,
                message,
                config.delta,
                rng=trial_rng(config.seed, index + 1),
                trials=config.trials,
                mode="exact" if exact else "sample",
            )
        except LocusError as e:
            logger.error(f"❌ Attack on {target} failed: {e}")
            raise

        records.append(AttackWitnessRecord(
            target=str(target),
            Q=[list(q) for q in result.bad_sets],
            H=sorted(result.heavy),
            L=sorted(result.light),
            y=list(result.witness) if result.witness is not None else None,
            exact_error=rational(result.error),
            mean_error=rational(result.mean_error),
            bound=rational(result.bound),
            bad_mass=rational(result.bad_mass),
            no_attack=result.no_attack,
        ))
        if not result.no_attack:
            records.extend(fooling_records(code, decoder, target, message, result, exact))
            if result.error >= result.bound:
                logger.info(f"✅ {target}: witness error {result.error} >= {result.bound}")
            else:
                logger.warning(f"⚠️ {target}: witness error {result.error} below {result.bound}")
    return records
