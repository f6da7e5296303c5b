import logging
from fractions import Fraction
from typing import List

from locus.core.decoder import RandomFlipAdversary, TargetKind, all_targets, eval_decoder
from locus.core.errors import BudgetExceeded, HypothesisViolation, LocusError
from locus.core.smooth import (
    certify_ldc,
    extract_smooth,
    find_matchings,
    matching_decoder,
    smooth_to_ldc,
    smoothness,
    strong_soundness_check,
    verify_ldc,
)
from locus.schemas.config import ExperimentConfig
from locus.schemas.reports import (
    CertificateRecord,
    EvalRecord,
    ExtractionRecord,
    MatchingRecord,
    ReportRecord,
    rational,
)
from locus.services.common import banner, fraction_or, load_code_for, load_decoder_for

logger = logging.getLogger(__name__)


def run_extract(config: ExperimentConfig) -> List[ReportRecord]:
    """
    Split a decoder into its smooth and non-smooth parts and certify the smooth part as an LDC.

    The input decoder is evaluated first; its measured soundness and the
    configured alpha decide whether the a-priori certificate is emitted.
    """
    banner("🧮 SMOOTH EXTRACTION", f"delta: {config.delta} | epsilon: {config.epsilon} | alpha: {config.alpha}")
    code = load_code_for(config)
    decoder = load_decoder_for(config, code, TargetKind.MESSAGE)
    delta = config.delta
    epsilon = fraction_or(config.epsilon, Fraction(1, 2))
    records: List[ReportRecord] = []

    report = eval_decoder(decoder, "exact", RandomFlipAdversary(), delta, seed=config.seed)
    records.append(EvalRecord(
        label="input",
        mode="exact",
        completeness=rational(report.completeness),
        soundness=rational(report.soundness_error),
        q_max=report.query_count_max,
        seed=config.seed,
        witness=report.witness,
    ))

    extraction = extract_smooth(decoder, delta)
    for target in decoder.targets:
        records.append(ExtractionRecord(
            target=str(target),
            heavy=sorted(extraction.partitions[target].heavy),
            p_good=rational(extraction.p_good[target]),
            flagged=target in extraction.flagged,
        ))

    if extraction.ldc_part is None:
        logger.warning("⚠️ Nothing smoothable, no certificate")
        return records

    alpha = config.alpha
    if alpha is not None:
        threshold = (1 - alpha) / Fraction(code.order ** (decoder.q // 2))
        if report.soundness_error > threshold:
            logger.warning(f"⚠️ soundness {report.soundness_error} above (1-alpha)|F|^(-q/2) = {threshold}, "
                           f"the a-priori certificate does not apply")
            alpha = None

    ldc = extraction.ldc_part
    certificates = certify_ldc(extraction, delta, epsilon, alpha)
    eta = 1 / (smoothness(ldc) * code.n)
    certificates["smooth"] = smooth_to_ldc(ldc, eta, epsilon)
    for label, certificate in sorted(certificates.items()):
        verified = verify_ldc(ldc, certificate)
        logger.info(f"✅ {label}: radius {certificate.radius}, error {verified} <= {certificate.soundness}")
        records.append(CertificateRecord(
            label=label,
            q=certificate.q,
            radius=rational(certificate.radius),
            completeness=rational(certificate.completeness),
            soundness=rational(certificate.soundness),
            verified_error=rational(verified),
        ))

    records.extend(matching_records(code, decoder.q))
    return records


def matching_records(code, q: int) -> List[MatchingRecord]:
    """Strong soundness of the matching decoder for the message targets, when every target has a matching."""
    try:
        matchings = [find_matchings(code, target, q) for target in all_targets(code, TargetKind.MESSAGE)]
        records = strong_soundness_check(matching_decoder(code, matchings))
    except (HypothesisViolation, BudgetExceeded) as e:
        logger.warning(f"⚠️ Matching decoder skipped: {e}")
        return []
    except LocusError as e:
        logger.error(f"❌ Strong soundness check failed: {e}")
        raise
    sizes = {m.target: len(m) for m in matchings}
    return [
        MatchingRecord(
            target=str(r.target),
            size=sizes[r.target],
            weight=r.weight,
            worst_error=rational(r.worst_error),
            bound=rational(r.bound),
        )
        for r in records
    ]
