import logging
from fractions import Fraction
from typing import List

from locus.core.attack import DECODERS, LineQueryDecoder, attack_experiment, coset_symmetry_check
from locus.core.errors import ConfigError, InvariantViolation
from locus.core.linecode import mk_params
from locus.core.runner import trial_rng
from locus.schemas.config import ExperimentConfig
from locus.schemas.reports import ErasureRecord, ReportRecord, rational
from locus.services.common import banner
from locus.services.linecode import target_point

logger = logging.getLogger(__name__)


def line_decoders(name: str) -> List[LineQueryDecoder]:
    if name == "all":
        return [cls() for cls in DECODERS.values()]
    if name not in DECODERS:
        raise ConfigError(f"unknown line decoder {name!r}, expected one of {sorted(DECODERS)} or 'all'")
    return [DECODERS[name]()]


def run_attack(config: ExperimentConfig) -> List[ReportRecord]:
    """
    Erase every line through x* and measure line-query decoders with at most d queries.

    In exact mode every polynomial is enumerated, the success probability must
    be exactly 1/2 for a nonzero alpha*, and the coset symmetry is checked.
    """
    banner("🕳️ LINE ERASURE ATTACK", f"t: {config.t} | n: {config.n} | d: {config.d} | decoder: {config.line_decoder}")
    params = mk_params(config.t, config.n, config.d)
    x = target_point(params, config, trial_rng(config.seed, 0))
    alpha, bit = config.alpha_star, config.bit
    if not 0 <= alpha < params.q or not 0 <= bit < params.t:
        raise ConfigError(f"alpha_star must lie in [0, {params.q}) and bit in [0, {params.t})")
    mode = "exact" if config.mode == "exact" else "monte_carlo"
    logger.info(f"🔍 x* = {params.point(x)}, alpha* = {alpha}, bit {bit}")

    records: List[ReportRecord] = []
    for decoder in line_decoders(config.line_decoder):
        result = attack_experiment(decoder, params, x, alpha, bit, mode, config.trials, config.seed)
        coset = None
        if mode == "exact":
            if alpha and result.success != Fraction(1, 2):
                raise InvariantViolation(f"{decoder.name} succeeds with {result.success}, not 1/2")
            coset = coset_symmetry_check(decoder, params, x, alpha, bit)
            if not coset.ok:
                raise InvariantViolation(
                    f"{decoder.name}: {coset.path_violations} path and {coset.bit_violations} bit violations, "
                    f"e.g. {coset.examples[:1]}"
                )
            logger.info(f"✅ {decoder.name}: success {result.success}, {coset.checked} coset checks")
        else:
            logger.info(f"🔍 {decoder.name}: success {result.success:.4f} ± {result.half_width:.4f}")

        records.append(ErasureRecord(
            t=params.t,
            n=params.n,
            d=params.d,
            decoder_name=decoder.name,
            mode=mode,
            success=rational(result.success) if mode == "exact" else None,
            estimate=float(result.success) if mode != "exact" else None,
            half_width=result.half_width,
            erased_fraction=rational(result.erased_fraction),
            coset_checked=coset.checked if coset else None,
            coset_ok=coset.ok if coset else None,
        ))
    return records
