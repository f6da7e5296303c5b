import itertools
import logging
from fractions import Fraction
from typing import List, Optional

import numpy as np

from locus.core.decoder import BOTTOM
from locus.core.errors import ConfigError, InvariantViolation
from locus.core.linecode import (
    LineCodeParams,
    blr_rejection_rate,
    decode_sweep,
    distance_to_linear,
    encode,
    eta_sup,
    line_overwrite_outcomes,
    mk_params,
    overwrite_line,
    random_corruption,
    random_poly,
    rlcc_query_count,
    rldc_decode,
    rldc_query_count,
    self_correct_error,
)
from locus.core.runner import half_width, run_trials, trial_rng
from locus.schemas.config import ExperimentConfig
from locus.schemas.reports import BlrRecord, LinecodeRecord, ReportRecord, rational
from locus.services.common import banner

logger = logging.getLogger(__name__)

ACTIONS = ("decode", "correct", "params", "blr", "overwrite", "eta")
BLR_BITS = 4


def _record(params: LineCodeParams, op: str, config: ExperimentConfig, **fields) -> LinecodeRecord:
    return LinecodeRecord(
        op=op,
        t=params.t,
        n=params.n,
        d=params.d,
        num_lines=params.num_lines,
        N=params.N,
        message_bits=params.message_bits,
        r1=config.r1,
        r2=config.r2,
        reuse=config.reuse,
        **fields,
    )


def target_point(params: LineCodeParams, config: ExperimentConfig, rng: np.random.Generator) -> int:
    if config.point is None:
        return int(rng.integers(0, params.num_points))
    try:
        coordinates = [int(c) for c in config.point.split(",")]
    except ValueError as e:
        raise ConfigError(f"point must be comma-separated integers, got {config.point!r}") from e
    if len(coordinates) != params.n or any(not 0 <= c < params.q for c in coordinates):
        raise ConfigError(f"point {coordinates} is not in GF(2^{params.t})^{params.n}")
    return params.point_id(coordinates)


def run_sweep(params: LineCodeParams, config: ExperimentConfig, corrector: bool) -> LinecodeRecord:
    """Random rho-corruption of a random codeword, then a seeded decode sweep."""
    rng = trial_rng(config.seed, 0)
    clean = encode(params, random_poly(params, rng))
    word = random_corruption(clean, config.rho, rng)
    stats = decode_sweep(word, clean, config.trials, config.seed, corrector, config.r1, config.r2, config.reuse)
    formula = (rlcc_query_count if corrector else rldc_query_count)(config.r1, config.r2, config.reuse)
    if stats.max_queries > formula:
        raise InvariantViolation(f"decoder made {stats.max_queries} > {formula} queries")
    if config.rho == 0 and (stats.errors or stats.bottoms):
        raise InvariantViolation(f"uncorrupted word: {stats.errors} errors, {stats.bottoms} aborts")
    logger.info(f"🔍 error rate {stats.error_rate:.4f} ± {stats.half_width:.4f}, "
                f"abort rate {stats.bottom_rate:.4f}, {stats.max_queries} queries")
    return _record(
        params,
        "correct" if corrector else "decode",
        config,
        rho=config.rho,
        trials=config.trials,
        seed=config.seed,
        queries=stats.max_queries,
        query_formula=formula,
        error_rate=stats.error_rate,
        bottom_rate=stats.bottom_rate,
        half_width=stats.half_width,
    )


def run_overwrite(params: LineCodeParams, config: ExperimentConfig) -> LinecodeRecord:
    """Overwrite one line through x* with another polynomial's block; compare sampled and exact abort rates."""
    rng = trial_rng(config.seed, 0)
    f = random_poly(params, rng)
    g = random_poly(params, rng)
    while g == f:
        g = random_poly(params, rng)
    clean = encode(params, f)
    x = target_point(params, config, rng)
    line = params.lines_through[x][0]
    word = overwrite_line(clean, line, g)
    alpha, bit = config.alpha_star, config.bit
    predicted = line_overwrite_outcomes(word, x, alpha, bit, config.r2).get(BOTTOM, Fraction(0))

    def trial(index: int, coins: np.random.Generator) -> int:
        outcome, _ = rldc_decode(word, x, alpha, bit, config.r1, config.r2, config.reuse, coins)
        return int(outcome is BOTTOM)

    bottoms = sum(run_trials(trial, config.trials, config.seed))
    rate = bottoms / config.trials
    width = half_width(bottoms, config.trials)
    if abs(rate - float(predicted)) > width:
        raise InvariantViolation(f"abort rate {rate:.4f} is outside {float(predicted):.4f} ± {width:.4f}")
    logger.info(f"✅ abort rate {rate:.4f} matches predicted {predicted} within {width:.4f}")
    return _record(
        params,
        "overwrite",
        config,
        trials=config.trials,
        seed=config.seed,
        bottom_rate=rate,
        half_width=width,
        predicted_bottom=rational(predicted),
    )


def blr_facts(bits: int = BLR_BITS) -> List[BlrRecord]:
    """Every table on F_2^bits at distance 1 or 2 points from a linear function."""
    size = 1 << bits
    records = []
    for flips in (1, 2):
        distance = Fraction(flips, size)
        tables = 0
        min_rejection: Optional[Fraction] = None
        max_error = Fraction(0)
        for mask in range(size):
            linear = np.array([(v & mask).bit_count() & 1 for v in range(size)], dtype=np.uint8)
            for points in itertools.combinations(range(size), flips):
                table = linear.copy()
                table[list(points)] ^= 1
                measured, closest = distance_to_linear(table)
                if (measured, closest) != (distance, mask):
                    raise InvariantViolation(f"table at {points} from mask {mask} has distance {measured}")
                rejection = blr_rejection_rate(table)
                error = self_correct_error(table, closest)
                if rejection < distance:
                    raise InvariantViolation(f"BLR rejects with {rejection} < distance {distance}")
                if error > 2 * distance:
                    raise InvariantViolation(f"self-correction error {error} > 2 * {distance}")
                min_rejection = rejection if min_rejection is None else min(min_rejection, rejection)
                max_error = max(max_error, error)
                tables += 1
        logger.info(f"✅ distance {distance}: {tables} tables, rejection >= {min_rejection}, correction error <= {max_error}")
        records.append(BlrRecord(
            bits=bits,
            distance=rational(distance),
            tables=tables,
            min_rejection=rational(min_rejection),
            max_self_correct_error=rational(max_error),
        ))
    return records


def run_linecode(config: ExperimentConfig) -> List[ReportRecord]:
    """
    Line-code experiments, selected by config.action.

    decode / correct: random corruption sweep; params: sizes and query counts;
    blr: exhaustive linearity facts; overwrite: single-line adversary;
    eta: soundness envelopes.
    """
    if config.action not in ACTIONS:
        raise ConfigError(f"unknown linecode action {config.action!r}, expected one of {ACTIONS}")
    banner(f"📐 LINE CODE: {config.action.upper()}", f"t: {config.t} | n: {config.n} | d: {config.d} | seed: {config.seed}")

    if config.action == "blr":
        return blr_facts()

    params = mk_params(config.t, config.n, config.d)
    if config.action == "params":
        return [_record(
            params,
            "params",
            config,
            query_formula=rldc_query_count(config.r1, config.r2, config.reuse),
            rlcc_formula=rlcc_query_count(config.r1, config.r2, config.reuse),
        )]
    if config.action in ("decode", "correct"):
        return [run_sweep(params, config, config.action == "correct")]
    if config.action == "overwrite":
        return [run_overwrite(params, config)]

    d_over_q = params.d / params.q
    value, argmax = eta_sup(float(config.delta), d_over_q, config.r1, config.r2)
    corrector, _ = eta_sup(float(config.delta), d_over_q, config.r1, config.r2, corrector=True, eta_rldc=value)
    logger.info(f"🔍 decoder envelope {value:.4f} at epsilon {argmax:.3f}, corrector envelope {corrector:.4f}")
    return [
        _record(params, "eta", config, value=value),
        _record(params, "eta_rlcc", config, value=corrector),
    ]
