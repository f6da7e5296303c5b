"""
Heavy/light decomposition and smooth-decoder extraction.

A query set is smoothable for a target when its light part alone already spans
the target's decoding vector; conditioning on smoothable sets and dropping
their heavy coordinates yields a smooth decoder.
"""

import itertools
import logging
from dataclasses import dataclass
from fractions import Fraction
from math import comb, floor
from typing import Dict, FrozenSet, Iterable, List, Optional, Sequence, Tuple, Union

import numpy as np

from locus.core.codealg import LinearCode, as_ints, in_span
from locus.core.config import get_settings
from locus.core.decoder import (
    Decoder,
    LinearForm,
    LinearFormDecoder,
    NonadaptiveDecoder,
    QueryDistribution,
    RandomFlipAdversary,
    Target,
    eval_decoder,
    target_vector,
)
from locus.core.errors import BudgetExceeded, HypothesisViolation, InvariantViolation

logger = logging.getLogger(__name__)


@dataclass(frozen=True)
class HeavyLightPartition:
    target: Optional[Target]
    heavy: FrozenSet[int]
    light: FrozenSet[int]
    threshold: Fraction  # q / (delta n); mass exactly at the threshold is light


@dataclass
class SmoothExtraction:
    """Split of a decoder into its smooth part and its remainder."""
    ldc_part: Optional[NonadaptiveDecoder]  # smoothable sets trimmed to their light part
    rldc_part: Optional[NonadaptiveDecoder]  # non-smoothable sets
    good_part: Optional[NonadaptiveDecoder]  # smoothable sets before trimming
    p_good: Dict[Target, Fraction]
    partitions: Dict[Target, HeavyLightPartition]
    flagged: FrozenSet[Target]  # targets with p_good = 0


@dataclass(frozen=True)
class LdcCertificate:
    """(q, radius, completeness, soundness) parameters of a local decoder."""
    q: int
    radius: Fraction  # fraction of n
    completeness: Fraction
    soundness: Fraction


@dataclass(frozen=True)
class Matching:
    target: Target
    vectors: Tuple[LinearForm, ...]

    def __len__(self) -> int:
        return len(self.vectors)


def heavy_light(dist: QueryDistribution, q: int, delta: Fraction, n: int, target: Optional[Target] = None) -> HeavyLightPartition:
    """
    Partition [n] into coordinates queried with probability above q/(delta n) and the rest.

    Args:
        dist: Query distribution for one target
        q: Query bound, at least the largest set size
        delta: Corruption fraction, 0 < delta <= 1
        n: Block length

    Returns:
        HeavyLightPartition
    """
    delta = Fraction(delta)
    if not 0 < delta <= 1:
        raise ValueError(f"delta must lie in (0, 1], got {delta}")
    if dist.max_size > q:
        raise ValueError(f"distribution has a set of size {dist.max_size} > q={q}")

    threshold = Fraction(q) / (delta * n)
    probabilities = dist.coordinate_probabilities(n)
    heavy = frozenset(j for j, p in enumerate(probabilities) if p > threshold)

    # q >= sum_j Pr[j in Q] >= |H| q / (delta n)
    if len(heavy) > delta * n:
        raise InvariantViolation(f"{len(heavy)} heavy coordinates exceed delta n = {delta * n}")
    light = frozenset(range(n)) - heavy
    return HeavyLightPartition(target, heavy, light, threshold)


def is_smoothable(code: LinearCode, query_set: Iterable[int], light: Iterable[int], vstar) -> bool:
    light_part = sorted(set(query_set) & set(light))
    return in_span(vstar, light_part, code) is not None


def extract_smooth(decoder: NonadaptiveDecoder, delta: Fraction) -> SmoothExtraction:
    """Split each target's distribution into smoothable and non-smoothable parts."""
    code = decoder.code
    ldc, rldc, good = {}, {}, {}
    p_good: Dict[Target, Fraction] = {}
    partitions: Dict[Target, HeavyLightPartition] = {}

    for target, dist in decoder.distributions.items():
        partition = heavy_light(dist, decoder.q, delta, code.n, target)
        partitions[target] = partition
        vstar = target_vector(code, target)

        smoothable = {q: is_smoothable(code, q, partition.light, vstar) for q in dist.support}
        good_dist, mass = dist.condition(lambda q: smoothable[q])
        bad_dist, _ = dist.condition(lambda q: not smoothable[q])
        p_good[target] = mass

        if good_dist is not None:
            good[target] = good_dist
            ldc[target] = QueryDistribution.from_weights(
                [(tuple(j for j in q if j in partition.light), w) for q, w in good_dist.entries]
            )
        if bad_dist is not None:
            rldc[target] = bad_dist
        logger.debug(f"{target}: |H|={len(partition.heavy)} p_good={mass}")

    flagged = frozenset(t for t, p in p_good.items() if p == 0)
    if flagged:
        logger.warning(f"⚠️ No smoothable mass for targets {sorted(map(str, flagged))}")

    def build(parts):
        return NonadaptiveDecoder(code, parts, q=decoder.q) if parts else None

    return SmoothExtraction(build(ldc), build(rldc), build(good), p_good, partitions, flagged)


def smoothness(decoder: Union[NonadaptiveDecoder, LinearFormDecoder]) -> Fraction:
    """Largest probability with which any target queries any single coordinate."""
    n = decoder.code.n
    return max(
        (max(decoder.query_distribution(t).coordinate_probabilities(n), default=Fraction(0)) for t in decoder.targets),
        default=Fraction(0),
    )


def smooth_to_ldc(decoder: Decoder, eta: Fraction, epsilon: Fraction) -> LdcCertificate:
    """(q, eta*epsilon, 1, epsilon) parameters of an eta-smooth decoder."""
    eta, epsilon = Fraction(eta), Fraction(epsilon)
    n = decoder.code.n
    limit = 1 / (eta * n)
    for target in decoder.targets:
        probabilities = decoder.query_distribution(target).coordinate_probabilities(n)
        for j, p in enumerate(probabilities):
            if p > limit:
                raise HypothesisViolation(
                    f"coordinate {j} is queried with probability {p} > 1/(eta n) = {limit} for {target}"
                )
    return LdcCertificate(decoder.query_count, eta * epsilon, Fraction(1), epsilon)


def verify_ldc(decoder: Decoder, certificate: LdcCertificate) -> Fraction:
    """Exhaustive LDC soundness at the certified radius; raises if it exceeds the certificate."""
    report = eval_decoder(decoder, "exact", RandomFlipAdversary(), certificate.radius, ldc=True)
    if report.completeness != 1:
        raise InvariantViolation(f"completeness {report.completeness} != 1")
    if report.soundness_error > certificate.soundness:
        raise InvariantViolation(
            f"measured error {report.soundness_error} exceeds certified {certificate.soundness}"
        )
    return report.soundness_error


def certify_ldc(extraction: SmoothExtraction, delta: Fraction, epsilon: Fraction, alpha: Optional[Fraction] = None) -> Dict[str, LdcCertificate]:
    """
    Certificates for the extracted smooth part.

    Args:
        extraction: Result of extract_smooth
        delta: Corruption fraction used for the heavy threshold
        epsilon: Target soundness
        alpha: A-priori lower bound on p_good; omitted gives only the measured certificate

    Returns:
        {"measured": ..., "a_priori": ...}; radii are fractions of n rounded down to whole coordinates
    """
    if extraction.ldc_part is None:
        raise HypothesisViolation("no target has smoothable mass")
    decoder = extraction.ldc_part
    n, q = decoder.code.n, decoder.q
    delta, epsilon = Fraction(delta), Fraction(epsilon)

    def radius(a: Fraction) -> Fraction:
        return Fraction(floor(a * delta * epsilon * n / q), n)

    measured_alpha = min(extraction.p_good[t] for t in decoder.targets)
    certificates = {"measured": LdcCertificate(q, radius(measured_alpha), Fraction(1), epsilon)}
    if alpha is not None:
        certificates["a_priori"] = LdcCertificate(q, radius(Fraction(alpha)), Fraction(1), epsilon)
    return certificates


# ============================================================================
# Matching decoders
# ============================================================================

def find_matchings(code: LinearCode, target: Target, q: int, budget: Optional[int] = None) -> Matching:
    """
    Greedy search, by (size, lexicographic support), for disjoint q-sparse decoding vectors.

    The budget bounds the number of candidate subsets of size <= q, not the
    work per subset: each candidate costs one span solve over the k columns.
    """
    budget = budget or get_settings().LOCUS_MATCHING_BUDGET
    space = sum(comb(code.n, s) for s in range(1, q + 1))
    if space > budget:
        raise BudgetExceeded(f"matching search visits {space} subsets, budget is {budget}")

    vstar = target_vector(code, target)
    used: set = set()
    vectors: List[LinearForm] = []
    for size in range(1, q + 1):
        for subset in itertools.combinations(range(code.n), size):
            if used.intersection(subset):
                continue
            coefficients = in_span(vstar, subset, code)
            if coefficients is None:
                continue
            raw = as_ints(coefficients)
            support = tuple(j for j, c in zip(subset, raw) if c)
            if not support:
                continue
            vectors.append(LinearForm(support, tuple(int(c) for c in raw if c)))
            used.update(support)

    logger.debug(f"Matching for {target}: {len(vectors)} vectors")
    return Matching(target, tuple(vectors))


def matching_decoder(code: LinearCode, matchings: Sequence[Matching]) -> LinearFormDecoder:
    """Uniform choice of a matching vector, output its inner product with the word."""
    if not matchings:
        raise ValueError("no matchings supplied")
    forms = {}
    for matching in matchings:
        if not matching.vectors:
            raise HypothesisViolation(f"empty matching for {matching.target}")
        weight = Fraction(1, len(matching.vectors))
        forms[matching.target] = [(weight, v) for v in matching.vectors]
    return LinearFormDecoder(code, forms)


@dataclass(frozen=True)
class StrongSoundnessRecord:
    target: Target
    weight: int
    worst_error: Fraction
    bound: Fraction  # q * weight / (delta n) with delta = q |matching| / n


def strong_soundness_check(decoder: LinearFormDecoder, budget: Optional[int] = None) -> List[StrongSoundnessRecord]:
    """
    Exhaustively check error <= q*Delta/(delta n) for every corruption weight up to |matching|.

    Errors depend only on the error pattern (the decoder is linear), so the
    all-zero codeword is used throughout.
    """
    code = decoder.code
    budget = budget or get_settings().LOCUS_EXACT_BUDGET
    q = decoder.query_count
    records: List[StrongSoundnessRecord] = []

    for target in decoder.targets:
        size = len(decoder.forms[target])
        delta_n = Fraction(q * size)
        patterns = sum(comb(code.n, w) * (code.order - 1) ** w for w in range(min(size, code.n) + 1))
        if patterns > budget:
            raise BudgetExceeded(f"strong soundness check needs {patterns} patterns, budget is {budget}")

        worst: Dict[int, Fraction] = {}
        zero = np.zeros(code.n, dtype=np.int64)
        for weight in range(min(size, code.n) + 1):
            for positions in itertools.combinations(range(code.n), weight):
                for shifts in itertools.product(range(1, code.order), repeat=weight):
                    word = zero.copy()
                    word[list(positions)] = shifts
                    dist = decoder.outcome_distribution(target, word)
                    error = 1 - dist.get(0, Fraction(0))
                    worst[weight] = max(worst.get(weight, Fraction(0)), error)

        for weight, error in sorted(worst.items()):
            bound = q * weight / delta_n
            if error > bound:
                raise InvariantViolation(f"{target}: error {error} at weight {weight} exceeds {bound}")
            records.append(StrongSoundnessRecord(target, weight, error, bound))
    return records
