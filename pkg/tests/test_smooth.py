from fractions import Fraction

import galois
import pytest

from locus.core.codealg import LinearCode
from locus.core.decoder import NonadaptiveDecoder, QueryDistribution, Target, eval_decoder
from locus.core.errors import BudgetExceeded, HypothesisViolation
from locus.core.smooth import (
    certify_ldc,
    extract_smooth,
    find_matchings,
    heavy_light,
    matching_decoder,
    smooth_to_ldc,
    smoothness,
    strong_soundness_check,
    verify_ldc,
)


@pytest.fixture
def uniform_singletons(repetition_code, m0):
    dist = QueryDistribution.from_weights({(j,): Fraction(1, 3) for j in range(3)})
    return NonadaptiveDecoder(repetition_code, {m0: dist})


@pytest.fixture
def wide_decoder(wide_code, m0):
    dist = QueryDistribution.from_weights({
        (0,): Fraction(1, 2),
        (1, 2): Fraction(1, 4),
        (3, 4): Fraction(1, 4),
    })
    return NonadaptiveDecoder(wide_code, {m0: dist}, q=2)


def test_threshold_mass_is_light():
    dist = QueryDistribution.from_weights({(0, 1): Fraction(1, 2), (0, 2): Fraction(1, 2)})
    partition = heavy_light(dist, q=2, delta=Fraction(1, 2), n=8)
    assert partition.threshold == Fraction(1, 2)
    assert partition.heavy == {0}
    assert partition.light == set(range(1, 8))


def test_point_mass_is_heavy():
    partition = heavy_light(QueryDistribution.point((0,)), q=1, delta=Fraction(1, 2), n=4)
    assert partition.heavy == {0}


def test_heavy_light_rejects_bad_arguments():
    dist = QueryDistribution.point((0, 1))
    with pytest.raises(ValueError):
        heavy_light(dist, q=2, delta=Fraction(0), n=4)
    with pytest.raises(ValueError):
        heavy_light(dist, q=1, delta=Fraction(1, 2), n=4)


def test_extract_smooth(wide_decoder, m0):
    extraction = extract_smooth(wide_decoder, Fraction(1))
    assert extraction.p_good[m0] == Fraction(1, 2)
    assert extraction.partitions[m0].heavy == {0}
    assert extraction.ldc_part.query_distribution(m0).entries == (
        ((1, 2), Fraction(1, 2)),
        ((3, 4), Fraction(1, 2)),
    )
    assert extraction.rldc_part.query_distribution(m0).support == ((0,),)
    assert not extraction.flagged
    assert smoothness(extraction.ldc_part) == Fraction(1, 2)


def test_extracted_part_decodes_correctly(wide_decoder):
    extraction = extract_smooth(wide_decoder, Fraction(1))
    assert eval_decoder(extraction.ldc_part).completeness == 1


def test_target_without_smoothable_mass_is_flagged(toy_code, m0):
    decoder = NonadaptiveDecoder(toy_code, {m0: QueryDistribution.point((0,))})
    extraction = extract_smooth(decoder, Fraction(1))
    assert extraction.flagged == {m0}
    assert extraction.ldc_part is None
    with pytest.raises(HypothesisViolation):
        certify_ldc(extraction, Fraction(1), Fraction(1, 2))


def test_certify_ldc_radii(wide_decoder):
    extraction = extract_smooth(wide_decoder, Fraction(1))
    certificates = certify_ldc(extraction, Fraction(1), Fraction(1, 2), alpha=Fraction(1))
    assert certificates["measured"].radius == 0
    assert certificates["a_priori"].radius == Fraction(1, 5)
    assert certificates["a_priori"].q == 2


def test_smooth_to_ldc(uniform_singletons):
    certificate = smooth_to_ldc(uniform_singletons, eta=Fraction(1), epsilon=Fraction(1, 3))
    assert certificate.radius == Fraction(1, 3)
    assert certificate.completeness == 1
    assert verify_ldc(uniform_singletons, certificate) == Fraction(1, 3)


def test_smooth_to_ldc_rejects_unsmooth_decoder(uniform_singletons):
    with pytest.raises(HypothesisViolation):
        smooth_to_ldc(uniform_singletons, eta=Fraction(2), epsilon=Fraction(1, 3))


def test_find_matchings(toy_code, repetition_code, m0):
    matching = find_matchings(toy_code, m0, q=2)
    assert [form.support for form in matching.vectors] == [(0,), (1, 2)]
    assert len(find_matchings(repetition_code, m0, q=1)) == 3


def test_empty_matching(gf2, m0):
    code = LinearCode.from_rows(gf2, [(1, 1), (0, 1)])
    matching = find_matchings(code, m0, q=1)
    assert len(matching) == 0
    with pytest.raises(HypothesisViolation):
        matching_decoder(code, [matching])


def test_matching_budget_counts_candidate_subsets(toy_code, m0):
    with pytest.raises(BudgetExceeded, match="6 subsets"):
        find_matchings(toy_code, m0, q=2, budget=5)
    assert len(find_matchings(toy_code, m0, q=2, budget=6)) > 0


def test_matching_decoder_strong_soundness(repetition_code, m0):
    decoder = matching_decoder(repetition_code, [find_matchings(repetition_code, m0, q=1)])
    records = strong_soundness_check(decoder)
    assert [r.weight for r in records] == [0, 1, 2, 3]
    for record in records:
        assert record.worst_error == record.bound == Fraction(record.weight, 3)


def test_strong_soundness_over_larger_field():
    code = LinearCode.from_rows(galois.GF(3), [(1, 0), (0, 1), (1, 1), (1, 2)])
    target = Target.message(1)
    decoder = matching_decoder(code, [find_matchings(code, target, q=2)])
    for record in strong_soundness_check(decoder):
        assert record.worst_error <= record.bound
