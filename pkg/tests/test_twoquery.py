from fractions import Fraction

import pytest

from locus.core.codealg import as_ints
from locus.core.decoder import NonadaptiveDecoder, QueryDistribution, Target, eval_decoder
from locus.core.errors import TransformationImpossible
from locus.core.twoquery import PairClass, big_targets, classify_pair, fixed_set, reduce

HALF = Fraction(1, 2)
m1 = Target.message(1)


def half_half(first, second):
    return QueryDistribution.from_weights({first: HALF, second: HALF})


@pytest.fixture
def pair_decoder(fixed_code, m0):
    return NonadaptiveDecoder(fixed_code, {m0: half_half((0, 1), (2, 3)), m1: half_half((2,), (0, 3))}, q=2)


def test_fixed_sets(fixed_code, m0):
    assert fixed_set(fixed_code, m0).members == {0: 1, 1: 1}
    assert fixed_set(fixed_code, m1).indices == {2}


def test_classify_pair(fixed_code, m0):
    assert classify_pair(fixed_code, m0, (0, 1)) is PairClass.REPETITION_LIKE
    assert classify_pair(fixed_code, m0, (2, 3)) is PairClass.HADAMARD_LIKE
    assert classify_pair(fixed_code, m0, (0, 2)) is PairClass.DEGENERATE_SINGLE
    with pytest.raises(ValueError):
        classify_pair(fixed_code, m0, (1, 1))


def test_big_targets(fixed_code, m0, toy_code):
    big = big_targets(fixed_code, HALF)
    assert big.X == (m0,)
    assert big.bound == 4
    assert big.big_classes == 1
    assert big_targets(toy_code, Fraction(2, 3)).X == ()


def test_reduce_message_targets(fixed_code, pair_decoder, m0):
    reduction = reduce(fixed_code, pair_decoder, HALF)
    assert reduction.mode == "rldc"
    assert reduction.X == (m0,)
    assert (reduction.k, reduction.k_prime) == (2, 1)
    assert reduction.permutation == (1, 0)
    assert as_ints(reduction.code.generator).ravel().tolist() == [0, 0, 1, 1]
    assert reduction.class_mass[m0] == {PairClass.REPETITION_LIKE: HALF, PairClass.HADAMARD_LIKE: HALF}
    assert reduction.class_mass[m1] == {PairClass.DEGENERATE_SINGLE: HALF, PairClass.HADAMARD_LIKE: HALF}

    certificate = reduction.certificate
    assert (certificate.q, certificate.radius, certificate.completeness) == (2, Fraction(1, 4), 1)


def test_reduced_decoder_never_aborts(fixed_code, pair_decoder):
    decoder = reduce(fixed_code, pair_decoder, HALF).decoder
    assert eval_decoder(decoder).completeness == 1
    for word in ([0, 0, 0, 1], [1, 1, 1, 1], [1, 0, 1, 0]):
        assert set(decoder.outcome_distribution(Target.message(0), word)) <= {0, 1}


def test_reduce_codeword_targets(fixed_code):
    c = Target.codeword
    decoder = NonadaptiveDecoder(fixed_code, {
        c(0): QueryDistribution.point((2, 3)),
        c(1): QueryDistribution.point((2, 3)),
        c(2): QueryDistribution.point((0, 3)),
        c(3): QueryDistribution.point((0, 2)),
    })
    reduction = reduce(fixed_code, decoder, HALF)
    assert reduction.mode == "rlcc"
    assert reduction.X == (c(0), c(1))
    assert reduction.k_prime == 1
    assert reduction.permutation is None
    assert eval_decoder(reduction.decoder).completeness == 1


def test_all_targets_big(repetition_code, m0):
    dist = QueryDistribution.from_weights({(j,): Fraction(1, 3) for j in range(3)})
    decoder = NonadaptiveDecoder(repetition_code, {m0: dist})
    with pytest.raises(TransformationImpossible):
        reduce(repetition_code, decoder, HALF)


def test_target_without_hadamard_mass(fixed_code, m0):
    decoder = NonadaptiveDecoder(fixed_code, {m0: QueryDistribution.point((2, 3)), m1: QueryDistribution.point((2,))})
    with pytest.raises(TransformationImpossible):
        reduce(fixed_code, decoder, HALF)


def test_mixed_targets_are_rejected(fixed_code, m0):
    decoder = NonadaptiveDecoder(fixed_code, {m0: QueryDistribution.point((0,)), Target.codeword(2): QueryDistribution.point((2,))})
    with pytest.raises(ValueError):
        reduce(fixed_code, decoder, HALF)


def test_three_query_decoder_is_rejected(toy_code, m0):
    decoder = NonadaptiveDecoder(toy_code, {m0: QueryDistribution.point((0, 1, 2))})
    with pytest.raises(ValueError):
        reduce(toy_code, decoder, HALF)
