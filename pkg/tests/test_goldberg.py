from fractions import Fraction

import galois
import numpy as np
import pytest

from locus.core.codealg import random_code
from locus.core.decoder import BOTTOM, GLOBAL_DECODE, Leaf, Node, RandomFlipAdversary, eval_decoder, tree_leaves
from locus.core.errors import InvariantViolation, TransformationImpossible
from locus.core.goldberg import (
    AdaptiveDecoder,
    LeafClass,
    as_adaptive,
    binary_bound,
    certified_soundness,
    classify_leaf,
    global_decode,
    goldberg_pipeline,
    random_adaptive_decoder,
    relabel,
    relabel_steps,
    rerandomize,
    to_nonadaptive,
    toxic_rate,
)

READ_FIRST = Node(0, (Leaf(0), Leaf(1)))
GUESS_ZERO = Node(1, (Leaf(0), Leaf(0)))


@pytest.fixture
def guessing_decoder(identity_code, m0):
    """Half the time reads b_0, half the time reads b_1 and guesses 0."""
    return AdaptiveDecoder(identity_code, {m0: [(Fraction(1, 2), READ_FIRST), (Fraction(1, 2), GUESS_ZERO)]}, q=1)


def test_global_decode(identity_code, toy_code, m0):
    assert global_decode(identity_code, m0, [1, 0]) == 1
    assert global_decode(toy_code, m0, [1, 1, 1]) is BOTTOM


def test_classify_leaf(toy_code, m0):
    assert classify_leaf(toy_code, m0, (1,), (0,)) is LeafClass.TOXIC
    assert classify_leaf(toy_code, m0, (0,), (1,)) is LeafClass.NONTOXIC
    assert classify_leaf(toy_code, m0, (0, 1, 2), (1, 1, 1)) is LeafClass.NONTOXIC


def test_tree_weights_must_sum_to_one(identity_code, m0):
    with pytest.raises(ValueError):
        AdaptiveDecoder(identity_code, {m0: [(Fraction(1, 2), READ_FIRST)]})


def test_as_adaptive_matches_nonadaptive(mixed_decoder, m0):
    adaptive = as_adaptive(mixed_decoder)
    for word in ([0, 1, 0], [1, 1, 1], [0, 0, 0]):
        assert adaptive.outcome_distribution(m0, word) == mixed_decoder.outcome_distribution(m0, word)


def test_rerandomization_keeps_codeword_behaviour(mixed_decoder, m0):
    adaptive = as_adaptive(mixed_decoder)
    assert eval_decoder(rerandomize(adaptive)).completeness == 1


def test_toxic_rate(guessing_decoder):
    report = eval_decoder(guessing_decoder)
    epsilon = 1 - report.completeness
    assert epsilon == Fraction(1, 2)
    assert toxic_rate(guessing_decoder, epsilon) == Fraction(1, 2)
    with pytest.raises(InvariantViolation):
        toxic_rate(guessing_decoder, Fraction(1, 10))


def test_relabel_sends_toxic_leaves_to_global_decoding(guessing_decoder, m0):
    relabeled = relabel(rerandomize(guessing_decoder))
    labels = {leaf.label for _, tree in relabeled.base.trees[m0] for _, _, leaf in tree_leaves(tree)}
    assert labels == {0, 1, GLOBAL_DECODE}
    assert eval_decoder(relabeled).completeness == 1
    assert relabeled.query_count == 2


def test_relabel_steps_trade_completeness_for_soundness(guessing_decoder):
    steps = relabel_steps(rerandomize(guessing_decoder))
    assert len(steps) == 2
    assert all(step.new_label == GLOBAL_DECODE for step in steps)
    assert all(step.holds for step in steps)
    assert steps[-1].epsilon_after == 0


def test_to_nonadaptive(guessing_decoder, m0):
    conversion = to_nonadaptive(relabel(rerandomize(guessing_decoder)), Fraction(1, 2), Fraction(1, 2))
    assert conversion.toxic_mass[m0] == Fraction(1, 2)
    assert conversion.decoder.query_distribution(m0).support == ((0,),)
    assert conversion.q == 1
    assert conversion.certified_soundness == Fraction(2)
    assert conversion.measured_bound == Fraction(2)


def test_all_toxic_decoder_cannot_be_converted(identity_code, m0):
    decoder = AdaptiveDecoder(identity_code, {m0: [(Fraction(1), GUESS_ZERO)]})
    with pytest.raises(TransformationImpossible):
        to_nonadaptive(relabel(decoder))


def test_certified_soundness():
    assert certified_soundness(3, Fraction(0), Fraction(1, 2)) == Fraction(5, 4)
    assert binary_bound(Fraction(1, 5), Fraction(1, 10)) == Fraction(1, 2)


def test_pipeline_on_guessing_decoder(guessing_decoder):
    result = goldberg_pipeline(guessing_decoder)
    assert [s.stage for s in result.stages] == ["input", "rerandomized", "relabeled", "nonadaptive"]
    assert result.stages[0].completeness == Fraction(1, 2)
    assert result.stages[-1].completeness == 1
    assert result.stages[-1].soundness == 0
    assert result.stages[2].toxic_rate == Fraction(1, 2)
    assert result.decoder.q == 1


@pytest.mark.parametrize("order", [2, 3])
def test_pipeline_on_random_decoders(order):
    field = galois.GF(order)
    rng = np.random.default_rng(10 + order)
    for _ in range(10):
        code = random_code(field, 3, 2, rng)
        decoder = random_adaptive_decoder(code, 2, rng)
        result = goldberg_pipeline(decoder, RandomFlipAdversary(), Fraction(1, 3))
        assert result.stages[-1].completeness == 1
        assert result.conversion.q <= decoder.q
        assert result.stages[-1].soundness <= result.conversion.certified_soundness
