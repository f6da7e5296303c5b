import itertools
from fractions import Fraction

import numpy as np
import pytest

from locus.core.codealg import encode, random_code, scalar_field
from locus.core.decoder import (
    BOTTOM,
    FixedSetAdversary,
    Leaf,
    Node,
    NonadaptiveDecoder,
    QueryDistribution,
    RandomFlipAdversary,
    Target,
    TargetKind,
    canonical_decode,
    dump_decoder,
    estimate_error,
    eval_decoder,
    load_decoder,
    repeat_decoder,
    run_tree,
    soundness_error_at,
    truth,
    validate_tree,
)
from locus.core.errors import BudgetExceeded, CodeError, CompletenessViolation


def test_canonical_decode(toy_code, m0):
    assert canonical_decode(toy_code, m0, (1, 2), [0, 1]) == 1
    assert canonical_decode(toy_code, m0, (0, 1, 2), [1, 1, 1]) is BOTTOM
    assert canonical_decode(toy_code, m0, (0,), [0]) == 0


def test_undetermined_query_set_is_rejected(toy_code, m0):
    with pytest.raises(CompletenessViolation):
        NonadaptiveDecoder(toy_code, {m0: QueryDistribution.point((1,))})


def test_query_distribution_weights():
    with pytest.raises(ValueError, match="sum"):
        QueryDistribution.from_weights({(0,): Fraction(1, 3)})
    dist = QueryDistribution.from_weights([((2, 1), Fraction(1, 2)), ((1, 2), Fraction(1, 2))])
    assert dist.entries == (((1, 2), Fraction(1)),)


def test_target_parse(toy_code):
    assert Target.parse("m1") == Target.message(1)
    assert str(Target.parse(" c2 ")) == "c2"
    with pytest.raises(ValueError):
        Target.parse("x1")
    with pytest.raises(CodeError):
        Target.message(2).validate(toy_code)


def test_completeness_without_corruption(toy_code, m0):
    decoder = NonadaptiveDecoder(toy_code, {m0: QueryDistribution.point((1, 2))})
    report = eval_decoder(decoder)
    assert report.completeness == 1
    assert report.soundness_error == 0


def test_single_flip_fools_pair_decoder(toy_code, m0):
    decoder = NonadaptiveDecoder(toy_code, {m0: QueryDistribution.point((1, 2))})
    report = eval_decoder(decoder, adversary=FixedSetAdversary({1: 1}), delta=Fraction(1, 3))
    assert report.soundness_error == 1


def test_mixed_decoder_soundness(mixed_decoder):
    report = eval_decoder(mixed_decoder, adversary=FixedSetAdversary({1: 1}), delta=Fraction(1, 3))
    assert report.soundness_error == Fraction(1, 2)
    assert report.witness["target"] == "m0"


def test_exact_budget(mixed_decoder):
    with pytest.raises(BudgetExceeded):
        eval_decoder(mixed_decoder, adversary=RandomFlipAdversary(), delta=Fraction(1), budget=4)


def test_monte_carlo_is_seeded(mixed_decoder):
    args = dict(mode="monte_carlo", adversary=RandomFlipAdversary(), delta=Fraction(1, 3), trials=50, seed=9)
    first, second = eval_decoder(mixed_decoder, **args), eval_decoder(mixed_decoder, **args)
    assert first.soundness_error == second.soundness_error
    assert first.witness == second.witness


def test_repetition(toy_code, mixed_decoder, m0):
    message = [0, 0]
    word = encode(toy_code, message)
    word[1] = 1
    assert repeat_decoder(mixed_decoder, 1).outcome_distribution(m0, word) == mixed_decoder.outcome_distribution(m0, word)

    repeated = repeat_decoder(mixed_decoder, 2)
    assert repeated.query_count == 4
    assert soundness_error_at(repeated, m0, message, word) == Fraction(1, 4)
    estimate, width = estimate_error(repeated, m0, message, word, trials=10_000, seed=1)
    assert abs(estimate - 0.25) <= max(width, 0.02)
    assert eval_decoder(repeated).completeness == 1


def test_estimate_error_needs_trials(toy_code, mixed_decoder, m0):
    word = encode(toy_code, [0, 0])
    with pytest.raises(ValueError, match="trials"):
        estimate_error(mixed_decoder, m0, [0, 0], word, trials=0, seed=1)


def test_local_rules_are_cached_per_code(toy_code, m0):
    word = encode(toy_code, [1, 1])
    assert canonical_decode(toy_code, m0, (1, 2), word[[1, 2]]) == 1
    rule = toy_code.rule_cache[(m0, (1, 2))]
    assert canonical_decode(toy_code, m0, (1, 2), word[[1, 2]]) == 1
    assert toy_code.rule_cache[(m0, (1, 2))] is rule


@pytest.mark.parametrize("repetitions", [1, 2, 3])
def test_repetition_power(mixed_decoder, toy_code, m0, repetitions):
    repeated = repeat_decoder(mixed_decoder, repetitions)
    for message in toy_code.messages():
        for j in range(toy_code.n):
            word = encode(toy_code, message)
            word[j] = word[j] + toy_code.field(1)
            base = soundness_error_at(mixed_decoder, m0, message, word)
            assert soundness_error_at(repeated, m0, message, word) == base ** repetitions


def test_run_tree():
    leaf = Leaf(1)
    assert run_tree(leaf, [0, 1, 0]) == ((), (), 1)
    tree = Node(1, (Leaf(0), Leaf(BOTTOM)))
    assert run_tree(tree, [0, 1, 0]) == ((1,), (1,), BOTTOM)


def test_validate_tree():
    repeated = Node(0, (Node(0, (Leaf(0), Leaf(1))), Leaf(1)))
    with pytest.raises(ValueError, match="twice"):
        validate_tree(repeated, n=2, order=2, q=2)
    with pytest.raises(ValueError, match="layers"):
        validate_tree(Node(0, (Node(1, (Leaf(0), Leaf(1))), Leaf(1))), n=2, order=2, q=1)


def test_decoder_file_round_trip(mixed_decoder, toy_code):
    again = load_decoder(dump_decoder(mixed_decoder), toy_code)
    assert again.distributions == mixed_decoder.distributions
    assert again.q == mixed_decoder.q


@pytest.mark.parametrize("desc", ["GF(2)", "GF(3)", "GF(2^2)"])
def test_canonical_rule_never_errs_on_codewords(desc):
    code = random_code(scalar_field(desc), 4, 2, np.random.default_rng(2))
    for i in range(code.k):
        target = Target(TargetKind.MESSAGE, i)
        for size in range(1, code.n + 1):
            for query_set in itertools.combinations(range(code.n), size):
                try:
                    decoder = NonadaptiveDecoder(code, {target: QueryDistribution.point(query_set)})
                except CompletenessViolation:
                    continue
                for message in code.messages():
                    word = encode(code, message)
                    assert decoder.outcome_distribution(target, word) == {truth(code, target, message): 1}
