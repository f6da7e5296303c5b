import itertools
from fractions import Fraction

import numpy as np
import pytest

from locus.core.decoder import BOTTOM
from locus.core.errors import CodeError
from locus.core.linecode import (
    Poly,
    blr_rejection_rate,
    decode_sweep,
    distance_to_linear,
    dump_word,
    encode,
    encode_message,
    eta_bound,
    eta_sup,
    interp_vector,
    line_overwrite_outcomes,
    load_word,
    message_to_poly,
    mk_params,
    overwrite_line,
    random_corruption,
    random_poly,
    rlcc_decode,
    rlcc_query_count,
    rldc_decode,
    rldc_query_count,
    self_correct_error,
    truth_bit,
    value_bit,
)


@pytest.fixture(scope="module")
def params():
    return mk_params(2, 2, 1)


def test_params_sizes(params):
    assert params.num_lines == 20
    assert params.block_length == 16
    assert params.N == 320
    assert params.message_bits == 6
    assert all(len(lines) == 5 for lines in params.lines_through)


def test_smallest_params():
    tiny = mk_params(1, 1, 0)
    assert tiny.num_lines == 1
    assert tiny.N == 2


def test_degree_must_fit_the_field():
    with pytest.raises(CodeError):
        mk_params(2, 2, 4)
    with pytest.raises(CodeError):
        mk_params(2, 0, 1)


def test_poly_arithmetic(params):
    field = params.field
    f = Poly.linear(field, [1, 2], 3)
    assert f.evaluate((1, 1)) == 0
    assert f.degree == 1
    g = Poly.constant(field, 2, 3)
    assert (f + g).evaluate((1, 1)) == 3
    assert (f * g).evaluate((1, 1)) == 0
    assert f.scale(0).terms == ()
    with pytest.raises(CodeError):
        (f * f).coefficients(params)


def test_message_bits_are_lsb_first(params):
    f = message_to_poly(params, [1, 0, 0, 1, 0, 0])
    assert f.coefficients(params)[:2] == (1, 2)
    with pytest.raises(CodeError):
        message_to_poly(params, [1, 0])


def test_interp_vector_reads_scaled_values(params):
    rng = np.random.default_rng(5)
    for _ in range(4):
        f = random_poly(params, rng)
        word = encode(params, f)
        for line, points in enumerate(params.line_points):
            for z, alpha, i in itertools.product(points, range(params.q), range(params.t)):
                expected = value_bit(params, f.evaluate(params.point(z)), alpha, i)
                assert word.read(line, interp_vector(params, line, z, alpha, i)) == expected


def test_interp_vector_rejects_point_off_line(params):
    line = 0
    off = next(p for p in range(params.num_points) if p not in params.line_points[line])
    with pytest.raises(CodeError):
        interp_vector(params, line, off, 1, 0)
    with pytest.raises(CodeError):
        interp_vector(params, line, params.line_points[line][0], 1, params.t)


def test_query_counts():
    assert rldc_query_count() == 15
    assert rldc_query_count(reuse=False) == 16
    assert rlcc_query_count() == 41
    assert rlcc_query_count(r2=3) == 58
    assert rlcc_query_count(reuse=False) == 42


def test_measured_query_counts(params):
    rng = np.random.default_rng(8)
    word = encode(params, random_poly(params, rng))
    for _ in range(10):
        x = int(rng.integers(0, params.num_points))
        assert rldc_decode(word, x, 1, 0, reuse=False, rng=rng)[1] == 16
        line = int(rng.integers(0, params.num_lines))
        v = int(rng.integers(0, params.block_length))
        assert rlcc_decode(word, line, v, r2=3, rng=rng)[1] == 58
        assert rlcc_decode(word, line, v, reuse=False, rng=rng)[1] == 42


def test_decoder_is_complete_on_every_message(params):
    for seed, bits in enumerate(itertools.product([0, 1], repeat=params.message_bits)):
        word = encode_message(params, bits)
        stats = decode_sweep(word, word, trials=1000, seed=seed)
        assert (stats.errors, stats.bottoms, stats.max_queries) == (0, 0, 15)


def test_corrector_is_complete(params):
    rng = np.random.default_rng(1)
    word = encode(params, random_poly(params, rng))
    for _ in range(30):
        line = int(rng.integers(0, params.num_lines))
        v = int(rng.integers(0, params.block_length))
        outcome, queries = rlcc_decode(word, line, v, rng=rng)
        assert outcome == word.read(line, v)
        assert queries == 41


def test_reuse_needs_a_consistency_round(params):
    word = encode(params, Poly.constant(params.field, 2, 0))
    with pytest.raises(ValueError):
        rldc_decode(word, 0, 1, 0, r2=0)
    outcome, queries = rldc_decode(word, 0, 1, 0, r2=0, reuse=False, rng=np.random.default_rng(0))
    assert outcome == 0
    assert queries == 3 * 2 + 2


def test_erased_lines_read_as_zero(params):
    word = encode(params, Poly.constant(params.field, 2, 1)).erase([0])
    assert word.read(0, 1) is None
    assert word.bits()[:params.block_length].sum() == 0


def test_blr_facts():
    linear = [bin(3 & v).count("1") % 2 for v in range(8)]
    assert distance_to_linear(linear) == (Fraction(0), 3)
    assert blr_rejection_rate(linear) == 0
    assert self_correct_error(linear, 3) == 0

    noisy = list(linear)
    noisy[5] ^= 1
    distance, mask = distance_to_linear(noisy)
    assert (distance, mask) == (Fraction(1, 8), 3)
    assert blr_rejection_rate(noisy) >= distance
    assert self_correct_error(noisy, mask) <= 2 * distance

    with pytest.raises(ValueError):
        distance_to_linear([0, 1, 1])


def test_random_corruption_count(params):
    word = encode(params, Poly.constant(params.field, 2, 0))
    corrupted = random_corruption(word, 0.01, np.random.default_rng(2))
    assert len(corrupted.flips) == 4


@pytest.mark.parametrize("corrector", [False, True])
@pytest.mark.parametrize("rho", [0.001, 0.005, 0.01])
def test_random_corruption_error_rate(params, rho, corrector):
    rng = np.random.default_rng(9)
    clean = encode(params, random_poly(params, rng))
    word = random_corruption(clean, rho, rng)
    assert word.flips
    stats = decode_sweep(word, clean, trials=10_000, seed=10, corrector=corrector)
    assert stats.error_rate <= 1 / 3 + stats.half_width


def test_clean_sweep(params):
    word = encode(params, random_poly(params, np.random.default_rng(3)))
    stats = decode_sweep(word, word, trials=50, seed=4)
    assert (stats.errors, stats.bottoms, stats.max_queries) == (0, 0, 15)


def test_line_overwrite_outcomes(params):
    rng = np.random.default_rng(6)
    f = random_poly(params, rng)
    clean = encode(params, f)
    x, alpha, i = 0, 1, 0
    assert line_overwrite_outcomes(clean, x, alpha, i) == {truth_bit(clean, x, alpha, i): 1}

    g = f + Poly.constant(params.field, 2, 1)
    word = overwrite_line(clean, params.lines_through[x][0], g)
    outcomes = line_overwrite_outcomes(word, x, alpha, i)
    assert sum(outcomes.values()) == 1
    assert outcomes[BOTTOM] > 0

    with pytest.raises(ValueError):
        line_overwrite_outcomes(word.corrupt([(0, 1)]), x, alpha, i)


def test_eta_envelope():
    delta, d_over_n = 0.001, 0.25
    value, argmax = eta_sup(delta, d_over_n)
    assert eta_bound(0.0, delta, d_over_n) <= value < 1
    assert 0.0 <= argmax <= 1.0
    assert eta_bound(0.0, delta, d_over_n) >= delta ** (1 / 3)
    corrected, _ = eta_sup(delta, d_over_n, corrector=True)
    assert 0 < corrected <= 1


def test_word_file_keeps_corruption(params):
    word = encode(params, random_poly(params, np.random.default_rng(7)))
    word = word.corrupt([(2, 5), (3, 0)]).erase([7])
    again = load_word(dump_word(word))
    assert again.seeds == word.seeds
    assert again.flips == word.flips
    assert again.erased == word.erased
    with pytest.raises(CodeError):
        load_word("code t 2")
