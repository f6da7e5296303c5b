import itertools

import galois
import numpy as np
import pytest

from locus.core.codealg import (
    LinearCode,
    Subspace,
    as_ints,
    describe_field,
    dual,
    dump_code,
    encode,
    hyperplane_points,
    in_span,
    load_code,
    quotient_dim,
    random_code,
    random_codeword_constrained,
    restrict_code,
    rref,
    scalar_field,
    support_subcode,
)
from locus.core.errors import CodeError, ContainmentError, FieldError


def test_encode(toy_code):
    assert as_ints(encode(toy_code, [0, 0])).tolist() == [0, 0, 0]
    assert as_ints(encode(toy_code, [1, 0])).tolist() == [1, 0, 1]
    assert as_ints(encode(toy_code, [1, 1])).tolist() == [1, 1, 0]


def test_encode_length_mismatch(toy_code):
    with pytest.raises(CodeError):
        encode(toy_code, [1, 0, 1])


def test_rank_deficient_generator(gf2):
    with pytest.raises(CodeError, match="rank"):
        LinearCode.from_rows(gf2, [(1, 1), (1, 1), (0, 0)])


def test_in_span(toy_code):
    assert as_ints(in_span([1, 0], [0], toy_code)).tolist() == [1]
    assert as_ints(in_span([1, 0], [1, 2], toy_code)).tolist() == [1, 1]
    assert in_span([1, 0], [1], toy_code) is None


def test_restrict_code(toy_code, gf2):
    assert restrict_code(toy_code, [0, 1]) == Subspace.full(gf2, 2)
    parity = restrict_code(toy_code, [0, 1, 2])
    assert parity.dim == 2
    assert parity.contains([1, 1, 0])
    assert not parity.contains([1, 1, 1])
    assert restrict_code(toy_code, [0]) == Subspace.full(gf2, 1)


def test_dual_and_support_subcode(toy_code, gf2):
    all_ones = Subspace.span(gf2, 3, [[1, 1, 1]])
    assert dual(toy_code.subspace) == all_ones
    assert support_subcode(all_ones, [0, 1]).dim == 0
    assert support_subcode(all_ones, [0, 1, 2]) == all_ones


def test_dual_is_an_involution(gf2):
    rng = np.random.default_rng(7)
    for _ in range(100):
        space = random_code(gf2, 8, 4, rng).subspace
        assert dual(dual(space)) == space


@pytest.mark.parametrize("desc", ["GF(2)", "GF(3)", "GF(2^2)"])
def test_restriction_dual_is_support_subcode(desc):
    field = scalar_field(desc)
    code = random_code(field, 4, 2, np.random.default_rng(3))
    for size in range(1, code.n + 1):
        for coords in itertools.combinations(range(code.n), size):
            expected = support_subcode(dual(code.subspace), coords).restrict(coords)
            assert dual(restrict_code(code, coords)) == expected


def test_restriction_matches_enumeration():
    field = scalar_field("GF(3)")
    code = random_code(field, 4, 2, np.random.default_rng(11))
    coords = [1, 3]
    restricted = restrict_code(code, coords)
    views = {tuple(as_ints(encode(code, m)[coords])) for m in code.messages()}
    assert {tuple(row) for row in as_ints(restricted.elements())} == views


def test_rref_drops_dependent_rows(gf2):
    reduced = rref(gf2([[1, 1], [0, 1], [1, 0]]))
    assert as_ints(reduced).tolist() == [[1, 0], [0, 1]]

    gf4 = galois.GF(4)
    reduced = rref(gf4([[2, 3], [1, 2]]))  # second row is 3 * first
    assert reduced.shape == (1, 2)
    assert int(reduced[0, 0]) == 1
    assert rref(gf2.Zeros((0, 3))).shape == (0, 3)


def test_quotient_dim(gf2):
    plane = Subspace.full(gf2, 2)
    zero = Subspace.zero(gf2, 2)
    line = Subspace.span(gf2, 2, [[1, 0]])
    assert quotient_dim(plane, plane) == 0
    assert quotient_dim(plane, zero) == 2
    assert quotient_dim(plane, line) == 1
    with pytest.raises(ContainmentError):
        quotient_dim(line, plane)


def test_constrained_sampling(toy_code):
    rng = np.random.default_rng(0)
    draws = [tuple(as_ints(random_codeword_constrained(toy_code, [1, 0], 1, rng))) for _ in range(2000)]
    assert set(draws) == {(1, 0), (1, 1)}
    assert 800 < draws.count((1, 0)) < 1200
    zeros = [random_codeword_constrained(toy_code, [1, 0], 0, rng) for _ in range(50)]
    assert all(int(b[0]) == 0 for b in zeros)


def test_hyperplane_points(toy_code):
    points = {tuple(row) for row in as_ints(hyperplane_points(toy_code, [1, 1], 0))}
    assert points == {(0, 0), (1, 1)}


def test_zero_constraint_is_infeasible(toy_code):
    with pytest.raises(CodeError):
        random_codeword_constrained(toy_code, [0, 0], 1, np.random.default_rng(0))


def test_indep_rows_witness():
    # outside the span, every target value is reachable without changing the view
    field = scalar_field("GF(3)")
    code = random_code(field, 4, 3, np.random.default_rng(5))
    messages = code.messages()
    for coords in itertools.combinations(range(code.n), 2):
        for i in range(code.k):
            vstar = [int(j == i) for j in range(code.k)]
            if in_span(vstar, coords, code) is not None:
                continue
            base = as_ints(encode(code, messages[0])[list(coords)])
            values = {
                int(m[i]) for m in messages
                if np.array_equal(as_ints(encode(code, m)[list(coords)]), base)
            }
            assert values == set(range(code.order))


@pytest.mark.parametrize("desc", ["GF(3)", "GF(2^2)", "GF(2^3)/13"])
def test_code_file_round_trip(desc):
    code = random_code(scalar_field(desc), 5, 2, np.random.default_rng(1))
    text = dump_code(code)
    assert text.startswith(f"field {desc}; k 2; n 5")
    again = load_code(text)
    assert describe_field(again.field) == desc
    assert np.array_equal(as_ints(again.generator), as_ints(code.generator))


def test_load_code_rejects_bad_rows():
    with pytest.raises(CodeError):
        load_code("field GF(2); k 2; n 2\n1 0\n")
    with pytest.raises(CodeError, match="range"):
        load_code("field GF(2); k 1; n 1\n2\n")


@pytest.mark.parametrize("desc", ["GF(4)", "GF(3^2)", "GF(2^2)/5", "GF(2^17)", "F2"])
def test_bad_field_descriptors(desc):
    with pytest.raises(FieldError):
        scalar_field(desc)


def test_gf4_from_descriptor_uses_default_modulus():
    assert scalar_field("GF(2^2)").irreducible_poly == galois.Poly.Int(0b111)
