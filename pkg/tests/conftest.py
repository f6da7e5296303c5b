from fractions import Fraction

import galois
import pytest

from locus.core.codealg import LinearCode
from locus.core.decoder import NonadaptiveDecoder, QueryDistribution, Target


@pytest.fixture
def gf2():
    return galois.GF(2)


@pytest.fixture
def toy_code(gf2):
    """[3, 2] code: b_0, b_1, b_0 + b_1."""
    return LinearCode.from_rows(gf2, [(1, 0), (0, 1), (1, 1)])


@pytest.fixture
def fixed_code(gf2):
    """b_0, b_0, b_1, b_0 + b_1."""
    return LinearCode.from_rows(gf2, [(1, 0), (1, 0), (0, 1), (1, 1)])


@pytest.fixture
def identity_code(gf2):
    return LinearCode.from_rows(gf2, [(1, 0), (0, 1)])


@pytest.fixture
def repetition_code(gf2):
    return LinearCode.from_rows(gf2, [(1,), (1,), (1,)])


@pytest.fixture
def wide_code(gf2):
    """b_0 plus two copies of (b_1, b_0 + b_1); n = 5."""
    return LinearCode.from_rows(gf2, [(1, 0), (0, 1), (1, 1), (0, 1), (1, 1)])


@pytest.fixture
def m0():
    return Target.message(0)


@pytest.fixture
def mixed_decoder(toy_code, m0):
    """Target m0: half {0}, half {1, 2}."""
    dist = QueryDistribution.from_weights({(0,): Fraction(1, 2), (1, 2): Fraction(1, 2)})
    return NonadaptiveDecoder(toy_code, {m0: dist})
