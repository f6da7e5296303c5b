"""
GF(2^t) arithmetic in the polynomial basis.

Elements are stored as integers whose bit i is the coefficient of x^i, which is
also the integer representation galois uses, so pi is the identity on that
representation read least-significant bit first.
"""

import logging
from dataclasses import dataclass
from functools import cached_property, lru_cache
from typing import Sequence, Tuple

import galois
import numpy as np

from locus.core.errors import FieldError

logger = logging.getLogger(__name__)

MAX_DEGREE = 63
PRIME_FIELD_MODULUS = 0b11  # x + 1


@dataclass(frozen=True)
class FieldParams:
    """GF(2^t) with a fixed irreducible modulus (bitmask of t+1 coefficients)."""
    t: int  # Extension degree
    modulus: int  # Irreducible polynomial over F_2, bit i = coefficient of x^i

    @property
    def order(self) -> int:
        return 1 << self.t

    @cached_property
    def field(self) -> type[galois.FieldArray]:
        if self.t == 1:
            return galois.GF(2)
        return galois.GF(2 ** self.t, irreducible_poly=galois.Poly.Int(self.modulus))

    def element(self, value: int) -> "FieldElement":
        if not 0 <= value < self.order:
            raise FieldError(f"value {value} out of range for GF(2^{self.t})")
        return FieldElement(self, value)

    def elements(self) -> Tuple["FieldElement", ...]:
        return tuple(FieldElement(self, v) for v in range(self.order))

    @cached_property
    def mul_table(self) -> np.ndarray:
        """Full multiplication table as integers; only built for small t."""
        if self.t > 10:
            raise FieldError(f"multiplication table for t={self.t} is too large")
        elems = self.field.elements
        table = elems[:, None] * elems[None, :]
        return table.view(np.ndarray).astype(np.int64)

    @cached_property
    def inv_table(self) -> np.ndarray:
        """inv_table[a] = a^{-1} for a != 0; entry 0 is unused and set to 0."""
        nonzero = self.field.elements[1:]
        table = np.zeros(self.order, dtype=np.int64)
        table[1:] = (self.field(1) / nonzero).view(np.ndarray)
        return table

    @cached_property
    def row_masks(self) -> np.ndarray:
        """row_masks[beta, i] = row i of M_beta as a bitmask over input bits."""
        basis_products = self.mul_table[:, [1 << j for j in range(self.t)]]
        masks = np.zeros((self.order, self.t), dtype=np.int64)
        for i in range(self.t):
            for j in range(self.t):
                masks[:, i] |= ((basis_products[:, j] >> i) & 1) << j
        return masks


@dataclass(frozen=True)
class FieldElement:
    params: FieldParams
    value: int  # Polynomial-basis coefficients as a t-bit integer

    def _lift(self) -> galois.FieldArray:
        return self.params.field(self.value)

    def __add__(self, other: "FieldElement") -> "FieldElement":
        return field_arith(self, other, "add")

    def __mul__(self, other: "FieldElement") -> "FieldElement":
        return field_arith(self, other, "mul")

    def inverse(self) -> "FieldElement":
        return field_arith(self, self, "inv")

    @property
    def bits(self) -> Tuple[int, ...]:
        return pi(self)


@dataclass(frozen=True)
class MulMatrix:
    """The t x t matrix over F_2 of multiplication by a fixed element."""
    params: FieldParams
    rows: Tuple[int, ...]  # Row i as a bitmask over the t input bits

    def __call__(self, beta: FieldElement) -> FieldElement:
        value = 0
        for i, row in enumerate(self.rows):
            value |= ((row & beta.value).bit_count() & 1) << i
        return FieldElement(self.params, value)

    def as_array(self) -> galois.FieldArray:
        gf2 = galois.GF(2)
        return gf2([[(row >> j) & 1 for j in range(self.params.t)] for row in self.rows])

    def __matmul__(self, other: "MulMatrix") -> "MulMatrix":
        return _from_array(self.params, self.as_array() @ other.as_array())

    def is_invertible(self) -> bool:
        return int(np.linalg.matrix_rank(self.as_array())) == self.params.t


def _from_array(params: FieldParams, array: galois.FieldArray) -> MulMatrix:
    raw = array.view(np.ndarray)
    rows = tuple(
        sum(int(raw[i, j]) << j for j in range(params.t)) for i in range(params.t)
    )
    return MulMatrix(params, rows)


@lru_cache(maxsize=None)
def default_modulus(t: int) -> int:
    """Lexicographically smallest irreducible polynomial of degree t (x+1 for t=1)."""
    if t == 1:
        return PRIME_FIELD_MODULUS
    return int(galois.irreducible_poly(2, t, method="min"))


def mk_field(t: int, modulus: int | None = None) -> FieldParams:
    """
    Build verified field parameters for GF(2^t).

    Args:
        t: Extension degree, 1 <= t <= 63
        modulus: Optional irreducible polynomial as a bitmask

    Returns:
        FieldParams with a verified-irreducible modulus
    """
    if not isinstance(t, int) or t < 1:
        raise FieldError(f"extension degree must be a positive integer, got {t!r}")
    if t > MAX_DEGREE:
        raise FieldError(f"extension degree {t} exceeds the single-word cap {MAX_DEGREE}")

    if modulus is None:
        return FieldParams(t, default_modulus(t))

    poly = galois.Poly.Int(modulus)
    if poly.degree != t:
        raise FieldError(f"modulus {poly} has degree {poly.degree}, expected {t}")
    if not poly.is_irreducible():
        factors, _ = poly.factors()
        raise FieldError(f"modulus {poly} is reducible: divisible by {factors[0]}")

    logger.debug(f"GF(2^{t}) with modulus {poly}")
    return FieldParams(t, modulus)


def field_arith(a: FieldElement, b: FieldElement, op: str) -> FieldElement:
    """add / mul / inv in GF(2^t); inv ignores b."""
    params = a.params
    if b.params != params:
        raise FieldError("operands belong to different fields")

    if op == "add":
        return FieldElement(params, a.value ^ b.value)
    if op == "mul":
        return FieldElement(params, int(a._lift() * b._lift()))
    if op == "inv":
        if a.value == 0:
            raise FieldError("zero has no multiplicative inverse")
        return FieldElement(params, int(params.field(1) / a._lift()))
    raise ValueError(f"unknown field operation: {op}")


def pi(a: FieldElement) -> Tuple[int, ...]:
    """Coefficient bits of a, least significant first."""
    return tuple((a.value >> i) & 1 for i in range(a.params.t))


def pi_inv(params: FieldParams, bits: Sequence[int]) -> FieldElement:
    if len(bits) != params.t:
        raise FieldError(f"expected {params.t} bits, got {len(bits)}")
    value = 0
    for i, bit in enumerate(bits):
        if bit not in (0, 1):
            raise FieldError(f"bit {i} is {bit}, not 0 or 1")
        value |= bit << i
    return FieldElement(params, value)


def mul_matrix(alpha: FieldElement) -> MulMatrix:
    """Matrix M with row i . pi(beta) = pi(alpha * beta)_i for every beta."""
    params = alpha.params
    F = params.field
    columns = [int(F(alpha.value) * F(1 << j)) for j in range(params.t)]
    rows = tuple(
        sum(((columns[j] >> i) & 1) << j for j in range(params.t)) for i in range(params.t)
    )
    return MulMatrix(params, rows)
