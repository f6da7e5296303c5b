"""
Linear-code algebra over a finite scalar field.

Scalars are galois FieldArray classes: GF(2), GF(p) for small primes, and
GF(2^t) built through locus.core.gf so the default modulus stays canonical.
Vectors and matrices are FieldArrays; row j of a code's generator is v_j.
"""

import itertools
import logging
import re
from functools import cached_property
from typing import Dict, Iterable, Optional, Sequence, Tuple

import galois
import numpy as np

from locus.core.errors import CodeError, ContainmentError, FieldError
from locus.core.gf import default_modulus, mk_field

logger = logging.getLogger(__name__)

Field = type[galois.FieldArray]

MAX_FIELD_ORDER = 2 ** 16
_FIELD_DESC = re.compile(r"^GF\((\d+)(?:\^(\d+))?\)(?:/(\d+))?$")


# ============================================================================
# Scalar fields
# ============================================================================

def scalar_field(desc: str) -> Field:
    """
    Parse a field descriptor: GF(p), GF(2^t) or GF(2^t)/<modulus>.

    Args:
        desc: Descriptor string

    Returns:
        galois FieldArray class
    """
    match = _FIELD_DESC.match(desc.replace(" ", ""))
    if not match:
        raise FieldError(f"unrecognised field descriptor: {desc!r}")
    base, exponent, modulus = match.groups()
    base = int(base)

    if exponent is None:
        if modulus is not None:
            raise FieldError(f"prime field takes no modulus: {desc!r}")
        if not galois.is_prime(base) or base > 251:
            raise FieldError(f"GF({base}) is not a supported prime field")
        return galois.GF(base)

    if base != 2:
        raise FieldError(f"only characteristic-2 extensions are supported: {desc!r}")
    degree = int(exponent)
    if 2 ** degree > MAX_FIELD_ORDER:
        raise FieldError(f"field order 2^{degree} exceeds 2^16")
    params = mk_field(degree, int(modulus) if modulus is not None else None)
    return params.field


def describe_field(field: Field) -> str:
    if field.degree == 1:
        return f"GF({field.order})"
    desc = f"GF(2^{field.degree})"
    modulus = int(field.irreducible_poly)
    if modulus != default_modulus(field.degree):
        desc += f"/{modulus}"
    return desc


def as_ints(array: galois.FieldArray) -> np.ndarray:
    return array.view(np.ndarray).astype(np.int64)


def all_vectors(field: Field, length: int) -> galois.FieldArray:
    """Every vector of F^length, in lexicographic order, one per row."""
    rows = list(itertools.product(range(field.order), repeat=length))
    if length == 0:
        return field.Zeros((1, 0))
    return field(np.array(rows, dtype=np.int64))


# ============================================================================
# Gaussian elimination helpers
# ============================================================================

def rref(matrix: galois.FieldArray) -> galois.FieldArray:
    """Reduced row-echelon form with zero rows dropped."""
    field = type(matrix)
    if matrix.shape[0] == 0 or matrix.shape[1] == 0:
        return field.Zeros((0, matrix.shape[1]))
    reduced = matrix.row_reduce()
    keep = np.any(reduced.view(np.ndarray) != 0, axis=1)
    return reduced[keep]


def null_space(matrix: galois.FieldArray) -> galois.FieldArray:
    """Rows spanning {x : matrix @ x = 0}."""
    field = type(matrix)
    cols = matrix.shape[1]
    if matrix.shape[0] == 0 or not np.any(matrix.view(np.ndarray)):
        return field.Identity(cols)
    if cols == 0:
        return field.Zeros((0, 0))
    basis = matrix.null_space()
    return basis.reshape(-1, cols)


def solve(matrix: galois.FieldArray, rhs: galois.FieldArray) -> Optional[galois.FieldArray]:
    """One solution x of matrix @ x = rhs (free variables set to 0), or None."""
    field = type(matrix)
    rows, cols = matrix.shape
    if rows == 0:
        return field.Zeros(cols)
    augmented = np.concatenate([matrix, rhs.reshape(-1, 1)], axis=1)
    reduced = rref(augmented)
    solution = field.Zeros(cols)
    raw = reduced.view(np.ndarray)
    for r in range(reduced.shape[0]):
        pivot = int(np.flatnonzero(raw[r])[0])
        if pivot == cols:
            return None
        solution[pivot] = reduced[r, cols]
    return solution


# ============================================================================
# Subspaces
# ============================================================================

class Subspace:
    """A subspace of F^ambient_dim kept in canonical reduced row-echelon form."""

    def __init__(self, field: Field, ambient_dim: int, basis: galois.FieldArray):
        self.field = field
        self.ambient_dim = ambient_dim
        self.basis = basis

    @classmethod
    def span(cls, field: Field, ambient_dim: int, vectors) -> "Subspace":
        vectors = field(np.asarray(vectors, dtype=np.int64)).reshape(-1, ambient_dim)
        return cls(field, ambient_dim, rref(vectors))

    @classmethod
    def zero(cls, field: Field, ambient_dim: int) -> "Subspace":
        return cls(field, ambient_dim, field.Zeros((0, ambient_dim)))

    @classmethod
    def full(cls, field: Field, ambient_dim: int) -> "Subspace":
        return cls(field, ambient_dim, field.Identity(ambient_dim))

    @property
    def dim(self) -> int:
        return int(self.basis.shape[0])

    def __eq__(self, other) -> bool:
        if not isinstance(other, Subspace):
            return NotImplemented
        return (
            self.field.order == other.field.order
            and self.ambient_dim == other.ambient_dim
            and self.basis.shape == other.basis.shape
            and np.array_equal(as_ints(self.basis), as_ints(other.basis))
        )

    def __hash__(self) -> int:
        return hash((self.field.order, self.ambient_dim, as_ints(self.basis).tobytes()))

    def __repr__(self) -> str:
        return f"Subspace(dim={self.dim}, ambient={self.ambient_dim}, basis={as_ints(self.basis).tolist()})"

    def __add__(self, other: "Subspace") -> "Subspace":
        stacked = np.concatenate([self.basis, other.basis], axis=0)
        return Subspace(self.field, self.ambient_dim, rref(stacked))

    def contains(self, vector) -> bool:
        vector = self.field(np.asarray(vector, dtype=np.int64)).reshape(1, -1)
        return (self + Subspace(self.field, self.ambient_dim, rref(vector))).dim == self.dim

    def issubspace(self, other: "Subspace") -> bool:
        """True when self is contained in other."""
        return (self + other).dim == other.dim

    def dual(self) -> "Subspace":
        return dual(self)

    def restrict(self, coords: Sequence[int]) -> "Subspace":
        coords = list(coords)
        return Subspace(self.field, len(coords), rref(self.basis[:, coords]))

    def elements(self) -> galois.FieldArray:
        coefficients = all_vectors(self.field, self.dim)
        if self.dim == 0:
            return self.field.Zeros((1, self.ambient_dim))
        return coefficients @ self.basis


def dual(space: Subspace) -> Subspace:
    """Orthogonal complement under the standard bilinear form."""
    field = space.field
    if space.dim == 0:
        return Subspace.full(field, space.ambient_dim)
    return Subspace(field, space.ambient_dim, rref(null_space(space.basis)))


def support_subcode(space: Subspace, coords: Iterable[int]) -> Subspace:
    """Elements of space whose support lies inside coords, as a subspace of F^n."""
    field = space.field
    inside = set(coords)
    outside = [j for j in range(space.ambient_dim) if j not in inside]
    if not outside:
        return space
    units = field.Zeros((len(outside), space.ambient_dim))
    for r, j in enumerate(outside):
        units[r, j] = 1
    complement = dual(space) + Subspace(field, space.ambient_dim, rref(units))
    return dual(complement)


def quotient_dim(W: Subspace, V: Subspace) -> int:
    """dim(W / V); V must lie inside W."""
    if not V.issubspace(W):
        raise ContainmentError(f"{V!r} is not contained in {W!r}")
    return W.dim - V.dim


# ============================================================================
# Linear codes
# ============================================================================

class LinearCode:
    """An injective linear map F^k -> F^n given by its n x k generator matrix."""

    def __init__(self, field: Field, generator):
        generator = field(np.asarray(generator, dtype=np.int64))
        if generator.ndim != 2:
            raise CodeError("generator must be a matrix")
        n, k = generator.shape
        if not 1 <= k <= n:
            raise CodeError(f"need 1 <= k <= n, got k={k}, n={n}")
        rank = int(np.linalg.matrix_rank(generator))
        if rank != k:
            raise CodeError(f"generator has rank {rank}, expected {k}")
        self.field = field
        self.generator = generator
        self.rule_cache: Dict[tuple, object] = {}  # (target, query set) -> local rule

    @classmethod
    def from_rows(cls, field: Field, rows: Sequence[Sequence[int]]) -> "LinearCode":
        return cls(field, [list(r) for r in rows])

    @property
    def n(self) -> int:
        return int(self.generator.shape[0])

    @property
    def k(self) -> int:
        return int(self.generator.shape[1])

    @property
    def order(self) -> int:
        return int(self.field.order)

    def row(self, j: int) -> galois.FieldArray:
        return self.generator[j]

    def encode(self, message) -> galois.FieldArray:
        return encode(self, message)

    def vector(self, values) -> galois.FieldArray:
        return self.field(np.asarray(values, dtype=np.int64))

    def messages(self) -> galois.FieldArray:
        return all_vectors(self.field, self.k)

    @cached_property
    def subspace(self) -> Subspace:
        return Subspace(self.field, self.n, rref(self.generator.T))

    def decode_word(self, word) -> Optional[galois.FieldArray]:
        """The unique message of a codeword, or None if word is not a codeword."""
        return solve(self.generator, self.vector(word))

    def __repr__(self) -> str:
        return f"LinearCode({describe_field(self.field)}, k={self.k}, n={self.n})"


def encode(code: LinearCode, message) -> galois.FieldArray:
    message = code.vector(message)
    if message.shape != (code.k,):
        raise CodeError(f"message length {message.shape} does not match k={code.k}")
    return code.generator @ message


def in_span(vector, coords: Iterable[int], code: LinearCode) -> Optional[galois.FieldArray]:
    """
    Coefficients c with sum_j c_j v_j = vector over j in coords (in the given order).

    Args:
        vector: Target vector in F^k
        coords: Row indices of the code
        code: The code

    Returns:
        Coefficient vector aligned with coords, or None when vector is outside the span
    """
    coords = list(coords)
    vector = code.vector(vector)
    if not coords:
        return code.field.Zeros(0) if not np.any(vector.view(np.ndarray)) else None
    rows = code.generator[coords]
    coefficients = solve(rows.T, vector)
    if coefficients is None:
        return None
    if not np.array_equal(as_ints(coefficients @ rows), as_ints(vector)):
        raise CodeError("span solver returned a non-solution")
    return coefficients


def restrict_code(code: LinearCode, coords: Iterable[int]) -> Subspace:
    """C|_S as a subspace of F^S (coordinates in the given order)."""
    coords = list(coords)
    rows = code.generator[coords]
    return Subspace(code.field, len(coords), rref(rows.T))


def random_code(field: Field, n: int, k: int, rng: np.random.Generator) -> LinearCode:
    """Uniform full-rank n x k generator, resampled until injective."""
    if not 1 <= k <= n:
        raise CodeError(f"need 1 <= k <= n, got k={k}, n={n}")
    while True:
        generator = field(rng.integers(0, field.order, size=(n, k)))
        if int(np.linalg.matrix_rank(generator)) == k:
            return LinearCode(field, generator)


def random_message(code: LinearCode, rng: np.random.Generator) -> galois.FieldArray:
    return code.field(rng.integers(0, code.order, size=code.k))


def hyperplane_points(code: LinearCode, vstar, sigma: int) -> galois.FieldArray:
    """Every message b with <vstar, b> = sigma, one per row."""
    particular, kernel = _hyperplane(code, vstar, sigma)
    combos = all_vectors(code.field, kernel.shape[0])
    if kernel.shape[0] == 0:
        return particular.reshape(1, -1)
    return combos @ kernel + particular


def random_codeword_constrained(code: LinearCode, vstar, sigma: int, rng: np.random.Generator) -> galois.FieldArray:
    """Uniform message b' on the affine hyperplane <vstar, b'> = sigma."""
    particular, kernel = _hyperplane(code, vstar, sigma)
    if kernel.shape[0] == 0:
        return particular
    weights = code.field(rng.integers(0, code.order, size=kernel.shape[0]))
    return weights @ kernel + particular


def _hyperplane(code: LinearCode, vstar, sigma: int) -> Tuple[galois.FieldArray, galois.FieldArray]:
    F = code.field
    vstar = code.vector(vstar)
    nonzero = np.flatnonzero(vstar.view(np.ndarray))
    if nonzero.size == 0:
        if sigma != 0:
            raise CodeError("vstar = 0 cannot take a nonzero value")
        return F.Zeros(code.k), F.Identity(code.k)
    particular = F.Zeros(code.k)
    p = int(nonzero[0])
    particular[p] = F(sigma) / vstar[p]
    kernel = rref(null_space(vstar.reshape(1, -1)))
    return particular, kernel


# ============================================================================
# Serialization
# ============================================================================

def dump_code(code: LinearCode) -> str:
    lines = [f"field {describe_field(code.field)}; k {code.k}; n {code.n}"]
    for row in as_ints(code.generator):
        lines.append(" ".join(str(int(x)) for x in row))
    return "\n".join(lines) + "\n"


def load_code(text: str) -> LinearCode:
    lines = [line.strip() for line in text.splitlines() if line.strip() and not line.startswith("#")]
    if not lines:
        raise CodeError("empty code file")
    header = {}
    for part in lines[0].split(";"):
        key, _, value = part.strip().partition(" ")
        header[key] = value.strip()
    try:
        field = scalar_field(header["field"])
        k, n = int(header["k"]), int(header["n"])
    except (KeyError, ValueError) as e:
        raise CodeError(f"malformed code header {lines[0]!r}: {e}")

    rows = [[int(x) for x in line.split()] for line in lines[1:]]
    if len(rows) != n or any(len(r) != k for r in rows):
        raise CodeError(f"expected {n} rows of {k} scalars")
    if any(not 0 <= x < field.order for r in rows for x in r):
        raise CodeError("scalar out of range for the declared field")
    return LinearCode.from_rows(field, rows)
