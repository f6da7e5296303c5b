"""
Line code over GF(2^t)^n.

A message is a polynomial f of total degree <= d in n variables. For every line
L the codeword stores the Hadamard encoding of (f(z_0), ..., f(z_d)), where
z_j = a + j*b are the first d+1 points of L. A block is kept as its packed
seed: bits j*t .. j*t+t-1 hold f(z_j), so the block bit at v is the parity of
seed & v.
"""

import itertools
import logging
from dataclasses import dataclass
from fractions import Fraction
from math import ceil
from typing import Callable, Dict, FrozenSet, Iterable, List, Optional, Sequence, Tuple

import galois
import numpy as np

from locus.core.config import get_settings
from locus.core.decoder import BOTTOM, Outcome
from locus.core.errors import BudgetExceeded, CodeError
from locus.core.gf import FieldParams, mk_field
from locus.core.runner import half_width, run_trials

logger = logging.getLogger(__name__)

MAX_BLOCK_BITS = 62
MAX_LINE_FIELD_DEGREE = 10

Point = Tuple[int, ...]


def parity(x: int) -> int:
    return x.bit_count() & 1


@dataclass(frozen=True, order=True)
class Line:
    base: Point  # lexicographically least point of the line
    direction: Point  # first nonzero coordinate is 1


# ============================================================================
# Parameters
# ============================================================================

class LineCodeParams:
    """All tables of the line code for fixed (t, n, d)."""

    def __init__(self, t: int, n: int, d: int):
        self.t, self.n, self.d = t, n, d
        self.field: FieldParams = mk_field(t)
        self.q = self.field.order
        self.num_points = self.q ** n

        mul = self.field.mul_table
        self.mul: List[List[int]] = mul.tolist()
        self.inv: List[int] = self.field.inv_table.tolist()
        self.row_masks: List[List[int]] = self.field.row_masks.tolist()

        self.points: List[Point] = list(itertools.product(range(self.q), repeat=n))
        self.lines, self.line_points = self._enumerate_lines()
        self.num_lines = len(self.lines)
        self.line_index: Dict[Line, int] = {line: i for i, line in enumerate(self.lines)}
        self.lines_through: List[List[int]] = [[] for _ in range(self.num_points)]
        self.position: Dict[Tuple[int, int], int] = {}
        for index, row in enumerate(self.line_points):
            for lam, p in enumerate(row):
                self.lines_through[p].append(index)
                self.position[(index, p)] = lam

        self.monomials: List[Tuple[int, ...]] = sorted(
            (e for e in itertools.product(range(d + 1), repeat=n) if sum(e) <= d),
            key=lambda e: (sum(e), tuple(-x for x in e)),
        )
        self.k = len(self.monomials)
        self.message_bits = t * self.k
        self.block_bits = t * (d + 1)
        self.block_length = 1 << self.block_bits
        self.N = self.num_lines * self.block_length
        self.lagrange = self._lagrange_table()

    def point_id(self, point: Sequence[int]) -> int:
        value = 0
        for x in point:
            value = value * self.q + int(x)
        return value

    def point(self, point_id: int) -> Point:
        return self.points[point_id]

    def _shift(self, a: Point, lam: int, b: Point) -> Point:
        return tuple(x ^ self.mul[lam][y] for x, y in zip(a, b))

    def _enumerate_lines(self) -> Tuple[List[Line], List[List[int]]]:
        directions = [p for p in self.points if any(p) and p[next(i for i, x in enumerate(p) if x)] == 1]
        found = []
        for b in directions:
            covered = set()
            for a in self.points:
                if a in covered:
                    continue
                pts = [self._shift(a, lam, b) for lam in range(self.q)]
                covered.update(pts)
                found.append((Line(a, b), [self.point_id(p) for p in pts]))
        found.sort(key=lambda item: item[0])
        return [line for line, _ in found], [pts for _, pts in found]

    def _lagrange_table(self) -> List[List[int]]:
        """lagrange[lam][j] = l_j(lam) for the nodes 0..d."""
        nodes = list(range(self.d + 1))
        table = []
        for lam in range(self.q):
            row = []
            for j in nodes:
                value = 1
                for m in nodes:
                    if m == j:
                        continue
                    value = self.mul[value][lam ^ m]
                    value = self.mul[value][self.inv[j ^ m]]
                row.append(value)
            table.append(row)
        return table

    def expected_lines(self) -> int:
        size = self.q ** self.n
        return size * (size - 1) // (self.q * (self.q - 1))

    def __repr__(self) -> str:
        return f"LineCodeParams(t={self.t}, n={self.n}, d={self.d}, lines={self.num_lines}, N={self.N})"


def mk_params(t: int, n: int, d: int) -> LineCodeParams:
    """
    Build line-code parameters.

    Args:
        t: Field degree, GF(2^t)
        n: Number of variables
        d: Degree bound, d < 2^t

    Returns:
        LineCodeParams
    """
    if n < 1 or d < 0:
        raise CodeError(f"need n >= 1 and d >= 0, got n={n}, d={d}")
    if d >= 2 ** t:
        raise CodeError(f"d={d} must be below 2^t={2 ** t} to interpolate on a line")
    if t > MAX_LINE_FIELD_DEGREE:
        raise BudgetExceeded(f"t={t} exceeds the table-based limit {MAX_LINE_FIELD_DEGREE}")
    if t * (d + 1) > MAX_BLOCK_BITS:
        raise BudgetExceeded(f"blocks of {t * (d + 1)} bits exceed {MAX_BLOCK_BITS}")
    q = 2 ** t
    lines = q ** n * (q ** n - 1) // (q * (q - 1))
    budget = get_settings().LOCUS_LINE_BUDGET
    if lines > budget:
        raise BudgetExceeded(f"{lines} lines exceed the line budget {budget}")

    params = LineCodeParams(t, n, d)
    if params.num_lines != params.expected_lines():
        raise CodeError(f"enumerated {params.num_lines} lines, expected {params.expected_lines()}")
    logger.debug(f"Built {params!r}")
    return params


# ============================================================================
# Polynomials
# ============================================================================

@dataclass(frozen=True)
class Poly:
    """Polynomial over GF(2^t) in n variables as {exponent tuple: coefficient}."""
    field: FieldParams
    n: int
    terms: Tuple[Tuple[Tuple[int, ...], int], ...]  # sorted, nonzero coefficients only

    @classmethod
    def from_terms(cls, field: FieldParams, n: int, terms: Dict[Tuple[int, ...], int]) -> "Poly":
        return cls(field, n, tuple(sorted((e, c) for e, c in terms.items() if c)))

    @classmethod
    def constant(cls, field: FieldParams, n: int, value: int) -> "Poly":
        return cls.from_terms(field, n, {(0,) * n: value})

    @classmethod
    def linear(cls, field: FieldParams, coefficients: Sequence[int], const: int = 0) -> "Poly":
        n = len(coefficients)
        terms = {(0,) * n: const}
        for m, c in enumerate(coefficients):
            e = [0] * n
            e[m] = 1
            terms[tuple(e)] = c
        return cls.from_terms(field, n, terms)

    @classmethod
    def from_coefficients(cls, params: LineCodeParams, coefficients: Sequence[int]) -> "Poly":
        if len(coefficients) != params.k:
            raise CodeError(f"expected {params.k} coefficients, got {len(coefficients)}")
        return cls.from_terms(params.field, params.n, dict(zip(params.monomials, map(int, coefficients))))

    @property
    def degree(self) -> int:
        return max((sum(e) for e, _ in self.terms), default=0)

    def __add__(self, other: "Poly") -> "Poly":
        merged = dict(self.terms)
        for e, c in other.terms:
            merged[e] = merged.get(e, 0) ^ c
        return Poly.from_terms(self.field, self.n, merged)

    def scale(self, value: int) -> "Poly":
        F = self.field.field
        return Poly.from_terms(self.field, self.n, {e: int(F(c) * F(value)) for e, c in self.terms})

    def __mul__(self, other: "Poly") -> "Poly":
        F = self.field.field
        product: Dict[Tuple[int, ...], int] = {}
        for (e1, c1), (e2, c2) in itertools.product(self.terms, other.terms):
            e = tuple(x + y for x, y in zip(e1, e2))
            product[e] = product.get(e, 0) ^ int(F(c1) * F(c2))
        return Poly.from_terms(self.field, self.n, product)

    def evaluate(self, point: Sequence[int]) -> int:
        F = self.field.field
        total = F(0)
        for e, c in self.terms:
            term = F(c)
            for x, power in zip(point, e):
                if power:
                    term = term * F(int(x)) ** power
            total = total + term
        return int(total)

    def coefficients(self, params: LineCodeParams) -> Tuple[int, ...]:
        """Coefficients in params.monomials order; the degree must fit params.d."""
        if self.degree > params.d:
            raise CodeError(f"degree {self.degree} exceeds d={params.d}")
        terms = dict(self.terms)
        return tuple(terms.get(e, 0) for e in params.monomials)

    def lift(self, params: LineCodeParams) -> "Poly":
        return Poly.from_coefficients(params, self.coefficients(params))


def monomial_table(params: LineCodeParams) -> galois.FieldArray:
    """table[m, p] = value of monomial m at point p."""
    F = params.field.field
    coords = F(np.array(params.points, dtype=np.int64).reshape(params.num_points, params.n))
    table = F.Ones((params.k, params.num_points))
    for m, e in enumerate(params.monomials):
        for var, power in enumerate(e):
            if power:
                table[m] = table[m] * coords[:, var] ** power
    return table


def evaluations(params: LineCodeParams, f: Poly) -> List[int]:
    F = params.field.field
    values = F(list(f.coefficients(params))) @ monomial_table(params)
    return values.view(np.ndarray).astype(np.int64).tolist()


# ============================================================================
# Codewords
# ============================================================================

@dataclass(frozen=True, eq=False)
class LineCodeword:
    params: LineCodeParams
    seeds: Tuple[int, ...]  # packed f(S_L) per line
    flips: FrozenSet[Tuple[int, int]] = frozenset()  # (line, v) bit flips
    erased: FrozenSet[int] = frozenset()  # fully erased lines

    def read(self, line: int, v: int) -> Optional[int]:
        """Block bit at v, or None on an erased line."""
        if line in self.erased:
            return None
        return parity(self.seeds[line] & v) ^ ((line, v) in self.flips)

    def corrupt(self, positions: Iterable[Tuple[int, int]]) -> "LineCodeword":
        return LineCodeword(self.params, self.seeds, self.flips ^ frozenset(positions), self.erased)

    def overwrite(self, line: int, seed: int) -> "LineCodeword":
        seeds = list(self.seeds)
        seeds[line] = seed
        flips = frozenset(f for f in self.flips if f[0] != line)
        return LineCodeword(self.params, tuple(seeds), flips, self.erased)

    def erase(self, lines: Iterable[int]) -> "LineCodeword":
        return LineCodeword(self.params, self.seeds, self.flips, self.erased | frozenset(lines))

    def bits(self) -> np.ndarray:
        """Dense bit string of length N; erased bits read as 0."""
        budget = get_settings().LOCUS_EXACT_BUDGET
        if self.params.N > budget:
            raise BudgetExceeded(f"dense word of {self.params.N} bits exceeds budget {budget}")
        out = np.zeros(self.params.N, dtype=np.uint8)
        size = self.params.block_length
        for line in range(self.params.num_lines):
            for v in range(size):
                out[line * size + v] = self.read(line, v) or 0
        return out


def encode(params: LineCodeParams, f: Poly) -> LineCodeword:
    values = evaluations(params, f)
    seeds = []
    for row in params.line_points:
        seed = 0
        for j in range(params.d + 1):
            seed |= values[row[j]] << (j * params.t)
        seeds.append(seed)
    return LineCodeword(params, tuple(seeds))


def message_to_poly(params: LineCodeParams, bits: Sequence[int]) -> Poly:
    """t-bit blocks, least significant bit first, as monomial coefficients."""
    if len(bits) != params.message_bits:
        raise CodeError(f"message has {len(bits)} bits, expected {params.message_bits}")
    coefficients = []
    for m in range(params.k):
        chunk = bits[m * params.t:(m + 1) * params.t]
        coefficients.append(sum(int(b) << i for i, b in enumerate(chunk)))
    return Poly.from_coefficients(params, coefficients)


def encode_message(params: LineCodeParams, bits: Sequence[int]) -> LineCodeword:
    return encode(params, message_to_poly(params, bits))


def random_poly(params: LineCodeParams, rng: np.random.Generator) -> Poly:
    return Poly.from_coefficients(params, rng.integers(0, params.q, size=params.k).tolist())


def interp_vector(params: LineCodeParams, line: int, z: int, alpha: int, i: int) -> int:
    """
    Block position whose bit is pi(alpha f(z))_i for every f.

    Args:
        params: Line code parameters
        line: Line index
        z: Point id on the line
        alpha: Field element
        i: Bit index in [0, t)

    Returns:
        Packed vector of t(d+1) bits
    """
    lam = params.position.get((line, z))
    if lam is None:
        raise CodeError(f"point {params.point(z)} is not on line {params.lines[line]}")
    if not 0 <= i < params.t:
        raise CodeError(f"bit index {i} outside [0, {params.t})")
    coefficients = params.lagrange[lam]
    v = 0
    for j, c in enumerate(coefficients):
        v |= params.row_masks[params.mul[alpha][c]][i] << (j * params.t)
    return v


def value_bit(params: LineCodeParams, value: int, alpha: int, i: int) -> int:
    """pi(alpha * value)_i."""
    return (params.mul[alpha][value] >> i) & 1


# ============================================================================
# Linearity testing and self-correction
# ============================================================================

BlockReader = Callable[[int], int]


def blr_test(reader: BlockReader, bits: int, rng: np.random.Generator) -> bool:
    v1 = int(rng.integers(0, 1 << bits))
    v2 = int(rng.integers(0, 1 << bits))
    return reader(v1) ^ reader(v2) ^ reader(v1 ^ v2) == 0


def self_correct(reader: BlockReader, v: int, bits: int, rng: np.random.Generator) -> int:
    r = int(rng.integers(0, 1 << bits))
    return reader(v ^ r) ^ reader(r)


def _linear_tables(bits: int) -> np.ndarray:
    """tables[s, v] = <s, v> over F_2."""
    size = 1 << bits
    v = np.arange(size, dtype=np.int64)
    anded = v[:, None] & v[None, :]
    out = np.zeros_like(anded)
    while np.any(anded):
        out ^= anded & 1
        anded >>= 1
    return out.astype(np.uint8)


def distance_to_linear(table: Sequence[int]) -> Tuple[Fraction, int]:
    """Relative distance from a truth table on F_2^m to the closest linear function, and that function's mask."""
    table = np.asarray(table, dtype=np.uint8)
    bits = int(table.size).bit_length() - 1
    if 1 << bits != table.size:
        raise ValueError("truth table length must be a power of two")
    disagreements = (_linear_tables(bits) != table[None, :]).sum(axis=1)
    best = int(np.argmin(disagreements))
    return Fraction(int(disagreements[best]), table.size), best


def blr_rejection_rate(table: Sequence[int]) -> Fraction:
    """Exact Pr over (v1, v2) that the BLR test rejects."""
    table = np.asarray(table, dtype=np.uint8)
    v = np.arange(table.size)
    rejected = table[v][:, None] ^ table[v][None, :] ^ table[v[:, None] ^ v[None, :]]
    return Fraction(int(rejected.sum()), table.size ** 2)


def self_correct_error(table: Sequence[int], mask: int) -> Fraction:
    """Largest over v of Pr_r[G(v+r) + G(r) != <mask, v>]."""
    table = np.asarray(table, dtype=np.uint8)
    bits = int(table.size).bit_length() - 1
    linear = _linear_tables(bits)[mask]
    v = np.arange(table.size)
    corrected = table[v[:, None] ^ v[None, :]] ^ table[v][None, :]
    wrong = (corrected != linear[:, None]).sum(axis=1)
    return Fraction(int(wrong.max()), table.size)


# ============================================================================
# Decoders
# ============================================================================

class _Reader:
    """Counts reads; erased bits are answered with 0."""

    def __init__(self, word: LineCodeword):
        self.word = word
        self.queries = 0

    def block(self, line: int) -> BlockReader:
        def read(v: int) -> int:
            self.queries += 1
            return self.word.read(line, v) or 0
        return read


def rldc_query_count(r1: int = 2, r2: int = 2, reuse: bool = True) -> int:
    return 3 * r1 + 4 * r2 + (1 if reuse else 2)


def rlcc_query_count(r1: int = 2, r2: int = 2, reuse: bool = True, inner: Optional[int] = None) -> int:
    inner = rldc_query_count() if inner is None else inner
    return 3 * r1 + (2 + inner) * r2 + (1 if reuse else 2)


def _rldc(reader: _Reader, x: int, alpha: int, i: int, r1: int, r2: int, reuse: bool, rng: np.random.Generator) -> Outcome:
    params = reader.word.params
    bits = params.block_bits
    through_x = params.lines_through[x]
    line = through_x[int(rng.integers(0, len(through_x)))]
    G = reader.block(line)

    for _ in range(r1):
        if not blr_test(G, bits, rng):
            return BOTTOM

    saved = None  # (v4, G(v4)) from the first consistency round
    others = [p for p in params.line_points[line] if p != x]
    for _ in range(r2):
        y = others[int(rng.integers(0, len(others)))]
        a = int(rng.integers(0, params.q))
        bit = int(rng.integers(0, params.t))
        v4 = int(rng.integers(0, 1 << bits))
        g4 = G(v4)
        if saved is None:
            saved = (v4, g4)
        a_star = G(interp_vector(params, line, y, a, bit) ^ v4) ^ g4

        through_y = params.lines_through[y]
        other = through_y[int(rng.integers(0, len(through_y)))]
        a_other = self_correct(reader.block(other), interp_vector(params, other, y, a, bit), bits, rng)
        if a_star != a_other:
            return BOTTOM

    target = interp_vector(params, line, x, alpha, i)
    if reuse:
        v6, g6 = saved
        return G(target ^ v6) ^ g6
    return self_correct(G, target, bits, rng)


def rldc_decode(
    word: LineCodeword,
    x: int,
    alpha: int,
    i: int,
    r1: int = 2,
    r2: int = 2,
    reuse: bool = True,
    rng: Optional[np.random.Generator] = None,
) -> Tuple[Outcome, int]:
    """
    Relaxed local decoding of pi(alpha f(x))_i.

    Args:
        word: Possibly corrupted codeword
        x: Point id
        alpha: Field element
        i: Bit index
        r1: Linearity-test rounds
        r2: Consistency-test rounds
        reuse: Reuse the first consistency round's random point for the final read
        rng: Coin source

    Returns:
        (bit or BOTTOM, number of bit queries made)
    """
    if reuse and r2 < 1:
        raise ValueError("reuse needs at least one consistency round")
    rng = rng if rng is not None else np.random.default_rng()
    reader = _Reader(word)
    outcome = _rldc(reader, x, alpha, i, r1, r2, reuse, rng)
    return outcome, reader.queries


def rlcc_decode(
    word: LineCodeword,
    line: int,
    v: int,
    r1: int = 2,
    r2: int = 2,
    reuse: bool = True,
    rng: Optional[np.random.Generator] = None,
) -> Tuple[Outcome, int]:
    """Relaxed local correction of block bit v on the given line; the inner decoder runs with r1=r2=2 and reuse."""
    if reuse and r2 < 1:
        raise ValueError("reuse needs at least one consistency round")
    rng = rng if rng is not None else np.random.default_rng()
    params = word.params
    bits = params.block_bits
    reader = _Reader(word)
    G = reader.block(line)

    for _ in range(r1):
        if not blr_test(G, bits, rng):
            return BOTTOM, reader.queries

    saved = None
    points = params.line_points[line]
    for _ in range(r2):
        y = points[int(rng.integers(0, len(points)))]
        a = int(rng.integers(0, params.q))
        bit = int(rng.integers(0, params.t))
        v4 = int(rng.integers(0, 1 << bits))
        g4 = G(v4)
        if saved is None:
            saved = (v4, g4)
        a_star = G(interp_vector(params, line, y, a, bit) ^ v4) ^ g4
        a_inner = _rldc(reader, y, a, bit, 2, 2, True, rng)
        if a_inner is BOTTOM or a_inner != a_star:
            return BOTTOM, reader.queries

    if reuse:
        v6, g6 = saved
        return G(v ^ v6) ^ g6, reader.queries
    return self_correct(G, v, bits, rng), reader.queries


# ============================================================================
# Soundness envelopes
# ============================================================================

def eta_bound(epsilon: float, delta: float, d_over_n: float, r1: int = 2, r2: int = 2) -> float:
    """Soundness envelope of the decoder at linearity distance epsilon."""
    c = float(delta) ** (1 / 3)
    passing = (1 - epsilon) ** r1
    return max(
        c,
        passing * (c + d_over_n + (1 - d_over_n) * (0.5 + c + epsilon)) ** r2,
        passing * 2 * epsilon,
    )


def eta_bound_rlcc(epsilon: float, d_over_n: float, eta_rldc: float, r1: int = 2, r2: int = 2) -> float:
    """Soundness envelope of the corrector given the inner decoder's envelope."""
    passing = (1 - epsilon) ** r1
    round_pass = d_over_n + 0.5 * (1 - d_over_n) * (1 + eta_rldc + (1 - eta_rldc) * 2 * epsilon)
    return max(passing * round_pass ** r2, passing * 2 * epsilon)


def eta_sup(delta: float, d_over_n: float, r1: int = 2, r2: int = 2, steps: int = 1000, corrector: bool = False, eta_rldc: Optional[float] = None) -> Tuple[float, float]:
    """Maximum of the envelope over an epsilon grid on [0, 1]; returns (value, argmax)."""
    if corrector and eta_rldc is None:
        eta_rldc, _ = eta_sup(delta, d_over_n, steps=steps)
    grid = np.linspace(0.0, 1.0, steps + 1)
    if corrector:
        values = [eta_bound_rlcc(e, d_over_n, eta_rldc, r1, r2) for e in grid]
    else:
        values = [eta_bound(e, delta, d_over_n, r1, r2) for e in grid]
    best = int(np.argmax(values))
    return float(values[best]), float(grid[best])


# ============================================================================
# Adversaries and measurements
# ============================================================================

def random_corruption(word: LineCodeword, rho: float, rng: np.random.Generator) -> LineCodeword:
    """Flip ceil(rho N) distinct uniformly chosen bits."""
    params = word.params
    count = min(params.N, ceil(rho * params.N))
    chosen = rng.choice(params.N, size=count, replace=False) if count else []
    return word.corrupt((int(p) // params.block_length, int(p) % params.block_length) for p in chosen)


def overwrite_line(word: LineCodeword, line: int, g: Poly) -> LineCodeword:
    """Replace one line's block with the block of another polynomial."""
    return word.overwrite(line, encode(word.params, g).seeds[line])


def truth_bit(clean: LineCodeword, x: int, alpha: int, i: int) -> int:
    params = clean.params
    line = params.lines_through[x][0]
    return clean.read(line, interp_vector(params, line, x, alpha, i))


def line_overwrite_outcomes(word: LineCodeword, x: int, alpha: int, i: int, r2: int = 2) -> Dict[Outcome, Fraction]:
    """
    Exact outcome distribution of the decoder on a word whose blocks are all linear.

    Linearity tests always pass and self-correction is exact, so only the
    choice of line through x and the consistency rounds matter.
    """
    if word.flips or word.erased:
        raise ValueError("exact outcomes need a word without bit flips or erasures")
    params = word.params
    through_x = params.lines_through[x]
    result: Dict[Outcome, Fraction] = {}

    def bit(line: int, z: int, a: int, b: int) -> int:
        return parity(word.seeds[line] & interp_vector(params, line, z, a, b))

    for line in through_x:
        others = [p for p in params.line_points[line] if p != x]
        agree, total = 0, 0
        for y in others:
            for a in range(params.q):
                for b in range(params.t):
                    expected = bit(line, y, a, b)
                    for other in params.lines_through[y]:
                        agree += bit(other, y, a, b) == expected
                        total += 1
        p_round = Fraction(agree, total)
        p_pass = p_round ** r2
        share = Fraction(1, len(through_x))
        output = bit(line, x, alpha, i)
        result[output] = result.get(output, Fraction(0)) + share * p_pass
        result[BOTTOM] = result.get(BOTTOM, Fraction(0)) + share * (1 - p_pass)
    return {k: v for k, v in result.items() if v}


@dataclass
class DecodeStats:
    trials: int
    errors: int  # outputs outside {truth, bottom}
    bottoms: int
    max_queries: int
    error_rate: float
    bottom_rate: float
    half_width: float  # 3 sigma on error_rate


def decode_sweep(
    word: LineCodeword,
    clean: LineCodeword,
    trials: int,
    seed: int,
    corrector: bool = False,
    r1: int = 2,
    r2: int = 2,
    reuse: bool = True,
    workers: Optional[int] = None,
) -> DecodeStats:
    """Run the decoder (or corrector) on uniformly random targets and count wrong non-bottom outputs."""
    params = word.params

    def trial(index: int, rng: np.random.Generator) -> Tuple[int, int, int]:
        if corrector:
            line = int(rng.integers(0, params.num_lines))
            v = int(rng.integers(0, params.block_length))
            outcome, queries = rlcc_decode(word, line, v, r1, r2, reuse, rng)
            truth = clean.read(line, v)
        else:
            x = int(rng.integers(0, params.num_points))
            alpha = int(rng.integers(0, params.q))
            i = int(rng.integers(0, params.t))
            outcome, queries = rldc_decode(word, x, alpha, i, r1, r2, reuse, rng)
            truth = truth_bit(clean, x, alpha, i)
        if outcome is BOTTOM:
            return 0, 1, queries
        return int(outcome != truth), 0, queries

    results = run_trials(trial, trials, seed, workers)
    errors = sum(r[0] for r in results)
    bottoms = sum(r[1] for r in results)
    return DecodeStats(
        trials,
        errors,
        bottoms,
        max((r[2] for r in results), default=0),
        errors / trials,
        bottoms / trials,
        half_width(errors, trials),
    )


# ============================================================================
# Word format
# ============================================================================

def dump_word(word: LineCodeword, dense: bool = False) -> str:
    params = word.params
    lines = [f"linecode t {params.t}; n {params.n}; d {params.d}"]
    lines += [f"seed {i} {s}" for i, s in enumerate(word.seeds)]
    lines += [f"flip {line} {v}" for line, v in sorted(word.flips)]
    lines += [f"erase {line}" for line in sorted(word.erased)]
    if dense:
        lines.append("bits " + "".join(map(str, word.bits().tolist())))
    return "\n".join(lines) + "\n"


def load_word(text: str) -> LineCodeword:
    rows = [r.strip() for r in text.splitlines() if r.strip() and not r.startswith("#")]
    if not rows or not rows[0].startswith("linecode"):
        raise CodeError("word file must start with 'linecode'")
    header = {}
    for part in rows[0][len("linecode"):].split(";"):
        key, _, value = part.strip().partition(" ")
        header[key] = int(value)
    params = mk_params(header["t"], header["n"], header["d"])

    seeds = [0] * params.num_lines
    flips, erased = set(), set()
    for row in rows[1:]:
        kind, *values = row.split()
        if kind == "seed":
            seeds[int(values[0])] = int(values[1])
        elif kind == "flip":
            flips.add((int(values[0]), int(values[1])))
        elif kind == "erase":
            erased.add(int(values[0]))
        elif kind != "bits":
            raise CodeError(f"unknown word record {kind!r}")
    return LineCodeword(params, tuple(seeds), frozenset(flips), frozenset(erased))
