"""
Line-erasure attack on the line code.

Erasing every line through x* leaves a decoder that makes at most d line
queries with no information about f(x*): for the lines it reads there is a
degree-d polynomial g that vanishes on all of them with g(x*) = 1, so f and
f + beta*g look identical while their target bits are uniformly spread.
"""

import logging
from abc import ABC, abstractmethod
from dataclasses import dataclass, field
from fractions import Fraction
from functools import lru_cache
from typing import FrozenSet, List, Optional, Sequence, Tuple

import galois
import numpy as np

from locus.core.codealg import all_vectors
from locus.core.config import get_settings
from locus.core.errors import BudgetExceeded, HypothesisViolation, InvariantViolation
from locus.core.linecode import LineCodeParams, Poly, monomial_table, value_bit
from locus.core.runner import half_width, run_trials

logger = logging.getLogger(__name__)

LineView = Optional[Tuple[int, ...]]  # f along the line in lambda order, None when erased


@dataclass(frozen=True)
class ErasurePattern:
    erased_lines: FrozenSet[int]
    fraction: Fraction  # erased lines over all lines (= erased bits over N)


def erase_through(params: LineCodeParams, x: int) -> ErasurePattern:
    """Every line containing x; the erased fraction is asserted to be 2^{-t(n-1)}."""
    lines = frozenset(params.lines_through[x])
    fraction = Fraction(len(lines), params.num_lines)
    expected = Fraction(1, 2 ** (params.t * (params.n - 1)))
    if fraction != expected:
        raise InvariantViolation(f"erased fraction {fraction} != {expected}")
    return ErasurePattern(lines, fraction)


def no_erasures() -> ErasurePattern:
    return ErasurePattern(frozenset(), Fraction(0))


# ============================================================================
# Line-query oracle and decoders
# ============================================================================

class LineOracle:
    """Answers line queries with f along the line; counts them and enforces the budget."""

    def __init__(self, params: LineCodeParams, values: Sequence[int], erasure: ErasurePattern, limit: int):
        self.params = params
        self.values = values
        self.erasure = erasure
        self.limit = limit
        self.queried: List[int] = []

    def query(self, line: int) -> LineView:
        if len(self.queried) >= self.limit:
            raise HypothesisViolation(f"decoder exceeded {self.limit} line queries")
        self.queried.append(line)
        if line in self.erasure.erased_lines:
            return None
        return tuple(self.values[p] for p in self.params.line_points[line])


class LineQueryDecoder(ABC):
    """Randomised decision tree over line queries, given as coins plus a deterministic rule."""

    name: str = "abstract"

    def coins(self, params: LineCodeParams, x: int) -> List[Tuple[Fraction, object]]:
        return [(Fraction(1), None)]

    @abstractmethod
    def decide(self, params: LineCodeParams, x: int, alpha: int, i: int, coin, oracle: LineOracle) -> int:
        ...


class ConstantDecoder(LineQueryDecoder):
    name = "constant"

    def __init__(self, bit: int = 0):
        self.bit = bit

    def decide(self, params, x, alpha, i, coin, oracle):
        return self.bit


class ThroughPointDecoder(LineQueryDecoder):
    """Reads one line through x and returns the target bit; an erased answer reads as 0."""
    name = "through-point"

    def coins(self, params, x):
        through = params.lines_through[x]
        return [(Fraction(1, len(through)), line) for line in through]

    def decide(self, params, x, alpha, i, coin, oracle):
        view = oracle.query(coin)
        if view is None:
            return 0
        return value_bit(params, view[params.position[(coin, x)]], alpha, i)


def _interpolate_at(params: LineCodeParams, nodes: Sequence[int], values: Sequence[int], target: int) -> int:
    """Lowest-degree univariate interpolant through (nodes, values), evaluated at target."""
    if not nodes:
        return 0
    F = params.field.field
    total = F(0)
    for j, (lj, vj) in enumerate(zip(nodes, values)):
        term = F(vj)
        for m, lm in enumerate(nodes):
            if m != j:
                term = term * (F(target) - F(lm)) / (F(lj) - F(lm))
        total = total + term
    return int(total)


class InterpolatingDecoder(LineQueryDecoder):
    """
    Picks a line M through x, learns f at d other points of M through one
    non-erased line each, and interpolates f on M at x.
    """
    name = "interpolating"

    def coins(self, params, x):
        through = params.lines_through[x]
        return [(Fraction(1, len(through)), line) for line in through]

    def decide(self, params, x, alpha, i, coin, oracle):
        points = [p for p in params.line_points[coin] if p != x][: params.d]
        nodes, values = [], []
        for y in points:
            other = next((l for l in params.lines_through[y] if l != coin and l not in oracle.erasure.erased_lines), None)
            if other is None:
                continue
            view = oracle.query(other)
            if view is None:
                continue
            nodes.append(params.position[(coin, y)])
            values.append(view[params.position[(other, y)]])
        guess = _interpolate_at(params, nodes, values, params.position[(coin, x)])
        return value_bit(params, guess, alpha, i)


@lru_cache(maxsize=8)
def _all_evaluations(params: LineCodeParams) -> np.ndarray:
    """Evaluations of every polynomial (rows, coefficient-lexicographic) at every point."""
    size = params.q ** params.k * params.num_points
    budget = get_settings().LOCUS_EXACT_BUDGET
    if size > budget:
        raise BudgetExceeded(f"{params.q ** params.k} polynomials x {params.num_points} points exceeds budget {budget}")
    F = params.field.field
    values = all_vectors(F, params.k) @ monomial_table(params)
    return values.view(np.ndarray).astype(np.int64)


class GreedyConsistencyDecoder(LineQueryDecoder):
    """
    Adaptive: keeps the polynomials consistent with the answers so far, queries
    the non-erased line that best splits their values at x, and outputs the
    first consistent polynomial's bit.
    """
    name = "greedy-consistency"

    def decide(self, params, x, alpha, i, coin, oracle):
        table = _all_evaluations(params)
        alive = np.ones(table.shape[0], dtype=bool)
        for _ in range(oracle.limit):
            best, best_score = None, None
            for line in range(params.num_lines):
                if line in oracle.erasure.erased_lines or line in oracle.queried:
                    continue
                pts = params.line_points[line]
                views = table[alive][:, pts]
                score = len({tuple(r) for r in views.tolist()})
                if best_score is None or score > best_score:
                    best, best_score = line, score
            if best is None:
                break
            view = oracle.query(best)
            if view is None:
                continue
            alive &= np.all(table[:, params.line_points[best]] == np.array(view), axis=1)
        first = int(np.flatnonzero(alive)[0])
        return value_bit(params, int(table[first, x]), alpha, i)


DECODERS = {
    "constant": ConstantDecoder,
    "interpolating": InterpolatingDecoder,
    "greedy": GreedyConsistencyDecoder,
    "through-point": ThroughPointDecoder,
}


# ============================================================================
# Separating polynomials
# ============================================================================

def _dot(params: LineCodeParams, u: Sequence[int], v: Sequence[int]) -> int:
    total = 0
    for a, b in zip(u, v):
        total ^= params.mul[a][b]
    return total


def separating_poly(params: LineCodeParams, x: int, lines: Sequence[int]) -> Poly:
    """
    Polynomial of degree len(lines) that is 1 at x and vanishes on every given line.

    Each factor is <z - a, v> / <x - a, v> for the lexicographically first v
    with <b, v> = 0 and <x - a, v> != 0, where the line is a + lambda b.
    """
    point = params.point(x)
    g = Poly.constant(params.field, params.n, 1)
    for index in lines:
        line = params.lines[index]
        if x in params.line_points[index]:
            raise HypothesisViolation(f"{point} lies on line {line}")
        offset = tuple(p ^ a for p, a in zip(point, line.base))
        v = next(
            (v for v in params.points if _dot(params, line.direction, v) == 0 and _dot(params, offset, v) != 0),
            None,
        )
        if v is None:
            raise InvariantViolation(f"no separating functional for line {line}")
        c_inv = params.inv[_dot(params, offset, v)]
        coefficients = [params.mul[vm][c_inv] for vm in v]
        const = params.mul[_dot(params, line.base, v)][c_inv]
        g = g * Poly.linear(params.field, coefficients, const)
    return g


# ============================================================================
# Experiments
# ============================================================================

@dataclass
class ExperimentResult:
    decoder: str
    mode: str  # exact | monte_carlo
    success: object  # Fraction in exact mode, float otherwise
    erased_fraction: Fraction
    polynomials: int
    half_width: Optional[float] = None


def _run(decoder: LineQueryDecoder, params: LineCodeParams, x: int, alpha: int, i: int, coin, values, erasure: ErasurePattern) -> Tuple[int, List[int]]:
    oracle = LineOracle(params, values, erasure, params.d)
    out = decoder.decide(params, x, alpha, i, coin, oracle)
    return out, list(oracle.queried)


def attack_experiment(
    decoder: LineQueryDecoder,
    params: LineCodeParams,
    x: int,
    alpha: int,
    i: int,
    mode: str = "exact",
    trials: int = 0,
    seed: int = 0,
    erasure: Optional[ErasurePattern] = None,
) -> ExperimentResult:
    """
    Success probability of a line-query decoder against a uniformly random polynomial.

    Args:
        decoder: Decoder under attack
        params: Line code parameters
        x: Target point id
        alpha: Field element
        i: Bit index
        mode: "exact" enumerates every polynomial and coin, "monte_carlo" samples them
        trials: Monte Carlo trial count
        seed: Master seed
        erasure: Erasure pattern, defaults to every line through x

    Returns:
        ExperimentResult
    """
    erasure = erase_through(params, x) if erasure is None else erasure
    coins = decoder.coins(params, x)

    if mode == "exact":
        table = _all_evaluations(params)
        success = Fraction(0)
        for values in table.tolist():
            truth = value_bit(params, values[x], alpha, i)
            for weight, coin in coins:
                out, _ = _run(decoder, params, x, alpha, i, coin, values, erasure)
                if out == truth:
                    success += weight
        success /= table.shape[0]
        logger.info(f"🔍 {decoder.name}: exact success {success} over {table.shape[0]} polynomials")
        return ExperimentResult(decoder.name, mode, success, erasure.fraction, table.shape[0])

    if mode != "monte_carlo":
        raise ValueError(f"unknown mode: {mode}")
    F = params.field.field
    monomials = monomial_table(params)
    weights = np.array([float(w) for w, _ in coins])

    def trial(index: int, rng: np.random.Generator) -> int:
        coefficients = F(rng.integers(0, params.q, size=params.k))
        values = (coefficients @ monomials).view(np.ndarray).astype(np.int64).tolist()
        coin = coins[int(rng.choice(len(coins), p=weights / weights.sum()))][1]
        out, _ = _run(decoder, params, x, alpha, i, coin, values, erasure)
        return int(out == value_bit(params, values[x], alpha, i))

    wins = sum(run_trials(trial, trials, seed))
    return ExperimentResult(decoder.name, mode, wins / trials, erasure.fraction, trials, half_width(wins, trials))


@dataclass
class CosetReport:
    checked: int
    path_violations: int  # f + beta g took a different path or output
    bit_violations: int  # target bits not uniform over the coset
    examples: List[dict] = field(default_factory=list)

    @property
    def ok(self) -> bool:
        return self.path_violations == 0 and self.bit_violations == 0


def coset_symmetry_check(
    decoder: LineQueryDecoder,
    params: LineCodeParams,
    x: int,
    alpha: int,
    i: int,
    erasure: Optional[ErasurePattern] = None,
) -> CosetReport:
    """
    For every polynomial and coin, every f + beta g with g separating x from the
    lines read must follow the same path, and the target bits over beta must be balanced.
    """
    erasure = erase_through(params, x) if erasure is None else erasure
    table = _all_evaluations(params)
    F = params.field.field
    monomials = monomial_table(params)
    coefficients = all_vectors(F, params.k)
    report = CosetReport(0, 0, 0)

    for row, values in enumerate(table.tolist()):
        for _, coin in decoder.coins(params, x):
            out, queried = _run(decoder, params, x, alpha, i, coin, values, erasure)
            readable = [l for l in queried if l not in erasure.erased_lines]
            g = separating_poly(params, x, readable)
            g_values = (F(list(g.coefficients(params))) @ monomials)
            ones = 0
            for beta in range(params.q):
                shifted = (F(table[row]) + F(beta) * g_values).view(np.ndarray).astype(np.int64).tolist()
                out_h, queried_h = _run(decoder, params, x, alpha, i, coin, shifted, erasure)
                if (out_h, queried_h) != (out, queried):
                    report.path_violations += 1
                    if len(report.examples) < 5:
                        report.examples.append({"poly": as_row(coefficients[row]), "coin": repr(coin), "beta": beta})
                ones += value_bit(params, shifted[x], alpha, i)
            if alpha and ones * 2 != params.q:
                report.bit_violations += 1
            report.checked += 1
    return report


def as_row(vector: galois.FieldArray) -> List[int]:
    return vector.view(np.ndarray).astype(np.int64).tolist()
