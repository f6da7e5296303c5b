"""
Decoder models and their exact evaluation.

A nonadaptive decoder is a per-target distribution over query sets together
with the canonical rule: output bottom when the view is inconsistent with the
code, else the unique target value. Adaptive decoders are distributions over
decision trees. Every probability is a Fraction.
"""

import itertools
import logging
from abc import ABC, abstractmethod
from collections import defaultdict
from dataclasses import dataclass
from enum import Enum
from fractions import Fraction
from math import comb
from typing import Dict, Iterable, Iterator, List, Mapping, Optional, Protocol, Sequence, Tuple, Union

import galois
import numpy as np

from locus.core.codealg import LinearCode, as_ints, encode, in_span, null_space, random_message
from locus.core.config import get_settings
from locus.core.errors import BudgetExceeded, CodeError, CompletenessViolation
from locus.core.runner import half_width, run_trials

logger = logging.getLogger(__name__)

BOTTOM = None
GLOBAL_DECODE = "global"

Outcome = Optional[int]
Label = Union[int, None, str]
QuerySet = Tuple[int, ...]


# ============================================================================
# Targets
# ============================================================================

class TargetKind(str, Enum):
    MESSAGE = "m"  # decode b_i
    CODEWORD = "c"  # correct C(b)_u


@dataclass(frozen=True, order=True)
class Target:
    kind: TargetKind
    index: int

    @classmethod
    def message(cls, index: int) -> "Target":
        return cls(TargetKind.MESSAGE, index)

    @classmethod
    def codeword(cls, index: int) -> "Target":
        return cls(TargetKind.CODEWORD, index)

    @classmethod
    def parse(cls, text: str) -> "Target":
        text = text.strip()
        if len(text) < 2 or text[0] not in "mc" or not text[1:].isdigit():
            raise ValueError(f"target must look like m<i> or c<u>, got {text!r}")
        return cls(TargetKind(text[0]), int(text[1:]))

    def __str__(self) -> str:
        return f"{self.kind.value}{self.index}"

    def validate(self, code: LinearCode) -> None:
        limit = code.k if self.kind is TargetKind.MESSAGE else code.n
        if not 0 <= self.index < limit:
            raise CodeError(f"target {self} out of range (limit {limit})")


def target_vector(code: LinearCode, target: Target) -> galois.FieldArray:
    """v* = e_i for a message target, v_u for a codeword target."""
    target.validate(code)
    if target.kind is TargetKind.MESSAGE:
        vector = code.field.Zeros(code.k)
        vector[target.index] = 1
        return vector
    return code.row(target.index).copy()


def truth(code: LinearCode, target: Target, message) -> int:
    return int(target_vector(code, target) @ code.vector(message))


def all_targets(code: LinearCode, kind: TargetKind = TargetKind.MESSAGE) -> List[Target]:
    limit = code.k if kind is TargetKind.MESSAGE else code.n
    return [Target(kind, i) for i in range(limit)]


# ============================================================================
# Query distributions
# ============================================================================

@dataclass(frozen=True)
class QueryDistribution:
    """Distribution over query sets; entries sorted, deduplicated, weights sum to 1."""
    entries: Tuple[Tuple[QuerySet, Fraction], ...]

    @classmethod
    def from_weights(cls, weights) -> "QueryDistribution":
        """Build from a mapping or (query set, weight) pairs; duplicate sets are merged."""
        items = weights.items() if isinstance(weights, Mapping) else weights
        merged: Dict[QuerySet, Fraction] = defaultdict(Fraction)
        for query_set, weight in items:
            weight = Fraction(weight)
            if weight < 0:
                raise ValueError(f"negative weight {weight}")
            if weight:
                merged[tuple(sorted(set(query_set)))] += weight
        total = sum(merged.values(), Fraction(0))
        if total != 1:
            raise ValueError(f"query distribution weights sum to {total}, not 1")
        return cls(tuple(sorted(merged.items())))

    @classmethod
    def point(cls, query_set: Iterable[int]) -> "QueryDistribution":
        return cls.from_weights({tuple(query_set): 1})

    @property
    def support(self) -> Tuple[QuerySet, ...]:
        return tuple(q for q, _ in self.entries)

    @property
    def max_size(self) -> int:
        return max((len(q) for q, _ in self.entries), default=0)

    def probability_of(self, j: int) -> Fraction:
        return sum((w for q, w in self.entries if j in q), Fraction(0))

    def coordinate_probabilities(self, n: int) -> List[Fraction]:
        probs = [Fraction(0)] * n
        for query_set, weight in self.entries:
            for j in query_set:
                probs[j] += weight
        return probs

    def condition(self, keep) -> Tuple[Optional["QueryDistribution"], Fraction]:
        """Restrict to sets satisfying keep(Q) and renormalize; returns (part, mass)."""
        kept = [(q, w) for q, w in self.entries if keep(q)]
        mass = sum((w for _, w in kept), Fraction(0))
        if mass == 0:
            return None, mass
        return QueryDistribution.from_weights([(q, w / mass) for q, w in kept]), mass


# ============================================================================
# Canonical local rule
# ============================================================================

@dataclass(frozen=True, eq=False)
class LocalRule:
    checks: galois.FieldArray  # rows h with h . z = 0 for every z in C|_Q
    coefficients: galois.FieldArray  # c with c . z = <v*, b> whenever z = C(b)|_Q


def local_rule(code: LinearCode, target: Target, query_set: Sequence[int]) -> LocalRule:
    """Parity checks of C|_Q and the decoding coefficients for the target; cached per code."""
    key = (target, tuple(query_set))
    rule = code.rule_cache.get(key)
    if rule is not None:
        return rule

    vstar = target_vector(code, target)
    coefficients = in_span(vstar, query_set, code)
    if coefficients is None:
        raise CompletenessViolation(
            f"target {target} is not determined by queries {list(query_set)}"
        )
    if query_set:
        checks = null_space(code.generator[list(query_set)].T)
    else:
        checks = code.field.Zeros((0, 0))
    rule = LocalRule(checks, coefficients)
    code.rule_cache[key] = rule
    return rule


def is_consistent(code: LinearCode, query_set: Sequence[int], view) -> bool:
    """True when view lies in C|_Q."""
    if not query_set:
        return True
    view = code.vector(view)
    rows = code.generator[list(query_set)]
    checks = null_space(rows.T)
    if checks.shape[0] == 0:
        return True
    return not np.any(as_ints(checks @ view))


def canonical_decode(code: LinearCode, target: Target, query_set: Sequence[int], view) -> Outcome:
    """
    Canonical decoding of a local view.

    Args:
        code: The code
        target: Decoding target
        query_set: Queried coordinates, aligned with view
        view: Symbols read at query_set

    Returns:
        BOTTOM if view is inconsistent with every codeword, else the target value
    """
    rule = local_rule(code, target, query_set)
    if not query_set:
        return 0
    view = code.vector(view)
    if rule.checks.shape[0] and np.any(as_ints(rule.checks @ view)):
        return BOTTOM
    return int(rule.coefficients @ view)


# ============================================================================
# Decoders
# ============================================================================

def _sample_outcome(distribution: Mapping[Outcome, Fraction], rng: np.random.Generator) -> Outcome:
    draw = Fraction(int(rng.integers(0, 2 ** 53)), 2 ** 53)
    acc = Fraction(0)
    outcomes = sorted(distribution.items(), key=lambda kv: (kv[0] is None, kv[0] or 0))
    for outcome, probability in outcomes:
        acc += probability
        if draw < acc:
            return outcome
    return outcomes[-1][0]


class Decoder(ABC):
    """Common interface: exact outcome distribution plus coin-level sampling."""

    code: LinearCode

    @property
    @abstractmethod
    def targets(self) -> Tuple[Target, ...]:
        ...

    @property
    @abstractmethod
    def query_count(self) -> int:
        ...

    @abstractmethod
    def outcome_distribution(self, target: Target, word) -> Dict[Outcome, Fraction]:
        ...

    def sample(self, target: Target, word, rng: np.random.Generator) -> Outcome:
        return _sample_outcome(self.outcome_distribution(target, word), rng)


class NonadaptiveDecoder(Decoder):
    """Per-target query distributions with the canonical decoding rule attached."""

    def __init__(self, code: LinearCode, distributions: Mapping[Target, QueryDistribution], q: Optional[int] = None):
        self.code = code
        self.distributions = dict(sorted(distributions.items()))
        largest = max((d.max_size for d in self.distributions.values()), default=0)
        self.q = largest if q is None else q
        if largest > self.q:
            raise ValueError(f"query set of size {largest} exceeds q={self.q}")
        for target, dist in self.distributions.items():
            for query_set in dist.support:
                local_rule(code, target, query_set)

    @property
    def targets(self) -> Tuple[Target, ...]:
        return tuple(self.distributions)

    @property
    def query_count(self) -> int:
        return self.q

    def query_distribution(self, target: Target) -> QueryDistribution:
        return self.distributions[target]

    def outcome_distribution(self, target: Target, word) -> Dict[Outcome, Fraction]:
        word = self.code.vector(word)
        result: Dict[Outcome, Fraction] = defaultdict(Fraction)
        for query_set, weight in self.distributions[target].entries:
            result[canonical_decode(self.code, target, query_set, word[list(query_set)])] += weight
        return dict(result)

    def sample(self, target: Target, word, rng: np.random.Generator) -> Outcome:
        entries = self.distributions[target].entries
        weights = np.array([float(w) for _, w in entries])
        query_set = entries[int(rng.choice(len(entries), p=weights / weights.sum()))][0]
        word = self.code.vector(word)
        return canonical_decode(self.code, target, query_set, word[list(query_set)])


@dataclass(frozen=True)
class LinearForm:
    """Sparse linear functional sum_j coefficients_j * y_j."""
    support: QuerySet
    coefficients: Tuple[int, ...]

    def evaluate(self, code: LinearCode, word) -> int:
        if not self.support:
            return 0
        word = code.vector(word)
        return int(code.vector(self.coefficients) @ word[list(self.support)])


class LinearFormDecoder(Decoder):
    """Outputs the value of a randomly chosen linear form; never outputs bottom."""

    def __init__(self, code: LinearCode, forms: Mapping[Target, Sequence[Tuple[Fraction, LinearForm]]]):
        self.code = code
        self.forms = {t: tuple((Fraction(w), f) for w, f in fs) for t, fs in sorted(forms.items())}
        for target, weighted in self.forms.items():
            total = sum((w for w, _ in weighted), Fraction(0))
            if total != 1:
                raise ValueError(f"form weights for {target} sum to {total}, not 1")
            vstar = as_ints(target_vector(code, target))
            for _, form in weighted:
                if form.support:
                    combo = code.vector(form.coefficients) @ code.generator[list(form.support)]
                    combo = as_ints(combo)
                else:
                    combo = np.zeros(code.k, dtype=np.int64)
                if not np.array_equal(combo, vstar):
                    raise CompletenessViolation(f"form on {form.support} does not decode {target}")

    @property
    def targets(self) -> Tuple[Target, ...]:
        return tuple(self.forms)

    @property
    def query_count(self) -> int:
        return max((len(f.support) for fs in self.forms.values() for _, f in fs), default=0)

    def query_distribution(self, target: Target) -> QueryDistribution:
        return QueryDistribution.from_weights([(f.support, w) for w, f in self.forms[target]])

    def outcome_distribution(self, target: Target, word) -> Dict[Outcome, Fraction]:
        result: Dict[Outcome, Fraction] = defaultdict(Fraction)
        for weight, form in self.forms[target]:
            result[form.evaluate(self.code, word)] += weight
        return dict(result)


class RepeatedDecoder(Decoder):
    """t independent copies; outputs sigma only if every copy outputs sigma."""

    def __init__(self, base: Decoder, repetitions: int):
        if repetitions < 1:
            raise ValueError(f"repetitions must be >= 1, got {repetitions}")
        self.base = base
        self.code = base.code
        self.repetitions = repetitions

    @property
    def targets(self) -> Tuple[Target, ...]:
        return self.base.targets

    @property
    def query_count(self) -> int:
        return self.base.query_count * self.repetitions

    def outcome_distribution(self, target: Target, word) -> Dict[Outcome, Fraction]:
        base = self.base.outcome_distribution(target, word)
        result: Dict[Outcome, Fraction] = {}
        for outcome, probability in base.items():
            if outcome is not BOTTOM and probability:
                result[outcome] = probability ** self.repetitions
        rest = 1 - sum(result.values(), Fraction(0))
        if rest:
            result[BOTTOM] = rest
        return result

    def sample(self, target: Target, word, rng: np.random.Generator) -> Outcome:
        outputs = {self.base.sample(target, word, rng) for _ in range(self.repetitions)}
        if len(outputs) == 1:
            return outputs.pop()
        return BOTTOM


def repeat_decoder(decoder: Decoder, repetitions: int) -> RepeatedDecoder:
    return RepeatedDecoder(decoder, repetitions)


# ============================================================================
# Decision trees
# ============================================================================

@dataclass(frozen=True)
class Leaf:
    label: Label  # scalar, BOTTOM, or GLOBAL_DECODE


@dataclass(frozen=True)
class Node:
    index: int  # coordinate queried here
    children: Tuple["DecisionTree", ...]  # one child per scalar value


DecisionTree = Union[Leaf, Node]


def run_tree(tree: DecisionTree, word) -> Tuple[QuerySet, Tuple[int, ...], Label]:
    """Walk root to leaf, reading word at every node; returns (Q, sigma, label)."""
    queries: List[int] = []
    view: List[int] = []
    node = tree
    while isinstance(node, Node):
        symbol = int(word[node.index])
        queries.append(node.index)
        view.append(symbol)
        node = node.children[symbol]
    return tuple(queries), tuple(view), node.label


def tree_leaves(tree: DecisionTree, prefix_q: QuerySet = (), prefix_sigma: Tuple[int, ...] = ()) -> Iterator[Tuple[QuerySet, Tuple[int, ...], Leaf]]:
    if isinstance(tree, Leaf):
        yield prefix_q, prefix_sigma, tree
        return
    for symbol, child in enumerate(tree.children):
        yield from tree_leaves(child, prefix_q + (tree.index,), prefix_sigma + (symbol,))


def map_leaves(tree: DecisionTree, fn, prefix_q: QuerySet = (), prefix_sigma: Tuple[int, ...] = ()) -> DecisionTree:
    """Rebuild tree with every leaf replaced by fn(Q, sigma, leaf)."""
    if isinstance(tree, Leaf):
        return fn(prefix_q, prefix_sigma, tree)
    return Node(
        tree.index,
        tuple(
            map_leaves(child, fn, prefix_q + (tree.index,), prefix_sigma + (symbol,))
            for symbol, child in enumerate(tree.children)
        ),
    )


def tree_depth(tree: DecisionTree) -> int:
    """Number of query layers on the longest path."""
    if isinstance(tree, Leaf):
        return 0
    return 1 + max(tree_depth(child) for child in tree.children)


def validate_tree(tree: DecisionTree, n: int, order: int, q: int) -> None:
    """Reject trees with more than q query layers, repeated indices, or missing children."""
    def walk(node: DecisionTree, seen: Tuple[int, ...]) -> None:
        if isinstance(node, Leaf):
            return
        if not 0 <= node.index < n:
            raise ValueError(f"tree queries index {node.index} outside [0, {n})")
        if node.index in seen:
            raise ValueError(f"tree queries index {node.index} twice on one path")
        if len(node.children) != order:
            raise ValueError(f"node at {node.index} has {len(node.children)} children, expected {order}")
        if len(seen) + 1 > q:
            raise ValueError(f"tree exceeds {q} query layers")
        for child in node.children:
            walk(child, seen + (node.index,))

    walk(tree, ())


def tree_for_query_set(code: LinearCode, target: Target, query_set: Sequence[int]) -> DecisionTree:
    """Tree that reads query_set in order and labels each leaf canonically."""
    def build(depth: int, view: Tuple[int, ...]) -> DecisionTree:
        if depth == len(query_set):
            return Leaf(canonical_decode(code, target, query_set, view))
        return Node(query_set[depth], tuple(build(depth + 1, view + (s,)) for s in range(code.order)))

    return build(0, ())


# ============================================================================
# Adversaries
# ============================================================================

class Adversary(Protocol):
    name: str

    def corrupt(self, code: LinearCode, message, target: Target, budget: int, rng: np.random.Generator) -> galois.FieldArray:
        ...

    def patterns(self, code: LinearCode, message, target: Target, budget: int) -> Iterator[galois.FieldArray]:
        ...

    def pattern_count(self, code: LinearCode, budget: int) -> int:
        ...


class RandomFlipAdversary:
    """Random positions changed to random different symbols; exact mode enumerates every word in the ball."""
    name = "random-flip"

    def corrupt(self, code, message, target, budget, rng):
        word = encode(code, message)
        budget = min(budget, code.n)
        positions = rng.choice(code.n, size=budget, replace=False) if budget else []
        for j in positions:
            word[j] = word[j] + code.field(int(rng.integers(1, code.order)))
        return word

    def patterns(self, code, message, target, budget):
        base = encode(code, message)
        for weight in range(min(budget, code.n) + 1):
            for positions in itertools.combinations(range(code.n), weight):
                for shifts in itertools.product(range(1, code.order), repeat=weight):
                    word = base.copy()
                    for j, s in zip(positions, shifts):
                        word[j] = word[j] + code.field(s)
                    yield word

    def pattern_count(self, code, budget):
        return sum(comb(code.n, w) * (code.order - 1) ** w for w in range(min(budget, code.n) + 1))


@dataclass
class FixedSetAdversary:
    """Adds fixed shifts at fixed coordinates (e.g. flipping a bit)."""
    shifts: Mapping[int, int]
    name: str = "fixed-set"

    def _apply(self, code, message):
        word = encode(code, message)
        for j, s in self.shifts.items():
            word[j] = word[j] + code.field(s)
        return word

    def corrupt(self, code, message, target, budget, rng):
        if sum(1 for s in self.shifts.values() if s) > budget:
            raise ValueError("fixed corruption exceeds the budget")
        return self._apply(code, message)

    def patterns(self, code, message, target, budget):
        yield self.corrupt(code, message, target, budget, None)

    def pattern_count(self, code, budget):
        return 1


# ============================================================================
# Evaluation
# ============================================================================

@dataclass
class EvalReport:
    """Completeness and soundness of a decoder under one adversary."""
    completeness: Union[Fraction, float]
    soundness_error: Union[Fraction, float]
    query_count_max: int
    trials: int
    seed: int
    mode: str  # exact | monte_carlo
    completeness_half_width: Optional[float] = None
    soundness_half_width: Optional[float] = None
    witness: Optional[dict] = None  # {target, message, word} achieving the soundness error


def soundness_error_at(decoder: Decoder, target: Target, message, word, ldc: bool = False) -> Fraction:
    """Pr[output not in {truth, bottom}], or Pr[output != truth] when ldc is set."""
    value = truth(decoder.code, target, message)
    dist = decoder.outcome_distribution(target, word)
    return sum(
        (p for outcome, p in dist.items() if outcome != value and (ldc or outcome is not BOTTOM)),
        Fraction(0),
    )


def eval_decoder(
    decoder: Decoder,
    mode: str = "exact",
    adversary: Optional[Adversary] = None,
    delta: Fraction = Fraction(0),
    trials: int = 0,
    seed: int = 0,
    targets: Optional[Sequence[Target]] = None,
    ldc: bool = False,
    budget: Optional[int] = None,
) -> EvalReport:
    """
    Evaluate completeness and soundness error.

    Args:
        decoder: Decoder under test
        mode: "exact" enumerates messages and corruption patterns, "monte_carlo" samples them
        adversary: Corruption strategy; None evaluates on uncorrupted codewords only
        delta: Corruption budget as a fraction of n
        trials: Monte Carlo trial count
        seed: Master seed
        targets: Targets to evaluate, defaults to all of the decoder's targets
        ldc: Count bottom as an error (LDC soundness)
        budget: Exact enumeration budget, defaults to LOCUS_EXACT_BUDGET

    Returns:
        EvalReport with exact rationals
    """
    code = decoder.code
    targets = list(targets or decoder.targets)
    weight = int(Fraction(delta) * code.n)

    if mode == "exact":
        budget = budget or get_settings().LOCUS_EXACT_BUDGET
        patterns = adversary.pattern_count(code, weight) if adversary else 1
        size = len(targets) * code.order ** code.k * patterns
        if size > budget:
            raise BudgetExceeded(f"exact evaluation needs {size} cases, budget is {budget}")

        completeness = Fraction(1)
        soundness = Fraction(0)
        witness = None
        for target in targets:
            for message in code.messages():
                value = truth(code, target, message)
                clean = decoder.outcome_distribution(target, encode(code, message))
                completeness = min(completeness, clean.get(value, Fraction(0)))
                words = adversary.patterns(code, message, target, weight) if adversary else [encode(code, message)]
                for word in words:
                    error = soundness_error_at(decoder, target, message, word, ldc)
                    if witness is None or error > soundness:
                        soundness = error
                        witness = _witness(target, message, word)
        return EvalReport(completeness, soundness, decoder.query_count, 0, seed, mode, witness=witness)

    if mode != "monte_carlo":
        raise ValueError(f"unknown evaluation mode: {mode}")

    def trial(index: int, rng: np.random.Generator):
        target = targets[int(rng.integers(0, len(targets)))]
        message = random_message(code, rng)
        value = truth(code, target, message)
        clean = decoder.outcome_distribution(target, encode(code, message)).get(value, Fraction(0))
        word = adversary.corrupt(code, message, target, weight, rng) if adversary else encode(code, message)
        return clean, soundness_error_at(decoder, target, message, word, ldc), (target, message, word)

    results = run_trials(trial, trials, seed)
    completeness = min((r[0] for r in results), default=Fraction(1))
    soundness, witness = Fraction(0), None
    for _, error, case in results:
        if witness is None or error > soundness:
            soundness, witness = error, _witness(*case)
    return EvalReport(completeness, soundness, decoder.query_count, trials, seed, mode, witness=witness)


def _witness(target: Target, message, word) -> dict:
    return {
        "target": str(target),
        "message": as_ints(message).tolist(),
        "word": as_ints(word).tolist(),
    }


def estimate_error(decoder: Decoder, target: Target, message, word, trials: int, seed: int) -> Tuple[float, float]:
    """Sampled Pr[output not in {truth, bottom}] on a fixed word, with a 3-sigma half-width."""
    if trials < 1:
        raise ValueError(f"trials must be >= 1, got {trials}")
    value = truth(decoder.code, target, message)

    def trial(index: int, rng: np.random.Generator) -> int:
        outcome = decoder.sample(target, word, rng)
        return int(outcome is not BOTTOM and outcome != value)

    errors = sum(run_trials(trial, trials, seed))
    return errors / trials, half_width(errors, trials)


# ============================================================================
# Serialization
# ============================================================================

def dump_decoder(decoder: NonadaptiveDecoder) -> str:
    lines = [f"decoder nonadaptive; q {decoder.q}"]
    for target, dist in decoder.distributions.items():
        lines.append(f"target {target}")
        for query_set, weight in dist.entries:
            lines.append(" ".join([f"{weight.numerator}/{weight.denominator}", *map(str, query_set)]))
    return "\n".join(lines) + "\n"


def load_decoder(text: str, code: LinearCode) -> NonadaptiveDecoder:
    lines = [line.strip() for line in text.splitlines() if line.strip() and not line.startswith("#")]
    if not lines or not lines[0].startswith("decoder nonadaptive"):
        raise ValueError("decoder file must start with 'decoder nonadaptive'")
    q = None
    for part in lines[0].split(";")[1:]:
        key, _, value = part.strip().partition(" ")
        if key == "q":
            q = int(value)

    entries: Dict[Target, List[Tuple[QuerySet, Fraction]]] = {}
    current = None
    for line in lines[1:]:
        if line.startswith("target"):
            current = Target.parse(line.split()[1])
            entries[current] = []
            continue
        if current is None:
            raise ValueError("query line before any target line")
        weight, *indices = line.split()
        entries[current].append((tuple(int(j) for j in indices), Fraction(weight)))

    return NonadaptiveDecoder(
        code, {t: QueryDistribution.from_weights(e) for t, e in entries.items()}, q=q
    )
