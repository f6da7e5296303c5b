"""
Adaptive-to-nonadaptive transformation that keeps the query count.

Pipeline: rerandomize the input by a uniform codeword, relabel every leaf
canonically (toxic leaves fall back to global decoding), then read off the
nonadaptive query distribution by running each tree on a uniform codeword and
pruning the toxic leaves.
"""

import itertools
import logging
from collections import defaultdict
from dataclasses import dataclass, field
from enum import Enum
from fractions import Fraction
from typing import Dict, List, Mapping, Optional, Sequence, Tuple, Union

import numpy as np

from locus.core.codealg import LinearCode, as_ints, encode, in_span
from locus.core.config import get_settings
from locus.core.decoder import (
    BOTTOM,
    GLOBAL_DECODE,
    Adversary,
    Decoder,
    DecisionTree,
    Leaf,
    Node,
    NonadaptiveDecoder,
    Outcome,
    QueryDistribution,
    Target,
    canonical_decode,
    eval_decoder,
    is_consistent,
    map_leaves,
    run_tree,
    target_vector,
    tree_depth,
    tree_for_query_set,
    tree_leaves,
    truth,
    validate_tree,
)
from locus.core.errors import BudgetExceeded, HypothesisViolation, InvariantViolation, TransformationImpossible

logger = logging.getLogger(__name__)

WeightedTrees = Sequence[Tuple[Fraction, DecisionTree]]


def global_decode(code: LinearCode, target: Target, word) -> Outcome:
    """Read all n symbols; the target value if the word is a codeword, else bottom."""
    message = code.decode_word(word)
    if message is None:
        return BOTTOM
    return truth(code, target, message)


def _codewords(code: LinearCode) -> List[Tuple[np.ndarray, object]]:
    return [(as_ints(encode(code, m)), m) for m in code.messages()]


# ============================================================================
# Adaptive decoders
# ============================================================================

class AdaptiveDecoder(Decoder):
    """Per-target distributions over decision trees."""

    def __init__(self, code: LinearCode, trees: Mapping[Target, WeightedTrees], q: Optional[int] = None):
        self.code = code
        self.trees: Dict[Target, Tuple[Tuple[Fraction, DecisionTree], ...]] = {}
        for target, weighted in sorted(trees.items()):
            target.validate(code)
            merged: Dict[DecisionTree, Fraction] = defaultdict(Fraction)
            for weight, tree in weighted:
                if Fraction(weight) < 0:
                    raise ValueError(f"negative tree weight {weight}")
                if weight:
                    merged[tree] += Fraction(weight)
            total = sum(merged.values(), Fraction(0))
            if total != 1:
                raise ValueError(f"tree weights for {target} sum to {total}, not 1")
            self.trees[target] = tuple((w, t) for t, w in merged.items())

        depth = max((tree_depth(t) for ts in self.trees.values() for _, t in ts), default=0)
        self.q = depth if q is None else q
        for weighted in self.trees.values():
            for _, tree in weighted:
                validate_tree(tree, code.n, code.order, self.q)

    @property
    def targets(self) -> Tuple[Target, ...]:
        return tuple(self.trees)

    @property
    def query_count(self) -> int:
        """Longest path; a global-decode leaf costs n queries."""
        longest = 0
        for weighted in self.trees.values():
            for _, tree in weighted:
                for query_set, _, leaf in tree_leaves(tree):
                    cost = self.code.n if leaf.label == GLOBAL_DECODE else len(query_set)
                    longest = max(longest, cost)
        return longest

    def outcome_distribution(self, target: Target, word) -> Dict[Outcome, Fraction]:
        word = self.code.vector(word)
        raw = as_ints(word)
        result: Dict[Outcome, Fraction] = defaultdict(Fraction)
        for weight, tree in self.trees[target]:
            _, _, label = run_tree(tree, raw)
            if label == GLOBAL_DECODE:
                label = global_decode(self.code, target, word)
            result[label] += weight
        return dict(result)


class RerandomizedDecoder(Decoder):
    """Runs the base decoder on y + C(b~) for uniform b~ and shifts non-bottom outputs back."""

    def __init__(self, base: AdaptiveDecoder):
        self.base = base
        self.code = base.code
        self._shifts = [encode(self.code, m) for m in self.code.messages()]
        self._messages = list(self.code.messages())

    @property
    def targets(self) -> Tuple[Target, ...]:
        return self.base.targets

    @property
    def query_count(self) -> int:
        return self.base.query_count

    def outcome_distribution(self, target: Target, word) -> Dict[Outcome, Fraction]:
        F = self.code.field
        word = self.code.vector(word)
        share = Fraction(1, len(self._shifts))
        result: Dict[Outcome, Fraction] = defaultdict(Fraction)
        for shift, message in zip(self._shifts, self._messages):
            offset = F(truth(self.code, target, message))
            for outcome, p in self.base.outcome_distribution(target, word + shift).items():
                key = BOTTOM if outcome is BOTTOM else int(F(outcome) - offset)
                result[key] += p * share
        return dict(result)


def rerandomize(decoder: AdaptiveDecoder) -> RerandomizedDecoder:
    return RerandomizedDecoder(decoder)


def as_adaptive(decoder: NonadaptiveDecoder) -> AdaptiveDecoder:
    """Each query set becomes a tree that reads it in order and decodes canonically."""
    trees = {
        target: [(w, tree_for_query_set(decoder.code, target, q)) for q, w in dist.entries]
        for target, dist in decoder.distributions.items()
    }
    return AdaptiveDecoder(decoder.code, trees, q=decoder.q)


def _base(decoder: Union[AdaptiveDecoder, RerandomizedDecoder]) -> AdaptiveDecoder:
    return decoder.base if isinstance(decoder, RerandomizedDecoder) else decoder


# ============================================================================
# Leaves
# ============================================================================

class LeafClass(str, Enum):
    TOXIC = "toxic"
    NONTOXIC = "nontoxic"


def classify_leaf(code: LinearCode, target: Target, query_set: Sequence[int], view: Sequence[int]) -> LeafClass:
    """Toxic when the view is consistent with two codewords that disagree on the target."""
    if not is_consistent(code, query_set, view):
        return LeafClass.NONTOXIC
    if in_span(target_vector(code, target), query_set, code) is None:
        return LeafClass.TOXIC
    return LeafClass.NONTOXIC


def relabel_leaf(code: LinearCode, target: Target, query_set: Sequence[int], view: Sequence[int], leaf: Leaf) -> Leaf:
    """Canonical label for a consistent leaf; toxic leaves switch to global decoding."""
    if leaf.label == GLOBAL_DECODE or not is_consistent(code, query_set, view):
        return leaf
    if classify_leaf(code, target, query_set, view) is LeafClass.TOXIC:
        return Leaf(GLOBAL_DECODE)
    return Leaf(canonical_decode(code, target, query_set, view))


def relabel(decoder: Union[AdaptiveDecoder, RerandomizedDecoder]) -> Union[AdaptiveDecoder, RerandomizedDecoder]:
    """Relabel every leaf; a rerandomized decoder stays rerandomized."""
    if isinstance(decoder, RerandomizedDecoder):
        return RerandomizedDecoder(relabel(decoder.base))
    code = decoder.code
    trees = {
        target: [
            (w, map_leaves(tree, lambda q, s, leaf, target=target: relabel_leaf(code, target, q, s, leaf)))
            for w, tree in weighted
        ]
        for target, weighted in decoder.trees.items()
    }
    return AdaptiveDecoder(code, trees, q=decoder.q)


@dataclass
class RelabelStep:
    """Effect of relabeling one leaf on one target's (completeness error, soundness)."""
    target: Target
    query_set: Tuple[int, ...]
    view: Tuple[int, ...]
    old_label: object
    new_label: object
    epsilon_before: Fraction
    epsilon_after: Fraction
    soundness_before: Fraction
    soundness_after: Fraction

    @property
    def holds(self) -> bool:
        return self.soundness_after - self.soundness_before <= self.epsilon_before - self.epsilon_after


def relabel_steps(decoder: RerandomizedDecoder, adversary: Optional[Adversary] = None, delta: Fraction = Fraction(0), budget: Optional[int] = None) -> List[RelabelStep]:
    """
    Relabel one leaf at a time and evaluate exactly after each change.

    Args:
        decoder: Rerandomized adaptive decoder
        adversary: Corruption strategy for the soundness evaluation
        delta: Corruption fraction
        budget: Exact enumeration budget

    Returns:
        One RelabelStep per leaf whose label actually changed
    """
    code = decoder.code
    current = decoder.base
    steps: List[RelabelStep] = []

    def measure(base: AdaptiveDecoder, target: Target) -> Tuple[Fraction, Fraction]:
        report = eval_decoder(RerandomizedDecoder(base), "exact", adversary, delta, targets=[target], budget=budget)
        return 1 - report.completeness, report.soundness_error

    for target in current.targets:
        for index in range(len(current.trees[target])):
            _, tree = current.trees[target][index]
            for query_set, view, leaf in list(tree_leaves(tree)):
                new_leaf = relabel_leaf(code, target, query_set, view, leaf)
                if new_leaf == leaf:
                    continue
                eps_before, s_before = measure(current, target)

                def swap(q, s, old, query_set=query_set, view=view, new_leaf=new_leaf):
                    return new_leaf if (q, s) == (query_set, view) else old

                trees = dict(current.trees)
                weighted = list(trees[target])
                weight, old_tree = weighted[index]
                weighted[index] = (weight, map_leaves(old_tree, swap))
                trees[target] = weighted
                current = AdaptiveDecoder(code, trees, q=current.q)

                eps_after, s_after = measure(current, target)
                steps.append(RelabelStep(target, query_set, view, leaf.label, new_leaf.label,
                                         eps_before, eps_after, s_before, s_after))
    return steps


def toxic_rate(decoder: Union[AdaptiveDecoder, RerandomizedDecoder], epsilon: Optional[Fraction] = None) -> Fraction:
    """
    Exact probability of ending on a toxic leaf on a uniformly shifted codeword, maximised over targets.

    When epsilon is given the bound rate <= |F| epsilon / (|F| - 1) is asserted.
    """
    base = _base(decoder)
    code = base.code
    codewords = _codewords(code)
    share = Fraction(1, len(codewords))
    worst = Fraction(0)
    for target, weighted in base.trees.items():
        rate = Fraction(0)
        for weight, tree in weighted:
            for word, _ in codewords:
                query_set, view, _ = run_tree(tree, word)
                if classify_leaf(code, target, query_set, view) is LeafClass.TOXIC:
                    rate += weight * share
        worst = max(worst, rate)

    if epsilon is not None:
        bound = code.order * Fraction(epsilon) / (code.order - 1)
        if worst > bound:
            raise InvariantViolation(f"toxic rate {worst} exceeds |F|eps/(|F|-1) = {bound}")
    return worst


# ============================================================================
# Nonadaptive conversion
# ============================================================================

def certified_soundness(order: int, soundness: Fraction, epsilon: Fraction) -> Fraction:
    return Fraction(soundness) + (2 + Fraction(1, order - 1)) * Fraction(epsilon)


def binary_bound(soundness: Fraction, epsilon: Fraction) -> Fraction:
    """s + 3 eps, the value of the certified bound over F_2."""
    return certified_soundness(2, soundness, epsilon)


@dataclass
class NonadaptiveConversion:
    decoder: NonadaptiveDecoder
    toxic_mass: Dict[Target, Fraction]
    q: int
    certified_soundness: Optional[Fraction] = None  # s + (2 + 1/(|F|-1)) eps
    measured_bound: Optional[Fraction] = None  # (s + eps) / (1 - p)


def to_nonadaptive(decoder: Union[AdaptiveDecoder, RerandomizedDecoder], soundness: Optional[Fraction] = None, epsilon: Optional[Fraction] = None) -> NonadaptiveConversion:
    """
    Query distribution of the leaf reached on a uniform codeword, with toxic leaves pruned.

    Args:
        decoder: Relabeled adaptive decoder
        soundness: Soundness error s of the input decoder, for the certificate
        epsilon: Completeness error of the input decoder, for the certificate

    Returns:
        NonadaptiveConversion with the canonical nonadaptive decoder
    """
    base = _base(decoder)
    code = base.code
    budget = get_settings().LOCUS_EXACT_BUDGET
    work = code.order ** code.k * sum(len(ts) for ts in base.trees.values())
    if work > budget:
        raise BudgetExceeded(f"conversion walks {work} (tree, codeword) pairs, budget is {budget}")

    codewords = _codewords(code)
    share = Fraction(1, len(codewords))
    distributions: Dict[Target, QueryDistribution] = {}
    toxic_mass: Dict[Target, Fraction] = {}

    for target, weighted in base.trees.items():
        kept: Dict[Tuple[int, ...], Fraction] = defaultdict(Fraction)
        toxic = Fraction(0)
        for weight, tree in weighted:
            for word, _ in codewords:
                query_set, view, _ = run_tree(tree, word)
                if classify_leaf(code, target, query_set, view) is LeafClass.TOXIC:
                    toxic += weight * share
                else:
                    kept[query_set] += weight * share
        if toxic == 1:
            raise TransformationImpossible(f"every leaf reached for {target} is toxic")
        toxic_mass[target] = toxic
        distributions[target] = QueryDistribution.from_weights({q: w / (1 - toxic) for q, w in kept.items()})

    q = max((d.max_size for d in distributions.values()), default=0)
    result = NonadaptiveConversion(NonadaptiveDecoder(code, distributions, q=q), toxic_mass, q)
    if soundness is not None and epsilon is not None:
        p = max(toxic_mass.values(), default=Fraction(0))
        result.certified_soundness = certified_soundness(code.order, soundness, epsilon)
        result.measured_bound = (Fraction(soundness) + Fraction(epsilon)) / (1 - p)
    logger.debug(f"Nonadaptive conversion: q={q}, toxic mass {toxic_mass}")
    return result


@dataclass
class StageRecord:
    stage: str  # input | rerandomized | relabeled | nonadaptive
    completeness: Fraction
    soundness: Fraction
    q_max: int
    toxic_rate: Optional[Fraction] = None


@dataclass
class PipelineResult:
    decoder: NonadaptiveDecoder
    stages: List[StageRecord] = field(default_factory=list)
    conversion: Optional[NonadaptiveConversion] = None


def goldberg_pipeline(decoder: AdaptiveDecoder, adversary: Optional[Adversary] = None, delta: Fraction = Fraction(0), budget: Optional[int] = None) -> PipelineResult:
    """
    Rerandomize, relabel and convert, evaluating exactly after every stage.

    Raises InvariantViolation if the output is not perfectly complete, uses more
    queries than the input, or exceeds the certified soundness.
    """
    stages: List[StageRecord] = []

    def record(name: str, current: Decoder, rate: Optional[Fraction] = None):
        report = eval_decoder(current, "exact", adversary, delta, budget=budget)
        stages.append(StageRecord(name, report.completeness, report.soundness_error, current.query_count, rate))
        logger.info(f"🔍 {name}: completeness {report.completeness}, soundness {report.soundness_error}, q={current.query_count}")
        return report

    first = record("input", decoder)
    epsilon, soundness = 1 - first.completeness, first.soundness_error

    rerandomized = rerandomize(decoder)
    record("rerandomized", rerandomized)
    relabeled = relabel(rerandomized)
    record("relabeled", relabeled, toxic_rate(rerandomized, epsilon))

    conversion = to_nonadaptive(relabeled, soundness, epsilon)
    final = record("nonadaptive", conversion.decoder)

    if final.completeness != 1:
        raise InvariantViolation(f"converted decoder has completeness {final.completeness}")
    if conversion.q > decoder.q:
        raise InvariantViolation(f"converted decoder uses {conversion.q} > {decoder.q} queries")
    if final.soundness_error > conversion.certified_soundness:
        raise InvariantViolation(
            f"converted soundness {final.soundness_error} exceeds certified {conversion.certified_soundness}"
        )
    logger.info(f"✅ Converted to a nonadaptive {conversion.q}-query decoder")
    return PipelineResult(conversion.decoder, stages, conversion)


# ============================================================================
# Toy generator
# ============================================================================

def _informative_set(code: LinearCode, target: Target, q: int) -> Tuple[int, ...]:
    vstar = target_vector(code, target)
    for size in range(1, q + 1):
        for subset in itertools.combinations(range(code.n), size):
            if in_span(vstar, subset, code) is not None:
                return subset
    raise HypothesisViolation(f"no set of at most {q} coordinates determines {target}")


def random_adaptive_decoder(
    code: LinearCode,
    q: int,
    rng: np.random.Generator,
    targets: Optional[Sequence[Target]] = None,
    trees_per_target: int = 2,
    noise: float = 0.2,
    stop: float = 0.3,
) -> AdaptiveDecoder:
    """
    Random adaptive decoder for experiments.

    Every target gets one informative tree (reads a determining set, canonical
    labels) plus random trees of depth at most q whose leaves are canonical,
    arbitrary on toxic views, bottom on inconsistent views, and replaced by a
    uniform label with probability noise.
    """
    targets = list(targets) if targets is not None else [Target.message(i) for i in range(code.k)]
    labels: List[object] = list(range(code.order)) + [BOTTOM]

    def leaf(target: Target, query_set, view) -> Leaf:
        if rng.random() < noise:
            return Leaf(labels[int(rng.integers(0, len(labels)))])
        if not is_consistent(code, query_set, view):
            return Leaf(BOTTOM)
        if classify_leaf(code, target, query_set, view) is LeafClass.TOXIC:
            return Leaf(int(rng.integers(0, code.order)))
        return Leaf(canonical_decode(code, target, query_set, view))

    def grow(target: Target, path: Tuple[int, ...], view: Tuple[int, ...]) -> DecisionTree:
        if len(path) == q or len(path) == code.n or (path and rng.random() < stop):
            return leaf(target, path, view)
        free = [j for j in range(code.n) if j not in path]
        j = free[int(rng.integers(0, len(free)))]
        return Node(j, tuple(grow(target, path + (j,), view + (s,)) for s in range(code.order)))

    trees = {}
    for target in targets:
        weighted = [(Fraction(1), tree_for_query_set(code, target, _informative_set(code, target, q)))]
        for _ in range(trees_per_target):
            weighted.append((Fraction(int(rng.integers(1, 4))), grow(target, (), ())))
        total = sum((w for w, _ in weighted), Fraction(0))
        trees[target] = [(w / total, t) for w, t in weighted]
    return AdaptiveDecoder(code, trees, q=q)
