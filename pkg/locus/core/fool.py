"""
Fooling adversary for canonical decoders of linear codes.

Given a query set split into a heavy part H and a light part L whose rows do
not span v*, the adversary keeps the true codeword on L and splices in a random
codeword with target value sigma on H. The canonical decoder is then fooled
into outputting sigma with probability at least |F|^{-dim(W/V)}.
"""

import logging
from dataclasses import dataclass, field
from fractions import Fraction
from typing import FrozenSet, List, Optional, Sequence, Tuple

import galois
import numpy as np

from locus.core.codealg import (
    LinearCode,
    Subspace,
    as_ints,
    encode,
    hyperplane_points,
    in_span,
    null_space,
    quotient_dim,
    random_codeword_constrained,
    rref,
    solve,
    support_subcode,
)
from locus.core.config import get_settings
from locus.core.decoder import BOTTOM, NonadaptiveDecoder, Target, canonical_decode, target_vector, truth
from locus.core.errors import BudgetExceeded, HypothesisViolation, InvariantViolation
from locus.core.smooth import heavy_light, is_smoothable

logger = logging.getLogger(__name__)


@dataclass(eq=False)
class FoolingInstance:
    code: LinearCode
    query_set: Tuple[int, ...]
    heavy: Tuple[int, ...]
    light: Tuple[int, ...]
    vstar: galois.FieldArray
    sigma: int
    base_message: galois.FieldArray

    def __post_init__(self):
        self.query_set = tuple(sorted(self.query_set))
        self.heavy = tuple(sorted(self.heavy))
        self.light = tuple(sorted(self.light))
        self.vstar = self.code.vector(self.vstar)
        self.base_message = self.code.vector(self.base_message)
        if set(self.heavy) & set(self.light):
            raise HypothesisViolation("heavy and light parts overlap")
        if set(self.heavy) | set(self.light) != set(self.query_set):
            raise HypothesisViolation("heavy and light parts do not cover the query set")
        if in_span(self.vstar, self.light, self.code) is not None:
            raise HypothesisViolation("v* lies in the span of the light rows")


@dataclass(eq=False)
class FoolingAnalysis:
    V: Subspace  # over coordinates H
    W: Subspace  # over coordinates H
    quotient: int  # dim(W / V)
    shift_witness: galois.FieldArray  # b* with C(b*)|_L = C(b)|_L and <v*, b*> = sigma


def _messages_image(code: LinearCode, constraints: galois.FieldArray) -> Subspace:
    """{C(b') : constraints @ b' = 0} as a subspace of F^n."""
    kernel = rref(null_space(constraints))
    if kernel.shape[0] == 0:
        return Subspace.zero(code.field, code.n)
    return Subspace(code.field, code.n, rref((code.generator @ kernel.T).T))


def analyze(inst: FoolingInstance) -> FoolingAnalysis:
    """
    Compute V, W and the shift witness for a fooling instance.

    V_0 = {C(b') : <v*, b'> = 0}, W_0 = V_0 with C(b')|_L = 0; V and W are the
    parts of their duals supported on H, read on the coordinates H.
    """
    code = inst.code
    vstar_row = inst.vstar.reshape(1, -1)
    V0 = _messages_image(code, vstar_row)
    constraints = np.concatenate([vstar_row, code.generator[list(inst.light)]], axis=0) if inst.light else vstar_row
    W0 = _messages_image(code, constraints)

    V = support_subcode(V0.dual(), inst.heavy).restrict(inst.heavy)
    W = support_subcode(W0.dual(), inst.heavy).restrict(inst.heavy)
    quotient = quotient_dim(W, V)

    bound = min(len(inst.heavy), len(inst.light))
    if quotient > bound:
        raise InvariantViolation(f"dim(W/V) = {quotient} exceeds min(|H|, |L|) = {bound}")

    light_rows = list(inst.light)
    system = np.concatenate([code.generator[light_rows], vstar_row], axis=0)
    rhs = np.concatenate([encode(code, inst.base_message)[light_rows], code.field([inst.sigma])])
    witness = solve(system, rhs)
    if witness is None:
        raise InvariantViolation("no shift witness although v* is outside the light span")

    return FoolingAnalysis(V, W, quotient, witness)


def splice(code: LinearCode, message, fooling_message, heavy: Sequence[int]) -> galois.FieldArray:
    """C(message) with the coordinates in heavy taken from C(fooling_message)."""
    word = encode(code, message)
    if heavy:
        word[list(heavy)] = encode(code, fooling_message)[list(heavy)]
    return word


def sample_fooling_word(inst: FoolingInstance, rng: np.random.Generator, heavy: Optional[Sequence[int]] = None) -> galois.FieldArray:
    """y = C(b) off the heavy set and C(b') on it, with b' uniform on <v*, b'> = sigma."""
    heavy = inst.heavy if heavy is None else tuple(heavy)
    fooling = random_codeword_constrained(inst.code, inst.vstar, inst.sigma, rng)
    return splice(inst.code, inst.base_message, fooling, heavy)


def success_probability(inst: FoolingInstance, mode: str = "exact", budget: Optional[int] = None) -> Fraction:
    """
    Probability that the spliced view on Q is consistent with a message of target value sigma.

    Args:
        inst: Fooling instance
        mode: "exact" enumerates the hyperplane, "lower_bound" returns |F|^{-dim(W/V)}

    Returns:
        Exact rational
    """
    code = inst.code
    if mode == "lower_bound":
        return Fraction(1, code.order ** analyze(inst).quotient)
    if mode != "exact":
        raise ValueError(f"unknown mode: {mode}")

    budget = budget or get_settings().LOCUS_EXACT_BUDGET
    size = code.order ** (code.k - 1)
    if size > budget:
        raise BudgetExceeded(f"hyperplane has {size} points, budget is {budget}")

    query = list(inst.query_set)
    heavy_cols = [query.index(j) for j in inst.heavy]
    points = hyperplane_points(code, inst.vstar, inst.sigma)

    views = encode(code, inst.base_message)[query]
    views = np.tile(views, (points.shape[0], 1))
    if heavy_cols:
        views[:, heavy_cols] = (points @ code.generator[list(inst.heavy)].T)

    # (y_Q, sigma) lies in the column space of [G_Q; v*]
    stacked = np.concatenate([code.generator[query], inst.vstar.reshape(1, -1)], axis=0)
    checks = null_space(stacked.T)
    targets = np.concatenate([views, code.field(np.full((points.shape[0], 1), inst.sigma, dtype=int))], axis=1)
    if checks.shape[0] == 0:
        return Fraction(1)
    ok = ~np.any(as_ints(targets @ checks.T), axis=1)
    return Fraction(int(ok.sum()), points.shape[0])


# ============================================================================
# Attack on a whole decoder
# ============================================================================

@dataclass
class AttackResult:
    target: Target
    heavy: FrozenSet[int]
    light: FrozenSet[int]
    bad_mass: Fraction  # probability of a non-smoothable query set
    witness: Optional[Tuple[int, ...]]  # best corrupted word found
    error: Fraction  # exact error of the bad part on the witness
    mean_error: Fraction  # average over the fooling distribution (exact mode) or samples
    bound: Fraction  # |F|^{-floor(q/2)}
    candidates: int
    no_attack: bool = False
    bad_sets: List[Tuple[int, ...]] = field(default_factory=list)


def attack_rldc(
    decoder: NonadaptiveDecoder,
    target: Target,
    message,
    delta: Fraction,
    rng: Optional[np.random.Generator] = None,
    trials: int = 0,
    mode: str = "exact",
    budget: Optional[int] = None,
) -> AttackResult:
    """
    Fool the non-smoothable part of a decoder with words corrupted only on the heavy set.

    Args:
        decoder: Canonical nonadaptive decoder
        target: Target under attack
        message: True message b
        delta: Corruption fraction defining the heavy set
        rng: Randomness for sample mode
        trials: Number of sampled words in sample mode
        mode: "exact" enumerates every fooling word, "sample" draws trials of them

    Returns:
        AttackResult with the best witness and its exact error
    """
    code = decoder.code
    message = code.vector(message)
    dist = decoder.query_distribution(target)
    partition = heavy_light(dist, decoder.q, delta, code.n, target)
    vstar = target_vector(code, target)
    bound = Fraction(1, code.order ** (decoder.q // 2))

    bad, bad_mass = dist.condition(lambda q: not is_smoothable(code, q, partition.light, vstar))
    if bad is None:
        logger.info(f"✅ {target}: every query set is smoothable, nothing to attack")
        return AttackResult(target, partition.heavy, partition.light, Fraction(0), None,
                            Fraction(0), Fraction(0), bound, 0, no_attack=True)

    value = truth(code, target, message)
    heavy = sorted(partition.heavy)

    def error_of(word) -> Fraction:
        total = Fraction(0)
        for query_set, weight in bad.entries:
            outcome = canonical_decode(code, target, query_set, word[list(query_set)])
            if outcome is not BOTTOM and outcome != value:
                total += weight
        return total

    if mode == "exact":
        budget = budget or get_settings().LOCUS_EXACT_BUDGET
        size = (code.order - 1) * code.order ** (code.k - 1)
        if size > budget:
            raise BudgetExceeded(f"fooling distribution has {size} words, budget is {budget}")
        fooling = [
            point
            for sigma in range(code.order) if sigma != value
            for point in hyperplane_points(code, vstar, sigma)
        ]
    elif mode == "sample":
        if rng is None or trials < 1:
            raise ValueError("sample mode needs an rng and a positive trial count")
        others = [s for s in range(code.order) if s != value]
        fooling = [
            random_codeword_constrained(code, vstar, others[int(rng.integers(0, len(others)))], rng)
            for _ in range(trials)
        ]
    else:
        raise ValueError(f"unknown mode: {mode}")

    errors = []
    best, best_word = None, None
    for point in fooling:
        word = splice(code, message, point, heavy)
        error = error_of(word)
        errors.append(error)
        key = tuple(as_ints(word).tolist())
        if best is None or error > best or (error == best and key < best_word):
            best, best_word = error, key

    mean = sum(errors, Fraction(0)) / len(errors)
    if mode == "exact" and mean < bound:
        raise InvariantViolation(f"mean fooling error {mean} below {bound}")
    if mode == "sample":
        values = np.array([float(e) for e in errors])
        slack = 3 * values.std() / np.sqrt(len(values))
        if float(mean) < float(bound) - slack - 1e-12:
            raise InvariantViolation(f"sampled fooling error {float(mean):.4f} below {float(bound):.4f}")

    logger.info(f"🔍 {target}: bad mass {bad_mass}, best error {best}, mean {mean}")
    return AttackResult(target, partition.heavy, partition.light, bad_mass, best_word,
                        best, mean, bound, len(errors), bad_sets=list(bad.support))
