"""
Reduction of 2-query relaxed decoders to 2-query (non-relaxed) decoders.

Coordinates whose row is a nonzero multiple of the target vector are "fixed" by
that target. Targets with large fixed sets are zeroed out of the code; every
other target keeps only its pairs of unfixed coordinates, which are always
consistent and so decode without ever aborting.
"""

import logging
from collections import defaultdict
from dataclasses import dataclass, field
from enum import Enum
from fractions import Fraction
from math import floor
from typing import Dict, FrozenSet, List, Optional, Sequence, Tuple

import numpy as np

from locus.core.codealg import LinearCode, as_ints, null_space, rref
from locus.core.decoder import (
    LinearForm,
    LinearFormDecoder,
    NonadaptiveDecoder,
    RandomFlipAdversary,
    Target,
    TargetKind,
    eval_decoder,
    local_rule,
    target_vector,
)
from locus.core.errors import InvariantViolation, TransformationImpossible
from locus.core.smooth import LdcCertificate

logger = logging.getLogger(__name__)


@dataclass(frozen=True)
class FixedSet:
    target: Target
    members: Dict[int, int] = field(hash=False)  # j -> alpha with v_j = alpha * v*

    @property
    def indices(self) -> FrozenSet[int]:
        return frozenset(self.members)

    def __len__(self) -> int:
        return len(self.members)


class PairClass(str, Enum):
    HADAMARD_LIKE = "hadamard_like"  # neither query fixed
    REPETITION_LIKE = "repetition_like"  # both queries fixed
    DEGENERATE_SINGLE = "degenerate_single"  # exactly one fixed query


def fixed_set(code: LinearCode, target: Target) -> FixedSet:
    """Coordinates j with v_j = alpha v* for a nonzero alpha."""
    vstar = target_vector(code, target)
    raw = as_ints(vstar)
    nonzero = np.flatnonzero(raw)
    if nonzero.size == 0:
        return FixedSet(target, {})
    p = int(nonzero[0])
    members = {}
    for j in range(code.n):
        row = code.row(j)
        if not np.any(as_ints(row)):
            continue
        alpha = row[p] / vstar[p]
        if int(alpha) and np.array_equal(as_ints(alpha * vstar), as_ints(row)):
            members[j] = int(alpha)
    return FixedSet(target, members)


def classify_pair(code: LinearCode, target: Target, pair: Sequence[int], fixed: Optional[FixedSet] = None) -> PairClass:
    """Class of a two-element query set; a lone fixed query is degenerate."""
    j, l = pair
    if j == l:
        raise ValueError(f"pair must have distinct indices, got {pair}")
    members = (fixed or fixed_set(code, target)).indices
    inside = (j in members) + (l in members)
    return (PairClass.HADAMARD_LIKE, PairClass.DEGENERATE_SINGLE, PairClass.REPETITION_LIKE)[inside]


def classify_query_set(code: LinearCode, target: Target, query_set: Sequence[int], fixed: Optional[FixedSet] = None) -> PairClass:
    fixed = fixed or fixed_set(code, target)
    if len(query_set) == 2:
        return classify_pair(code, target, query_set, fixed)
    if len(query_set) == 1 and query_set[0] in fixed.indices:
        return PairClass.DEGENERATE_SINGLE
    if len(query_set) > 2:
        raise ValueError(f"query set {query_set} has more than two queries")
    return PairClass.HADAMARD_LIKE


@dataclass
class BigTargets:
    mode: str  # rldc | rlcc
    X: Tuple[Target, ...]
    fixed: Dict[Target, FixedSet]
    classes: List[FrozenSet[int]]  # distinct fixed sets (rlcc) or the fixed sets themselves (rldc)
    big_classes: int
    bound: int  # floor(2 / delta)


def big_targets(code: LinearCode, delta: Fraction, mode: str = "rldc") -> BigTargets:
    """
    Targets whose fixed set has more than delta n / 2 coordinates.

    Args:
        code: The code
        delta: Corruption fraction, 0 < delta <= 1
        mode: "rldc" (message targets) or "rlcc" (codeword targets)

    Returns:
        BigTargets; the number of big fixed-set classes is asserted to be at most floor(2/delta)
    """
    delta = Fraction(delta)
    if not 0 < delta <= 1:
        raise ValueError(f"delta must lie in (0, 1], got {delta}")
    if mode == "rldc":
        targets = [Target.message(i) for i in range(code.k)]
    elif mode == "rlcc":
        targets = [Target.codeword(u) for u in range(code.n)]
    else:
        raise ValueError(f"unknown mode: {mode}")

    fixed = {t: fixed_set(code, t) for t in targets}
    classes = sorted({f.indices for f in fixed.values() if len(f)}, key=sorted)
    seen: Dict[int, FrozenSet[int]] = {}
    for cls in classes:
        for j in cls:
            if j in seen:
                raise InvariantViolation(f"coordinate {j} is fixed by two different targets")
            seen[j] = cls

    threshold = delta * code.n / 2
    X = tuple(t for t in targets if len(fixed[t]) > threshold)
    big_classes = len({fixed[t].indices for t in X})
    bound = floor(2 / delta)
    if big_classes > bound:
        raise InvariantViolation(f"{big_classes} large fixed sets exceed floor(2/delta) = {bound}")
    logger.debug(f"Large fixed sets ({mode}): {[str(t) for t in X]}")
    return BigTargets(mode, X, fixed, classes, big_classes, bound)


@dataclass
class Reduction:
    mode: str
    code: LinearCode  # reduced code C'
    decoder: LinearFormDecoder
    X: Tuple[Target, ...]
    k: int
    k_prime: int
    certificate: LdcCertificate
    permutation: Optional[Tuple[int, ...]] = None  # rldc: original message index of each reordered position
    class_mass: Dict[Target, Dict[PairClass, Fraction]] = field(default_factory=dict)


def _infer_mode(decoder: NonadaptiveDecoder) -> str:
    kinds = {t.kind for t in decoder.targets}
    if kinds == {TargetKind.MESSAGE}:
        return "rldc"
    if kinds == {TargetKind.CODEWORD}:
        return "rlcc"
    raise ValueError("decoder mixes message and codeword targets")


def reduce(
    code: LinearCode,
    decoder: NonadaptiveDecoder,
    delta: Fraction,
    radius: Optional[Fraction] = None,
    soundness: Optional[Fraction] = None,
) -> Reduction:
    """
    Build the reduced code and its never-aborting 2-query decoder.

    Args:
        code: The code the decoder runs on
        decoder: Canonical nonadaptive decoder with at most 2 queries
        delta: Corruption fraction of the input decoder
        radius: Certified radius of the output, defaults to delta / 2
        soundness: Soundness error s of the input; measured exactly when omitted

    Returns:
        Reduction with certificate (2, radius, 1, s)
    """
    if decoder.query_count > 2:
        raise ValueError(f"decoder makes {decoder.query_count} > 2 queries")
    delta = Fraction(delta)
    radius = delta / 2 if radius is None else Fraction(radius)
    mode = _infer_mode(decoder)
    big = big_targets(code, delta, mode)
    dropped = set(big.X)

    if soundness is None:
        soundness = eval_decoder(decoder, "exact", RandomFlipAdversary(), delta).soundness_error

    permutation = None
    if mode == "rldc":
        kept = [i for i in range(code.k) if Target.message(i) not in dropped]
        permutation = tuple(kept + [t.index for t in big.X])
        if not kept:
            raise TransformationImpossible("every message coordinate has a large fixed set")
        reduced = LinearCode(code.field, code.generator[:, kept])
        renamed = {Target.message(i): Target.message(r) for r, i in enumerate(kept)}
    else:
        zeroed = [t.index for t in big.X]
        kernel = rref(null_space(code.generator[zeroed])) if zeroed else code.field.Identity(code.k)
        if kernel.shape[0] == 0:
            raise TransformationImpossible("no codeword vanishes on the large fixed sets")
        reduced = LinearCode(code.field, code.generator @ kernel.T)
        renamed = {t: t for t in decoder.targets}

    forms: Dict[Target, List[Tuple[Fraction, LinearForm]]] = {}
    class_mass: Dict[Target, Dict[PairClass, Fraction]] = {}
    for target in decoder.targets:
        fixed = big.fixed[target]
        dist = decoder.query_distribution(target)
        mass: Dict[PairClass, Fraction] = defaultdict(Fraction)
        for query_set, weight in dist.entries:
            mass[classify_query_set(code, target, query_set, fixed)] += weight
        class_mass[target] = dict(mass)

        if target in dropped:
            if mode == "rlcc":
                # a trivial corrector: every codeword of C' is zero here
                forms[target] = [(Fraction(1), LinearForm((), ()))]
            continue

        hadamard, _ = dist.condition(lambda q: classify_query_set(code, target, q, fixed) is PairClass.HADAMARD_LIKE)
        if hadamard is None:
            raise TransformationImpossible(f"{target} has no hadamard-like query mass")
        forms[renamed[target]] = [
            (w, LinearForm(q, tuple(int(c) for c in as_ints(local_rule(code, target, q).coefficients))))
            for q, w in hadamard.entries
        ]

    reduced_decoder = LinearFormDecoder(reduced, forms)
    certificate = LdcCertificate(2, radius, Fraction(1), Fraction(soundness))
    logger.info(f"✅ {mode} reduction: |X|={len(big.X)}, k={code.k} -> k'={reduced.k}")
    return Reduction(mode, reduced, reduced_decoder, big.X, code.k, reduced.k, certificate, permutation, class_mass)
