import logging
from typing import List

import numpy as np

from locus.core.codealg import (
    Subspace,
    as_ints,
    dual,
    hyperplane_points,
    in_span,
    quotient_dim,
    random_code,
    restrict_code,
    support_subcode,
)
from locus.core.errors import InvariantViolation
from locus.core.gf import field_arith, mk_field, mul_matrix, pi, pi_inv
from locus.core.runner import trial_rng
from locus.schemas.config import ExperimentConfig
from locus.schemas.reports import SelftestRecord
from locus.services.common import banner

logger = logging.getLogger(__name__)

EXHAUSTIVE_ORDER = 2 ** 10  # all pairs below this field size
SCALAR_SAMPLE = 256
CODE_CASES = 20


def _check(condition: bool, message: str) -> None:
    if not condition:
        raise InvariantViolation(message)


def gf_suite(t: int, seed: int = 0) -> int:
    """
    Field axioms on every pair (or a seeded sample for large t), plus the scalar API on a sample.

    Returns:
        Number of checked cases
    """
    params = mk_field(t)
    F = params.field
    rng = trial_rng(seed, t)
    order = params.order

    if order <= EXHAUSTIVE_ORDER:
        a, b = np.meshgrid(np.arange(order), np.arange(order), indexing="ij")
        a, b = a.ravel(), b.ravel()
    else:
        a = rng.integers(0, order, size=SCALAR_SAMPLE * 16, dtype=np.uint64)
        b = rng.integers(0, order, size=SCALAR_SAMPLE * 16, dtype=np.uint64)
    c = rng.integers(0, order, size=a.size, dtype=a.dtype)
    A, B, C = F(a), F(b), F(c)

    _check(np.array_equal(as_ints(A + B), a ^ b), f"GF(2^{t}): addition is not XOR")
    _check(np.array_equal(A * B, B * A), f"GF(2^{t}): multiplication is not commutative")
    _check(np.array_equal(A * (B + C), A * B + A * C), f"GF(2^{t}): distributivity fails")
    _check(np.array_equal((A * B) * C, A * (B * C)), f"GF(2^{t}): multiplication is not associative")
    nonzero = A[a != 0]
    _check(np.all(nonzero * (F(1) / nonzero) == 1), f"GF(2^{t}): inverse fails")
    cases = int(a.size)

    picks = rng.integers(0, a.size, size=min(SCALAR_SAMPLE, a.size))
    for p in picks.tolist():
        x, y = params.element(int(a[p])), params.element(int(b[p]))
        product = field_arith(x, y, "mul")
        _check(product.value == int(A[p] * B[p]), f"field_arith mul disagrees at ({x.value}, {y.value})")
        _check(pi_inv(params, pi(x)) == x, f"pi round trip fails at {x.value}")
        _check(mul_matrix(x)(y) == product, f"mul_matrix({x.value}) disagrees at {y.value}")
        if x.value:
            _check(field_arith(x, x.inverse(), "mul").value == 1, f"inverse of {x.value} is wrong")
        cases += 1
    logger.debug(f"GF(2^{t}) suite: {cases} cases")
    return cases


def codealg_suite(t: int, seed: int = 0) -> int:
    """Dual involution, span membership, subcode containment and hyperplane sizes on seeded random codes."""
    F = mk_field(min(t, 4)).field
    order = F.order
    cases = 0
    for index in range(CODE_CASES):
        rng = trial_rng(seed, index)
        k = int(rng.integers(1, 4))
        n = int(rng.integers(k, k + 4))
        code = random_code(F, n, k, rng)
        space = code.subspace

        _check(dual(dual(space)) == space, f"dual is not an involution on {code!r}")
        _check(space.dim == k, f"{code!r} spans dimension {space.dim}")

        m1, m2 = code.messages()[int(rng.integers(0, order ** k))], F(rng.integers(0, order, size=k))
        _check(np.array_equal(code.encode(m1 + m2), code.encode(m1) + code.encode(m2)), "encode is not linear")

        coords = sorted(rng.choice(n, size=int(rng.integers(1, n + 1)), replace=False).tolist())
        vector = F(rng.integers(0, order, size=k))
        coefficients = in_span(vector, coords, code)
        rows = Subspace.span(F, k, code.generator[coords])
        _check((coefficients is not None) == rows.contains(vector), "in_span disagrees with row span")
        _check(restrict_code(code, coords).dim == rows.dim, "restriction rank mismatch")

        sub = support_subcode(space, coords)
        _check(sub.issubspace(space), "support subcode escapes the code")
        _check(quotient_dim(space, sub) == k - sub.dim, "quotient dimension mismatch")

        sigma = int(rng.integers(0, order))
        vstar = F.Zeros(k)
        vstar[0] = 1
        points = hyperplane_points(code, vstar, sigma)
        _check(points.shape[0] == order ** (k - 1), "hyperplane has the wrong size")
        _check(bool(np.all(as_ints(points @ vstar) == sigma)), "hyperplane point off the hyperplane")
        cases += 1
    return cases


def run_selftest(config: ExperimentConfig) -> List[SelftestRecord]:
    banner("🧪 SELFTEST", f"t: {config.t} | seed: {config.seed}")
    records = []
    for suite, fn in (("gf", gf_suite), ("codealg", codealg_suite)):
        try:
            cases = fn(config.t, config.seed)
        except InvariantViolation as e:
            logger.error(f"❌ {suite} suite failed: {e}")
            raise
        logger.info(f"✅ {suite} suite: {cases} cases passed")
        records.append(SelftestRecord(suite=suite, t=config.t, cases=cases, passed=True))
    return records
