"""
Seeded trial fan-out shared by every Monte Carlo evaluator.
"""

import logging
from concurrent.futures import ThreadPoolExecutor
from typing import Callable, List, Optional, TypeVar

import numpy as np

from locus.core.config import get_settings

logger = logging.getLogger(__name__)

T = TypeVar("T")


def trial_rng(seed: int, index: int) -> np.random.Generator:
    """Generator for one trial, derived from (master seed, trial index) only."""
    return np.random.default_rng([seed, index])


def run_trials(
    fn: Callable[[int, np.random.Generator], T],
    trials: int,
    seed: int,
    workers: Optional[int] = None,
) -> List[T]:
    """
    Run `fn(index, rng)` for every trial index and return results in index order.

    Args:
        fn: Trial body; must only draw randomness from the rng it is given
        trials: Number of trials
        seed: Master seed
        workers: Worker count, defaults to LOCUS_THREADS

    Returns:
        List of per-trial results, ordered by trial index
    """
    if trials < 0:
        raise ValueError(f"trial count must be nonnegative, got {trials}")
    if workers is None:
        workers = get_settings().LOCUS_THREADS
    workers = max(1, min(workers, trials or 1))

    if workers == 1:
        return [fn(i, trial_rng(seed, i)) for i in range(trials)]

    logger.debug(f"Fanning {trials} trials over {workers} workers")
    with ThreadPoolExecutor(max_workers=workers) as pool:
        return list(pool.map(lambda i: fn(i, trial_rng(seed, i)), range(trials)))


def half_width(successes: int, trials: int) -> float:
    """Three standard errors of a Bernoulli proportion estimate."""
    if trials == 0:
        return 0.0
    p = successes / trials
    return 3.0 * float(np.sqrt(max(p * (1.0 - p), 1.0 / trials) / trials))
