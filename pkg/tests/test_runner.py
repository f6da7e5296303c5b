import pytest

from locus.core.runner import half_width, run_trials, trial_rng


def draw(index, rng):
    return index, int(rng.integers(0, 1 << 30))


def test_trial_rng_depends_only_on_seed_and_index():
    assert trial_rng(4, 2).integers(0, 1 << 30) == trial_rng(4, 2).integers(0, 1 << 30)
    assert trial_rng(4, 2).integers(0, 1 << 30) != trial_rng(4, 3).integers(0, 1 << 30)


def test_results_do_not_depend_on_workers():
    serial = run_trials(draw, 40, seed=11, workers=1)
    pooled = run_trials(draw, 40, seed=11, workers=4)
    assert serial == pooled
    assert [i for i, _ in serial] == list(range(40))


def test_half_width():
    assert half_width(0, 0) == 0.0
    assert half_width(50, 100) == pytest.approx(0.15)
    assert half_width(0, 100) > 0
