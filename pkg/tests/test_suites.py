import numpy as np
import pytest

from circlestab import Classification, FourierCos, FourierSin, find_fixed_points, stability_verdict
from circlestab.suites import (SuiteConfig, density_field, is_nonhyperbolic_seed, plant_nonhyperbolic,
                               random_fourier_field, run_density, run_openness)


def test_random_field_shape():
    rng = np.random.default_rng(1)
    for _ in range(50):
        f = random_fourier_field(rng)
        ks = {a.k for a in f.atoms if isinstance(a, (FourierSin, FourierCos))}
        assert 1 <= max(ks) <= 5
        assert all(-1 <= a.amp <= 1 for a in f.atoms)


@pytest.mark.parametrize("x0", [0.0, 0.123, 0.77])
def test_planted_zero_is_nonhyperbolic(x0):
    f = plant_nonhyperbolic(random_fourier_field(np.random.default_rng(4)), x0)
    assert abs(f(x0)) < 1e-12 and abs(f.deriv(x0)) < 1e-9
    fps = find_fixed_points(f)
    near = [p for p in fps.points if abs(((p.location - x0 + 0.5) % 1.0) - 0.5) < 1e-4]
    assert near and not near[0].classification.hyperbolic
    assert is_nonhyperbolic_seed(f)
    assert not stability_verdict(f).stable


def test_density_seeding_schedule():
    rng = np.random.default_rng(0)
    flags = [density_field(i, rng)[1] for i in range(20)]
    assert sum(flags) == 4 and flags[0] and flags[5]


def test_small_openness_run():
    trials = run_openness(SuiteConfig(trials=5, seed=11))
    assert all(t.passed for t in trials)
    assert all(t.perturbation_norm < t.radius for t in trials)


def test_small_density_run():
    trials = run_density(SuiteConfig(trials=6, seed=11))
    assert all(t.passed for t in trials), [t.error for t in trials]
    assert trials[0].seeded and trials[0].verdict_before != "StructurallyStable"


def test_classification_enum_has_hyperbolic_flag():
    assert Classification.HYPERBOLIC_STABLE.hyperbolic
    assert not Classification.NONHYPERBOLIC_SIGN_CHANGE.hyperbolic
