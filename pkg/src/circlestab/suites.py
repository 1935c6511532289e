"""Randomised openness and density experiments over random Fourier fields."""
from __future__ import annotations

import math
from dataclasses import dataclass

import numpy as np

from .equivalence import build_homeomorphism, te_check
from .errors import CircleStabError
from .field import CircleField, Constant, FourierCos, FourierSin, c1_norm, certified_norm
from .fixed_points import DEFAULT_CONFIG, Classification, DetectionConfig
from .perturbation import stabilize_steps
from .stability import same_portrait, stability_verdict

MAX_DEGREE = 5


@dataclass(frozen=True)
class SuiteConfig:
    trials: int = 100
    seed: int = 0
    eps: float = 1e-3            # density budget
    seeded_every: int = 5        # every n-th density field gets a planted nonhyperbolic zero
    radius_fraction: float = 0.9  # openness perturbations stay below this share of the radius
    verify_grid: int = 4096


def random_fourier_field(rng: np.random.Generator, max_degree: int = MAX_DEGREE, label: str = "") -> CircleField:
    """c0 + sum_k a_k cos(2 pi k x) + b_k sin(2 pi k x) with coefficients uniform in [-1, 1]."""
    degree = int(rng.integers(1, max_degree + 1))
    coef = rng.uniform(-1.0, 1.0, size=2 * degree + 1)
    atoms = [Constant(float(coef[0]))]
    for k in range(1, degree + 1):
        atoms.append(FourierCos(k, float(coef[2 * k - 1])))
        atoms.append(FourierSin(k, float(coef[2 * k])))
    return CircleField(tuple(atoms), label)


def plant_nonhyperbolic(field: CircleField, x0: float) -> CircleField:
    """Subtract f(x0) and a first harmonic so that x0 becomes a zero with f'(x0) = 0.

    The correction is f(x0) + f'(x0)/(2 pi) sin(2 pi (x - x0)), expanded into
    first-harmonic atoms.
    """
    v, d = float(field(x0)), float(field.deriv(x0))
    c = d / (2.0 * math.pi)
    w = 2.0 * math.pi * x0
    extra = (Constant(-v), FourierSin(1, -c * math.cos(w)), FourierCos(1, c * math.sin(w)))
    return CircleField(field.atoms + extra, field.label)


@dataclass(frozen=True)
class OpennessTrial:
    index: int
    fixed_points: int
    radius: float
    perturbation_norm: float
    stable_after: bool
    same_portrait: bool
    witness_ok: bool

    @property
    def passed(self):
        return self.stable_after and self.same_portrait and self.witness_ok


def openness_trial(index, rng, cfg: DetectionConfig = DEFAULT_CONFIG, sc: SuiteConfig = SuiteConfig()):
    """Draw a stable field f and a perturbation p with ||p||_1 below f's robustness radius."""
    while True:
        f = random_fourier_field(rng, label=f"f{index}")
        rep = stability_verdict(f, cfg)
        if rep.stable and rep.robustness_radius > 0:
            break
    p = random_fourier_field(rng)
    # certified bound >= true norm, so the scaled p is strictly inside the ball
    scale = sc.radius_fraction * float(rng.uniform(0.05, 1.0)) * rep.robustness_radius / certified_norm(p).c1
    p = p.scaled(scale)
    pnorm = c1_norm(p, 4 * sc.verify_grid).c1
    g = (f + p).with_label(f"g{index}")
    rg = stability_verdict(g, cfg)
    same = rg.stable and same_portrait(rep.fixed_points, rg.fixed_points)
    witness = False
    if same:
        try:
            h = build_homeomorphism(f, g, cfg)
            witness = te_check(f, g, h, sc.verify_grid, cfg)
        except CircleStabError:
            witness = False
    return OpennessTrial(index, rep.fixed_points.count, float(rep.robustness_radius), pnorm,
                         rg.stable, same, witness)


def run_openness(sc: SuiteConfig = SuiteConfig(), cfg: DetectionConfig = DEFAULT_CONFIG):
    rng = np.random.default_rng(sc.seed)
    return [openness_trial(i, rng, cfg, sc) for i in range(sc.trials)]


@dataclass(frozen=True)
class DensityTrial:
    index: int
    seeded: bool
    verdict_before: str
    verdict_after: str
    distance: float
    steps: int
    error: str | None = None
    budget: float = 1e-3

    @property
    def passed(self):
        return self.error is None and self.verdict_after == "StructurallyStable" and self.distance < self.budget


def density_field(index, rng, sc: SuiteConfig = SuiteConfig()):
    f = random_fourier_field(rng, label=f"d{index}")
    seeded = sc.seeded_every > 0 and index % sc.seeded_every == 0
    if seeded:
        f = plant_nonhyperbolic(f, float(rng.uniform(0.0, 1.0)))
    return f, seeded


def density_trial(index, rng, cfg: DetectionConfig = DEFAULT_CONFIG, sc: SuiteConfig = SuiteConfig()):
    f, seeded = density_field(index, rng, sc)
    try:
        before = stability_verdict(f, cfg).verdict.value
    except CircleStabError as exc:
        before = type(exc).__name__
    try:
        g, steps = stabilize_steps(f, sc.eps, cfg)
    except CircleStabError as exc:
        return DensityTrial(index, seeded, before, "failed", math.inf, 0, str(exc), sc.eps)
    dist = c1_norm(CircleField(g.atoms[len(f.atoms):]), 4 * sc.verify_grid).c1
    after = stability_verdict(g, cfg).verdict.value
    return DensityTrial(index, seeded, before, after, dist, len(steps), None, sc.eps)


def run_density(sc: SuiteConfig = SuiteConfig(), cfg: DetectionConfig = DEFAULT_CONFIG):
    rng = np.random.default_rng(sc.seed)
    return [density_trial(i, rng, cfg, sc) for i in range(sc.trials)]


def is_nonhyperbolic_seed(f: CircleField, cfg: DetectionConfig = DEFAULT_CONFIG) -> bool:
    rep = stability_verdict(f, cfg)
    return any(p.classification in (Classification.NONHYPERBOLIC_NO_SIGN_CHANGE,
                                    Classification.NONHYPERBOLIC_SIGN_CHANGE)
               for p in rep.fixed_points.points) or not rep.stable
