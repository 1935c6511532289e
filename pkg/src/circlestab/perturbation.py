"""Destabilising and stabilising perturbations with verified C^1 budgets.

Each construction adds one scaled atom to the field, picks the scale so the
atom's C^1 norm stays under the budget, and then scans the perturbed field to
confirm the intended change of the zero set.
"""
from __future__ import annotations

import math
from dataclasses import dataclass, field as dc_field
from enum import Enum

import numpy as np
from scipy.stats import qmc

from .errors import (CircleStabError, ConstructionFailedError, DegenerateAtomError, DensityFailedError, DomainError,
                     ImpossibleStateError, PreconditionError, ResolutionError,
                     AmbiguousNeighborhoodError)
from .field import (AccumOsc, BumpPsi, CircleField, Constant, OddTheta, OddThetaHat, PlateauPhi,
                    c1_norm, circle_distance, signed_offset)
from .fixed_points import (DEFAULT_CONFIG, Classification, DetectionConfig, Subcase, classify_widening,
                           find_fixed_points)
from .stability import stability_verdict


class CaseTag(str, Enum):
    CASE1 = "Case1"
    CASE2 = "Case2"
    CASE3I = "Case3i"
    CASE3II = "Case3ii"
    CASE4 = "Case4"
    DENSITY = "Density"


@dataclass(frozen=True)
class Perturbation:
    case_tag: CaseTag
    atom: object
    sigma: float
    budget: float
    achieved_norm: float
    perturbed: CircleField
    original: CircleField
    diagnostics: dict = dc_field(default_factory=dict)

    def provenance(self):
        return (f"perturbation {self.case_tag.value} sigma={self.sigma!r} budget={self.budget!r} "
                f"achieved_norm={self.achieved_norm!r}")

    def record(self):
        out = {
            "case": self.case_tag.value,
            "atom": self.atom.to_line(),
            "sigma": self.sigma,
            "budget": self.budget,
            "achieved_norm": self.achieved_norm,
        }
        out.update(self.diagnostics)
        return out


def select_sigma(atom, eps: float, grid_resolution: int = 4096) -> float:
    """Largest tried sigma with ||sigma * atom||_1 < eps, starting from eps / (2 N).

    N is the atom's closed-form norm bound when it has one, else a grid
    estimate inflated by 10%. The result is re-checked on a 4x finer grid and
    halved until the check passes.
    """
    if not (eps > 0 and math.isfinite(eps)):
        raise DomainError(f"budget must be positive and finite, got {eps}")
    norm = atom.norm_bound()
    if norm is None:
        norm = 1.1 * c1_norm(CircleField((atom,)), grid_resolution).c1
    if not norm > 0:
        raise DegenerateAtomError(f"{atom.to_line()} is identically zero")
    sigma = eps / (2.0 * norm)
    for _ in range(60):
        if _norm_of(atom.scaled(sigma), 4 * grid_resolution) < eps:
            return sigma
        sigma /= 2.0
    raise ConstructionFailedError("could not fit the atom under the budget")


def _norm_of(atom, resolution):
    return c1_norm(CircleField((atom,)), resolution).c1


def _finalize(tag, field, unit_atom, eps, cfg, diagnostics=None):
    sigma = select_sigma(unit_atom, eps, cfg.grid_resolution)
    atom = unit_atom.scaled(sigma)
    achieved = _norm_of(atom, 4 * cfg.grid_resolution)
    g = CircleField(field.atoms + (atom,), field.label)
    return Perturbation(tag, atom, sigma, eps, achieved, g, field, dict(diagnostics or {}))


def _check_budget(eps, delta=None):
    if not (eps > 0 and math.isfinite(eps)):
        raise DomainError(f"budget must be positive and finite, got {eps}")
    if delta is not None and not (0 < delta <= 0.5):
        raise DomainError(f"delta must lie in (0, 1/2], got {delta}")


def _zeros_near(field, center, radius, cfg, exclude=1e-7):
    fps = find_fixed_points(field, cfg)
    pts = [p for p in fps.points if exclude <= circle_distance(p.location, center) < radius]
    return fps, pts


def _scan_fps(field, cfg, tries=3):
    """find_fixed_points, refining the grid on resolution errors."""
    for _ in range(tries):
        try:
            return find_fixed_points(field, cfg)
        except ResolutionError:
            cfg = cfg.finer()
    return find_fixed_points(field, cfg)


def _local_sign(field, x, cfg):
    p = cfg.probe_distance
    for _ in range(10):
        v = field(x + p)
        if abs(v) >= cfg.tol_zero:
            return 1.0 if v > 0 else -1.0
        p *= 2.0
    raise PreconditionError(f"f vanishes to tolerance right of x={x}")


def annihilate(field: CircleField, x_star: float, delta: float, eps: float,
               cfg: DetectionConfig = DEFAULT_CONFIG) -> Perturbation:
    """Case 1: remove a one-sided zero with a bump on (x* - delta, x* + delta)."""
    _check_budget(eps, delta)
    if classify_widening(field, x_star, cfg) is not Classification.NONHYPERBOLIC_NO_SIGN_CHANGE:
        raise PreconditionError("annihilate needs a NonhyperbolicNoSignChange zero")
    _, others = _zeros_near(field, x_star, delta, cfg)
    if others:
        raise PreconditionError(f"x*={x_star} is not the only zero in its delta-ball")
    s = _local_sign(field, x_star, cfg)
    pert = _finalize(CaseTag.CASE1, field, BumpPsi(x_star - delta, x_star + delta, amp=s), eps, cfg)

    g = pert.perturbed
    xs = np.linspace(x_star - delta, x_star + delta, 4 * cfg.grid_resolution + 1)[1:-1]
    residual = float(np.min(s * g.value(xs)))
    fps_g = _scan_fps(g, cfg)
    inside = fps_g.points_within(x_star, delta)
    if residual <= 0 or inside:
        raise ConstructionFailedError(
            f"perturbed field still vanishes in the delta-ball (min s*g = {residual:.3g})")
    pert.diagnostics.update(min_signed_value=residual, zeros_before=find_fixed_points(field, cfg).count,
                            zeros_after=fps_g.count)
    return pert


def _three_zero_check(g, center, lo, hi, s, cfg):
    """Zeros of g in [lo, hi] must be exactly: one with slope sign -s in the middle, two with +s outside."""
    fps = _scan_fps(g, cfg)
    pts = [p for p in fps.points if lo <= center + signed_offset(p.location, center) <= hi]
    pts.sort(key=lambda p: signed_offset(p.location, center))
    ok = (len(pts) == 3 and all(p.classification.hyperbolic for p in pts)
          and s * pts[0].derivative > 0 and s * pts[1].derivative < 0 and s * pts[2].derivative > 0)
    return ok, pts, fps


def split(field: CircleField, x_star: float, delta: float, eps: float,
          cfg: DetectionConfig = DEFAULT_CONFIG) -> Perturbation:
    """Case 2: turn a degenerate sign-changing zero into three hyperbolic zeros."""
    _check_budget(eps, delta)
    if classify_widening(field, x_star, cfg) is not Classification.NONHYPERBOLIC_SIGN_CHANGE:
        raise PreconditionError("split needs a NonhyperbolicSignChange zero")
    _, others = _zeros_near(field, x_star, delta, cfg)
    if others:
        raise PreconditionError(f"x*={x_star} is not the only zero in its delta-ball")
    s = _local_sign(field, x_star, cfg)
    pert = _finalize(CaseTag.CASE2, field, OddTheta(x_star, delta, amp=s), eps, cfg)
    g = pert.perturbed

    ok, pts, fps = _three_zero_check(g, x_star, x_star - delta, x_star + delta, s, cfg)
    g_center = abs(g(x_star))
    if not ok or g_center >= cfg.tol_zero or s * g.deriv(x_star) >= 0:
        raise ConstructionFailedError(
            f"split produced {len(pts)} zeros in the delta-ball instead of 3 hyperbolic ones; "
            "try a smaller delta")
    offsets = [float(signed_offset(p.location, x_star)) for p in pts]
    pert.diagnostics.update(nu_left=-offsets[0], nu_right=offsets[2],
                            middle_derivative=float(g.deriv(x_star)),
                            outer_derivatives=[pts[0].derivative, pts[2].derivative],
                            zeros_before=find_fixed_points(field, cfg).count, zeros_after=fps.count)
    return pert


def _side_sign(field, x, cfg):
    v = field(x)
    if abs(v) < cfg.tol_zero:
        return 0
    return 1 if v > 0 else -1


def clear_plateau(field: CircleField, a: float, b: float, delta: float, eps: float,
                  subcase: Subcase | str | None = None,
                  cfg: DetectionConfig = DEFAULT_CONFIG) -> Perturbation:
    """Case 3: remove an arc of zeros [a, b], or the whole circle of zeros.

    Same side signs: a flat-top bump pushes the arc off zero. Opposite side
    signs: an odd flat-top bump leaves exactly three hyperbolic zeros in
    [a - delta, b + delta].
    """
    _check_budget(eps)
    fps = find_fixed_points(field, cfg)
    if fps.whole_circle_zero:
        pert = _finalize(CaseTag.CASE3I, field, Constant(1.0), eps, cfg, {"whole_circle": True})
        after = find_fixed_points(pert.perturbed, cfg)
        if after.whole_circle_zero or after.count or after.plateaus:
            raise ConstructionFailedError("constant shift left zeros behind")
        return pert

    b_u = a + ((b - a) % 1.0)
    if not b_u > a:
        raise ImpossibleStateError("a plateau covering the whole circle requires f to vanish identically")
    if not delta > 0 or b_u - a + 2 * delta >= 1.0:
        raise DomainError("need delta > 0 and b - a + 2 delta < 1")
    left = (_side_sign(field, a - delta, cfg), _side_sign(field, a - 0.5 * delta, cfg))
    right = (_side_sign(field, b_u + delta, cfg), _side_sign(field, b_u + 0.5 * delta, cfg))
    if 0 in left + right or left[0] != left[1] or right[0] != right[1]:
        raise PreconditionError("f must be nonzero with a fixed sign on both flanks of the plateau")
    found = Subcase.SAME_SIGN if left[0] == right[0] else Subcase.OPPOSITE_SIGN
    if subcase is not None and Subcase(subcase) is not found:
        raise PreconditionError(f"flank signs give {found.value}, not {Subcase(subcase).value}")

    lo, hi = a - delta, b_u + delta
    xs = np.linspace(lo, hi, max(256, int((hi - lo) * 4 * cfg.grid_resolution)) + 1)
    if found is Subcase.SAME_SIGN:
        s = float(left[0])
        pert = _finalize(CaseTag.CASE3I, field, PlateauPhi(a, b_u, delta, amp=s), eps, cfg)
        residual = float(np.min(s * pert.perturbed.value(xs)))
        if residual <= 0:
            raise ConstructionFailedError(f"perturbed field still vanishes near the plateau ({residual:.3g})")
        pert.diagnostics.update(min_signed_value=residual,
                                zeros_after=find_fixed_points(pert.perturbed, cfg).count)
        return pert

    s = float(right[0])
    pert = _finalize(CaseTag.CASE3II, field, OddThetaHat(a, b_u, delta, amp=s), eps, cfg)
    mid = 0.5 * (a + b_u)
    ok, pts, fps_g = _three_zero_check(pert.perturbed, mid, lo, hi, s, cfg)
    if not ok:
        raise ConstructionFailedError(
            f"expected 3 hyperbolic zeros in [a - delta, b + delta], found {len(pts)}; try a smaller delta")
    pert.diagnostics.update(zeros_in_window=[p.location for p in pts], zeros_after=fps_g.count)
    return pert


def clear_accumulation(field: CircleField, x_star: float, r: float, eps: float,
                       cfg: DetectionConfig = DEFAULT_CONFIG, force: bool = False) -> Perturbation:
    """Case 4: a bump on (x* - r/2, x* + r/2) leaves finitely many zeros in J = (x* - r, x* + r)."""
    _check_budget(eps)
    if not (0 < r <= 0.5):
        raise DomainError("need 0 < r <= 1/2")
    has_atom = any(isinstance(at, AccumOsc) and circle_distance(at.center, x_star) < 1e-12
                   for at in field.atoms)
    if not (has_atom or force):
        raise PreconditionError("no AccumOsc atom is centred at x*; pass force=True to proceed anyway")
    pert = _finalize(CaseTag.CASE4, field, BumpPsi(x_star - 0.5 * r, x_star + 0.5 * r), eps, cfg)
    g = pert.perturbed

    fps = _scan_fps(g, cfg.finer())
    in_j = [p for p in fps.points if circle_distance(p.location, x_star) < r]
    near = [c for c in fps.accumulation_suspected if circle_distance(c, x_star) < r]
    nearest = min((circle_distance(p.location, x_star) for p in in_j), default=r)
    s = 0.99 * min(float(nearest), 0.5 * r)
    xs = x_star + np.linspace(-s, s, 4 * cfg.grid_resolution + 1)
    if near or len(in_j) > cfg.accumulation_cap or s <= 0 or np.min(np.abs(g.value(xs))) < cfg.tol_zero:
        raise ConstructionFailedError(
            f"{len(in_j)} zeros remain in J; try a larger budget or a smaller r")
    pert.diagnostics.update(clear_radius=s, zeros_in_J=len(in_j))
    return pert


def _halton(count):
    return qmc.Halton(d=1, scramble=False).random(count + 1)[1:, 0]


def _regular_shift(field, c, cfg):
    g = CircleField(field.atoms + (Constant(c),), field.label)
    try:
        fps = find_fixed_points(g, cfg)
    except (ResolutionError, AmbiguousNeighborhoodError):
        return g, None
    return g, fps


def stabilize(field: CircleField, eps: float, cfg: DetectionConfig = DEFAULT_CONFIG) -> CircleField:
    """Structurally stable field within C^1 distance eps of ``field``."""
    return stabilize_steps(field, eps, cfg)[0]


def stabilize_steps(field, eps, cfg=DEFAULT_CONFIG, candidates=1000):
    """Stabilise and also return the list of Perturbation steps taken."""
    _check_budget(eps)
    try:
        if stability_verdict(field, cfg).stable:
            return field, []
    except (ResolutionError, AmbiguousNeighborhoodError):
        pass

    fallback = None
    for u in _halton(candidates):
        c = float((u - 0.5) * eps * (1.0 - 1e-9))
        if c == 0.0:
            continue
        g, fps = _regular_shift(field, c, cfg)
        if fps is None or not fps.is_finite:
            continue
        if fps.all_hyperbolic and all(abs(p.derivative) > cfg.tol_deriv for p in fps.points):
            if stability_verdict(g, cfg).stable:
                step = Perturbation(CaseTag.DENSITY, Constant(c), abs(c), eps, abs(c), g, field,
                                    {"stage": 1, "shift": c})
                return g, [step]
        elif fallback is None:
            fallback = (c, g, fps)

    if fallback is None:
        raise DensityFailedError(f"no regular value found among {candidates} constant shifts")
    c, g, fps = fallback
    steps = [Perturbation(CaseTag.DENSITY, Constant(c), abs(c), eps, abs(c), g, field,
                          {"stage": 1, "shift": c})]
    bad = [p for p in fps.points if not p.classification.hyperbolic]
    share = 0.5 * eps / len(bad)
    locs = fps.locations
    for p in bad:
        others = [circle_distance(p.location, q) for q in locs if q != p.location]
        delta = min([0.1] + [0.5 * d for d in others])
        repair = annihilate if p.classification is Classification.NONHYPERBOLIC_NO_SIGN_CHANGE else split
        try:
            step = repair(g, p.location, delta, share, cfg)
        except CircleStabError as exc:
            raise DensityFailedError(
                f"local repair at x={p.location:.9g} after shift c={c!r} failed: {exc}") from exc
        steps.append(step)
        g = step.perturbed
    if not stability_verdict(g, cfg).stable:
        raise DensityFailedError("local repairs did not produce a structurally stable field")
    return g, steps
