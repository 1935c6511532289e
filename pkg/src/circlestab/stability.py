"""Structural stability verdicts and robustness margins."""
from __future__ import annotations

from dataclasses import dataclass
from enum import Enum

import numpy as np

from .errors import PreconditionError
from .field import AccumOsc, CircleField
from .fixed_points import (DEFAULT_CONFIG, Classification, DetectionConfig, FixedPointSet,
                           find_fixed_points)
from .numerics import refined_min


class Verdict(str, Enum):
    STABLE = "StructurallyStable"
    NOT_STABLE = "NotStructurallyStable"
    UNDECIDED = "Undecided"


class Reason(str, Enum):
    NO_FIXED_POINTS = "NoFixedPoints"
    ALL_HYPERBOLIC = "AllHyperbolic"
    CASE1 = "NonhyperbolicPoint(Case1)"
    CASE2 = "NonhyperbolicPoint(Case2)"
    PLATEAU = "Plateau(Case3)"
    ACCUMULATION = "AccumulationSuspected(Case4)"
    WHOLE_CIRCLE_ZERO = "WholeCircleZero"


@dataclass(frozen=True)
class Margin:
    delta: float | None
    eps0: float
    eps1: float | None
    robustness_radius: float


@dataclass(frozen=True)
class StabilityReport:
    verdict: Verdict
    reason: Reason
    fixed_points: FixedPointSet
    delta: float | None = None
    eps0: float | None = None
    eps1: float | None = None
    robustness_radius: float | None = None
    location: float | None = None

    @property
    def stable(self):
        return self.verdict is Verdict.STABLE

    def summary(self):
        n = self.fixed_points.count
        noun = "fixed point" if n == 1 else "fixed points"
        return f"{self.verdict.value} / {self.reason.value}, {n} {noun}"

    def text(self, label=""):
        lines = [f"field: {label}" if label else "field:", self.summary()]
        if self.location is not None:
            lines.append(f"first violation at x = {self.location:.12g}")
        for name in ("delta", "eps0", "eps1", "robustness_radius"):
            v = getattr(self, name)
            if v is not None:
                lines.append(f"{name}: {v:.12g}")
        fps = self.fixed_points
        for p in fps.points:
            lines.append(f"  x = {p.location:.12f}  f' = {p.derivative: .6e}  {p.classification.value}")
        for pl in fps.plateaus:
            lines.append(f"  plateau [{pl.a:.9f}, {pl.b:.9f}]  {pl.subcase.value}")
        for c in fps.accumulation_suspected:
            lines.append(f"  accumulation suspected near x = {c:.9f}")
        return "\n".join(lines) + "\n"

    def record(self, label=""):
        return {
            "field": label,
            "verdict": self.verdict.value,
            "reason": self.reason.value,
            "delta": self.delta,
            "eps0": self.eps0,
            "eps1": self.eps1,
            "robustness_radius": self.robustness_radius,
            "fixed_point_count": self.fixed_points.count,
            "location": self.location,
        }


def _exact_accumulation(field, cfg):
    """Centres of AccumOsc atoms where the whole field is flat to tolerance."""
    out = []
    for atom in field.atoms:
        if isinstance(atom, AccumOsc) and atom.amp != 0:
            c = atom.center % 1.0
            if abs(field(c)) < cfg.tol_zero and abs(field.deriv(c)) <= cfg.tol_deriv:
                out.append(c)
    return out


def stability_verdict(field: CircleField, cfg: DetectionConfig = DEFAULT_CONFIG) -> StabilityReport:
    fps = find_fixed_points(field, cfg)
    if fps.whole_circle_zero:
        return StabilityReport(Verdict.NOT_STABLE, Reason.WHOLE_CIRCLE_ZERO, fps)
    exact = _exact_accumulation(field, cfg)
    if exact:
        return StabilityReport(Verdict.NOT_STABLE, Reason.ACCUMULATION, fps, location=exact[0])

    definite = []
    for p in fps.points:
        if p.classification is Classification.NONHYPERBOLIC_NO_SIGN_CHANGE:
            definite.append((p.location, Reason.CASE1))
        elif p.classification is Classification.NONHYPERBOLIC_SIGN_CHANGE:
            definite.append((p.location, Reason.CASE2))
    definite.extend((pl.a, Reason.PLATEAU) for pl in fps.plateaus)
    if definite:
        loc, reason = min(definite, key=lambda t: t[0])
        return StabilityReport(Verdict.NOT_STABLE, reason, fps, location=loc)
    if fps.accumulation_suspected:
        return StabilityReport(Verdict.UNDECIDED, Reason.ACCUMULATION, fps,
                               location=fps.accumulation_suspected[0])

    m = _margin(field, fps, cfg)
    reason = Reason.NO_FIXED_POINTS if fps.count == 0 else Reason.ALL_HYPERBOLIC
    return StabilityReport(Verdict.STABLE, reason, fps, m.delta, m.eps0, m.eps1, m.robustness_radius)


def stability_margin(field: CircleField, cfg: DetectionConfig = DEFAULT_CONFIG) -> Margin:
    """(delta, eps0, eps1, radius) such that every g with ||g - f||_1 < radius keeps f's phase portrait."""
    report = stability_verdict(field, cfg)
    if not report.stable:
        raise PreconditionError(f"stability_margin needs a structurally stable field, got {report.summary()}")
    return Margin(report.delta, report.eps0, report.eps1, report.robustness_radius)


def _min_abs(func, lo, hi, n):
    xs = np.linspace(lo, hi, n)
    return refined_min(lambda t: np.abs(func(t)), xs, max_candidates=4)


def _margin(field, fps, cfg):
    n_verify = 4 * cfg.grid_resolution
    if fps.count == 0:
        xs = np.arange(n_verify) / n_verify
        eps0 = refined_min(lambda t: np.abs(field.value(t)), xs, cyclic=True)
        return Margin(None, eps0, None, eps0)

    zs = fps.locations
    gaps = np.diff(np.append(zs, zs[0] + 1.0))
    delta = float(np.min(gaps)) / 4.0
    slopes = np.sign([p.derivative for p in fps.points])

    def samples(width):
        return max(64, int(np.ceil(width * n_verify)) + 1)

    for _ in range(60):
        ok = True
        for z, s in zip(zs, slopes):
            xs = np.linspace(z - delta, z + delta, samples(2 * delta))
            if np.min(s * field.deriv(xs)) <= 0.0:
                ok = False
                break
        if ok:
            break
        delta /= 2.0
    else:
        raise PreconditionError("no delta keeps f' of one sign around every zero")

    eps0 = 0.5 * min(_min_abs(field.deriv, z - delta, z + delta, samples(2 * delta)) for z in zs)
    eps1 = 0.5 * min(_min_abs(field.value, z + delta, z + g - delta, samples(g - 2 * delta))
                     for z, g in zip(zs, gaps))
    return Margin(delta, eps0, eps1, min(eps0, eps1))


def k_delta_arcs(fps: FixedPointSet, delta: float):
    """Closed arcs [x_k + delta, x_{k+1} - delta] making up K(delta)."""
    zs = fps.locations
    nxt = np.append(zs[1:], zs[0] + 1.0)
    return [(float(a + delta), float(b - delta)) for a, b in zip(zs, nxt)]


def same_portrait(f_set: FixedPointSet, g_set: FixedPointSet) -> bool:
    """Same count and same cyclic classification pattern, up to rotation."""
    if f_set.count != g_set.count or not (f_set.is_finite and g_set.is_finite):
        return False
    a, b = list(f_set.pattern), list(g_set.pattern)
    if not a:
        return True
    return any(a == b[j:] + b[:j] for j in range(len(b)))

