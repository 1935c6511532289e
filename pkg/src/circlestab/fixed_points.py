"""Locating and classifying the zeros of a circle field."""
from __future__ import annotations

import math
from dataclasses import dataclass, replace
from enum import Enum

import numpy as np

from .errors import AmbiguousNeighborhoodError, DomainError, ResolutionError
from .field import CircleField, canonical, circle_distance, signed_offset
from .numerics import bisect, golden_min


class Classification(str, Enum):
    HYPERBOLIC_STABLE = "HyperbolicStable"
    HYPERBOLIC_UNSTABLE = "HyperbolicUnstable"
    NONHYPERBOLIC_NO_SIGN_CHANGE = "NonhyperbolicNoSignChange"
    NONHYPERBOLIC_SIGN_CHANGE = "NonhyperbolicSignChange"

    @property
    def hyperbolic(self):
        return self in (Classification.HYPERBOLIC_STABLE, Classification.HYPERBOLIC_UNSTABLE)


class Subcase(str, Enum):
    SAME_SIGN = "SameSign"
    OPPOSITE_SIGN = "OppositeSign"


@dataclass(frozen=True)
class DetectionConfig:
    grid_resolution: int = 4096
    tol_zero: float = 1e-9
    tol_deriv: float = 1e-6
    plateau_min_width: float = 4e-3
    accumulation_cap: int = 64
    accumulation_radius: float = 0.125
    probe: float | None = None

    def __post_init__(self):
        if self.grid_resolution < 256:
            raise DomainError("grid_resolution must be >= 256")
        if not (self.tol_zero > 0 and self.tol_deriv > 0):
            raise DomainError("tolerances must be positive")
        if not self.plateau_min_width > 0 or self.accumulation_cap < 1:
            raise DomainError("plateau_min_width and accumulation_cap must be positive")

    @property
    def probe_distance(self):
        return self.probe if self.probe is not None else 2.0 / self.grid_resolution

    def finer(self, factor=4):
        return replace(self, grid_resolution=self.grid_resolution * factor)


DEFAULT_CONFIG = DetectionConfig()


@dataclass(frozen=True)
class FixedPoint:
    location: float
    derivative: float
    classification: Classification
    residual: float


@dataclass(frozen=True)
class PlateauInterval:
    """Arc from ``a`` forward to ``b`` on which f vanishes; ``b`` may be below ``a`` when it wraps."""

    a: float
    b: float
    side_signs: tuple
    subcase: Subcase

    @property
    def width(self):
        return (self.b - self.a) % 1.0

    @property
    def midpoint(self):
        return canonical(self.a + 0.5 * self.width)

    def contains(self, x):
        return ((x - self.a) % 1.0) <= self.width


@dataclass(frozen=True)
class FixedPointSet:
    points: tuple
    plateaus: tuple
    accumulation_suspected: tuple
    whole_circle_zero: bool
    config: DetectionConfig

    @property
    def locations(self):
        return np.array([p.location for p in self.points])

    @property
    def count(self):
        return len(self.points)

    @property
    def pattern(self):
        return tuple(p.classification for p in self.points)

    @property
    def is_finite(self):
        return not (self.whole_circle_zero or self.plateaus or self.accumulation_suspected)

    @property
    def all_hyperbolic(self):
        return self.is_finite and all(c.hyperbolic for c in self.pattern)

    def points_within(self, center, radius):
        return [p for p in self.points if circle_distance(p.location, center) < radius]

    def to_csv(self):
        rows = ["location,derivative,classification,residual"]
        for p in self.points:
            rows.append(f"{p.location!r},{p.derivative!r},{p.classification.value},{p.residual!r}")
        return "\n".join(rows) + "\n"


def _sign(values, tol):
    s = np.sign(values)
    return np.where(np.abs(values) < tol, 0.0, s)


def classify(field: CircleField, x_star: float, cfg: DetectionConfig = DEFAULT_CONFIG,
             probe: float | None = None) -> Classification:
    """Hyperbolic tag from the sign of f', otherwise Case 1 / Case 2 by probing both sides."""
    if abs(field(x_star)) >= cfg.tol_zero:
        raise DomainError(f"x*={x_star} is not a zero: |f| = {abs(field(x_star)):.3g}")
    d = field.deriv(x_star)
    if d > cfg.tol_deriv:
        return Classification.HYPERBOLIC_UNSTABLE
    if d < -cfg.tol_deriv:
        return Classification.HYPERBOLIC_STABLE
    p = cfg.probe_distance if probe is None else probe
    left, right = field(x_star - p), field(x_star + p)
    if abs(left) < cfg.tol_zero or abs(right) < cfg.tol_zero:
        raise AmbiguousNeighborhoodError(
            f"f is below tol_zero at x*+-{p:.3g}; widen the probe or treat the region as a plateau")
    if np.sign(left) == np.sign(right):
        return Classification.NONHYPERBOLIC_NO_SIGN_CHANGE
    return Classification.NONHYPERBOLIC_SIGN_CHANGE


def classify_widening(field: CircleField, x_star: float, cfg: DetectionConfig = DEFAULT_CONFIG,
                      doublings: int = 8) -> Classification:
    """classify, doubling the probe distance while the probes are still sub-tolerance."""
    p = cfg.probe_distance
    for _ in range(doublings):
        try:
            return classify(field, x_star, cfg, probe=p)
        except AmbiguousNeighborhoodError:
            p *= 2.0
    return classify(field, x_star, cfg, probe=p)


def _classify_with_fallback(field, x, cfg, left_sign, right_sign):
    try:
        return classify_widening(field, x, cfg)
    except AmbiguousNeighborhoodError:
        pass
    if left_sign == right_sign:
        return Classification.NONHYPERBOLIC_NO_SIGN_CHANGE
    return Classification.NONHYPERBOLIC_SIGN_CHANGE


def _runs(mask):
    """Maximal cyclic runs of True in ``mask`` as (start, length); mask must not be all True."""
    n = mask.size
    start0 = int(np.flatnonzero(~mask)[0])
    runs = []
    i = 0
    while i < n:
        j = (start0 + i) % n
        if mask[j]:
            length = 0
            while length < n and mask[(j + length) % n]:
                length += 1
            runs.append((j, length))
            i += length
        else:
            i += 1
    return runs


def _plateau_edge(field, inside, outside, tol):
    """Bisect the boundary of {|f| < tol} between a sub-tolerance and a super-tolerance point."""
    lo, hi = inside, outside
    for _ in range(60):
        mid = 0.5 * (lo + hi)
        if abs(field(mid)) < tol:
            lo = mid
        else:
            hi = mid
    return lo


def find_fixed_points(field: CircleField, cfg: DetectionConfig = DEFAULT_CONFIG) -> FixedPointSet:
    """Scan a uniform grid for zeros of ``field`` and refine and classify them.

    Sign changes are bisected. Runs of sub-tolerance samples become plateaus
    when wider than ``cfg.plateau_min_width`` and single zeros otherwise.
    Shallow grid minima of |f| get a local golden-section search for
    tangential zeros. Dense clusters are reported as suspected accumulation
    points.
    """
    n = cfg.grid_resolution
    h = 1.0 / n
    tol = cfg.tol_zero
    xs = np.arange(n) / n
    fs = field.value(xs)
    sub = np.abs(fs) < tol
    if sub.all():
        return FixedPointSet((), (), (), True, cfg)
    sg = _sign(fs, tol)

    zeros = []          # (location, left_sign, right_sign)
    plateaus = []
    unresolved = []

    for start, length in _runs(sub):
        prev_i, next_i = start - 1, start + length
        x_prev, x_next = prev_i * h, next_i * h
        s_left, s_right = sg[prev_i % n], sg[next_i % n]
        if (length - 1) * h >= cfg.plateau_min_width:
            a = _plateau_edge(field, start * h, x_prev, tol)
            b = _plateau_edge(field, (start + length - 1) * h, x_next, tol)
            sub_case = Subcase.SAME_SIGN if s_left == s_right else Subcase.OPPOSITE_SIGN
            plateaus.append(PlateauInterval(canonical(a), canonical(b), (int(s_left), int(s_right)), sub_case))
        elif s_left != s_right:
            loc = float(bisect(field.value, np.array([x_prev]), np.array([x_next]))[0])
            zeros.append((loc, s_left, s_right))
        else:
            xm, vm = golden_min(lambda t: s_left * field.value(t), np.array([x_prev]), np.array([x_next]))
            if vm[0] < -tol:
                unresolved.append(canonical(float(xm[0])))
            else:
                zeros.append((float(xm[0]), s_left, s_right))

    # sign changes between consecutive non-zero samples
    nxt = np.roll(sg, -1)
    edges = np.flatnonzero((sg * nxt) < 0)
    if edges.size:
        roots = bisect(field.value, edges * h, (edges + 1) * h)
        zeros.extend((float(r), sg[i], nxt[i]) for r, i in zip(roots, edges))

    # tangential candidates: shallow local minima of |f| with no sign change
    af = np.abs(fs)
    left, right = np.roll(af, 1), np.roll(af, -1)
    sl, sr = np.roll(sg, 1), np.roll(sg, -1)
    cand = np.flatnonzero((sg != 0) & (af < math.sqrt(tol)) & (af < left) & (af <= right)
                          & (sl == sg) & (sr == sg))
    if cand.size:
        s = sg[cand]
        xm, vm = golden_min(lambda t: s * field.value(t), (cand - 1) * h, (cand + 1) * h)
        for x, v, si in zip(xm, vm, s):
            if v < -tol:
                unresolved.append(canonical(float(x)))
            elif v < tol:
                zeros.append((float(x), si, si))

    zeros = [(canonical(x), sl_, sr_) for x, sl_, sr_ in zeros]
    zeros.sort(key=lambda z: z[0])
    deduped = []
    for z in zeros:
        if deduped and circle_distance(z[0], deduped[-1][0]) < 1e-12:
            continue
        deduped.append(z)
    if len(deduped) > 1 and circle_distance(deduped[0][0], deduped[-1][0]) < 1e-12:
        deduped.pop()

    centers = _accumulation_centers([z[0] for z in deduped], unresolved, cfg)
    core = cfg.accumulation_radius / 4.0

    def outside(x):
        return all(circle_distance(x, c) >= core for c in centers)

    stray = [u for u in unresolved if outside(u)]
    if stray:
        raise ResolutionError(
            f"grid of {n} points cannot separate zeros near "
            + ", ".join(f"{u:.6g}" for u in stray[:5])
            + "; retry with a finer grid_resolution", stray)

    points = []
    for x, s_left, s_right in deduped:
        if not outside(x):
            continue
        cls = _classify_with_fallback(field, x, cfg, s_left, s_right)
        points.append(FixedPoint(x, float(field.deriv(x)), cls, abs(float(field(x)))))
    plateaus = [p for p in plateaus if outside(p.midpoint)]
    plateaus.sort(key=lambda p: p.a)
    return FixedPointSet(tuple(points), tuple(plateaus), tuple(centers), False, cfg)


def _accumulation_centers(zero_locs, unresolved, cfg):
    """Centres of suspected accumulation of zeros.

    Counts zeros in balls of radius rho, rho/2, rho/4 around every zero. A
    centre is flagged when the innermost ball holds more than cap/4 zeros and
    more than half of the outermost count, i.e. the zeros both crowd and
    concentrate. Unresolved cells count as two zeros each.
    """
    locs = np.array(list(zero_locs) + list(unresolved) * 2, dtype=float)
    if locs.size <= cfg.accumulation_cap // 4:
        return []
    radii = [cfg.accumulation_radius / 2**j for j in range(3)]
    caps = [cfg.accumulation_cap / 2**j for j in range(3)]
    flagged = []
    for c in np.unique(locs):
        d = circle_distance(locs, c)
        counts = [int(np.count_nonzero(d < r)) for r in radii]
        if counts[2] > caps[2] and 2 * counts[2] > counts[0]:
            flagged.append((float(c), counts[-1]))
    centers = []
    core = cfg.accumulation_radius / 4.0
    for c, _ in sorted(flagged, key=lambda t: (-t[1], t[0])):
        if any(circle_distance(c, other) < cfg.accumulation_radius for other in centers):
            continue
        near = signed_offset(locs, c)
        near = near[np.abs(near) < core]
        centers.append(canonical(c + float(np.median(near))))
    return sorted(centers)
