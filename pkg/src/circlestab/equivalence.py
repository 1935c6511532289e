"""Topological equivalence of circle fields via piecewise-linear homeomorphisms."""
from __future__ import annotations

import csv
import io
from dataclasses import dataclass, replace
from enum import Enum

import numpy as np

from .errors import InvalidHomeomorphismError, NotEquivalentError, PreconditionError, UndecidedError
from .field import CircleField, canonical, circle_distance
from .fixed_points import DEFAULT_CONFIG, DetectionConfig, find_fixed_points
from .stability import Reason, stability_verdict

_ZERO_MATCH = 1e-6


class Orientation(str, Enum):
    PRESERVING = "Preserving"
    REVERSING = "Reversing"

    def __mul__(self, other):
        same = (self is Orientation.PRESERVING) == (other is Orientation.PRESERVING)
        return Orientation.PRESERVING if same else Orientation.REVERSING


@dataclass(frozen=True)
class PLHomeomorphism:
    """Circle map that is linear between consecutive nodes ``(x_k, y_k)``.

    ``x_k`` are canonical and strictly increasing; ``y_k`` are canonical and
    must wind exactly once around the circle, forwards for a preserving map
    and backwards for a reversing one.
    """

    nodes: tuple
    orientation: Orientation = Orientation.PRESERVING

    def __post_init__(self):
        nodes = tuple((float(x), float(canonical(y))) for x, y in self.nodes)
        object.__setattr__(self, "nodes", nodes)
        object.__setattr__(self, "orientation", Orientation(self.orientation))
        if not nodes:
            raise InvalidHomeomorphismError("a PL homeomorphism needs at least one node")
        xs = [x for x, _ in nodes]
        if any(not 0.0 <= x < 1.0 for x in xs) or any(b <= a for a, b in zip(xs, xs[1:])):
            raise InvalidHomeomorphismError("node x-coordinates must be strictly increasing in [0, 1)")
        steps = self._steps()
        if np.any(steps <= 0.0) or abs(float(np.sum(steps)) - 1.0) > 1e-9:
            raise InvalidHomeomorphismError("node y-coordinates do not wind once around the circle")

    def _steps(self):
        ys = np.array([y for _, y in self.nodes])
        if ys.size == 1:
            return np.array([1.0])
        nxt = np.roll(ys, -1)
        diff = nxt - ys if self.orientation is Orientation.PRESERVING else ys - nxt
        return np.mod(diff, 1.0)

    def _lifted(self):
        xs = np.array([x for x, _ in self.nodes])
        sgn = 1.0 if self.orientation is Orientation.PRESERVING else -1.0
        ys = self.nodes[0][1] + sgn * np.concatenate(([0.0], np.cumsum(self._steps())))
        return np.append(xs, xs[0] + 1.0), ys

    def __call__(self, x):
        X, Y = self._lifted()
        u = np.mod(np.asarray(x, dtype=float) - X[0], 1.0) + X[0]
        out = canonical(np.interp(u, X, Y))
        return float(out) if np.ndim(out) == 0 else out

    @classmethod
    def identity(cls):
        return cls(((0.0, 0.0),))

    @classmethod
    def rotation(cls, shift):
        return cls(((0.0, canonical(shift)),))

    @classmethod
    def reflection(cls):
        """x -> 1 - x (mod 1)."""
        return cls(((0.0, 0.0),), Orientation.REVERSING)

    def inverse(self):
        pairs = sorted((y, x) for x, y in self.nodes)
        return PLHomeomorphism(tuple(pairs), self.orientation)

    def compose(self, inner):
        """The map x -> self(inner(x))."""
        breaks = [x for x, _ in inner.nodes]
        inv = inner.inverse()
        breaks.extend(float(inv(x)) for x, _ in self.nodes)
        breaks = sorted(set(float(canonical(b)) for b in breaks))
        pts = [breaks[0]]
        for b in breaks[1:]:
            if b - pts[-1] > 1e-15:
                pts.append(b)
        nodes = tuple((b, float(self(inner(b)))) for b in pts)
        return PLHomeomorphism(nodes, self.orientation * inner.orientation)

    def to_csv(self):
        buf = io.StringIO()
        w = csv.writer(buf, lineterminator="\n")
        w.writerow(["x_k", "y_k", "orientation"])
        for x, y in self.nodes:
            w.writerow([repr(x), repr(y), self.orientation.value])
        return buf.getvalue()

    @classmethod
    def from_csv(cls, text):
        rows = list(csv.DictReader(io.StringIO(text)))
        if not rows:
            raise InvalidHomeomorphismError("empty node table")
        orient = {r["orientation"] for r in rows}
        if len(orient) != 1:
            raise InvalidHomeomorphismError("mixed orientation column")
        return cls(tuple((float(r["x_k"]), float(r["y_k"])) for r in rows), orient.pop())


@dataclass(frozen=True)
class EquivalenceClass:
    kind: str
    fixed_point_count: int

    @property
    def m(self):
        return self.fixed_point_count // 2

    def __str__(self):
        return "Nonvanishing" if self.kind == "Nonvanishing" else f"Hyperbolic({self.m})"


def _signs(values, tol):
    return np.where(np.abs(values) < tol, 0.0, np.sign(values))


def _near_zero(func, x, eta, tol):
    """True when func has a zero within eta of each x (sign change or sub-tolerance value)."""
    a, b, c = func(x - eta), func(x), func(x + eta)
    return (np.abs(b) < tol) | (np.sign(a) != np.sign(b)) | (np.sign(b) != np.sign(c))


def te_check(f: CircleField, g: CircleField, h: PLHomeomorphism, grid_resolution: int = 4096,
             cfg: DetectionConfig = DEFAULT_CONFIG) -> bool:
    """Does ``h`` carry zeros / positive / negative sets of f onto those of g?

    For an orientation-reversing ``h`` the positive and negative sets swap.
    Checked pointwise on a uniform grid, plus an exact check that each
    isolated zero of f lands on a zero of g.
    """
    if not isinstance(h, PLHomeomorphism):
        raise InvalidHomeomorphismError("te_check needs a PLHomeomorphism")
    tol = cfg.tol_zero
    xs = np.arange(grid_resolution) / grid_resolution
    ys = h(xs)
    sf = _signs(f.value(xs), tol)
    sg = _signs(g.value(ys), tol)
    want = sf if h.orientation is Orientation.PRESERVING else -sf
    bad = np.flatnonzero(sg != want)
    if bad.size:
        eta = 1e-7
        ok_f = (sf[bad] == 0) & _near_zero(g.value, ys[bad], eta, tol)
        ok_g = (sg[bad] == 0) & _near_zero(f.value, xs[bad], eta, tol)
        if not np.all(ok_f | ok_g):
            return False

    zcfg = replace(cfg, grid_resolution=max(grid_resolution, 256))
    zf, zg = find_fixed_points(f, zcfg), find_fixed_points(g, zcfg)
    if zf.whole_circle_zero or zg.whole_circle_zero:
        return zf.whole_circle_zero and zg.whole_circle_zero
    if zf.count != zg.count:
        return False
    gl = zg.locations
    for p in zf.points:
        if np.min(circle_distance(gl, h(p.location))) > _ZERO_MATCH:
            return False
    return True


def _require_stable(field, cfg, exc):
    report = stability_verdict(field, cfg)
    if not report.stable:
        raise exc(f"field {field.label or '<unnamed>'} is not structurally stable: {report.summary()}")
    return report


def _sign_of_nonvanishing(field):
    return 1.0 if field(0.0) > 0 else -1.0


def _anchor(pairs, orientation, f_locs, g_locs, tol_gap):
    """Add an anchor node: (0, 0) when it fits, else one halfway into the first gap."""
    base = PLHomeomorphism(tuple(sorted(pairs)), orientation)
    near_f = np.min(circle_distance(f_locs, 0.0)) < tol_gap
    near_g = np.min(circle_distance(g_locs, 0.0)) < tol_gap
    if not (near_f or near_g):
        try:
            return PLHomeomorphism(tuple(sorted(pairs + [(0.0, 0.0)])), orientation)
        except InvalidHomeomorphismError:
            pass
    gaps = np.diff(np.append(np.sort(f_locs), np.sort(f_locs)[0] + 1.0))
    tau = float(canonical(0.5 * np.min(gaps))) if near_f else 0.0
    if any(abs(tau - x) < 1e-15 for x, _ in pairs):
        return base
    return PLHomeomorphism(tuple(sorted(pairs + [(tau, float(base(tau)))])), orientation)


def build_homeomorphism(f: CircleField, g: CircleField,
                        cfg: DetectionConfig = DEFAULT_CONFIG) -> PLHomeomorphism:
    """Piecewise-linear topological equivalence from f to g (both structurally stable)."""
    rf = _require_stable(f, cfg, PreconditionError)
    rg = _require_stable(g, cfg, PreconditionError)
    if rf.reason is Reason.NO_FIXED_POINTS or rg.reason is Reason.NO_FIXED_POINTS:
        if rf.reason is not rg.reason:
            raise NotEquivalentError("one field has fixed points and the other has none")
        if _sign_of_nonvanishing(f) == _sign_of_nonvanishing(g):
            return PLHomeomorphism.identity()
        return PLHomeomorphism.reflection()

    pf, pg = rf.fixed_points, rg.fixed_points
    if pf.count != pg.count:
        raise NotEquivalentError(f"fixed point counts differ: {pf.count} vs {pg.count}")
    xs, ys = pf.locations, pg.locations
    cf, cg = pf.pattern, pg.pattern
    n = len(xs)
    tol_gap = 1.0 / cfg.grid_resolution
    candidates = [(Orientation.PRESERVING, j) for j in range(n)]
    candidates += [(Orientation.REVERSING, j) for j in range(n)]
    for orient, j in candidates:
        if orient is Orientation.PRESERVING:
            idx = [(i + j) % n for i in range(n)]
        else:
            idx = [(j - i) % n for i in range(n)]
        if any(cf[i] != cg[k] for i, k in enumerate(idx)):
            continue
        pairs = [(float(xs[i]), float(ys[k])) for i, k in enumerate(idx)]
        try:
            h = _anchor(pairs, orient, xs, ys, tol_gap)
        except InvalidHomeomorphismError:
            continue
        if te_check(f, g, h, cfg.grid_resolution, cfg):
            return h
    raise NotEquivalentError("no cyclic matching of fixed points passes the sign-pattern check")


def equivalence_class(field: CircleField, cfg: DetectionConfig = DEFAULT_CONFIG) -> EquivalenceClass:
    report = _require_stable(field, cfg, PreconditionError)
    n = report.fixed_points.count
    if n == 0:
        return EquivalenceClass("Nonvanishing", 0)
    return EquivalenceClass("Hyperbolic", n)


def are_equivalent(f: CircleField, g: CircleField, cfg: DetectionConfig = DEFAULT_CONFIG):
    """``(True, witness)`` when f and g are topologically equivalent, else ``(False, None)``."""
    _require_stable(f, cfg, UndecidedError)
    _require_stable(g, cfg, UndecidedError)
    if equivalence_class(f, cfg) != equivalence_class(g, cfg):
        return False, None
    try:
        return True, build_homeomorphism(f, g, cfg)
    except NotEquivalentError:
        return False, None
