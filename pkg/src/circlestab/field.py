"""Vector fields on the circle R/Z built from closed-form atoms.

A :class:`CircleField` is a finite sum of atoms. Each atom knows its exact
value and first derivative, so ``f`` and ``f'`` are evaluated without
numerical differentiation, and periodicity holds by construction because
every evaluation first reduces ``x`` mod 1.
"""
from __future__ import annotations

import math
from dataclasses import dataclass, replace
from typing import ClassVar

import numpy as np

from .errors import DomainError
from .numerics import refined_max

TWO_PI = 2.0 * math.pi
E_INV = math.exp(-1.0)

# max over s of |d/ds exp(-1/(1-s^2))|; the maximiser solves 1 - 3 s^4 = 0.
_S2 = 1.0 / math.sqrt(3.0)
BUMP_SLOPE_MAX = 2.0 * math.sqrt(_S2) / (1.0 - _S2) ** 2 * math.exp(-1.0 / (1.0 - _S2))

DEFAULT_NORM_RESOLUTION = 4096


def canonical(x):
    """Representative of ``x`` mod 1 in ``[0, 1)``."""
    r = np.mod(x, 1.0)
    # np.mod(-1e-18, 1.0) rounds to 1.0
    return np.where(r >= 1.0, 0.0, r) if isinstance(r, np.ndarray) else (0.0 if r >= 1.0 else float(r))


def circle_distance(x, y):
    d = np.abs(np.mod(np.asarray(x, dtype=float) - y, 1.0))
    return np.minimum(d, 1.0 - d)


def signed_offset(x, center):
    """Offset of ``x`` from ``center`` taken in ``[-1/2, 1/2)``."""
    return np.mod(np.asarray(x, dtype=float) - center + 0.5, 1.0) - 0.5


def _bump(t, rho):
    """exp(-rho^2 / (rho^2 - t^2)) on |t| < rho, zero elsewhere, plus derivative."""
    t = np.asarray(t, dtype=float)
    inside = np.abs(t) < rho
    gap = np.where(inside, rho * rho - t * t, 1.0)
    with np.errstate(over="ignore", divide="ignore", invalid="ignore", under="ignore"):
        v = np.where(inside, np.exp(-rho * rho / gap), 0.0)
        dv = np.where(v > 0.0, v * (-2.0 * rho * rho * t / (gap * gap)), 0.0)
    return v, dv


def _plateau(u, a, b, delta):
    """Flat-top bump: e^-1 on [a - delta/2, b + delta/2], half bumps on the flanks."""
    h = 0.5 * delta
    left_c, right_c = a - h, b + h
    lv, ldv = _bump(u - left_c, h)
    rv, rdv = _bump(u - right_c, h)
    v = np.where(u <= left_c, lv, np.where(u >= right_c, rv, E_INV))
    dv = np.where(u <= left_c, ldv, np.where(u >= right_c, rdv, 0.0))
    return v, dv


@dataclass(frozen=True)
class Atom:
    """One closed-form building block, scaled by ``amp``.

    Subclasses implement ``_shape(x)`` returning the unit-amplitude value and
    derivative at canonical ``x`` (arrays), and ``unit_bounds()`` returning
    certified upper bounds on sup|value| and sup|derivative|, or ``None``.
    """

    kind: ClassVar[str] = ""
    params: ClassVar[tuple] = ()

    def value(self, x):
        return self.amp * self._shape(canonical(np.asarray(x, dtype=float)))[0]

    def deriv(self, x):
        return self.amp * self._shape(canonical(np.asarray(x, dtype=float)))[1]

    def scaled(self, factor):
        return replace(self, amp=self.amp * factor)

    def support(self):
        """``(lo, hi)`` with the atom zero outside ``(lo, hi)`` mod 1, or None if global."""
        return None

    def unit_bounds(self):
        return None

    def norm_bound(self):
        """Certified upper bound on the C^1 norm of this atom, or None."""
        b = self.unit_bounds()
        if b is None:
            return None
        return abs(self.amp) * (b[0] + b[1])

    def _local(self, x):
        lo = self.support()[0]
        return lo + np.mod(x - lo, 1.0)

    def to_line(self):
        parts = [self.kind]
        for name in self.params:
            parts.append(f"{name}={_fmt(getattr(self, name))}")
        parts.append(f"amp={_fmt(self.amp)}")
        return " ".join(parts)


def _fmt(v):
    if isinstance(v, (int, np.integer)) and not isinstance(v, bool):
        return str(int(v))
    return repr(float(v))


@dataclass(frozen=True)
class Constant(Atom):
    amp: float = 1.0
    kind: ClassVar[str] = "constant"
    params: ClassVar[tuple] = ()

    def _shape(self, x):
        return np.ones_like(x), np.zeros_like(x)

    def unit_bounds(self):
        return 1.0, 0.0


@dataclass(frozen=True)
class FourierCos(Atom):
    k: int = 1
    amp: float = 1.0
    kind: ClassVar[str] = "fourier_cos"
    params: ClassVar[tuple] = ("k",)

    def __post_init__(self):
        if int(self.k) != self.k or self.k < 1:
            raise DomainError(f"Fourier wavenumber must be a positive integer, got {self.k}")
        object.__setattr__(self, "k", int(self.k))

    def _shape(self, x):
        w = TWO_PI * self.k
        return np.cos(w * x), -w * np.sin(w * x)

    def unit_bounds(self):
        return 1.0, TWO_PI * self.k


@dataclass(frozen=True)
class FourierSin(FourierCos):
    kind: ClassVar[str] = "fourier_sin"

    def _shape(self, x):
        w = TWO_PI * self.k
        return np.sin(w * x), w * np.cos(w * x)


def _check_width(width, what):
    if not (width > 0.0) or width > 1.0 or not math.isfinite(width):
        raise DomainError(f"{what} must satisfy 0 < width <= 1, got {width}")


@dataclass(frozen=True)
class BumpPsi(Atom):
    """Interval bump exp(-rho^2 / (rho^2 - (x - c)^2)) on (a, b)."""

    a: float = 0.0
    b: float = 1.0
    amp: float = 1.0
    kind: ClassVar[str] = "bump_psi"
    params: ClassVar[tuple] = ("a", "b")

    def __post_init__(self):
        _check_width(self.b - self.a, "bump_psi support")

    @property
    def center(self):
        return 0.5 * (self.a + self.b)

    @property
    def radius(self):
        return 0.5 * (self.b - self.a)

    def support(self):
        return self.a, self.b

    def _shape(self, x):
        return _bump(self._local(x) - self.center, self.radius)

    def unit_bounds(self):
        return E_INV, BUMP_SLOPE_MAX / self.radius


@dataclass(frozen=True)
class PlateauPhi(Atom):
    """Flat-top bump equal to e^-1 on [a - delta/2, b + delta/2], supported on (a - delta, b + delta)."""

    a: float = 0.0
    b: float = 0.0
    delta: float = 0.1
    amp: float = 1.0
    kind: ClassVar[str] = "plateau_phi"
    params: ClassVar[tuple] = ("a", "b", "delta")

    def __post_init__(self):
        if self.b < self.a or not self.delta > 0:
            raise DomainError("plateau_phi needs a <= b and delta > 0")
        _check_width(self.b - self.a + 2 * self.delta, "plateau_phi support")

    def support(self):
        return self.a - self.delta, self.b + self.delta

    def _shape(self, x):
        return _plateau(self._local(x), self.a, self.b, self.delta)

    def unit_bounds(self):
        return E_INV, BUMP_SLOPE_MAX / (0.5 * self.delta)


@dataclass(frozen=True)
class OddTheta(Atom):
    """-2 (x - center) phi(x) / (delta e), with phi the plateau bump collapsed at ``center``."""

    center: float = 0.0
    delta: float = 0.1
    amp: float = 1.0
    kind: ClassVar[str] = "odd_theta"
    params: ClassVar[tuple] = ("center", "delta")

    def __post_init__(self):
        _check_width(2 * self.delta, "odd_theta support")

    def support(self):
        return self.center - self.delta, self.center + self.delta

    def _shape(self, x):
        u = self._local(x)
        phi, dphi = _plateau(u, self.center, self.center, self.delta)
        t = u - self.center
        c = -2.0 / (self.delta * math.e)
        return c * t * phi, c * (phi + t * dphi)

    def unit_bounds(self):
        c = 2.0 / (self.delta * math.e)
        return c * self.delta * E_INV, c * (E_INV + self.delta * BUMP_SLOPE_MAX / (0.5 * self.delta))


@dataclass(frozen=True)
class OddThetaHat(Atom):
    """-2 phi_hat(x) (x - (a+b)/2) / (e (b - a)) on (a - delta, b + delta)."""

    a: float = 0.0
    b: float = 0.1
    delta: float = 0.1
    amp: float = 1.0
    kind: ClassVar[str] = "odd_theta_hat"
    params: ClassVar[tuple] = ("a", "b", "delta")

    def __post_init__(self):
        if not self.b > self.a or not self.delta > 0:
            raise DomainError("odd_theta_hat needs a < b and delta > 0")
        _check_width(self.b - self.a + 2 * self.delta, "odd_theta_hat support")

    def support(self):
        return self.a - self.delta, self.b + self.delta

    def _shape(self, x):
        u = self._local(x)
        phi, dphi = _plateau(u, self.a, self.b, self.delta)
        t = u - 0.5 * (self.a + self.b)
        c = -2.0 / (math.e * (self.b - self.a))
        return c * t * phi, c * (phi + t * dphi)

    def unit_bounds(self):
        c = 2.0 / (math.e * (self.b - self.a))
        reach = 0.5 * (self.b - self.a) + self.delta
        return c * reach * E_INV, c * (E_INV + reach * BUMP_SLOPE_MAX / (0.5 * self.delta))


@dataclass(frozen=True)
class AccumOsc(Atom):
    """w(x) (x - center)^3 sin(1/(x - center)) with w the bump on (center - r, center + r).

    C^1 with zeros at center +- 1/(k pi) accumulating at ``center``.
    """

    center: float = 0.5
    r: float = 0.2
    amp: float = 1.0
    kind: ClassVar[str] = "accum_osc"
    params: ClassVar[tuple] = ("center", "r")

    def __post_init__(self):
        _check_width(2 * self.r, "accum_osc support")

    def support(self):
        return self.center - self.r, self.center + self.r

    def _shape(self, x):
        t = self._local(x) - self.center
        w, dw = _bump(t, self.r)
        nz = t != 0.0
        inv = np.where(nz, 1.0 / np.where(nz, t, 1.0), 0.0)
        s = np.where(nz, np.sin(inv), 0.0)
        c = np.where(nz, np.cos(inv), 0.0)
        t2 = t * t
        return w * t2 * t * s, dw * t2 * t * s + w * (3.0 * t2 * s - t * c)

    def unit_bounds(self):
        r = self.r
        return E_INV * r**3, (BUMP_SLOPE_MAX / r) * r**3 + E_INV * (3.0 * r * r + r)


ATOM_TYPES = {cls.kind: cls for cls in (Constant, FourierCos, FourierSin, BumpPsi, PlateauPhi,
                                         OddTheta, OddThetaHat, AccumOsc)}


def _check_finite(x):
    arr = np.asarray(x, dtype=float)
    if not np.all(np.isfinite(arr)):
        raise DomainError("evaluation point must be finite")
    return arr


@dataclass(frozen=True)
class CircleField:
    """A C^1 vector field f on S^1 given as a sum of atoms; the empty sum is zero."""

    atoms: tuple = ()
    label: str = ""

    def __post_init__(self):
        object.__setattr__(self, "atoms", tuple(self.atoms))

    def __call__(self, x):
        return self.value(x)

    def _sum(self, x, which):
        u = canonical(_check_finite(x))
        out = np.zeros(np.shape(u))
        for atom in self.atoms:
            out = out + atom.amp * atom._shape(u)[which]
        return float(out) if out.ndim == 0 else out

    def value(self, x):
        return self._sum(x, 0)

    def deriv(self, x):
        return self._sum(x, 1)

    def __add__(self, other):
        if isinstance(other, Atom):
            return CircleField(self.atoms + (other,), self.label)
        if isinstance(other, CircleField):
            return CircleField(self.atoms + other.atoms, self.label)
        return NotImplemented

    def with_label(self, label):
        return CircleField(self.atoms, label)

    def scaled(self, factor):
        return CircleField(tuple(a.scaled(factor) for a in self.atoms), self.label)


def eval_field(field: CircleField, x):
    return field.value(x)


def eval_deriv(field: CircleField, x):
    return field.deriv(x)


@dataclass(frozen=True)
class NormEstimate:
    sup_f: float
    sup_df: float
    c1: float
    grid_resolution: int | None
    is_certified_upper_bound: bool = False


def c1_norm(field: CircleField, grid_resolution: int = DEFAULT_NORM_RESOLUTION) -> NormEstimate:
    """Grid estimate of sup|f| + sup|f'| with golden-section refinement of the peaks.

    A lower bound on the true norm up to refinement round-off.
    """
    if grid_resolution < 16:
        raise DomainError("c1_norm needs grid_resolution >= 16")
    xs = np.arange(grid_resolution) / grid_resolution
    if not field.atoms:
        return NormEstimate(0.0, 0.0, 0.0, grid_resolution)
    sup_f = refined_max(lambda t: np.abs(field.value(t)), xs)
    sup_df = refined_max(lambda t: np.abs(field.deriv(t)), xs)
    return NormEstimate(sup_f, sup_df, sup_f + sup_df, grid_resolution)


def certified_norm(field: CircleField) -> NormEstimate | None:
    """Triangle-inequality upper bound from per-atom closed forms, or None."""
    sf = sdf = 0.0
    for atom in field.atoms:
        b = atom.unit_bounds()
        if b is None:
            return None
        sf += abs(atom.amp) * b[0]
        sdf += abs(atom.amp) * b[1]
    return NormEstimate(sf, sdf, sf + sdf, None, True)


def psi_norm_bound(a: float, b: float) -> float:
    """Candidate bound e^-1 [1 + 6 e^-1 / (b - a)] on the C^1 norm of the bump on (a, b).

    It underestimates the slope term (compare :func:`psi_norm_exact`), so
    nothing here relies on it for certification.
    """
    if not a < b:
        raise DomainError(f"need a < b, got a={a}, b={b}")
    return E_INV * (1.0 + 6.0 * E_INV / (b - a))


def psi_norm_exact(a: float, b: float) -> float:
    """Exact C^1 norm of the interval bump on (a, b): e^-1 + 2 K / (b - a)."""
    if not a < b:
        raise DomainError(f"need a < b, got a={a}, b={b}")
    return E_INV + 2.0 * BUMP_SLOPE_MAX / (b - a)
