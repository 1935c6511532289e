import math

import numpy as np
import pytest
from hypothesis import given, strategies as st

from circlestab import (AccumOsc, BumpPsi, CircleField, Constant, FourierCos, FourierSin, OddTheta,
                        OddThetaHat, PlateauPhi, c1_norm, certified_norm, eval_deriv, eval_field,
                        psi_norm_bound, psi_norm_exact)
from circlestab.errors import DomainError
from circlestab.field import BUMP_SLOPE_MAX, E_INV, canonical, circle_distance

from exemplars import ALL_ATOMS, fourier_fields
from oracles import c1_brute


def test_sin_quarter():
    assert eval_field(CircleField((FourierSin(1),)), 0.25) == pytest.approx(1.0, abs=1e-15)


def test_empty_field_is_zero():
    f = CircleField(())
    assert f(0.3) == 0.0
    assert f.deriv(0.7) == 0.0
    assert np.all(f.value(np.linspace(0, 1, 11)) == 0.0)


def test_bump_centre_value():
    f = CircleField((BumpPsi(0.0, 1.0),))
    assert f(0.5) == pytest.approx(E_INV, abs=1e-15)


def test_sin_derivative_at_zero():
    assert eval_deriv(CircleField((FourierSin(1),)), 0.0) == pytest.approx(2 * math.pi, rel=1e-15)


def test_constant_derivative():
    assert CircleField((Constant(3.0),)).deriv(0.123) == 0.0


def test_bump_flat_at_centre():
    assert CircleField((BumpPsi(0.4, 0.6),)).deriv(0.5) == 0.0


@pytest.mark.parametrize("bad", [math.nan, math.inf, -math.inf])
def test_non_finite_point_rejected(bad):
    f = CircleField((FourierSin(1),))
    with pytest.raises(DomainError):
        f(bad)
    with pytest.raises(DomainError):
        f.deriv(np.array([0.1, bad]))


def test_canonical_range():
    xs = np.array([-1e-18, -0.25, 0.0, 1.0, 2.75, 1e9 + 0.5])
    c = canonical(xs)
    assert np.all((c >= 0) & (c < 1))
    assert canonical(-1e-18) == 0.0


@given(st.floats(-5, 5), st.floats(-5, 5), st.floats(-5, 5))
def test_circle_distance_is_metric(x, y, z):
    dxy, dyz, dxz = circle_distance(x, y), circle_distance(y, z), circle_distance(x, z)
    assert 0 <= dxy <= 0.5
    assert dxy == pytest.approx(circle_distance(y, x), abs=1e-12)
    assert dxz <= dxy + dyz + 1e-12


@pytest.mark.parametrize("atom", ALL_ATOMS, ids=lambda a: a.to_line())
def test_periodicity(atom):
    f = CircleField((atom,))
    assert abs(f(0.0) - f(1.0)) < 1e-12
    assert abs(f.deriv(0.0) - f.deriv(1.0)) < 1e-12
    xs = np.linspace(0, 1, 101)
    assert np.allclose(f.value(xs + 3.0), f.value(xs), atol=1e-12)


@given(fourier_fields(), st.integers(-3, 3))
def test_periodicity_random_fields(f, shift):
    xs = np.linspace(0, 1, 64, endpoint=False)
    assert np.allclose(f.value(xs), f.value(xs + shift), atol=1e-12)
    assert abs(f.deriv(0.0) - f.deriv(1.0)) < 1e-12


def _fd_errors(field, xs, h=1e-6):
    fd = (field.value(xs + h) - field.value(xs - h)) / (2 * h)
    d = field.deriv(xs)
    return np.abs(fd - d) / (1.0 + np.abs(d))


@pytest.mark.parametrize("atom", ALL_ATOMS, ids=lambda a: a.to_line())
def test_derivative_matches_finite_difference(atom, rng):
    xs = rng.uniform(0, 1, 1000)
    assert np.max(_fd_errors(CircleField((atom,)), xs)) < 1e-4


@given(st.floats(0.0, 0.8), st.floats(0.05, 1.0))
def test_bump_support(a, width):
    b = a + width
    f = CircleField((BumpPsi(a, b),))
    xs = np.linspace(0, 1, 2001)
    vals = f.value(xs)
    inside = ((xs - a) % 1.0) < width
    strictly = inside & (circle_distance(xs, a) > 1e-3) & (circle_distance(xs, b) > 1e-3)
    assert np.all(vals[~inside] == 0.0)
    assert np.all(vals[strictly] > 0.0)


def test_wrapping_bump_matches_translate():
    wrapped = CircleField((BumpPsi(0.9, 1.2),))
    plain = CircleField((BumpPsi(0.0, 0.3),))
    xs = np.linspace(0, 1, 257)
    assert np.allclose(wrapped.value(xs), plain.value(xs - 0.9), atol=1e-15)


def test_plateau_top_and_junctions():
    p = PlateauPhi(0.4, 0.6, 0.1)
    f = CircleField((p,))
    xs = np.linspace(0.351, 0.649, 101)
    assert np.all(f.value(xs) == E_INV)
    assert np.all(f.deriv(xs) == 0.0)
    for x in (0.35, 0.65):
        assert f(x) == pytest.approx(E_INV, rel=1e-12)
        assert abs(f.deriv(x)) < 1e-12
        left, right = f.deriv(x - 1e-9), f.deriv(x + 1e-9)
        assert abs(left) < 1e-6 and abs(right) < 1e-6
    assert f(0.3) == 0.0 and f(0.7) == 0.0


def test_odd_theta_closed_form():
    delta = 0.2
    f = CircleField((OddTheta(0.5, delta),))
    assert f(0.5) == 0.0
    assert f.deriv(0.5) == pytest.approx(-2 * E_INV / (delta * math.e), rel=1e-14)
    xs = np.linspace(0.3, 0.7, 41)
    assert np.allclose(f.value(xs), -f.value(1.0 - xs), atol=1e-15)


def test_odd_theta_hat_is_odd_about_midpoint():
    f = CircleField((OddThetaHat(0.4, 0.6, 0.05),))
    xs = np.linspace(0.3, 0.7, 41)
    assert np.allclose(f.value(xs), -f.value(1.0 - xs), atol=1e-15)
    assert f.deriv(0.5) < 0


def test_accum_osc_zeros():
    f = CircleField((AccumOsc(0.5, 0.2),))
    assert f(0.5) == 0.0 and f.deriv(0.5) == 0.0
    for k in range(2, 40):
        x = 0.5 + 1.0 / (k * math.pi)
        assert abs(f(x)) < 1e-15
        assert abs(f(1.0 - x)) < 1e-15


def test_field_addition_concatenates():
    f = CircleField((FourierSin(1),), "f")
    g = f + Constant(0.5)
    assert g.atoms == (FourierSin(1), Constant(0.5))
    assert (f + CircleField((Constant(1.0),))).atoms[-1] == Constant(1.0)
    assert g.label == "f"


@pytest.mark.parametrize("bad", [lambda: BumpPsi(0.5, 0.5), lambda: BumpPsi(0.0, 1.5),
                                 lambda: FourierSin(0), lambda: FourierCos(1.5),
                                 lambda: PlateauPhi(0.5, 0.4, 0.1), lambda: OddThetaHat(0.2, 0.2, 0.1)])
def test_invalid_atoms(bad):
    with pytest.raises(DomainError):
        bad()


def test_norm_constant():
    est = c1_norm(CircleField((Constant(2.0),)))
    assert (est.sup_f, est.sup_df, est.c1) == (2.0, 0.0, 2.0)
    assert not est.is_certified_upper_bound


def test_norm_sin():
    est = c1_norm(CircleField((FourierSin(1),)))
    assert est.c1 == pytest.approx(1 + 2 * math.pi, abs=1e-6)
    assert est.c1 == est.sup_f + est.sup_df


def test_norm_grid_lower_limit():
    with pytest.raises(DomainError):
        c1_norm(CircleField((Constant(1.0),)), 8)


@pytest.mark.parametrize("atom", [a for a in ALL_ATOMS if not isinstance(a, Constant)],
                         ids=lambda a: a.to_line())
def test_norm_estimate_against_brute_force(atom):
    f = CircleField((atom,))
    est = c1_norm(f, 4096).c1
    brute = c1_brute(f)
    # refined estimate is at least as sharp as a 10^6-point scan, never much above it
    assert est >= brute - 1e-6 * brute
    assert est <= brute * (1 + 1e-6) + 1e-9


@pytest.mark.parametrize("atom", ALL_ATOMS, ids=lambda a: a.to_line())
def test_certified_norm_dominates(atom):
    f = CircleField((atom,))
    cert = certified_norm(f)
    assert cert.is_certified_upper_bound
    assert cert.c1 >= c1_brute(f)


@given(fourier_fields(max_degree=3))
def test_norm_monotone_in_resolution(f):
    values = [c1_norm(f, n).c1 for n in (64, 256, 1024, 4096)]
    for lo, hi in zip(values, values[1:]):
        assert hi >= lo - 1e-12 * max(1.0, lo)


def test_psi_norm_bound_examples():
    assert psi_norm_bound(-1, 1) == pytest.approx(E_INV * (1 + 3 * E_INV), rel=1e-15)
    assert psi_norm_bound(-1, 1) == pytest.approx(0.774, abs=5e-4)
    assert psi_norm_bound(0, 1) == pytest.approx(1.180, abs=5e-4)
    assert psi_norm_bound(0, 1e12) == pytest.approx(E_INV, rel=1e-9)
    with pytest.raises(DomainError):
        psi_norm_bound(1.0, 1.0)


def _line_bump_norm(a, b, n=10**6):
    """Brute-force C^1 norm of the interval bump on the real line."""
    rho = 0.5 * (b - a)
    t = np.linspace(-rho, rho, n + 1)[1:-1]
    v = np.exp(-rho**2 / (rho**2 - t**2))
    dv = v * (-2 * rho**2 * t / (rho**2 - t**2) ** 2)
    return float(np.max(v) + np.max(np.abs(dv)))


@pytest.mark.parametrize("a,b", [(-1.0, 1.0), (0.0, 1.0), (0.2, 0.3), (-3.0, 5.0)])
def test_psi_norm_exact_against_brute_force(a, b):
    assert psi_norm_exact(a, b) == pytest.approx(_line_bump_norm(a, b), rel=1e-9)


def test_bump_slope_constant():
    # max of 2 s e^{-1/(1 - s^2)} / (1 - s^2)^2 on the unit bump; attained at s^2 = 1/sqrt(3)
    s = np.linspace(0, 1, 2_000_001)[:-1]
    g = 2 * s * np.exp(-1 / (1 - s**2)) / (1 - s**2) ** 2
    assert float(np.max(g)) == pytest.approx(BUMP_SLOPE_MAX, rel=1e-10)
    assert s[np.argmax(g)] ** 2 == pytest.approx(1 / math.sqrt(3), abs=1e-5)
