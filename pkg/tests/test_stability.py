import math

import numpy as np
import pytest
from hypothesis import assume, given, strategies as st

from circlestab import (AccumOsc, BumpPsi, CircleField, Constant, FourierCos, FourierSin, Reason, Verdict,
                        find_fixed_points, same_portrait, stability_margin, stability_verdict)
from circlestab.errors import PreconditionError
from circlestab.stability import k_delta_arcs

from exemplars import (accum_field, arc_field, fourier_fields, shifted_field, sin2_field, sin3_field,
                       sin_field)
from oracles import zero_count


def test_shifted_is_stable_without_zeros():
    rep = stability_verdict(shifted_field())
    assert rep.verdict is Verdict.STABLE and rep.reason is Reason.NO_FIXED_POINTS
    assert rep.robustness_radius == pytest.approx(0.5, abs=1e-12)


def test_sin_all_hyperbolic():
    rep = stability_verdict(sin_field())
    assert rep.verdict is Verdict.STABLE and rep.reason is Reason.ALL_HYPERBOLIC
    assert rep.summary() == "StructurallyStable / AllHyperbolic, 2 fixed points"


def test_sin_margin_values():
    m = stability_margin(sin_field())
    assert m.delta == 0.125
    assert m.eps0 == pytest.approx(0.5 * 2 * math.pi * math.cos(2 * math.pi * 0.125), rel=1e-9)
    assert m.eps1 == pytest.approx(0.5 * math.sin(2 * math.pi * 0.125), rel=1e-9)
    assert m.robustness_radius == pytest.approx(0.35355339059, rel=1e-9)


def test_constant_margin():
    m = stability_margin(CircleField((Constant(1.0),)))
    assert m.robustness_radius == 1.0 and m.delta is None


@pytest.mark.parametrize("field,reason", [
    (sin2_field(), Reason.CASE1),
    (sin3_field(), Reason.CASE2),
    (arc_field(), Reason.PLATEAU),
    (CircleField(()), Reason.WHOLE_CIRCLE_ZERO),
    (accum_field(), Reason.ACCUMULATION),
])
def test_unstable_reasons(field, reason):
    rep = stability_verdict(field)
    assert rep.verdict is Verdict.NOT_STABLE and rep.reason is reason
    assert rep.robustness_radius is None


def test_first_violation_in_cyclic_order():
    rep = stability_verdict(sin3_field() + BumpPsi(0.6, 0.9))
    assert rep.reason is Reason.CASE2
    assert rep.location == pytest.approx(0.0, abs=1e-6)


def test_offset_accumulation_is_undecided():
    # the offset moves f(x*) off zero, so the atom no longer certifies Case 4;
    # the cluster of zeros near x* is still too dense to resolve on the grid
    f = CircleField((AccumOsc(0.5, 0.2), Constant(1e-8)))
    rep = stability_verdict(f)
    assert rep.verdict is Verdict.UNDECIDED and rep.reason is Reason.ACCUMULATION
    assert rep.location == pytest.approx(0.5, abs=0.01)


def test_margin_requires_stable():
    with pytest.raises(PreconditionError):
        stability_margin(sin2_field())


def test_report_text_and_record():
    rep = stability_verdict(sin_field())
    text = rep.text("sin")
    assert text.splitlines()[:2] == ["field: sin", "StructurallyStable / AllHyperbolic, 2 fixed points"]
    rec = rep.record("sin")
    assert rec["verdict"] == "StructurallyStable" and rec["fixed_point_count"] == 2
    assert set(rec) >= {"field", "verdict", "reason", "delta", "eps0", "eps1", "robustness_radius"}


def _check_margin(f, rep, n=16384):
    """Verification on a grid 4x finer than detection."""
    fps = rep.fixed_points
    for z in fps.locations:
        xs = np.linspace(z - rep.delta, z + rep.delta, n // 8 + 1)
        assert np.min(np.abs(f.deriv(xs))) >= 2 * rep.eps0 * (1 - 1e-9)
    for a, b in k_delta_arcs(fps, rep.delta):
        xs = np.linspace(a, b, n // 2 + 1)
        assert np.min(np.abs(f.value(xs))) >= 2 * rep.eps1 * (1 - 1e-9)
    zs = fps.locations
    gaps = np.diff(np.append(zs, zs[0] + 1.0))
    assert np.all(gaps > 2 * rep.delta)


@given(fourier_fields(max_degree=5))
def test_margin_consistency(f):
    rep = stability_verdict(f)
    assume(rep.stable and rep.reason is Reason.ALL_HYPERBOLIC)
    _check_margin(f, rep)
    assert rep.robustness_radius == min(rep.eps0, rep.eps1)


@given(fourier_fields(max_degree=5), st.floats(0.01, 1.0), st.sampled_from([-1.0, 1.0]))
def test_no_zero_radius_is_min_abs(base, lift, sign):
    xs0 = np.linspace(0, 1, 4097)
    f = base + Constant(sign * (float(np.max(np.abs(base.value(xs0)))) + lift))
    rep = stability_verdict(f)
    assert rep.reason is Reason.NO_FIXED_POINTS
    xs = np.linspace(0, 1, 100001)
    assert rep.robustness_radius == pytest.approx(np.min(np.abs(f.value(xs))), rel=1e-6)


def test_constant_shift_preserves_zero_count():
    """50 random stable fields, each shifted by a constant below its radius."""
    rng = np.random.default_rng(7)
    done = 0
    while done < 50:
        degree = int(rng.integers(1, 6))
        coef = rng.uniform(-1, 1, 2 * degree + 1)
        atoms = [Constant(coef[0])]
        for k in range(1, degree + 1):
            atoms += [FourierCos(k, coef[2 * k - 1]), FourierSin(k, coef[2 * k])]
        f = CircleField(tuple(atoms))
        rep = stability_verdict(f)
        if not rep.stable:
            continue
        c = float(rng.uniform(-0.99, 0.99)) * rep.robustness_radius
        g = f + Constant(c)
        assert zero_count(g) == zero_count(f) == rep.fixed_points.count
        done += 1


@given(fourier_fields(max_degree=5), st.floats(-0.95, 0.95), st.integers(1, 5))
def test_one_zero_per_interval(f, frac, k):
    rep = stability_verdict(f)
    assume(rep.stable and rep.reason is Reason.ALL_HYPERBOLIC)
    # ||a sin(2 pi k x)||_1 = |a| (1 + 2 pi k)
    g = f + FourierSin(k, frac * rep.robustness_radius / (1 + 2 * math.pi * k))
    gp = find_fixed_points(g)
    assert same_portrait(rep.fixed_points, gp)
    for z in rep.fixed_points.locations:
        inside = [q for q in gp.locations if abs(((q - z + 0.5) % 1.0) - 0.5) <= rep.delta]
        assert len(inside) == 1
