"""Exemplar fields and hypothesis strategies shared by the test modules."""
from hypothesis import strategies as st

from circlestab import (AccumOsc, BumpPsi, CircleField, Constant, FourierCos, FourierSin, OddTheta,
                        OddThetaHat, PlateauPhi)


def sin_field():
    return CircleField((FourierSin(1),), "sin")


def cos_field():
    return CircleField((FourierCos(1),), "cos")


def shifted_field():
    return CircleField((Constant(1.0), FourierSin(1, 0.5)), "shifted")


def sin2_field():
    """sin^2(2 pi x): tangential zeros at 0 and 1/2."""
    return CircleField((Constant(0.5), FourierCos(2, -0.5)), "sin2")


def sin2_single_field():
    """sin^2(pi x): a single tangential zero at 0."""
    return CircleField((Constant(0.5), FourierCos(1, -0.5)), "sin2_single")


def sin3_field():
    """sin^3(2 pi x) via the triple-angle identity."""
    return CircleField((FourierSin(1, 0.75), FourierSin(3, -0.25)), "sin3")


def arc_field():
    return CircleField((BumpPsi(0.6, 0.9),), "arc")


def odd_field():
    return CircleField((BumpPsi(0.6, 0.9), BumpPsi(0.1, 0.4, -1.0)), "odd")


def accum_field():
    return CircleField((AccumOsc(0.5, 0.2),), "accum")


ALL_ATOMS = (
    Constant(1.3),
    FourierCos(1, 0.7), FourierCos(4, -0.3),
    FourierSin(2, 1.1), FourierSin(5, 0.2),
    BumpPsi(0.2, 0.7, 1.5), BumpPsi(0.8, 1.1, -0.4),
    PlateauPhi(0.3, 0.5, 0.1, 2.0), PlateauPhi(0.9, 1.05, 0.08, -1.0),
    OddTheta(0.4, 0.2, 1.0), OddTheta(0.02, 0.1, -0.6),
    OddThetaHat(0.3, 0.5, 0.1, 1.0),
    AccumOsc(0.5, 0.2, 1.0),
)


@st.composite
def fourier_fields(draw, max_degree=5):
    """Random trigonometric polynomials with coefficients in [-1, 1]."""
    degree = draw(st.integers(1, max_degree))
    coef = st.floats(-1.0, 1.0, allow_nan=False)
    atoms = [Constant(draw(coef))]
    for k in range(1, degree + 1):
        atoms.append(FourierCos(k, draw(coef)))
        atoms.append(FourierSin(k, draw(coef)))
    return CircleField(tuple(atoms))
