import pytest
from hypothesis import given, strategies as st

from circlestab import CircleField, format_field, parse_field, read_field, write_field
from circlestab.errors import ParseError
from circlestab.field import ATOM_TYPES

from exemplars import ALL_ATOMS


def test_parse_example_lines():
    f = parse_field("# comment\nlabel demo field\nfourier_sin k=1 amp=1.0\nbump_psi a=0.4 b=0.6 amp=-0.2  # tail\n")
    assert f.label == "demo field"
    assert [a.kind for a in f.atoms] == ["fourier_sin", "bump_psi"]
    assert f.atoms[1].amp == -0.2


def test_amp_defaults_to_one():
    assert parse_field("constant").atoms[0].amp == 1.0


def test_round_trip_all_atoms():
    f = CircleField(ALL_ATOMS, "everything")
    g = parse_field(format_field(f, ["provenance line"]))
    assert g == f


decimals = st.decimals(min_value=-100, max_value=100, places=6, allow_nan=False, allow_infinity=False)


@given(st.lists(st.tuples(st.integers(1, 9), decimals), min_size=1, max_size=6))
def test_round_trip_decimal_inputs(terms):
    text = "".join(f"fourier_cos k={k} amp={d}\n" for k, d in terms)
    f = parse_field(text)
    assert parse_field(format_field(f)) == f
    for atom, (_, d) in zip(f.atoms, terms):
        assert atom.amp == float(d)


def test_file_round_trip(tmp_path):
    f = CircleField(ALL_ATOMS[:4], "io")
    path = tmp_path / "f.field"
    write_field(path, f, ["made by a test"])
    assert path.read_text().startswith("# made by a test\n")
    assert read_field(path) == f


@pytest.mark.parametrize("text,line,col", [
    ("fourier_sin k=1\nwobble amp=2\n", 2, 1),
    ("bump_psi a=0.1 b\n", 1, 16),
    ("bump_psi a=0.1 b=zz\n", 1, 18),
    ("constant amp=1 amp=2\n", 1, 16),
    ("fourier_sin q=2\n", 1, 13),
    ("bump_psi a=0.1\n", 1, 1),
    ("fourier_cos k=1.5\n", 1, 15),
    ("\n\n   bump_psi a=0.5 b=0.5\n", 3, 1),
])
def test_parse_errors_report_position(text, line, col):
    with pytest.raises(ParseError) as info:
        parse_field(text)
    assert info.value.line == line
    assert info.value.column == col
    assert str(info.value).startswith(f"line {line}, column {col}: ")


def test_every_kind_is_parseable():
    for kind, cls in ATOM_TYPES.items():
        assert cls.kind == kind
