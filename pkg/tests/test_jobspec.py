from fractions import Fraction

import pytest

from otcert.errors import ParseError
from otcert.jobspec import BUILTIN_TEXT, builtin, parse_jobspec


def test_builtins():
    inoue = builtin("inoue")
    assert inoue.poly == [-2, 0, 0, 1]
    assert inoue.units == [[-1, 1, 0]]
    ot6 = builtin("ot6")
    assert ot6.poly == [-2, 0, 0, 0, 0, 0, 1]
    assert ot6.units == [[-1, 0, 1, 0, 0, 0], [1, -2, 1, 0, 0, 0]]
    assert ot6.conjugate == [False, True]
    with pytest.raises(ParseError):
        builtin("nope")


def test_text_roundtrip():
    for name in BUILTIN_TEXT:
        spec = builtin(name)
        again = parse_jobspec(spec.to_text())
        assert (again.poly, again.units, again.conjugate) == (spec.poly, spec.units, spec.conjugate)


def test_text_features():
    spec = parse_jobspec(
        "# comment\npoly = [-2, 0, 0, 1]\nunit = -1 1 0  # theta - 1\n"
        "subfield = 0 1/2 0\nprecision-bits = 256\ntolerance = 1e-40\nformat = json\n"
    )
    assert spec.subfields == [[0, Fraction(1, 2), 0]]
    assert spec.settings == {"precision_bits": 256, "tolerance": 1e-40}
    assert spec.output_format == "json"


def test_json_format():
    spec = parse_jobspec('{"poly": [-2, 0, 0, 1], "units": [[-1, 1, 0]], "exponent_bound": 4}')
    assert spec.units == [[-1, 1, 0]]
    assert spec.settings == {"exponent_bound": 4}


@pytest.mark.parametrize(
    "text,line,field",
    [
        ("poly = -2 0 0 1\nunit = -1 1\n", 2, "unit"),
        ("poly = -2 0 0 2\nunit = 1 0 0\n", 1, "poly"),
        ("poly = -2 zero 0 1\n", 1, "poly"),
        ("poly = -2 0 0 1\nunit = -1 1 0\nexponent_bound = ten\n", 3, "exponent_bound"),
        ("poly = -2 0 0 1\nunit -1 1 0\n", 2, None),
        ("poly = -2 0 0 1\nwhat = 3\n", 2, "what"),
        ('{"poly": [-2, 0, 0, 1],\n "units": [[-1, 1', 2, None),
        ("poly = [-2 0 0 1\n", 1, "poly"),
    ],
)
def test_parse_errors_carry_position(text, line, field):
    with pytest.raises(ParseError) as exc:
        parse_jobspec(text)
    assert exc.value.line == line
    assert exc.value.field == field
    if line is not None:
        assert str(exc.value).startswith(f"line {line}")


def test_missing_entries():
    with pytest.raises(ParseError, match="poly"):
        parse_jobspec("unit = 1 0\n")
    with pytest.raises(ParseError, match="unit"):
        parse_jobspec("poly = -2 0 0 1\n")
