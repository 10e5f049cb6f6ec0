import random
from pathlib import Path

import pytest
from hypothesis import given, settings, strategies as st

from helpers import ring
from prismlab.arith import SeriesRing, random_series
from prismlab.errors import (ExponentTooLarge, InputError, MissingField, ParseError,
                             UnknownVariable, ValidationError)
from prismlab.reader import format_ringspec, load_ringspec, parse_ast, parse_poly

EX = Path(__file__).resolve().parent.parent / "ex"

MINIMAL = """prismlab-spec v1
[ring]
prime = 5
precision = 6
degree = 12
variables = T
[ideal]
orientation = p - T^2
"""


def test_parse_examples():
    r = ring(5)
    assert parse_poly("p - T^2", r).terms == {(0,): 5, (2,): 5 ** 6 - 1}
    assert parse_poly("(1+T)*(1-T)", r) == parse_poly("1 - T^2", r)
    assert parse_poly("2*p - T", r) == parse_poly("10 - T", r)
    assert parse_poly("T**3", r) == parse_poly("T^3", r)


def test_precedence():
    r = SeriesRing(7, 4, 8, ("a", "b", "c"))
    assert parse_poly("a+b*c", r) == parse_poly("a+(b*c)", r)
    assert parse_poly("-a^2", r) == parse_poly("-(a^2)", r)
    assert parse_poly("(a^2)^3", r) == parse_poly("a^6", r)
    with pytest.raises(ParseError):       # exponents are literals, so no chaining
        parse_poly("a^2^3", r)
    assert parse_poly("a - b - c", r) == parse_poly("(a - b) - c", r)


@pytest.mark.parametrize("text,err", [
    ("T +", ParseError), ("(T", ParseError), ("T $ 2", ParseError), ("", ParseError),
    ("X", UnknownVariable), ("T^13", ExponentTooLarge), ("T^99999999", InputError),
])
def test_parse_errors(text, err):
    with pytest.raises(err):
        parse_poly(text, ring(5))


def test_exponent_of_constants_is_fine():
    assert parse_poly("p^20", ring(5)).is_zero()
    assert parse_ast("T^2").__class__.__name__ == "Pow"


def test_load_minimal_and_errors():
    doc = load_ringspec(MINIMAL)
    assert doc.ring.prime == 5 and doc.ring.variables == ("T",)
    assert doc.orientation == parse_poly("p - T^2", doc.ring)
    with pytest.raises(ValidationError):
        load_ringspec(MINIMAL.replace("variables = T", "variables = p"))
    with pytest.raises(MissingField):
        load_ringspec(MINIMAL.replace("precision = 6\n", ""))


def test_window_override():
    doc = load_ringspec(MINIMAL, precision=3, degree_cap=4)
    assert (doc.ring.precision, doc.ring.degree_cap) == (3, 4)


def test_format_round_trip():
    for path in sorted(EX.glob("*.spec")):
        doc = load_ringspec(path.read_text())
        again = load_ringspec(format_ringspec(doc))
        assert format_ringspec(again) == format_ringspec(doc), path.name
        assert again.orientation == doc.orientation
        assert again.gens == doc.gens


@pytest.mark.parametrize("path", sorted(EX.glob("*.spec")), ids=lambda p: p.name)
def test_valid_corpus_loads(path):
    load_ringspec(path.read_text())


@pytest.mark.parametrize("path", sorted((EX / "invalid").glob("*.spec")), ids=lambda p: p.name)
def test_invalid_corpus_rejected(path):
    with pytest.raises(InputError):
        load_ringspec(path.read_text())


@settings(max_examples=500)
@given(st.sampled_from([2, 3, 5, 7]), st.integers(1, 3), st.integers(0, 10 ** 9))
def test_text_round_trip(p, nvars, seed):
    r = SeriesRing(p, 4, 6, ("T", "S", "U")[:nvars])
    a = random_series(r, random.Random(seed), max_terms=6)
    assert parse_poly(a.to_text(), r) == a
