from __future__ import annotations

from fractions import Fraction

import pytest
from hypothesis import given, strategies as st

from bgdc.scalars import EXACT, FLOAT, GaussianRational as G, format_scalar, parse_scalar

fractions = st.fractions(max_denominator=50).filter(lambda q: abs(q) < 1000)
gaussians = st.builds(G, fractions, fractions)


def test_lowest_terms_and_parts():
    x = G(Fraction(2, 4), Fraction(-6, 8))
    assert x.re == Fraction(1, 2) and x.im == Fraction(-3, 4)
    assert str(x) == "1/2-3/4i"
    assert G(3) == 3 and hash(G(3)) == hash(3) and hash(G(Fraction(1, 2))) == hash(Fraction(1, 2))


def test_i_squared():
    i = EXACT.i
    assert i * i == -1
    assert (1 + i) * (1 - i) == 2
    assert (1 / (1 + i)) == G(Fraction(1, 2), Fraction(-1, 2))


def test_division_by_zero():
    with pytest.raises(ZeroDivisionError):
        G(1) / G(0)


def test_float_operands_are_refused():
    with pytest.raises(TypeError):
        G(1) + 0.5


@given(gaussians, gaussians, gaussians)
def test_field_axioms(a, b, c):
    assert (a + b) * c == a * c + b * c
    assert a * b == b * a
    assert (a - b) + b == a
    if b:
        assert (a / b) * b == a
    assert (a * b).conjugate() == a.conjugate() * b.conjugate()


@given(gaussians, gaussians)
def test_matches_complex(a, b):
    assert abs(complex(a * b) - complex(a) * complex(b)) <= 1e-9 * (1 + abs(complex(a) * complex(b)))


@given(gaussians)
def test_json_round_trip(x):
    assert parse_scalar(format_scalar(x)) == x


def test_parse_forms():
    assert parse_scalar("3/4") == G(Fraction(3, 4))
    assert parse_scalar(5) == 5
    assert parse_scalar({"re": "1", "im": "-1/2"}) == G(1, Fraction(-1, 2))
    with pytest.raises(TypeError):
        parse_scalar(True)


def test_float_field_tolerance():
    assert FLOAT.is_zero(1e-13)
    assert not FLOAT.is_zero(1e-6)
    assert FLOAT.is_zero(1e-6, scale=1e5)
    assert FLOAT.close(1.0, 1.0 + 1e-12)
    assert not EXACT.close(G(1), G(1) + G(Fraction(1, 10**30)))
