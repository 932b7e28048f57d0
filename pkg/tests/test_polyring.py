from __future__ import annotations

from fractions import Fraction

import pytest
from hypothesis import given, strategies as st

import oracle
from nashkit.errors import DimensionMismatch, ParseError
from nashkit.polyring import (
    Partials,
    PolyMap,
    Polynomial,
    format_poly,
    parse,
    parse_map,
    random_poly,
)
from strategies import as_fraction, points, polys


def test_parse_and_format_cusp():
    F = parse("x^3 - y^2")
    assert F.n == 2
    assert F.terms == {(3, 0): 1, (0, 2): -1}
    assert format_poly(F) == "x^3 - y^2"


def test_parse_rational_coefficients_and_indexed_names():
    assert parse("x*y + 1/2*z", 3).coefficient((0, 0, 1)) == Fraction(1, 2)
    assert parse("x1^2*x4").n == 4


@pytest.mark.parametrize(
    "text, offset",
    [("x^", 2), ("x +", 3), ("q", 0), ("", 0)],
)
def test_parse_errors_carry_offsets(text, offset):
    with pytest.raises(ParseError) as err:
        parse(text, 2)
    assert err.value.offset == offset


def test_parse_map_reports_offset_in_later_component():
    with pytest.raises(ParseError) as err:
        parse_map("x; y +", 2)
    assert err.value.offset == 6


def test_mixing_rings_is_rejected():
    with pytest.raises(DimensionMismatch):
        parse("x", 1) + parse("x", 2)


@given(polys(3))
def test_format_round_trips(p):
    assert parse(format_poly(p), 3) == p


@given(polys(2), polys(2), points(2))
def test_ring_operations_match_pointwise_evaluation(p, q, pt):
    value = lambda r: oracle.evaluate(oracle.from_pkg(r), pt)  # noqa: E731
    assert value(p + q) == value(p) + value(q)
    assert value(p - q) == value(p) - value(q)
    assert value(p * q) == value(p) * value(q)
    assert as_fraction(p.evaluate(pt)) == value(p)


@given(polys(3), st.integers(1, 3))
def test_derivative_matches_oracle(p, i):
    assert oracle.from_pkg(p.derivative(i)) == oracle.diff(oracle.from_pkg(p), i)


@given(polys(2), polys(2), polys(2))
def test_product_rule(p, q, r):
    assert (p * (q + r)) == p * q + p * r
    assert (p * q).derivative(1) == p.derivative(1) * q + p * q.derivative(1)


def test_second_partials_are_symmetric():
    F = random_poly(3, 4, 6, 5)
    P = Partials(F)
    for i in range(1, 4):
        for j in range(1, 4):
            assert P.second(i, j) == P.second(j, i)


@given(polys(2, max_exp=2, max_terms=3), points(2))
def test_compose_evaluates_through_the_map(p, pt):
    phi = PolyMap([parse("x + y^2", 2), parse("2*y - x^2", 2)])
    inner = [phi.components[k].evaluate(pt) for k in range(2)]
    assert p.compose(phi).evaluate(pt) == p.evaluate(inner)


def test_random_poly_is_deterministic_germ():
    a = random_poly(3, 4, 5, 11, germ=True)
    assert a == random_poly(3, 4, 5, 11, germ=True)
    assert a.min_degree() >= 2


def test_polymap_linear_part():
    phi = parse_map("2*x + y^2; y + x^3", 2)
    assert phi.fixes_origin()
    assert phi.linear_determinant() == 2
    assert not PolyMap([parse("x + 1", 2), parse("y", 2)]).fixes_origin()


def test_zero_and_constants():
    z = Polynomial.zero(2)
    assert z.is_zero() and not z
    assert Polynomial.constant(2, 3).is_constant()
    assert format_poly(z) == "0"
