from __future__ import annotations

import pytest
from hypothesis import given, strategies as st

import oracle
from nashkit.errors import DimensionMismatch, PreconditionError, ResourceCapExceeded
from nashkit.gbasis import (
    Ideal,
    MonomialOrder,
    _compute_groebner,
    equal,
    groebner,
    is_groebner,
    is_reduced,
    isolated_at_origin,
    local_dimension,
    order_from_name,
    staircase,
    subset,
)
from nashkit.polyring import Polynomial, parse
from strategies import polys

ORDERS = ["grevlex", "grlex", "lex"]


def P(text, n=2):
    return parse(text, n)


def test_known_lex_basis():
    G = groebner([P("x^2 + y^2 - 1"), P("x - y")], "lex")
    assert set(G) == {P("x - y"), P("y^2 - 1/2")}


def test_grevlex_basis_of_cusp_jacobian():
    G = groebner([P("3*x^2"), P("-2*y")])
    assert set(G) == {P("x^2"), P("y")}


def test_orders_compare_as_expected():
    grevlex, lex = order_from_name("grevlex"), order_from_name("lex")
    # x*z < y^2 in grevlex, x*z > y^2 in lex
    assert grevlex.compare((1, 0, 1), (0, 2, 0)) < 0
    assert lex.compare((1, 0, 1), (0, 2, 0)) > 0
    with pytest.raises(ValueError):
        order_from_name("nope")


@pytest.mark.parametrize("order", ORDERS)
@given(st.lists(polys(2, max_exp=3, max_terms=3), min_size=1, max_size=3))
def test_basis_is_reduced_and_generates_the_same_ideal(order, gens):
    I = Ideal(2, gens)
    G = I.groebner(order)
    assert is_groebner(G, order)
    assert is_reduced(G)
    for g in I.generators:
        assert G.contains(g)
    for g in G:
        quotients, rem = Ideal(2, list(G)).groebner(order).divide(g)
        assert rem.is_zero()


@pytest.mark.parametrize("order", ORDERS + ["elim"])
@given(st.lists(polys(2, max_exp=3, max_terms=3), min_size=1, max_size=3))
def test_homogenized_and_affine_routes_agree(order, gens):
    o = MonomialOrder("elim", (1, 2)) if order == "elim" else order_from_name(order)
    gens = list(Ideal(2, gens).generators)
    a = _compute_groebner(2, gens, o, 10**5, 40, method="affine")
    b = _compute_groebner(2, gens, o, 10**5, 40, method="homogenize")
    assert set(a) == set(b)


@given(polys(3, max_exp=2, max_terms=4), polys(3, max_exp=2, max_terms=4))
def test_division_certificate(p, q):
    I = Ideal(3, [P("x^2 - y", 3), P("y*z - x", 3)])
    G = I.groebner()
    f = p * q
    quotients, rem = G.divide(f)
    total = rem
    for qi, gi in zip(quotients, G):
        total = total + qi * gi
    assert total == f
    assert G.reduce(rem) == rem


def test_ideal_membership_and_inclusions():
    I = Ideal(2, [P("x^2"), P("y^3")])
    assert I.contains(P("x^2*y + y^4"))
    assert not I.contains(P("x*y^2"))
    assert subset(Ideal(2, [P("x^3")]), I)
    assert equal(I, Ideal(2, [P("x^2 + y^3"), P("y^3")]))
    with pytest.raises(DimensionMismatch):
        I + Ideal(3, [P("x", 3)])


def test_ideal_power_and_maximal():
    m = Ideal.maximal(2)
    assert len(m ** 3) == 4
    assert equal(m ** 2, Ideal.maximal_power(2, 2))


@given(st.lists(st.tuples(st.integers(0, 4), st.integers(0, 4)), min_size=1, max_size=4))
def test_staircase_of_monomial_ideal_matches_enumeration(exps):
    gens = [Polynomial.monomial(e) for e in exps] + [P("x^5"), P("y^5")]
    st_ = staircase(groebner(gens))
    expected = oracle.staircase_of_monomial_ideal([g.leading_term()[0] for g in gens], 2, 6)
    assert sorted(st_.monomials) == sorted(expected)
    assert sum(st_.hilbert) == st_.dim


def test_staircase_reports_infinite_quotients():
    st_ = staircase(groebner([P("x^2")]), degree_cap=5)
    assert st_.infinite and st_.dim is None


@given(polys(2, max_exp=4, max_terms=2, germ=True), polys(2, max_exp=4, max_terms=2, germ=True),
       st.integers(2, 4), st.integers(2, 4))
def test_local_dimension_matches_linear_algebra(p, q, a, b):
    I = Ideal(2, [P(f"x^{a}") + p.truncate(8) * P("x"), P(f"y^{b}") + q * P("y")])
    res = local_dimension(I)
    assert res.certified
    gens = [oracle.from_pkg(g) for g in I.generators]
    for k, d in res.dims.items():
        assert d == oracle.truncated_dim(gens, 2, k)
    assert res.dim == oracle.truncated_dim(gens, 2, res.N + 3)
    assert sum(res.hilbert) == res.dim == len(res.staircase)


def test_local_dimension_ignores_components_away_from_origin():
    # (x^2, y) at the origin; the factor (1 + x) is a unit locally
    I = Ideal(2, [P("x^2 + x^3"), P("y + x*y")])
    res = local_dimension(I)
    assert (res.dim, res.hilbert) == (2, [1, 1])


def test_local_dimension_needs_origin():
    with pytest.raises(PreconditionError):
        local_dimension(Ideal(2, [P("x - 1")]))


def test_uncertified_when_not_m_primary():
    res = local_dimension(Ideal(2, [P("x^2")]), degree_cap=8)
    assert not res.certified and res.dim is None


def test_isolatedness():
    assert isolated_at_origin(Ideal(2, [P("x^2"), P("y^3")]))
    assert not isolated_at_origin(Ideal(2, [P("x^2"), P("x*y")]))
    # V = {x = 1} union the origin: infinite quotient, isolated origin
    assert isolated_at_origin(Ideal(2, [P("x^2 - x"), P("x*y - y")]))


def test_caps_raise():
    gens = [P("x^3 - 2*x*y"), P("x^2*y - 2*y^2 + x")]
    with pytest.raises(ResourceCapExceeded):
        groebner(gens, spair_cap=1)
    with pytest.raises(ResourceCapExceeded):
        groebner(gens, degree_cap=2)
