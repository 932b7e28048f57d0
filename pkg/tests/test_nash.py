from __future__ import annotations

import math

import pytest

import oracle
from nashkit.errors import PreconditionError
from nashkit.nash import (
    ContactDatum,
    check_germ,
    contact_invariance_report,
    contact_transform,
    milnor_number,
    nash_algebra2,
    tame_data,
)
from nashkit.polyring import PolyMap, parse, parse_map

# dimension, local Hilbert function and Milnor number, frozen
GOLDEN = {
    ("x^3 - y^2", 2): (7, [1, 2, 2, 2], 2),
    ("x^2 + y^2", 2): (5, [1, 2, 2], 1),
    ("x^2 + y^3", 2): (7, [1, 2, 2, 2], 2),
    ("x^3 + y^3", 2): (15, [1, 2, 3, 3, 3, 3], 4),
    ("x^2 + y^2 + z^2", 3): (9, [1, 3, 5], 1),
}


@pytest.mark.parametrize("text, n", list(GOLDEN))
def test_nash_algebra_golden(text, n):
    rep = nash_algebra2(parse(text, n))
    assert rep.certified
    assert (rep.dim, rep.hilbert, rep.milnor) == GOLDEN[(text, n)]
    assert len(rep.staircase) == rep.dim == sum(rep.hilbert)


@pytest.mark.parametrize("text, n", list(GOLDEN))
def test_nash_dimension_by_linear_algebra(text, n):
    dim, hilbert, _ = GOLDEN[(text, n)]
    gens = oracle.nash_generators(oracle.from_pkg(parse(text, n)), n)
    depth = len(hilbert)
    dims = [oracle.truncated_dim(gens, n, k) for k in range(depth + 3)]
    assert [b - a for a, b in zip(dims, dims[1:])][:depth] == hilbert
    assert dims[-1] == dims[-2] == dim


def test_milnor_numbers():
    assert milnor_number(parse("x^3 - y^2")) == 2
    assert milnor_number(parse("x^2", 1)) == 1
    assert milnor_number(parse("x^4 + y^5")) == 12
    assert milnor_number(parse("x^2*y^2")) == math.inf


def test_non_isolated_germ_is_rejected():
    with pytest.raises(PreconditionError):
        nash_algebra2(parse("x^2*y^2"))


def test_germ_preconditions():
    with pytest.raises(PreconditionError):
        check_germ(parse("x + y^2"))
    with pytest.raises(PreconditionError):
        check_germ(parse("x^2 + 1"))


def test_contact_datum_validation():
    with pytest.raises(PreconditionError):
        ContactDatum(parse("x", 2), PolyMap.identity(2))
    with pytest.raises(PreconditionError):
        ContactDatum(parse("1", 2), parse_map("x + 1; y", 2))
    with pytest.raises(PreconditionError):
        ContactDatum(parse("1", 2), parse_map("x + y; 2*x + 2*y", 2))


def test_contact_transform_example():
    d = ContactDatum(parse("1 + x", 2), parse_map("x; y + x^2", 2))
    G = contact_transform(parse("x^3 - y^2"), d)
    assert G == parse("1 + x", 2) * (parse("x^3", 2) - parse("y + x^2", 2) ** 2)


def test_contact_invariance_example():
    d = ContactDatum(parse("1 + x", 2), parse_map("x; y + x^2", 2))
    rep = contact_invariance_report(parse("x^3 - y^2"), d)
    assert rep.verdict == "true"
    assert rep.g.dim == 7


@pytest.mark.parametrize("n", [2, 3])
def test_tame_data_are_valid_and_seeded(n):
    data = tame_data(n, seed=4)
    assert len(data) == 3
    assert [d.to_json() for d in data] == [d.to_json() for d in tame_data(n, seed=4)]
    for d in data:
        assert d.phi.fixes_origin() and d.phi.linear_determinant()
        assert d.u.constant_term() == 1
