"""Second Nash local algebras, Milnor numbers, and contact-invariance experiments."""

from __future__ import annotations

import math
from dataclasses import dataclass

from .errors import PreconditionError
from .gbasis import (
    DEFAULT_DEGREE_CAP,
    DEFAULT_SPAIR_CAP,
    Ideal,
    isolated_at_origin,
    local_dimension,
    order_from_name,
)
from .jac2 import enumerate_minors
from .polyring import Monomial, Partials, PolyMap, Polynomial, format_monomial, format_poly


def check_germ(F: Polynomial) -> None:
    """Raise unless ``F`` vanishes at the origin together with its gradient."""
    if F.constant_term():
        raise PreconditionError(f"{format_poly(F)} does not vanish at the origin")
    for k, fk in enumerate(Partials(F).gradient(), 1):
        if fk.constant_term():
            raise PreconditionError(f"{format_poly(F)} is smooth at the origin (f{k}(0) != 0)")


def milnor_number(
    F: Polynomial,
    order=None,
    spair_cap: int = DEFAULT_SPAIR_CAP,
    degree_cap: int = DEFAULT_DEGREE_CAP,
) -> int | float:
    """Local dimension of the Jacobian ideal; ``math.inf`` for a non-isolated singularity."""
    check_germ(F)
    J1 = Ideal(F.n, Partials(F).gradient())
    if J1.is_zero() or not isolated_at_origin(J1, spair_cap, degree_cap):
        return math.inf
    res = local_dimension(J1, order, spair_cap, degree_cap)
    if not res.certified:
        raise PreconditionError("Milnor number could not be certified within the degree cap")
    return res.dim


def nash_ideal(F: Polynomial, workers: int | None = None) -> Ideal:
    """``(F) + J2(F)``."""
    return Ideal(F.n, [F] + [r.det for r in enumerate_minors(F, workers)])


@dataclass
class NashReport:
    F: Polynomial
    dim: int | None
    N: int
    certified: bool
    staircase: list[Monomial]
    hilbert: list[int]
    milnor: int | float

    def summary(self) -> dict:
        return {
            "dim": self.dim if self.certified else "uncertified",
            "N": self.N,
            "hilbert": list(self.hilbert),
        }

    def to_json(self) -> dict:
        out = {"F": format_poly(self.F)}
        out.update(self.summary())
        out["certified"] = self.certified
        out["staircase"] = [format_monomial(m) for m in self.staircase]
        out["milnor"] = "infinite" if self.milnor == math.inf else self.milnor
        return out


def nash_algebra2(
    F: Polynomial,
    order=None,
    spair_cap: int = DEFAULT_SPAIR_CAP,
    degree_cap: int = DEFAULT_DEGREE_CAP,
    workers: int | None = None,
) -> NashReport:
    """Dimension, staircase and local Hilbert function of ``O_n / (F, J2(F))``."""
    mu = milnor_number(F, order, spair_cap, degree_cap)
    if mu == math.inf:
        raise PreconditionError(f"{format_poly(F)} has a non-isolated singularity at the origin")
    res = local_dimension(nash_ideal(F, workers), order, spair_cap, degree_cap)
    return NashReport(F, res.dim, res.N, res.certified, res.staircase, res.hilbert, mu)


@dataclass(frozen=True)
class ContactDatum:
    """A unit ``u`` and a coordinate change ``phi`` fixing the origin."""

    u: Polynomial
    phi: PolyMap

    def __post_init__(self):
        if self.u.n != self.phi.n:
            raise PreconditionError("unit and coordinate change live in different rings")
        if not self.u.constant_term():
            raise PreconditionError(f"{format_poly(self.u)} is not a unit (zero constant term)")
        if not self.phi.fixes_origin():
            raise PreconditionError("the coordinate change does not fix the origin")
        if not self.phi.linear_determinant():
            raise PreconditionError("the coordinate change has a singular linear part")

    @classmethod
    def trivial(cls, n: int) -> "ContactDatum":
        return cls(Polynomial.one(n), PolyMap.identity(n))

    def to_json(self) -> dict:
        return {"u": format_poly(self.u), "phi": [format_poly(c) for c in self.phi.components]}


def contact_transform(F: Polynomial, d: ContactDatum) -> Polynomial:
    """``u * (F o phi)``, checked to stay singular at the origin."""
    if F.n != d.phi.n:
        raise PreconditionError("polynomial and contact datum live in different rings")
    G = d.u * F.compose(d.phi)
    check_germ(G)
    return G


@dataclass
class ContactReport:
    f: NashReport
    g: NashReport
    datum: ContactDatum
    verdict: str  # "true", "false" or "inconclusive"

    def to_json(self) -> dict:
        return {
            "f": self.f.to_json(),
            "g": self.g.to_json(),
            "verdict": self.verdict,
            "datum": self.datum.to_json(),
        }


def contact_invariance_report(
    F: Polynomial,
    d: ContactDatum,
    order=None,
    spair_cap: int = DEFAULT_SPAIR_CAP,
    degree_cap: int = DEFAULT_DEGREE_CAP,
) -> ContactReport:
    """Compare dimension and Hilbert function of the algebras of ``F`` and ``u (F o phi)``.

    The verdict is ``"inconclusive"`` whenever either side is uncertified,
    ``"false"`` only when both sides are certified and disagree.
    """
    order = order_from_name(order)
    G = contact_transform(F, d)
    rf = nash_algebra2(F, order, spair_cap, degree_cap)
    rg = nash_algebra2(G, order, spair_cap, degree_cap)
    if not (rf.certified and rg.certified):
        verdict = "inconclusive"
    elif rf.dim == rg.dim and rf.hilbert == rg.hilbert:
        verdict = "true"
    else:
        verdict = "false"
    return ContactReport(rf, rg, d, verdict)


def tame_data(n: int, seed: int, count: int = 3) -> list[ContactDatum]:
    """Seeded triangular coordinate changes with units ``1 + linear``.

    Component ``k`` is ``x_k + p_k(x_1..x_{k-1})`` after an invertible
    diagonal scaling, so each map has a polynomial inverse.
    """
    import random

    rng = random.Random(seed)
    out = []
    for _ in range(count):
        u = Polynomial.one(n)
        for i in range(1, n + 1):
            u = u + Polynomial.var(n, i).scale(rng.choice((-2, -1, 0, 1, 2)))
        comps = []
        for k in range(1, n + 1):
            c = Polynomial.var(n, k).scale(rng.choice((1, 2, -1)))
            for i in range(1, k):
                c = c + Polynomial.var(n, i) ** rng.randint(1, 3) * rng.choice((-1, 1, 2))
            comps.append(c)
        out.append(ContactDatum(u, PolyMap(comps)))
    return out


__all__ = [
    "ContactDatum",
    "ContactReport",
    "NashReport",
    "check_germ",
    "contact_invariance_report",
    "contact_transform",
    "milnor_number",
    "nash_algebra2",
    "nash_ideal",
    "tame_data",
]
