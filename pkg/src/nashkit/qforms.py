"""Q-generators, the ideal they span, and the decomposition of the second Jacobian ideal."""

from __future__ import annotations

import itertools
import warnings
from dataclasses import dataclass, field

from .errors import DimensionMismatch, PreconditionError
from .gbasis import GREVLEX, Ideal, MonomialOrder
from .jac2 import MinorRecord, enumerate_minors
from .polyring import Partials, Polynomial, format_poly


@dataclass(frozen=True, order=True)
class QIndex:
    i: int
    j: int
    k: int
    l: int

    def check(self, n: int) -> None:
        for v in (self.i, self.j, self.k, self.l):
            if not 1 <= v <= n:
                raise DimensionMismatch(f"Q index {v} out of range 1..{n}")

    def canonical(self) -> tuple[int, "QIndex | None"]:
        """``(sign, index)`` with ``Q[self] = sign * Q[index]``; sign 0 when Q vanishes."""
        i, j, k, l = self.i, self.j, self.k, self.l
        if i == j or k == l:
            return 0, None
        sign = 1
        if i > j:
            i, j, sign = j, i, -sign
        if k > l:
            k, l, sign = l, k, -sign
        if (k, l) < (i, j):
            i, j, k, l = k, l, i, j
        return sign, QIndex(i, j, k, l)

    def __str__(self) -> str:
        return f"Q{self.i}{self.j};{self.k}{self.l}"


def canonical_q_indices(n: int) -> list[QIndex]:
    pairs = list(itertools.combinations(range(1, n + 1), 2))
    return [QIndex(*a, *b) for a, b in itertools.combinations_with_replacement(pairs, 2)]


def q_generator(F: Polynomial | Partials, q: QIndex | tuple) -> Polynomial:
    """``f_ik f_j f_l - f_jk f_i f_l - f_il f_j f_k + f_jl f_i f_k``."""
    P = F if isinstance(F, Partials) else Partials(F)
    q = q if isinstance(q, QIndex) else QIndex(*q)
    q.check(P.F.n)
    i, j, k, l = q.i, q.j, q.k, q.l
    f, s = P.first, P.second
    return (
        s(i, k) * f(j) * f(l)
        - s(j, k) * f(i) * f(l)
        - s(i, l) * f(j) * f(k)
        + s(j, l) * f(i) * f(k)
    )


def q_generators(F: Polynomial) -> dict[QIndex, Polynomial]:
    P = Partials(F)
    return {q: q_generator(P, q) for q in canonical_q_indices(F.n)}


def q_ideal(F: Polynomial) -> Ideal:
    if F.n < 2:
        warnings.warn("Q is empty for fewer than two variables; returning the zero ideal", stacklevel=2)
        return Ideal.zero(F.n)
    return Ideal(F.n, list(q_generators(F).values()))


def jacobian_ideal(F: Polynomial) -> Ideal:
    return Ideal(F.n, Partials(F).gradient())


@dataclass
class RhsGenerators:
    power_products: list[Polynomial]
    q_products: list[Polynomial]

    def ideal(self, n: int) -> Ideal:
        return Ideal(n, self.power_products + self.q_products)


def rhs_generators(F: Polynomial) -> RhsGenerators:
    """Products of ``n + 1`` first partials, and of ``n - 2`` first partials with each Q."""
    n = F.n
    if n < 2:
        raise PreconditionError("the decomposition needs n >= 2")
    P = Partials(F)
    grad = P.gradient()

    def products(size: int) -> list[Polynomial]:
        out = []
        for combo in itertools.combinations_with_replacement(range(n), size):
            p = Polynomial.one(n)
            for c in combo:
                p = p * grad[c]
            out.append(p)
        return out

    qs = [q_generator(P, q) for q in canonical_q_indices(n)]
    return RhsGenerators(products(n + 1), [a * q for a in products(n - 2) for q in qs])


def rhs_decomposition(F: Polynomial) -> Ideal:
    return rhs_generators(F).ideal(F.n)


@dataclass
class DecompositionReport:
    F: Polynomial
    verdict: bool
    j2_gb: list[Polynomial]
    rhs_gb: list[Polynomial]
    missing_in_rhs: list[Polynomial]
    missing_in_j2: list[Polynomial]
    order: MonomialOrder
    same_reduced_basis: bool
    minors: list[MinorRecord] = field(default_factory=list, repr=False)

    def to_json(self) -> dict:
        return {
            "verdict": self.verdict,
            "j2_gb": [format_poly(p) for p in self.j2_gb],
            "rhs_gb": [format_poly(p) for p in self.rhs_gb],
            "missing_in_rhs": [format_poly(p) for p in self.missing_in_rhs],
            "missing_in_j2": [format_poly(p) for p in self.missing_in_j2],
        }


def verify_decomposition(
    F: Polynomial,
    order: MonomialOrder = GREVLEX,
    spair_cap: int | None = None,
    degree_cap: int | None = None,
    workers: int | None = None,
) -> DecompositionReport:
    """Check ``J2(F) = J1(F)^(n+1) + J1(F)^(n-2) Q(F)`` by mutual membership."""
    if F.n < 2:
        raise PreconditionError("the decomposition needs n >= 2")
    caps = {k: v for k, v in (("spair_cap", spair_cap), ("degree_cap", degree_cap)) if v is not None}
    minors = enumerate_minors(F, workers)
    j2 = Ideal(F.n, [r.det for r in minors])
    rhs = rhs_decomposition(F)
    G2 = j2.groebner(order, **caps)
    GR = rhs.groebner(order, **caps)
    missing_in_rhs = [g for g in j2.generators if not GR.contains(g)]
    missing_in_j2 = [g for g in rhs.generators if not G2.contains(g)]
    return DecompositionReport(
        F,
        not missing_in_rhs and not missing_in_j2,
        list(G2.elements),
        list(GR.elements),
        missing_in_rhs,
        missing_in_j2,
        order,
        G2 == GR,
        minors,
    )
