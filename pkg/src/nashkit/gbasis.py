"""Monomial orders, Groebner bases, ideal algebra and local quotient dimensions.

The engine runs Buchberger's algorithm (sugar selection with the
Gebauer-Moeller installation of both Buchberger criteria) over exact
rationals, on homogenized generators by default.  Internally every monomial is packed into one Python ``int``::

    key = pack(order_vector(e)) << (n * W)  |  pack(e)

The order vector is a nonnegative linear image of the exponent vector ``e``
whose lexicographic order is the monomial order, so integer comparison of
keys is the monomial order, monomial multiplication is integer addition, and
divisibility is a guard-bit test on the low half.
"""

from __future__ import annotations

import heapq
import itertools
import json
from dataclasses import dataclass, field
from typing import Iterable, Sequence

from gmpy2 import mpq

from .errors import DimensionMismatch, PreconditionError, ResourceCapExceeded
from .polyring import (
    Monomial,
    Polynomial,
    format_monomial,
    format_poly,
    monomials_of_degree,
)

DEFAULT_SPAIR_CAP = 200_000
DEFAULT_DEGREE_CAP = 40
ORDER_KINDS = ("grevlex", "grlex", "lex", "elim")

_W = 16  # bits per packed field; exponents must stay below 2**(_W - 1)


@dataclass(frozen=True)
class MonomialOrder:
    """A monomial order on ``n`` variables.

    ``precedence`` lists 1-based variable indices from largest to smallest;
    ``None`` means natural precedence ``x1 > x2 > ... > xn``.  The ``elim``
    kind compares the exponent of the first variable in precedence first and
    breaks ties with grevlex on the rest (a block order used for elimination).
    """

    kind: str = "grevlex"
    precedence: tuple[int, ...] | None = None

    def __post_init__(self):
        if self.kind not in ORDER_KINDS:
            raise ValueError(f"unknown monomial order {self.kind!r}")
        if self.precedence is not None:
            object.__setattr__(self, "precedence", tuple(self.precedence))
            if sorted(self.precedence) != list(range(1, len(self.precedence) + 1)):
                raise ValueError(f"precedence {self.precedence} is not a permutation")

    def _perm(self, n: int) -> tuple[int, ...]:
        if self.precedence is None:
            return tuple(range(n))
        if len(self.precedence) != n:
            raise DimensionMismatch(f"order precedence has length {len(self.precedence)}, ring has {n}")
        return tuple(i - 1 for i in self.precedence)

    def vector(self, exps: Sequence[int]) -> tuple[int, ...]:
        """Order vector: lexicographic comparison of these is the order."""
        p = self._perm(len(exps))
        e = [exps[i] for i in p]
        if self.kind == "lex":
            return tuple(e)
        if self.kind == "grlex":
            return (sum(e),) + tuple(e[:-1])
        if self.kind == "grevlex":
            return _grevlex_vector(e)
        return (e[0],) + _grevlex_vector(e[1:]) if len(e) > 1 else (e[0],)

    def key(self, exps: Sequence[int]) -> tuple[int, ...]:
        return self.vector(exps)

    def compare(self, a: Sequence[int], b: Sequence[int]) -> int:
        ka, kb = self.vector(a), self.vector(b)
        return (ka > kb) - (ka < kb)

    def __str__(self) -> str:
        if self.precedence is None:
            return self.kind
        return f"{self.kind}{list(self.precedence)}"


def _grevlex_vector(e: Sequence[int]) -> tuple[int, ...]:
    # (T_n, T_{n-1}, ..., T_1) with T_k = e_1 + ... + e_k
    sums = list(itertools.accumulate(e))
    return tuple(reversed(sums))


GREVLEX = MonomialOrder("grevlex")


def order_from_name(name: str | MonomialOrder | None) -> MonomialOrder:
    if name is None:
        return GREVLEX
    if isinstance(name, MonomialOrder):
        return name
    return MonomialOrder(name)


class _Elem:
    __slots__ = ("terms", "lm", "low", "exps", "tail", "weight")

    def __init__(self, terms: list, codec: "_Codec"):
        self.terms = terms
        self.lm = terms[0][0]
        self.low = self.lm & codec.low_mask
        self.exps = codec.decode(self.lm)
        self.tail = terms[1:]
        # coefficient footprint; cheaper reducers are tried first
        self.weight = sum(int(c.numerator).bit_length() + int(c.denominator).bit_length() for _, c in terms)


class _Codec:
    """Packs exponent tuples into order-preserving integers."""

    def __init__(self, order: MonomialOrder, n: int):
        self.order = order
        self.n = n
        self.shift = _W * n
        self.low_mask = (1 << self.shift) - 1
        self.guard = sum(1 << (_W * i + _W - 1) for i in range(n))
        self.field_mask = (1 << _W) - 1
        order._perm(n)

    def encode(self, exps: Sequence[int]) -> int:
        if max(exps, default=0) >= 1 << (_W - 1) or sum(exps) >= 1 << _W:
            raise ResourceCapExceeded("degree", (1 << (_W - 1)) - 1, sum(exps))
        high = 0
        for v in self.order.vector(exps):
            high = (high << _W) | v
        low = 0
        for i, e in enumerate(exps):
            low |= e << (_W * i)
        return (high << self.shift) | low

    def decode(self, key: int) -> Monomial:
        m = self.field_mask
        return tuple((key >> (_W * i)) & m for i in range(self.n))

    def divides(self, a_low: int, b_key: int) -> bool:
        g = self.guard
        return (((b_key & self.low_mask) | g) - a_low) & g == g

    def to_terms(self, p: Polynomial) -> list:
        return sorted(((self.encode(m), c) for m, c in p.terms.items()), reverse=True)

    def to_poly(self, terms: Iterable) -> Polynomial:
        return Polynomial._raw(self.n, {self.decode(k): c for k, c in terms})

    def lcm(self, a: Monomial, b: Monomial) -> Monomial:
        return tuple(max(x, y) for x, y in zip(a, b))


def _reduce(codec: _Codec, terms, reducers: Sequence[_Elem], track: list | None = None) -> list:
    """Full multivariate division of ``terms`` by monic ``reducers``.

    Returns the remainder as a descending term list.  When ``track`` is a
    list of dicts (one per reducer) the quotient terms are accumulated there.
    Among several divisors the one with the smallest coefficients is used.
    """
    acc = dict(terms)
    if not reducers:
        return sorted(acc.items(), reverse=True)
    guard = codec.guard
    low_mask = codec.low_mask
    heap = [-k for k in acc]
    heapq.heapify(heap)
    pop, push = heapq.heappop, heapq.heappush
    rem = []
    red = sorted(((g.low, g.lm, g.tail, idx) for idx, g in enumerate(reducers)), key=lambda r: reducers[r[3]].weight)
    while heap:
        k = -pop(heap)
        c = acc.pop(k, None)
        if c is None:
            continue
        probe = (k & low_mask) | guard
        for g_low, g_lm, g_tail, idx in red:
            if (probe - g_low) & guard == guard:
                q = k - g_lm
                if track is not None:
                    track[idx][q] = track[idx].get(q, 0) + c
                for gk, gc in g_tail:
                    nk = gk + q
                    old = acc.get(nk)
                    if old is None:
                        acc[nk] = -c * gc
                        push(heap, -nk)
                    else:
                        v = old - c * gc
                        if v:
                            acc[nk] = v
                        else:
                            del acc[nk]
                break
        else:
            rem.append((k, c))
    return rem


def _monic(terms: list) -> list:
    lc = terms[0][1]
    if lc == 1:
        return terms
    inv = 1 / lc
    return [(k, c * inv) for k, c in terms]


def _spoly(codec: _Codec, f: _Elem, g: _Elem, lcm_key: int) -> dict:
    qf = lcm_key - f.lm
    qg = lcm_key - g.lm
    acc = {k + qf: c for k, c in f.tail}
    for k, c in g.tail:
        nk = k + qg
        old = acc.get(nk)
        if old is None:
            acc[nk] = -c
        else:
            v = old - c
            if v:
                acc[nk] = v
            else:
                del acc[nk]
    return acc


@dataclass
class GBStats:
    pairs_processed: int = 0
    pairs_skipped: int = 0
    zero_reductions: int = 0
    generators_reduced_to_zero: int = 0


def _buchberger(
    codec: _Codec,
    inputs: list[list],
    spair_cap: int,
    degree_cap: int,
    stats: GBStats,
) -> list[_Elem]:
    """Buchberger's algorithm with Gebauer-Moeller pair elimination.

    Pairs are selected by smallest sugar degree, ties broken by lcm; on
    homogeneous input this is the normal strategy.  Input generators share
    the queue, entering with their own degree as sugar.
    """
    polys: list[_Elem] = []
    sugar: list[int] = []
    active: list[int] = []
    live: dict[tuple[int, int], tuple[int, Monomial]] = {}
    heap: list = []
    counter = itertools.count()
    encode = codec.encode

    def degree(terms) -> int:
        return max(sum(codec.decode(k)) for k, _ in terms)

    for terms in inputs:
        if terms:
            sug = degree(terms)
            heapq.heappush(heap, (sug, terms[0][0], next(counter), -1, sug, terms))

    def check_degree(terms) -> None:
        deg = degree(terms)
        if deg > degree_cap:
            raise ResourceCapExceeded("degree", degree_cap, deg)

    def coprime(a: Monomial, b: Monomial) -> bool:
        return not any(x and y for x, y in zip(a, b))

    def divides(a: Monomial, b: Monomial) -> bool:
        return all(x <= y for x, y in zip(a, b))

    def install(terms: list, sug: int) -> None:
        h_idx = len(polys)
        h = _Elem(terms, codec)
        polys.append(h)
        sugar.append(max(sug, degree(terms[:1])))
        hx = h.exps
        cands = [(g, codec.lcm(hx, polys[g].exps)) for g in active]
        kept = []
        for pos, (g, L) in enumerate(cands):
            if coprime(hx, polys[g].exps):
                kept.append((g, L, True))
                continue
            if any(divides(L2, L) for _, L2 in cands[pos + 1:]):
                continue
            if any(divides(L2, L) for _, L2, _ in kept):
                continue
            kept.append((g, L, False))
        for pair, (_, L12) in list(live.items()):
            g1, g2 = pair
            if divides(hx, L12):
                if codec.lcm(polys[g1].exps, hx) != L12 and codec.lcm(polys[g2].exps, hx) != L12:
                    del live[pair]
                    stats.pairs_skipped += 1
        for g, L, cop in kept:
            if cop:
                stats.pairs_skipped += 1
                continue
            pair = (g, h_idx)
            if sum(L) > degree_cap:
                raise ResourceCapExceeded("degree", degree_cap, sum(L))
            key = encode(L)
            live[pair] = (key, L)
            dl = sum(L)
            sug = max(sugar[g] + dl - sum(polys[g].exps), sugar[h_idx] + dl - sum(hx))
            heapq.heappush(heap, (sug, key, next(counter), g, h_idx, sug))
        active[:] = [g for g in active if not divides(hx, polys[g].exps)] + [h_idx]

    while heap:
        _, key, _, a, b, payload = heapq.heappop(heap)
        if a == -1:
            terms = _reduce(codec, payload, [polys[g] for g in active])
            sug = b
            if not terms:
                stats.generators_reduced_to_zero += 1
                continue
        else:
            if live.pop((a, b), None) is None:
                continue
            sug = payload
            stats.pairs_processed += 1
            if stats.pairs_processed > spair_cap:
                raise ResourceCapExceeded("S-pair", spair_cap, stats.pairs_processed)
            s = _spoly(codec, polys[a], polys[b], key)
            terms = _reduce(codec, s, [polys[g] for g in active]) if s else []
            if not terms:
                stats.zero_reductions += 1
                continue
        terms = _monic(terms)
        check_degree(terms)
        install(terms, sug)

    # inter-reduce to the reduced basis
    basis = [polys[g] for g in active]
    out = []
    for i, g in enumerate(basis):
        others = basis[:i] + basis[i + 1:]
        tail = _reduce(codec, g.tail, others)
        out.append(_Elem([g.terms[0]] + tail, codec))
    out.sort(key=lambda e: e.lm)
    return out


class GroebnerBasis:
    """Reduced Groebner basis of an ideal with respect to a monomial order."""

    def __init__(self, n: int, order: MonomialOrder, elems: list[_Elem], codec: _Codec, stats: GBStats | None = None):
        self.n = n
        self.order = order
        self._codec = codec
        self._elems = elems
        self.stats = stats or GBStats()
        self.elements = tuple(codec.to_poly(e.terms) for e in elems)

    def __len__(self) -> int:
        return len(self.elements)

    def __iter__(self):
        return iter(self.elements)

    def __eq__(self, other) -> bool:
        if not isinstance(other, GroebnerBasis):
            return NotImplemented
        return self.n == other.n and self.order == other.order and set(self.elements) == set(other.elements)

    def __hash__(self) -> int:
        return hash((self.n, self.order, frozenset(self.elements)))

    def __repr__(self) -> str:
        return f"GroebnerBasis([{', '.join(map(format_poly, self.elements))}], order={self.order})"

    def is_unit(self) -> bool:
        return len(self._elems) == 1 and self._elems[0].exps == (0,) * self.n

    def leading_monomials(self) -> list[Monomial]:
        return [e.exps for e in self._elems]

    def leading_term(self, p: Polynomial) -> tuple[Monomial, object]:
        """Leading (monomial, coefficient) of ``p`` under this basis' order."""
        terms = self._codec.to_terms(p)
        return self._codec.decode(terms[0][0]), terms[0][1]

    def reduce(self, p: Polynomial) -> Polynomial:
        _check_dim(self.n, p)
        codec = self._codec
        return codec.to_poly(_reduce(codec, codec.to_terms(p), self._elems))

    def divide(self, p: Polynomial) -> tuple[list[Polynomial], Polynomial]:
        """Quotients ``q`` and remainder ``r`` with ``p = sum q_i g_i + r``."""
        _check_dim(self.n, p)
        codec = self._codec
        track = [dict() for _ in self._elems]
        rem = _reduce(codec, codec.to_terms(p), self._elems, track)
        quotients = [codec.to_poly((k, c) for k, c in t.items() if c) for t in track]
        return quotients, codec.to_poly(rem)

    def contains(self, p: Polynomial) -> bool:
        return self.reduce(p).is_zero()

    def to_json(self) -> dict:
        return {"order": str(self.order), "elements": [format_poly(g) for g in self.elements]}


def _check_dim(n: int, p: Polynomial) -> None:
    if p.n != n:
        raise DimensionMismatch(f"polynomial in {p.n} variables, basis in {n}")


def groebner(
    ideal: "Ideal | Sequence[Polynomial]",
    order: MonomialOrder | str | None = None,
    spair_cap: int = DEFAULT_SPAIR_CAP,
    degree_cap: int = DEFAULT_DEGREE_CAP,
) -> GroebnerBasis:
    """Reduced Groebner basis; raises :class:`ResourceCapExceeded` on caps."""
    if not isinstance(ideal, Ideal):
        ideal = Ideal(_infer_n(ideal), ideal)
    return ideal.groebner(order, spair_cap=spair_cap, degree_cap=degree_cap)


class _HomogenizedOrder:
    """Order on ``k[x, h]``: total degree, then ``base`` on the ``x`` part.

    If ``G`` is a Groebner basis of the homogenized generators under this
    order, setting ``h = 1`` in ``G`` gives a Groebner basis of the original
    ideal under ``base``.
    """

    def __init__(self, base: MonomialOrder):
        self.base = base

    def _perm(self, n: int) -> tuple[int, ...]:
        return tuple(range(n))

    def vector(self, exps: Sequence[int]) -> tuple[int, ...]:
        return (sum(exps),) + self.base.vector(exps[:-1])


GB_METHODS = ("homogenize", "affine")


def _interreduce(codec: _Codec, elems: list[_Elem]) -> list[_Elem]:
    """Minimal, then reduced, basis from a Groebner basis."""
    elems = sorted(elems, key=lambda e: (e.lm, e.weight))
    keep: list[_Elem] = []
    for e in elems:
        if any(codec.divides(k.low, e.lm) for k in keep):
            continue
        keep = [k for k in keep if not codec.divides(e.low, k.lm)] + [e]
    out = []
    for i, g in enumerate(keep):
        tail = _reduce(codec, g.tail, keep[:i] + keep[i + 1:])
        out.append(_Elem(_monic([g.terms[0]] + tail), codec))
    out.sort(key=lambda e: e.lm)
    return out


def _compute_groebner(
    n: int,
    gens: Sequence[Polynomial],
    order: MonomialOrder,
    spair_cap: int,
    degree_cap: int,
    method: str = "homogenize",
) -> GroebnerBasis:
    """Reduced basis of ``gens``.

    ``method="homogenize"`` runs Buchberger on the homogenized generators
    and sets ``h = 1`` afterwards; ``"affine"`` runs it on ``gens`` directly.
    The homogeneous run keeps every reduction inside one degree, which
    avoids the rational coefficient swell the affine run can hit.
    """
    if method not in GB_METHODS:
        raise ValueError(f"unknown Groebner method {method!r}")
    codec = _Codec(order, n)
    stats = GBStats()
    for g in gens:
        if g.degree() > degree_cap:
            raise ResourceCapExceeded("degree", degree_cap, g.degree())
    if any(g.is_constant() for g in gens):
        elems = [_Elem([(codec.encode((0,) * n), mpq(1))], codec)]
        return GroebnerBasis(n, order, elems, codec, stats)
    homogeneous = all(g.min_degree() == g.degree() for g in gens)
    if method == "affine" or homogeneous:
        inputs = [codec.to_terms(g) for g in gens]
        elems = _buchberger(codec, inputs, spair_cap, degree_cap, stats)
        return GroebnerBasis(n, order, elems, codec, stats)
    hcodec = _Codec(_HomogenizedOrder(order), n + 1)
    inputs = []
    for g in gens:
        d = g.degree()
        inputs.append(sorted(((hcodec.encode(m + (d - sum(m),)), c) for m, c in g.terms.items()), reverse=True))
    helems = _buchberger(hcodec, inputs, spair_cap, degree_cap, stats)
    low = []
    for e in helems:
        acc: dict = {}
        for k, c in e.terms:
            m = hcodec.decode(k)[:n]
            acc[m] = acc.get(m, 0) + c
        terms = sorted(((codec.encode(m), c) for m, c in acc.items() if c), reverse=True)
        low.append(_Elem(_monic(terms), codec))
    return GroebnerBasis(n, order, _interreduce(codec, low), codec, stats)


def normal_form(p: Polynomial, G: GroebnerBasis) -> Polynomial:
    return G.reduce(p)


def s_polynomial(f: Polynomial, g: Polynomial, order: MonomialOrder | str | None = None) -> Polynomial:
    order = order_from_name(order)
    codec = _Codec(order, f.n)
    ef, eg = _Elem(_monic(codec.to_terms(f)), codec), _Elem(_monic(codec.to_terms(g)), codec)
    lcm_key = codec.encode(codec.lcm(ef.exps, eg.exps))
    return codec.to_poly(_spoly(codec, ef, eg, lcm_key).items())


def is_groebner(G: GroebnerBasis | Sequence[Polynomial], order: MonomialOrder | str | None = None) -> bool:
    """Buchberger criterion: every S-polynomial reduces to zero."""
    if isinstance(G, GroebnerBasis):
        codec, elems = G._codec, G._elems
    else:
        polys = [p for p in G if p]
        if not polys:
            return True
        codec = _Codec(order_from_name(order), polys[0].n)
        elems = [_Elem(_monic(codec.to_terms(p)), codec) for p in polys]
    for f, g in itertools.combinations(elems, 2):
        lcm_key = codec.encode(codec.lcm(f.exps, g.exps))
        s = _spoly(codec, f, g, lcm_key)
        if s and _reduce(codec, s, elems):
            return False
    return True


def is_reduced(G: GroebnerBasis) -> bool:
    """No monomial of any element is divisible by another element's leading monomial."""
    codec = G._codec
    for i, e in enumerate(G._elems):
        if e.terms[0][1] != 1:
            return False
        for j, other in enumerate(G._elems):
            if i != j and any(codec.divides(other.low, k) for k, _ in e.terms):
                return False
    return True


def _infer_n(polys: Sequence[Polynomial]) -> int:
    for p in polys:
        return p.n
    raise ValueError("cannot infer ring dimension from an empty generator list")


class Ideal:
    """Finitely generated ideal of the polynomial ring in ``n`` variables.

    Zero generators are dropped and generators that are rational multiples
    of an earlier one are deduplicated.
    """

    def __init__(self, n: int, generators: Iterable[Polynomial] = ()):
        self.n = n
        gens = []
        seen = set()
        for g in generators:
            _check_dim(n, g)
            if g.is_zero():
                continue
            key = g.monic()
            if key in seen:
                continue
            seen.add(key)
            gens.append(g)
        self.generators = tuple(gens)
        self._gb_cache: dict = {}

    @classmethod
    def unit(cls, n: int) -> "Ideal":
        return cls(n, [Polynomial.one(n)])

    @classmethod
    def zero(cls, n: int) -> "Ideal":
        return cls(n, [])

    @classmethod
    def maximal(cls, n: int) -> "Ideal":
        return cls(n, [Polynomial.var(n, i) for i in range(1, n + 1)])

    @classmethod
    def maximal_power(cls, n: int, k: int) -> "Ideal":
        return cls(n, [Polynomial.monomial(m) for m in monomials_of_degree(n, k)])

    def __len__(self) -> int:
        return len(self.generators)

    def __iter__(self):
        return iter(self.generators)

    def is_zero(self) -> bool:
        return not self.generators

    def __add__(self, other: "Ideal") -> "Ideal":
        _same_ring(self, other)
        return Ideal(self.n, self.generators + other.generators)

    def __mul__(self, other: "Ideal") -> "Ideal":
        _same_ring(self, other)
        return Ideal(self.n, [a * b for a in self.generators for b in other.generators])

    def __pow__(self, k: int) -> "Ideal":
        if k < 0:
            raise ValueError("ideal power exponent must be >= 0")
        if k == 0:
            return Ideal.unit(self.n)
        return Ideal(self.n, _products(self.generators, k, self.n))

    def groebner(self, order=None, spair_cap: int = DEFAULT_SPAIR_CAP, degree_cap: int = DEFAULT_DEGREE_CAP) -> GroebnerBasis:
        order = order_from_name(order)
        key = (order, spair_cap, degree_cap)
        if key not in self._gb_cache:
            self._gb_cache[key] = _compute_groebner(self.n, self.generators, order, spair_cap, degree_cap)
        return self._gb_cache[key]

    def contains(self, p: Polynomial, order=None, **caps) -> bool:
        return self.groebner(order, **caps).contains(p)

    def __contains__(self, p: Polynomial) -> bool:
        return self.contains(p)

    def __repr__(self) -> str:
        return f"Ideal({[format_poly(g) for g in self.generators]}, n={self.n})"


def _same_ring(a: Ideal, b: Ideal) -> None:
    if a.n != b.n:
        raise DimensionMismatch(f"ideals live in rings of dimension {a.n} and {b.n}")


def _products(gens: Sequence[Polynomial], k: int, n: int) -> list[Polynomial]:
    out = []
    for combo in itertools.combinations_with_replacement(range(len(gens)), k):
        p = Polynomial.one(n)
        for i in combo:
            p = p * gens[i]
        out.append(p)
    return out


def ideal_algebra(op: str, I: Ideal, other: "Ideal | int") -> Ideal:
    if op == "sum":
        return I + other
    if op == "product":
        return I * other
    if op == "power":
        return I ** other
    raise ValueError(f"unknown ideal operation {op!r}")


def contains(I: Ideal, p: Polynomial, order=None, **caps) -> bool:
    return I.contains(p, order, **caps)


def missing_generators(I: Ideal, J: Ideal, order=None, **caps) -> list[Polynomial]:
    """Generators of ``I`` that are not members of ``J``."""
    _same_ring(I, J)
    G = J.groebner(order, **caps)
    return [g for g in I.generators if not G.contains(g)]


def subset(I: Ideal, J: Ideal, order=None, **caps) -> bool:
    return not missing_generators(I, J, order, **caps)


def equal(I: Ideal, J: Ideal, order=None, **caps) -> bool:
    return subset(I, J, order, **caps) and subset(J, I, order, **caps)


def same_reduced_basis(I: Ideal, J: Ideal, order=None, **caps) -> bool:
    return I.groebner(order, **caps) == J.groebner(order, **caps)


# -- staircases and local dimension ---------------------------------------------


@dataclass
class Staircase:
    """Standard monomials of a Groebner basis, grouped by degree.

    When ``infinite`` is set, ``monomials`` and ``hilbert`` are truncated at
    the requested degree cap.
    """

    n: int
    monomials: list[Monomial]
    infinite: bool
    hilbert: list[int]

    @property
    def dim(self) -> int | None:
        return None if self.infinite else len(self.monomials)

    def strings(self) -> list[str]:
        return [format_monomial(m) for m in self.monomials]


def staircase(G: GroebnerBasis, degree_cap: int = DEFAULT_DEGREE_CAP) -> Staircase:
    n = G.n
    if G.is_unit():
        return Staircase(n, [], False, [])
    lms = G.leading_monomials()
    pure = set()
    for m in lms:
        nz = [i for i, e in enumerate(m) if e]
        if len(nz) == 1:
            pure.add(nz[0])
    infinite = len(pure) < n
    bound = degree_cap
    if not infinite:
        bound = sum(
            min(m[i] for m in lms if sum(1 for e in m if e) == 1 and m[i]) - 1 for i in range(n)
        )
    monos: list[Monomial] = []
    hilbert: list[int] = []
    layer = [(0,) * n]
    for d in range(bound + 1):
        layer = [m for m in layer if not any(all(a <= b for a, b in zip(lm, m)) for lm in lms)]
        if not layer:
            break
        layer.sort(key=lambda m: G.order.vector(m), reverse=True)
        monos.extend(layer)
        hilbert.append(len(layer))
        nxt = set()
        for m in layer:
            for i in range(n):
                nxt.add(m[:i] + (m[i] + 1,) + m[i + 1:])
        layer = list(nxt)
    return Staircase(n, monos, infinite, hilbert)


@dataclass
class LocalDimension:
    """Dimension of the local quotient at the origin with its certificate.

    ``dims[k]`` is ``dim k[x]/(I + m^k)`` for ``k = 0..N``; ``hilbert`` is the
    local Hilbert-Samuel function ``dims[k+1] - dims[k]``.
    """

    dim: int | None
    N: int
    certified: bool
    staircase: list[Monomial] = field(default_factory=list)
    hilbert: list[int] = field(default_factory=list)
    dims: dict[int, int] = field(default_factory=dict)

    def to_json(self) -> dict:
        return {
            "dim": self.dim,
            "N": self.N,
            "certified": self.certified,
            "staircase": [format_monomial(m) for m in self.staircase],
        }


def _truncated_basis(I: Ideal, N: int, order, spair_cap: int, degree_cap: int) -> GroebnerBasis:
    gens = [g.truncate(N) for g in I.generators]
    mN = [Polynomial.monomial(m) for m in monomials_of_degree(I.n, N)]
    return _compute_groebner(I.n, Ideal(I.n, gens + mN).generators, order_from_name(order), spair_cap, degree_cap)


def local_dimension(
    I: Ideal,
    order=None,
    spair_cap: int = DEFAULT_SPAIR_CAP,
    degree_cap: int = DEFAULT_DEGREE_CAP,
) -> LocalDimension:
    """Dimension of ``O_n / I`` at the origin via m-adic truncation.

    ``d_N = dim k[x]/(I + m^N)`` is examined for ``N = 2, 4, 8, ...``.  At
    each level the Nakayama certificate is tried first: every degree-``N``
    monomial must reduce to zero modulo ``I + m^(N+1)``.  That holds exactly
    when ``d_N == d_(N+1)``, and then ``d_k = d_N`` for every ``k >= N``, so
    in particular ``d_N == d_2N`` without computing the larger truncation.
    Without a certificate below the degree cap the result has
    ``certified=False`` and ``dim=None``.
    """
    for g in I.generators:
        if g.constant_term():
            raise PreconditionError(f"generator {format_poly(g)} does not vanish at the origin")
    n = I.n
    caps = dict(spair_cap=spair_cap, degree_cap=degree_cap)
    dims: dict[int, int] = {0: 0}

    def d(k: int) -> int:
        if k not in dims:
            dims[k] = len(staircase(_truncated_basis(I, k, order, **caps), degree_cap).monomials)
        return dims[k]

    N = 2
    while 2 * N <= degree_cap:
        G = _truncated_basis(I, N + 1, order, **caps)
        dims[N + 1] = len(staircase(G, degree_cap).monomials)
        if all(G.contains(Polynomial.monomial(m)) for m in monomials_of_degree(n, N)):
            for k in range(1, N + 1):
                d(k)
            dims[2 * N] = dims[N]
            hilbert = [dims[k + 1] - dims[k] for k in range(N)]
            while hilbert and not hilbert[-1]:
                hilbert.pop()
            stairs = staircase(_truncated_basis(I, N, order, **caps), degree_cap).monomials
            return LocalDimension(dims[N], N, True, stairs, hilbert, dict(sorted(dims.items())))
        N *= 2
    return LocalDimension(None, N // 2, False, [], [], dict(sorted(dims.items())))


def saturation_contains_origin(I: Ideal, i: int, spair_cap: int = DEFAULT_SPAIR_CAP, degree_cap: int = DEFAULT_DEGREE_CAP) -> bool:
    """Whether the origin lies on ``V(I : x_i^oo)``.

    Eliminates ``t`` from ``I + (1 - t x_i)`` with a block order; the origin
    lies on the saturation's variety iff every eliminant vanishes there.
    """
    n = I.n
    lift = [Polynomial(n + 1, {m + (0,): c for m, c in g.terms.items()}) for g in I.generators]
    t = Polynomial.var(n + 1, n + 1)
    xi = Polynomial.var(n + 1, i)
    order = MonomialOrder("elim", (n + 1,) + tuple(range(1, n + 1)))
    G = _compute_groebner(n + 1, Ideal(n + 1, lift + [1 - t * xi]).generators, order, spair_cap, degree_cap)
    eliminants = [g for g in G.elements if all(m[n] == 0 for m in g.terms)]
    return all(not g.constant_term() for g in eliminants)


def isolated_at_origin(I: Ideal, spair_cap: int = DEFAULT_SPAIR_CAP, degree_cap: int = DEFAULT_DEGREE_CAP) -> bool:
    """Whether the origin is an isolated point of ``V(I)`` (or not on it).

    Exact test: the origin is non-isolated iff it lies on ``V(I : x_i^oo)``
    for some variable ``x_i``.
    """
    G = I.groebner(spair_cap=spair_cap, degree_cap=degree_cap)
    if G.is_unit() or not staircase(G, 0).infinite:
        return True
    return not any(saturation_contains_origin(I, i, spair_cap, degree_cap) for i in range(1, I.n + 1))


def basis_json(G: GroebnerBasis) -> str:
    return json.dumps(G.to_json())
