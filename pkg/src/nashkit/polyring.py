"""Exact sparse multivariate polynomials over the rationals.

Polynomials are immutable.  A polynomial in ``n`` variables stores a map from
exponent tuples (length ``n``) to nonzero :class:`gmpy2.mpq` coefficients.
Variables are indexed ``1..n`` in the public API; for ``n <= 4`` they print as
``x, y, z, w``, otherwise as ``x1 .. xn``.

>>> p = parse("x^3 - y^2")
>>> p.derivative(1)
Polynomial('3*x^2', n=2)
>>> format_poly(p * p)
'x^6 - 2*x^3*y^2 + y^4'
"""

from __future__ import annotations

import random
from functools import reduce
from operator import add
from types import MappingProxyType
from typing import Iterable, Iterator, Mapping, Sequence, Union

from gmpy2 import mpq

from .errors import DimensionMismatch, ParseError

Rational = type(mpq())
Monomial = tuple  # tuple[int, ...] of nonnegative exponents
Scalar = Union[int, "Rational"]

SHORT_NAMES = ("x", "y", "z", "w")
CORPUS_COEFFICIENTS = (-3, -2, -1, 1, 2, 3)


def rational(value) -> Rational:
    """Coerce ``int``, ``Fraction``, ``str`` or ``mpq`` to an ``mpq``."""
    if isinstance(value, Rational):
        return value
    if isinstance(value, float):
        raise TypeError("floating point coefficients are not supported")
    return mpq(value)


def grevlex_key(exps: Sequence[int]) -> tuple:
    """Sort key: larger key means larger monomial in graded reverse lex."""
    return (sum(exps), tuple(-e for e in reversed(exps)))


def monomials_of_degree(n: int, d: int) -> Iterator[Monomial]:
    """All exponent tuples of total degree ``d`` in ``n`` variables."""
    if n == 1:
        yield (d,)
        return
    for first in range(d, -1, -1):
        for rest in monomials_of_degree(n - 1, d - first):
            yield (first,) + rest


def monomials_up_to(n: int, d: int) -> list[Monomial]:
    return [m for k in range(d + 1) for m in monomials_of_degree(n, k)]


def variable_names(n: int) -> list[str]:
    if n <= len(SHORT_NAMES):
        return list(SHORT_NAMES[:n])
    return [f"x{i}" for i in range(1, n + 1)]


def _mono_mul(a: Monomial, b: Monomial) -> Monomial:
    return tuple(map(add, a, b))


class Polynomial:
    """Immutable sparse polynomial with exact rational coefficients."""

    __slots__ = ("_n", "_terms", "_hash", "_sorted")

    def __init__(self, n: int, terms: Mapping[Monomial, Scalar] | None = None):
        if n < 1:
            raise ValueError("polynomial ring needs at least one variable")
        clean: dict[Monomial, Rational] = {}
        for exps, coeff in (terms or {}).items():
            exps = tuple(int(e) for e in exps)
            if len(exps) != n:
                raise DimensionMismatch(f"monomial {exps} does not have length {n}")
            if any(e < 0 for e in exps):
                raise ValueError(f"negative exponent in {exps}")
            c = rational(coeff)
            if c:
                clean[exps] = clean.get(exps, 0) + c
                if not clean[exps]:
                    del clean[exps]
        self._n = n
        self._terms = clean
        self._hash = None
        self._sorted = None

    @classmethod
    def _raw(cls, n: int, terms: dict) -> "Polynomial":
        # caller guarantees canonical terms: mpq coefficients, no zeros
        p = cls.__new__(cls)
        p._n = n
        p._terms = terms
        p._hash = None
        p._sorted = None
        return p

    # -- constructors -------------------------------------------------------

    @classmethod
    def zero(cls, n: int) -> "Polynomial":
        return cls._raw(n, {})

    @classmethod
    def constant(cls, n: int, c: Scalar) -> "Polynomial":
        return cls(n, {(0,) * n: c})

    @classmethod
    def one(cls, n: int) -> "Polynomial":
        return cls.constant(n, 1)

    @classmethod
    def var(cls, n: int, i: int) -> "Polynomial":
        """The variable ``x_i`` (1-based)."""
        if not 1 <= i <= n:
            raise IndexError(f"variable index {i} out of range 1..{n}")
        exps = [0] * n
        exps[i - 1] = 1
        return cls._raw(n, {tuple(exps): mpq(1)})

    @classmethod
    def monomial(cls, exps: Sequence[int], coeff: Scalar = 1) -> "Polynomial":
        return cls(len(exps), {tuple(exps): coeff})

    # -- inspection ---------------------------------------------------------

    @property
    def n(self) -> int:
        return self._n

    @property
    def terms(self) -> Mapping[Monomial, Rational]:
        return MappingProxyType(self._terms)

    def items(self) -> list[tuple[Monomial, Rational]]:
        """Terms in descending graded reverse lexicographic order."""
        if self._sorted is None:
            self._sorted = sorted(self._terms.items(), key=lambda t: grevlex_key(t[0]), reverse=True)
        return self._sorted

    def __iter__(self) -> Iterator[tuple[Monomial, Rational]]:
        return iter(self.items())

    def __len__(self) -> int:
        return len(self._terms)

    def is_zero(self) -> bool:
        return not self._terms

    def __bool__(self) -> bool:
        return bool(self._terms)

    def degree(self) -> int:
        """Total degree; -1 for the zero polynomial."""
        return max((sum(m) for m in self._terms), default=-1)

    def min_degree(self) -> int:
        return min((sum(m) for m in self._terms), default=-1)

    def coefficient(self, exps: Sequence[int]) -> Rational:
        return self._terms.get(tuple(exps), mpq(0))

    def constant_term(self) -> Rational:
        return self.coefficient((0,) * self._n)

    def is_constant(self) -> bool:
        return all(not any(m) for m in self._terms)

    def leading_term(self) -> tuple[Monomial, Rational]:
        """Leading (monomial, coefficient) under graded reverse lex."""
        if not self._terms:
            raise ValueError("zero polynomial has no leading term")
        return self.items()[0]

    def leading_coefficient(self) -> Rational:
        return self.leading_term()[1]

    def variables(self) -> set[int]:
        """1-based indices of variables that actually occur."""
        return {i + 1 for m in self._terms for i, e in enumerate(m) if e}

    # -- arithmetic ---------------------------------------------------------

    def _coerce(self, other) -> "Polynomial":
        if isinstance(other, Polynomial):
            if other._n != self._n:
                raise DimensionMismatch(f"ring dimensions differ: {self._n} vs {other._n}")
            return other
        if isinstance(other, (int, Rational)) or hasattr(other, "denominator"):
            return Polynomial.constant(self._n, other)
        return NotImplemented

    def __add__(self, other) -> "Polynomial":
        other = self._coerce(other)
        if other is NotImplemented:
            return other
        if len(other._terms) > len(self._terms):
            big, small = other._terms, self._terms
        else:
            big, small = self._terms, other._terms
        out = dict(big)
        for m, c in small.items():
            v = out.get(m)
            if v is None:
                out[m] = c
            else:
                v = v + c
                if v:
                    out[m] = v
                else:
                    del out[m]
        return Polynomial._raw(self._n, out)

    __radd__ = __add__

    def __neg__(self) -> "Polynomial":
        return Polynomial._raw(self._n, {m: -c for m, c in self._terms.items()})

    def __sub__(self, other) -> "Polynomial":
        other = self._coerce(other)
        if other is NotImplemented:
            return other
        return self + (-other)

    def __rsub__(self, other) -> "Polynomial":
        return (-self) + other

    def scale(self, c: Scalar) -> "Polynomial":
        c = rational(c)
        if not c:
            return Polynomial.zero(self._n)
        return Polynomial._raw(self._n, {m: c * v for m, v in self._terms.items()})

    def __mul__(self, other) -> "Polynomial":
        if isinstance(other, (int, Rational)) or (
            not isinstance(other, Polynomial) and hasattr(other, "denominator")
        ):
            return self.scale(other)
        other = self._coerce(other)
        if other is NotImplemented:
            return other
        a, b = self._terms, other._terms
        if len(a) < len(b):
            a, b = b, a
        out: dict[Monomial, Rational] = {}
        get = out.get
        for mb, cb in b.items():
            for ma, ca in a.items():
                m = tuple(map(add, ma, mb))
                v = get(m)
                out[m] = ca * cb if v is None else v + ca * cb
        return Polynomial._raw(self._n, {m: c for m, c in out.items() if c})

    __rmul__ = __mul__

    def __pow__(self, k: int) -> "Polynomial":
        if not isinstance(k, int) or k < 0:
            raise ValueError("exponent must be a nonnegative integer")
        result = Polynomial.one(self._n)
        base = self
        while k:
            if k & 1:
                result = result * base
            k >>= 1
            if k:
                base = base * base
        return result

    def monic(self) -> "Polynomial":
        if not self._terms:
            return self
        return self.scale(1 / self.leading_coefficient())

    # -- calculus and substitution -----------------------------------------

    def derivative(self, i: int) -> "Polynomial":
        """Partial derivative with respect to ``x_i`` (1-based)."""
        if not 1 <= i <= self._n:
            raise IndexError(f"variable index {i} out of range 1..{self._n}")
        k = i - 1
        out = {}
        for m, c in self._terms.items():
            e = m[k]
            if e:
                out[m[:k] + (e - 1,) + m[k + 1:]] = c * e
        return Polynomial._raw(self._n, out)

    def evaluate(self, point: Sequence[Scalar]) -> Rational:
        if len(point) != self._n:
            raise DimensionMismatch(f"point has {len(point)} coordinates, ring has {self._n}")
        pt = [rational(v) for v in point]
        total = mpq(0)
        for m, c in self._terms.items():
            term = c
            for v, e in zip(pt, m):
                if e:
                    term *= v ** e
            total += term
        return total

    def compose(self, phi: "PolyMap | Sequence[Polynomial]") -> "Polynomial":
        """Substitute ``x_i -> phi[i]`` for every variable."""
        comps = phi.components if isinstance(phi, PolyMap) else tuple(phi)
        if len(comps) != self._n:
            raise DimensionMismatch(f"map has {len(comps)} components, ring has {self._n}")
        target = comps[0].n if comps else self._n
        if any(c.n != target for c in comps):
            raise DimensionMismatch("map components live in different rings")
        powers: list[list[Polynomial]] = [[Polynomial.one(target)] for _ in comps]

        def power(i: int, e: int) -> Polynomial:
            cache = powers[i]
            while len(cache) <= e:
                cache.append(cache[-1] * comps[i])
            return cache[e]

        result = Polynomial.zero(target)
        for m, c in self._terms.items():
            term = Polynomial.constant(target, c)
            for i, e in enumerate(m):
                if e:
                    term = term * power(i, e)
            result = result + term
        return result

    def truncate(self, degree: int) -> "Polynomial":
        """Drop every term of total degree ``>= degree``."""
        return Polynomial._raw(self._n, {m: c for m, c in self._terms.items() if sum(m) < degree})

    # -- comparison and display -------------------------------------------

    def __eq__(self, other) -> bool:
        if isinstance(other, Polynomial):
            return self._n == other._n and self._terms == other._terms
        if isinstance(other, (int, Rational)):
            if not other:
                return not self._terms
            return self._terms == {(0,) * self._n: other}
        return NotImplemented

    def __hash__(self) -> int:
        if self._hash is None:
            self._hash = hash((self._n, frozenset(self._terms.items())))
        return self._hash

    def __str__(self) -> str:
        return format_poly(self)

    def __repr__(self) -> str:
        return f"Polynomial({format_poly(self)!r}, n={self._n})"

    def __reduce__(self):
        return (Polynomial, (self._n, self._terms))


class PolyMap:
    """A polynomial map ``k^n -> k^n`` given by its component images."""

    __slots__ = ("components",)

    def __init__(self, components: Sequence[Polynomial]):
        comps = tuple(components)
        if not comps:
            raise ValueError("a map needs at least one component")
        n = len(comps)
        for c in comps:
            if c.n != n:
                raise DimensionMismatch(f"component {c} is not in a ring of dimension {n}")
        self.components = comps

    @classmethod
    def identity(cls, n: int) -> "PolyMap":
        return cls([Polynomial.var(n, i) for i in range(1, n + 1)])

    @property
    def n(self) -> int:
        return len(self.components)

    def __call__(self, p: Polynomial) -> Polynomial:
        return p.compose(self)

    def fixes_origin(self) -> bool:
        return all(not c.constant_term() for c in self.components)

    def linear_part(self) -> list[list[Rational]]:
        """Jacobian matrix at the origin: row i holds d(phi_i)/dx_j (0)."""
        n = self.n
        rows = []
        for c in self.components:
            row = []
            for j in range(n):
                e = [0] * n
                e[j] = 1
                row.append(c.coefficient(e))
            rows.append(row)
        return rows

    def linear_determinant(self) -> Rational:
        return _rational_det(self.linear_part())

    def __eq__(self, other) -> bool:
        return isinstance(other, PolyMap) and self.components == other.components

    def __hash__(self) -> int:
        return hash(self.components)

    def __str__(self) -> str:
        return " ; ".join(format_poly(c) for c in self.components)

    def __repr__(self) -> str:
        return f"PolyMap({str(self)!r})"


def _rational_det(rows: Sequence[Sequence[Scalar]]) -> Rational:
    """Determinant of a rational matrix by exact Gaussian elimination."""
    a = [[rational(v) for v in row] for row in rows]
    size = len(a)
    det = mpq(1)
    for col in range(size):
        pivot = next((r for r in range(col, size) if a[r][col]), None)
        if pivot is None:
            return mpq(0)
        if pivot != col:
            a[col], a[pivot] = a[pivot], a[col]
            det = -det
        det *= a[col][col]
        inv = 1 / a[col][col]
        for r in range(col + 1, size):
            f = a[r][col] * inv
            if f:
                for c in range(col, size):
                    a[r][c] -= f * a[col][c]
    return det


class Partials:
    """Cached first and second partial derivatives of a polynomial."""

    def __init__(self, F: Polynomial):
        self.F = F
        self.n = F.n
        self._first: dict[int, Polynomial] = {}
        self._second: dict[tuple[int, int], Polynomial] = {}

    def first(self, k: int) -> Polynomial:
        if k not in self._first:
            self._first[k] = self.F.derivative(k)
        return self._first[k]

    def second(self, i: int, j: int) -> Polynomial:
        key = (min(i, j), max(i, j))
        if key not in self._second:
            self._second[key] = self.first(key[1]).derivative(key[0])
        return self._second[key]

    def gradient(self) -> list[Polynomial]:
        return [self.first(k) for k in range(1, self.n + 1)]


# -- operation-style entry points ---------------------------------------------


def arith(op: str, p: Polynomial, q) -> Polynomial:
    """Dispatch ``add``/``mul``/``neg``/``scale`` (``scale`` takes ``q`` as the factor)."""
    if op == "add":
        return p + _same_ring(p, q)
    if op == "mul":
        return p * _same_ring(p, q)
    if op == "neg":
        return -p
    if op == "scale":
        return p.scale(q)
    raise ValueError(f"unknown operation {op!r}")


def _same_ring(p: Polynomial, q) -> Polynomial:
    if isinstance(q, Polynomial) and q.n != p.n:
        raise DimensionMismatch(f"ring dimensions differ: {p.n} vs {q.n}")
    return q


def derivative(p: Polynomial, i: int) -> Polynomial:
    return p.derivative(i)


def compose(p: Polynomial, phi: PolyMap | Sequence[Polynomial]) -> Polynomial:
    return p.compose(phi)


def evaluate(p: Polynomial, point: Sequence[Scalar]) -> Rational:
    return p.evaluate(point)


def product(polys: Iterable[Polynomial], n: int) -> Polynomial:
    return reduce(lambda a, b: a * b, polys, Polynomial.one(n))


# -- text format ---------------------------------------------------------------


def format_monomial(exps: Sequence[int], names: Sequence[str] | None = None) -> str:
    names = names or variable_names(len(exps))
    parts = []
    for name, e in zip(names, exps):
        if e == 1:
            parts.append(name)
        elif e:
            parts.append(f"{name}^{e}")
    return "*".join(parts) or "1"


def format_poly(p: Polynomial) -> str:
    """Render terms in descending grevlex order with explicit ``*`` and ``^``."""
    if p.is_zero():
        return "0"
    names = variable_names(p.n)
    out = []
    for idx, (m, c) in enumerate(p.items()):
        negative = c < 0
        a = -c if negative else c
        if any(m):
            mono = format_monomial(m, names)
            body = mono if a == 1 else f"{a}*{mono}"
        else:
            body = str(a)
        if idx == 0:
            out.append(f"-{body}" if negative else body)
        else:
            out.append(f" - {body}" if negative else f" + {body}")
    return "".join(out)


class _Parser:
    def __init__(self, text: str, n: int | None):
        self.text = text
        self.pos = 0
        self.n = n
        self.max_var = 0

    def error(self, message: str, offset: int | None = None):
        raise ParseError(message, self.pos if offset is None else offset, self.text)

    def ws(self) -> None:
        while self.pos < len(self.text) and self.text[self.pos].isspace():
            self.pos += 1

    def peek(self) -> str:
        return self.text[self.pos] if self.pos < len(self.text) else ""

    def uint(self, what: str) -> int:
        start = self.pos
        while self.peek().isdigit():
            self.pos += 1
        if start == self.pos:
            self.error(f"expected {what}")
        return int(self.text[start:self.pos])

    def rational(self) -> Rational:
        num = self.uint("integer")
        self.ws()
        if self.peek() == "/":
            self.pos += 1
            self.ws()
            at = self.pos
            den = self.uint("denominator")
            if den == 0:
                self.error("malformed rational: zero denominator", at)
            return mpq(num, den)
        return mpq(num)

    def factor(self) -> tuple[int, int]:
        start = self.pos
        ch = self.peek()
        if not ch.isalpha():
            self.error("expected variable")
        if ch == "x" and self.pos + 1 < len(self.text) and self.text[self.pos + 1].isdigit():
            self.pos += 1
            index = self.uint("variable index")
            if index == 0:
                self.error("unknown variable 'x0'", start)
        elif ch in SHORT_NAMES:
            self.pos += 1
            index = SHORT_NAMES.index(ch) + 1
        else:
            while self.peek().isalnum() or self.peek() == "_":
                self.pos += 1
            self.error(f"unknown variable {self.text[start:self.pos]!r}", start)
        if self.peek().isalnum():
            self.error("unexpected character after variable")
        if self.n is not None and index > self.n:
            self.error(f"unknown variable {self.text[start:self.pos]!r} for {self.n} variables", start)
        self.max_var = max(self.max_var, index)
        self.ws()
        exp = 1
        if self.peek() == "^":
            self.pos += 1
            self.ws()
            exp = self.uint("exponent")
        return index, exp

    def term(self) -> tuple[Rational, dict[int, int]]:
        self.ws()
        coeff = mpq(1)
        powers: dict[int, int] = {}

        def absorb(f: tuple[int, int]) -> None:
            powers[f[0]] = powers.get(f[0], 0) + f[1]

        if self.peek().isdigit():
            coeff = self.rational()
            while True:
                self.ws()
                if self.peek() == "*":
                    self.pos += 1
                    self.ws()
                    absorb(self.factor())
                elif self.peek().isalpha():
                    absorb(self.factor())
                else:
                    break
        elif self.peek().isalpha():
            absorb(self.factor())
            while True:
                self.ws()
                if self.peek() != "*":
                    break
                self.pos += 1
                self.ws()
                absorb(self.factor())
        else:
            self.error("expected term")
        return coeff, powers

    def parse(self) -> list[tuple[Rational, dict[int, int]]]:
        self.ws()
        if not self.text.strip():
            self.error("empty polynomial")
        terms = []
        sign = 1
        if self.peek() in "+-":
            sign = -1 if self.peek() == "-" else 1
            self.pos += 1
        while True:
            c, powers = self.term()
            terms.append((sign * c, powers))
            self.ws()
            ch = self.peek()
            if not ch:
                return terms
            if ch not in "+-":
                self.error(f"unexpected character {ch!r}")
            sign = -1 if ch == "-" else 1
            self.pos += 1


def parse(text: str, n: int | None = None) -> Polynomial:
    """Parse polynomial text.

    ``n`` fixes the ring dimension; otherwise it is the largest variable
    index that occurs (at least 1).
    """
    parser = _Parser(text, n)
    raw = parser.parse()
    dim = n if n is not None else max(parser.max_var, 1)
    terms: dict[Monomial, Rational] = {}
    for c, powers in raw:
        exps = [0] * dim
        for i, e in powers.items():
            exps[i - 1] += e
        key = tuple(exps)
        terms[key] = terms.get(key, 0) + c
    return Polynomial(dim, terms)


def parse_map(text: str, n: int | None = None) -> PolyMap:
    """Parse a semicolon-separated list of component polynomials."""
    pieces = text.split(";")
    dim = n if n is not None else len(pieces)
    comps = []
    offset = 0
    for piece in pieces:
        try:
            comps.append(parse(piece, dim))
        except ParseError as exc:
            raise ParseError(str(exc).rsplit(" at offset", 1)[0], offset + exc.offset, text) from None
        offset += len(piece) + 1
    if len(comps) != dim:
        raise ParseError(f"map needs {dim} components, got {len(comps)}", 0, text)
    return PolyMap(comps)


# -- random corpus ---------------------------------------------------------------


def random_poly(
    n: int, max_degree: int, max_terms: int, seed: int, germ: bool = False
) -> Polynomial:
    """Deterministic random polynomial.

    Coefficients come from ``{-3, ..., 3} \\ {0}``.  With ``germ=True`` only
    monomials of degree >= 2 are used, so the polynomial and all its first
    partials vanish at the origin.
    """
    if max_degree < 1 or max_terms < 1:
        raise ValueError("max_degree and max_terms must be at least 1")
    rng = random.Random(seed)
    low = 2 if germ else 0
    pool = [m for m in monomials_up_to(n, max_degree) if sum(m) >= low]
    if not pool:
        return Polynomial.zero(n)
    k = rng.randint(1, min(max_terms, len(pool)))
    chosen = rng.sample(pool, k)
    return Polynomial(n, {m: rng.choice(CORPUS_COEFFICIENTS) for m in chosen})


def random_point(n: int, rng: random.Random, bound: int = 9) -> list[Rational]:
    return [mpq(rng.randint(-bound, bound), rng.randint(1, bound)) for _ in range(n)]
