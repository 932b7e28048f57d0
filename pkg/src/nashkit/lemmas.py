"""Exact identity checks for the structured minor expansions.

Every check builds its matrices from the second Jacobian matrix with rows
ordered ``[0, named indices..., remaining indices ascending]`` and columns
``[named columns..., fillers...]``, computes both sides symbolically and
reports the difference.  A rational spot evaluation of both sides is kept
as an independent second route.
"""

from __future__ import annotations

import random
from dataclasses import dataclass, field
from typing import Sequence

from gmpy2 import mpq

from .errors import HypothesisViolation
from .jac2 import (
    LabeledSubmatrix,
    block_triangularize,
    build_jac2,
    column_label,
    determinant,
    frequency_dichotomy,
    satisfies_block_hypothesis,
    submatrix,
)
from .polyring import Partials, Polynomial, format_poly, random_poly
from .qforms import q_generator

# lemma id -> (named index count, named columns as index-position pairs, filler count offset)
_SHAPES = {
    "A": (4, [(0, 2), (1, 2), (1, 3)], 2),
    "B1": (3, [(0, 0), (0, 1), (1, 2)], 2),
    "B2": (3, [(0, 0), (0, 1), (1, 2)], 2),
    "iijj": (2, [(0, 0), (0, 1), (1, 1)], 2),
    "ijkl_ii": (4, [(0, 0), (0, 2), (0, 3), (1, 2), (1, 3)], 4),
    "ijkl_ij": (4, [(0, 1), (0, 2), (0, 3), (1, 2), (1, 3)], 4),
    "reduction": (1, [(0, 0)], 0),
}
LEMMA_IDS = tuple(_SHAPES) + ("det_submatrices", "degenerate")


_MIN_N = {"A": 4, "B1": 3, "B2": 3, "iijj": 2, "ijkl_ii": 4, "ijkl_ij": 4, "reduction": 3, "det_submatrices": 1, "degenerate": 2}


def min_dimension(lemma_id: str) -> int:
    return _MIN_N[lemma_id]


@dataclass
class LemmaReport:
    lemma_id: str
    F: Polynomial
    indices: tuple[int, ...]
    fillers: list[tuple[int, int]]
    lhs: Polynomial
    rhs: Polynomial
    spot_point: tuple = ()
    spot_agrees: bool = True
    extra: dict = field(default_factory=dict)
    # (frequencies, dichotomy holds) of each terminal block met on the way
    terminals: list = field(default_factory=list)

    @property
    def difference(self) -> Polynomial:
        return self.lhs - self.rhs

    @property
    def holds(self) -> bool:
        return self.difference.is_zero() and self.spot_agrees

    def to_json(self) -> dict:
        out = {
            "lemma": self.lemma_id,
            "F": format_poly(self.F),
            "indices": list(self.indices),
            "fillers": [list(c) for c in self.fillers],
            "holds": self.holds,
            "difference": format_poly(self.difference),
        }
        out.update(self.extra)
        return out


def _rows(n_rows: Sequence[int], named: Sequence[int]) -> list[int]:
    rest = sorted(set(n_rows) - set(named))
    return [0] + list(named) + rest


def _det(S: LabeledSubmatrix) -> Polynomial:
    return determinant(S, "optimized")


def _spot_point(n: int, rng: random.Random) -> tuple:
    return tuple(mpq(rng.randint(-9, 9), rng.randint(1, 5)) for _ in range(n))


def lemma_identity_check(
    lemma_id: str,
    F: Polynomial,
    indices: Sequence[int],
    fillers: Sequence[Sequence[int]] = (),
    row_set: Sequence[int] | None = None,
    seed: int = 0,
) -> LemmaReport:
    """Build the lemma's matrices for ``F`` and test the stated identity exactly.

    ``indices`` are the named indices (``i, j, k, l`` as the lemma uses them),
    ``row_set`` the full set of nonzero row indices (default: the named
    indices together with every index used by a filler column).
    """
    if lemma_id not in LEMMA_IDS:
        raise ValueError(f"unknown lemma {lemma_id!r}; expected one of {', '.join(LEMMA_IDS)}")
    n = F.n
    indices = tuple(indices)
    fillers = [column_label(*c) for c in fillers]
    if any(not 1 <= v <= n for v in indices):
        raise HypothesisViolation(f"indices {indices} out of range 1..{n}")
    M = build_jac2(F)
    P = M.partials
    rng = random.Random(seed)

    if lemma_id == "det_submatrices":
        return _check_det_submatrices(F, M, indices, fillers)
    if lemma_id == "degenerate":
        return _check_degenerate(F, M, fillers)

    count, named_pairs, offset = _SHAPES[lemma_id]
    if len(indices) != count or len(set(indices)) != count:
        raise HypothesisViolation(f"lemma {lemma_id} needs {count} distinct indices, got {indices}")
    named_cols = [column_label(indices[a], indices[b]) for a, b in named_pairs]
    if any(c[0] == 0 for c in fillers):
        raise HypothesisViolation("filler columns must have both indices >= 1")
    U = {v for c in fillers for v in c}
    S = set(indices) | U if row_set is None else set(row_set)
    if not set(indices) <= S or 0 in S:
        raise HypothesisViolation("row set must contain the named indices and no 0")
    if not U <= S:
        raise HypothesisViolation(f"filler indices {sorted(U - S)} are not row indices")
    r = len(S)
    if len(fillers) != r - offset:
        raise HypothesisViolation(
            f"lemma {lemma_id} with {r} row indices needs {r - offset} filler columns, got {len(fillers)}"
        )
    i, j = indices[0], indices[1] if count > 1 else None
    rows = _rows(S, indices)

    def sub(rws, cols) -> LabeledSubmatrix:
        return submatrix(M, rws, cols, allow_duplicate_columns=True)

    Mm = sub(rows, named_cols + fillers)
    filler_rows = lambda removed: [x for x in rows if x not in removed]  # noqa: E731
    extra: dict = {}

    if lemma_id == "A":
        k, l = indices[2], indices[3]
        if U & {j, k}:
            raise HypothesisViolation(f"lemma A needs j={j} and k={k} outside the filler indices")
        Nm = sub(rows, [column_label(i, l), (j, j), (k, k)] + fillers)
        A = sub(filler_rows({0, j, k}), fillers)
        lhs = _det(Mm) + _det(Nm)
        rhs = -q_generator(P, (i, j, k, l)) * _det(A)
        terms = {"M": Mm, "N": Nm, "A": A}
    elif lemma_id in ("B1", "B2"):
        k = indices[2]
        if lemma_id == "B1" and j in U:
            raise HypothesisViolation(f"lemma B1 needs j={j} outside the filler indices")
        if lemma_id == "B2" and i in U:
            raise HypothesisViolation(f"lemma B2 needs i={i} outside the filler indices")
        Nm = sub(rows, [(i, i), column_label(i, k), (j, j)] + fillers)
        A = sub(filler_rows({0, i, j}), fillers)
        lhs = _det(Mm) + _det(Nm)
        rhs = q_generator(P, (i, j, i, k)) * _det(A)
        terms = {"M": Mm, "N": Nm, "A": A}
        if lemma_id == "B2":
            B = sub(filler_rows({0, i, k}), fillers)
            rhs = rhs - q_generator(P, (i, j, i, j)).scale(mpq(1, 2)) * _det(B)
            terms["B"] = B
    elif lemma_id == "iijj":
        A = sub(filler_rows({0, i, j}), fillers)
        lhs = _det(Mm)
        rhs = q_generator(P, (i, j, i, j)).scale(mpq(1, 2)) * _det(A)
        terms = {"M": Mm, "A": A}
    elif lemma_id in ("ijkl_ii", "ijkl_ij"):
        k, l = indices[2], indices[3]
        A = sub(filler_rows({0, i, j, k, l}), fillers)
        lhs = _det(Mm)
        detA = _det(A)
        if lemma_id == "ijkl_ii":
            fi = P.first(i)
            rhs = fi * fi * q_generator(P, (i, j, k, l)) * detA
            alt = fi * fi * q_generator(P, (i, j, i, k)) * detA
            extra["alternate_factor_holds"] = (lhs - alt).is_zero()
        else:
            rhs = P.first(i) * P.first(j) * q_generator(P, (i, j, k, l)) * detA
            rhs = rhs.scale(2)
        terms = {"M": Mm, "A": A}
    else:  # reduction
        if i in U:
            raise HypothesisViolation(f"reduction needs i={i} outside the filler indices")
        Nm = sub([x for x in rows if x != i], fillers)
        lhs = _det(Mm)
        rhs = -P.first(i) * _det(Nm)
        terms = {"M": Mm, "N": Nm}

    point = _spot_point(n, rng)
    spot = _spot_value(lemma_id, terms, P, indices, point)
    report = LemmaReport(lemma_id, F, indices, fillers, lhs, rhs, point, spot, extra)
    report.terminals = _terminals(terms.values())
    return report


def _terminals(mats) -> list:
    out = []
    for S in mats:
        if S.is_square() and satisfies_block_hypothesis(S):
            dec = block_triangularize(S)
            if dec.terminal is not None:
                out.append((dec.terminal_frequencies(), frequency_dichotomy(dec.terminal)))
    return out


def _spot_value(lemma_id: str, terms: dict, P: Partials, indices, point) -> bool:
    """Evaluate both sides at ``point`` from cofactor determinants of numeric matrices."""
    from fractions import Fraction


    def num(p: Polynomial) -> Fraction:
        v = p.evaluate(point)
        return Fraction(int(v.numerator), int(v.denominator))

    def det(S: LabeledSubmatrix) -> Fraction:
        return _fraction_det([[num(e) for e in row] for row in S.entries])

    def q(*idx) -> Fraction:
        return num(q_generator(P, idx))

    f = lambda a: num(P.first(a))  # noqa: E731
    i = indices[0]
    if lemma_id == "A":
        _, j, k, l = indices
        return det(terms["M"]) + det(terms["N"]) == -q(i, j, k, l) * det(terms["A"])
    if lemma_id == "B1":
        _, j, k = indices
        return det(terms["M"]) + det(terms["N"]) == q(i, j, i, k) * det(terms["A"])
    if lemma_id == "B2":
        _, j, k = indices
        return det(terms["M"]) + det(terms["N"]) == q(i, j, i, k) * det(terms["A"]) - q(i, j, i, j) / 2 * det(terms["B"])
    if lemma_id == "iijj":
        j = indices[1]
        return det(terms["M"]) == q(i, j, i, j) / 2 * det(terms["A"])
    if lemma_id == "ijkl_ii":
        _, j, k, l = indices
        return det(terms["M"]) == f(i) ** 2 * q(i, j, k, l) * det(terms["A"])
    if lemma_id == "ijkl_ij":
        _, j, k, l = indices
        return det(terms["M"]) == 2 * f(i) * f(j) * q(i, j, k, l) * det(terms["A"])
    return det(terms["M"]) == -f(i) * det(terms["N"])


def _fraction_det(rows: list[list]) -> object:
    """Gaussian elimination over ``fractions.Fraction``."""
    from fractions import Fraction

    a = [list(r) for r in rows]
    size = len(a)
    det = Fraction(1)
    for c in range(size):
        pivot = next((r for r in range(c, size) if a[r][c] != 0), None)
        if pivot is None:
            return Fraction(0)
        if pivot != c:
            a[c], a[pivot] = a[pivot], a[c]
            det = -det
        det *= a[c][c]
        for r in range(c + 1, size):
            factor = a[r][c] / a[c][c]
            if factor:
                for cc in range(c, size):
                    a[r][cc] -= factor * a[c][cc]
    return det


def _check_det_submatrices(F: Polynomial, M, indices, fillers) -> LemmaReport:
    """Rows ``i_1 < ... < i_r``, columns ``(i_a, j_a)`` with ``j_1 <= ... <= j_r``."""
    rows = list(indices)
    js = [c[1] if c[0] == rows[a] else c[0] for a, c in enumerate(fillers)] if len(fillers) == len(rows) else None
    if js is None or rows != sorted(set(rows)) or any(rows[a] not in fillers[a] for a in range(len(rows))):
        raise HypothesisViolation("need strictly increasing rows and one column (i_a, j_a) per row")
    if js != sorted(js):
        raise HypothesisViolation("the second indices j_a must be weakly increasing")
    S = submatrix(M, rows, fillers)
    lhs = _det(S)
    rhs = Polynomial.one(F.n)
    for j in js:
        rhs = rhs * M.partials.first(j)
    return LemmaReport("det_submatrices", F, tuple(indices), list(fillers), lhs, rhs)


def _check_degenerate(F: Polynomial, M, cols) -> LemmaReport:
    n = F.n
    if len(cols) != n + 1 or any(c[0] == 0 for c in cols):
        raise HypothesisViolation(f"need {n + 1} columns with both indices >= 1")
    U = {v for c in cols for v in c}
    if len(U) >= n:
        raise HypothesisViolation("the column indices must miss some variable")
    S = submatrix(M, None, cols, allow_duplicate_columns=True)
    lhs = determinant(S, "cofactor")
    return LemmaReport("degenerate", F, (), list(cols), lhs, Polynomial.zero(n))


# -- random admissible instances -------------------------------------------------


def random_instance(lemma_id: str, n: int, rng: random.Random) -> dict:
    """Random admissible ``indices``/``fillers``/``row_set`` for a lemma in ``n`` variables."""
    if lemma_id == "det_submatrices":
        r = rng.randint(1, n)
        rows = sorted(rng.sample(range(1, n + 1), r))
        js = sorted(rng.randint(1, n) for _ in range(r))
        return {"indices": rows, "fillers": [column_label(a, b) for a, b in zip(rows, js)]}
    if lemma_id == "degenerate":
        U = rng.sample(range(1, n + 1), rng.randint(1, n - 1))
        pool = [column_label(a, b) for a in U for b in U]
        return {"indices": (), "fillers": [rng.choice(pool) for _ in range(n + 1)]}
    count, _, offset = _SHAPES[lemma_id]
    r = rng.randint(max(count, offset), n)
    S = rng.sample(range(1, n + 1), r)
    named = S[:count]
    forbidden_at = {"A": (1, 2), "B1": (1,), "B2": (0,), "reduction": (0,)}.get(lemma_id, ())
    forbidden = {named[a] for a in forbidden_at}
    allowed = sorted(set(S) - forbidden)
    pool = sorted({column_label(a, b) for a in allowed for b in allowed})
    need = r - offset
    if len(pool) >= need:
        fillers = rng.sample(pool, need)
    else:
        fillers = [rng.choice(pool) for _ in range(need)] if pool else []
    if r - offset and not pool:
        return random_instance(lemma_id, n, rng)
    return {"indices": named, "fillers": fillers, "row_set": S}


@dataclass
class SuiteResult:
    reports: list[LemmaReport]

    @property
    def failures(self) -> list[LemmaReport]:
        return [r for r in self.reports if not r.holds]

    def counts(self) -> dict[str, dict[str, int]]:
        out: dict[str, dict[str, int]] = {}
        for r in self.reports:
            c = out.setdefault(r.lemma_id, {"checked": 0, "nontrivial": 0, "failed": 0})
            c["checked"] += 1
            c["nontrivial"] += not r.lhs.is_zero()
            c["failed"] += not r.holds
        return out

    def ijkl_ii_adjudication(self) -> dict:
        """How often each candidate factor (statement vs. proof display) matched."""
        rel = [r for r in self.reports if r.lemma_id == "ijkl_ii"]
        return {
            "instances": len(rel),
            "stated_factor_Q_ij_kl_holds": sum(r.difference.is_zero() for r in rel),
            "alternate_factor_Q_ij_ik_holds": sum(bool(r.extra.get("alternate_factor_holds")) for r in rel),
        }

    def to_json(self) -> dict:
        return {
            "counts": self.counts(),
            "failures": [r.to_json() for r in self.failures],
            "ijkl_ii": self.ijkl_ii_adjudication(),
            "ok": not self.failures,
        }


def run_suite(
    seed: int = 0,
    n_min: int = 2,
    n_max: int = 5,
    per_n: int = 50,
    max_degree: int = 4,
    max_terms: int = 8,
    lemma_ids: Sequence[str] = LEMMA_IDS,
) -> SuiteResult:
    """Check every applicable lemma on ``per_n`` seeded random germs for each ``n``."""
    reports = []
    for n in range(n_min, n_max + 1):
        for t in range(per_n):
            item_seed = seed * 100003 + n * 1009 + t
            F = random_poly(n, max_degree, max_terms, item_seed, germ=True)
            rng = random.Random(item_seed)
            for lid in lemma_ids:
                if n < min_dimension(lid):
                    continue
                inst = random_instance(lid, n, rng)
                reports.append(lemma_identity_check(lid, F, seed=item_seed, **inst))
    return SuiteResult(reports)
