from __future__ import annotations

import itertools
import random

import pytest
from hypothesis import given, strategies as st

import oracle
from nashkit.errors import HypothesisViolation, LabelError
from nashkit.jac2 import (
    block_triangularize,
    build_jac2,
    cofactor_det,
    column_labels,
    determinant,
    enumerate_minors,
    frequency_dichotomy,
    minor_selection_count,
    permutation_sign,
    submatrix,
    symbolic_jac2,
    worker_count,
)
from nashkit.polyring import parse, random_poly
from strategies import as_fraction, polys

GENERIC_N3 = [
    ["f1", "f2", "f3", "1/2*f11", "f12", "f13", "1/2*f22", "f23", "1/2*f33"],
    ["0", "0", "0", "f1", "f2", "f3", "0", "0", "0"],
    ["0", "0", "0", "0", "f1", "0", "f2", "f3", "0"],
    ["0", "0", "0", "0", "0", "f1", "0", "f2", "f3"],
]


def test_generic_layout_in_three_variables():
    sym = symbolic_jac2(3)
    assert sym["rows"] == [0, 1, 2, 3]
    assert sym["cols"] == [[0, 1], [0, 2], [0, 3], [1, 1], [1, 2], [1, 3], [2, 2], [2, 3], [3, 3]]
    assert sym["entries"] == GENERIC_N3


def test_cusp_matrix():
    M = build_jac2(parse("x^3 - y^2"))
    assert M.shape == (3, 5)
    assert M.render().splitlines() == [
        "      β01   β02    β11    β12   β22",
        "β0  3*x^2  -2*y    3*x      0    -1",
        "β1      0     0  3*x^2   -2*y     0",
        "β2      0     0      0  3*x^2  -2*y",
    ]


@given(polys(3, max_exp=3, max_terms=5))
def test_entries_follow_the_definition(F):
    M = build_jac2(F)
    Fd = oracle.from_pkg(F)
    for k in M.rows:
        for col in M.cols:
            assert oracle.from_pkg(M.entry(k, col)) == oracle.jac2_entry(Fd, k, col)


def test_each_column_has_at_most_three_nonzero_entries():
    M = build_jac2(random_poly(5, 3, 12, 2, germ=True))
    for col in M.cols:
        assert sum(1 for p in M.column(col) if p) <= 3


def test_submatrix_label_errors():
    M = build_jac2(random_poly(3, 3, 4, 0, germ=True))
    with pytest.raises(LabelError):
        submatrix(M, [0, 4], [(1, 1), (1, 2)])
    with pytest.raises(LabelError):
        submatrix(M, None, [(0, 0), (1, 1), (1, 2), (2, 2)])
    with pytest.raises(LabelError):
        submatrix(M, [0, 1], [(1, 2), (2, 1)])


def test_eight_variable_peeling_example():
    F = random_poly(8, 3, 6, 1, germ=True)
    M = build_jac2(F)
    S = submatrix(M, None, [(1, 1), (1, 2), (1, 3), (1, 4), (1, 5), (3, 8), (4, 6), (6, 6), (7, 7)])
    dec = block_triangularize(S)
    assert [(b.rows, b.cols, b.step) for b in dec.blocks] == [
        ([2, 5, 8], [(1, 2), (1, 5), (3, 8)], 1),
        ([3], [(1, 3)], 1),
        ([7], [(7, 7)], 2),
    ]
    assert dec.row_order == [0, 1, 4, 6, 7, 3, 2, 5, 8]
    assert dec.col_order == [(1, 1), (1, 4), (4, 6), (6, 6), (7, 7), (1, 3), (1, 2), (1, 5), (3, 8)]
    assert dec.terminal_frequencies() == {1: 3, 4: 2, 6: 3}
    assert frequency_dichotomy(dec.terminal)
    assert dec.determinant() == cofactor_det(S.entries, 8)


def test_permutation_sign():
    assert permutation_sign([0, 1, 2]) == 1
    assert permutation_sign([1, 0, 2]) == -1
    assert permutation_sign([2, 0, 1]) == 1


def _random_hypothesis_selection(n, rng):
    S = sorted(rng.sample(range(1, n + 1), rng.randint(2, n)))
    pool = [(a, b) for a in S for b in S if a <= b]
    if len(pool) < len(S) + 1:
        return None
    return S, rng.sample(pool, len(S) + 1)


@pytest.mark.parametrize("seed", range(12))
def test_block_form_is_upper_triangular_with_parity(seed):
    rng = random.Random(seed)
    n = rng.randint(3, 5)
    F = random_poly(n, 3, 8, seed, germ=True)
    M = build_jac2(F)
    picked = _random_hypothesis_selection(n, rng)
    if picked is None:
        pytest.skip("no selection")
    rows, cols = picked
    S = submatrix(M, [0] + rows, cols)
    dec = block_triangularize(S)
    if dec.singular:
        assert cofactor_det(S.entries, n).is_zero()
        return
    P = dec.permuted_entries()
    sizes = [len(dec.terminal.rows)] + [len(b.rows) for b in reversed(dec.blocks)]
    start = 0
    for size in sizes:
        for r in range(start + size, len(P)):
            assert all(P[r][c].is_zero() for c in range(start, start + size))
        start += size
    assert dec.parity * cofactor_det(P, n) == cofactor_det(S.entries, n)


def test_block_triangularize_checks_hypothesis():
    M = build_jac2(random_poly(3, 3, 4, 0, germ=True))
    with pytest.raises(HypothesisViolation):
        block_triangularize(submatrix(M, [0, 1], [(1, 1), (1, 2)]))


@given(st.integers(0, 10**6), st.integers(2, 4))
def test_determinant_engines_agree_with_numeric_oracle(seed, n):
    rng = random.Random(seed)
    F = random_poly(n, 3, 6, seed, germ=True)
    M = build_jac2(F)
    cols = rng.sample(M.cols, n + 1)
    S = submatrix(M, None, cols)
    fast, ref = determinant(S), determinant(S, "cofactor")
    assert fast == ref
    pt = [rng.randint(-4, 4) for _ in range(n)]
    Fd = oracle.from_pkg(F)
    numeric = [[oracle.evaluate(oracle.jac2_entry(Fd, k, c), pt) for c in cols] for k in M.rows]
    assert as_fraction(fast.evaluate(pt)) == oracle.det(numeric)


def test_minor_enumeration_skips_only_zero_minors():
    F = random_poly(3, 4, 6, 3, germ=True)
    M = build_jac2(F)
    full = {
        tuple(M.cols[c] for c in combo): cofactor_det([[M.entry(r, M.cols[c]) for c in combo] for r in M.rows], 3)
        for combo in itertools.combinations(range(len(M.cols)), 4)
    }
    assert len(full) == minor_selection_count(3) == 126
    got = {r.selection: r.det for r in enumerate_minors(F)}
    assert got == {sel: d for sel, d in full.items() if d}


def test_parallel_enumeration_matches_serial(monkeypatch):
    F = random_poly(4, 3, 6, 7, germ=True)
    serial = [(r.selection, r.det) for r in enumerate_minors(F, workers=1)]
    parallel = [(r.selection, r.det) for r in enumerate_minors(F, workers=2)]
    assert serial == parallel
    monkeypatch.setenv("NASHKIT_THREADS", "3")
    assert worker_count() == 3
    monkeypatch.setenv("NASHKIT_THREADS", "junk")
    assert worker_count() == 1


def test_column_labels_count():
    for n in range(1, 6):
        assert len(column_labels(n)) == n + n * (n + 1) // 2
