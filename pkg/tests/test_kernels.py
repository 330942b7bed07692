"""Tests for the sparse mod-p rank reducer, both backends."""

import random
from fractions import Fraction

import numpy as np
import pytest

from buildings_lab.kernels import (
    DEFAULT_PRIME,
    FALLBACK_PRIME,
    IncrementalRank,
    kernel_backend,
    numba_enabled,
    rank_mod_p,
)


def exact_rank(dense):
    """Gaussian elimination over Q."""
    rows = [[Fraction(x) for x in row] for row in dense]
    rank = 0
    ncols = len(rows[0]) if rows else 0
    for col in range(ncols):
        piv = next((i for i in range(rank, len(rows)) if rows[i][col]), None)
        if piv is None:
            continue
        rows[rank], rows[piv] = rows[piv], rows[rank]
        inv = 1 / rows[rank][col]
        rows[rank] = [x * inv for x in rows[rank]]
        for i in range(len(rows)):
            if i != rank and rows[i][col]:
                c = rows[i][col]
                rows[i] = [a - c * b for a, b in zip(rows[i], rows[rank])]
        rank += 1
    return rank


def columns_of(dense):
    cols = []
    for j in range(len(dense[0])):
        rows = [i for i in range(len(dense)) if dense[i][j]]
        vals = [dense[i][j] for i in rows]
        cols.append((rows, vals))
    return cols


BACKENDS = [False] + ([True] if numba_enabled() else [])


@pytest.mark.parametrize("use_numba", BACKENDS)
def test_rank_matches_exact_on_random_matrices(use_numba):
    rng = random.Random(20260816)
    for trial in range(25):
        nrows = rng.randint(1, 30)
        ncols = rng.randint(1, 30)
        dense = [
            [rng.randint(-2, 2) if rng.random() < 0.4 else 0 for _ in range(ncols)]
            for _ in range(nrows)
        ]
        expected = exact_rank(dense)
        got = rank_mod_p(columns_of(dense), nrows, use_numba=use_numba)
        assert got == expected


@pytest.mark.parametrize("use_numba", BACKENDS)
def test_structured_low_rank_matrix(use_numba):
    # sum of two rank-one integer matrices
    u1 = list(range(1, 13))
    u2 = [3, -1] * 6
    v1 = [2, 5, -3] * 5
    v2 = [1] * 15
    dense = [[u1[i] * v1[j] + u2[i] * v2[j] for j in range(15)] for i in range(12)]
    assert exact_rank(dense) == 2
    assert rank_mod_p(columns_of(dense), 12, use_numba=use_numba) == 2


@pytest.mark.parametrize("use_numba", BACKENDS)
def test_target_early_stop_and_done(use_numba):
    dense = [[1 if i == j else 0 for j in range(10)] for i in range(10)]
    red = IncrementalRank(10, target=4, use_numba=use_numba)
    red.add_columns(columns_of(dense))
    assert red.rank == 4
    assert red.done


@pytest.mark.parametrize("use_numba", BACKENDS)
def test_deferred_two_pass_agrees(use_numba):
    rng = random.Random(99)
    for _ in range(10):
        nrows, ncols = 25, 40
        dense = [
            [rng.randint(-1, 1) if rng.random() < 0.3 else 0 for _ in range(ncols)]
            for _ in range(nrows)
        ]
        expected = exact_rank(dense)
        red = IncrementalRank(nrows, use_numba=use_numba)
        red.add_columns(columns_of(dense), defer=True)
        assert red.rank == expected


@pytest.mark.parametrize("use_numba", BACKENDS)
def test_pivot_storage_growth(use_numba):
    # more pivots than the initial capacity (1 << 12)
    n = 5000
    red = IncrementalRank(n, use_numba=use_numba)
    indptr = np.arange(n + 1, dtype=np.int64)
    rows = np.arange(n, dtype=np.int64)
    vals = np.ones(n, dtype=np.int64)
    red.add_chunk(indptr, rows, vals)
    assert red.rank == n


def test_both_primes_are_usable():
    dense = [[1, 2], [2, 4]]
    for p in (DEFAULT_PRIME, FALLBACK_PRIME):
        assert rank_mod_p(columns_of(dense), 2, p=p) == 1


def test_backend_selection_via_env(monkeypatch):
    monkeypatch.setenv("BUILDINGS_LAB_NUMBA", "0")
    assert kernel_backend() == "numpy"
    monkeypatch.delenv("BUILDINGS_LAB_NUMBA")
    assert kernel_backend() in ("numba", "numpy")


def test_chunked_equals_single_shot():
    rng = random.Random(5)
    nrows, ncols = 30, 60
    dense = [
        [rng.randint(-1, 1) if rng.random() < 0.25 else 0 for _ in range(ncols)]
        for _ in range(nrows)
    ]
    cols = columns_of(dense)
    whole = rank_mod_p(cols, nrows)
    red = IncrementalRank(nrows)
    for i in range(0, ncols, 7):
        red.add_columns(cols[i : i + 7])
    assert red.rank == whole == exact_rank(dense)
