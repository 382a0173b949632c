import numpy as np
import pytest

from pgm.errors import InputError
from pgm.intlinalg import (
    abelian_invariants_from_relations,
    det,
    gcdex,
    hermite_row_echelon,
    matmul,
    smith_normal_form,
    sparse_rank_invariants,
)


def test_gcdex():
    for a, b in [(12, 18), (-4, 6), (0, 5), (7, 0), (0, 0), (-9, -12)]:
        g, x, y = gcdex(a, b)
        assert g == a * x + b * y
        assert g >= 0


def test_snf_fixed_examples():
    assert smith_normal_form([[2, 0], [0, 3]]).diagonal == (1, 6)
    assert smith_normal_form([[0, 0], [0, 0]]).diagonal == (0, 0)
    assert smith_normal_form([[3, 0, 0], [0, 3, 0]]).diagonal == (3, 3)


def test_snf_certificates_random():
    rng = np.random.default_rng(42)
    for _ in range(100):
        m = int(rng.integers(1, 6))
        n = int(rng.integers(1, 6))
        M = [[int(rng.integers(-9, 10)) for _ in range(n)] for _ in range(m)]
        diag, U, V = smith_normal_form(M)
        D = matmul(matmul(U, M), V)
        for i in range(m):
            for j in range(n):
                expected = diag[i] if i == j and i < len(diag) else 0
                assert D[i][j] == expected
        assert abs(det(U)) == 1
        assert abs(det(V)) == 1
        for i in range(len(diag) - 1):
            if diag[i]:
                assert diag[i + 1] % diag[i] == 0
            else:
                assert diag[i + 1] == 0


def test_hermite_row_echelon_preserves_lattice():
    rows = [[2, 4, 4], [-6, 6, 12], [10, 4, 16]]
    basis = hermite_row_echelon(rows, 3)
    # pivots positive, above-pivot entries reduced
    for c, row in basis.items():
        assert row[c] > 0
        assert all(row[k] == 0 for k in range(c))
    # lattice index must match |det| of the original (full-rank) matrix
    idx = 1
    for c, row in basis.items():
        idx *= row[c]
    assert idx == abs(det(rows))


def test_abelian_invariants_from_relations():
    assert abelian_invariants_from_relations([[3, 0], [0, 3]], 2) == [3, 3]
    assert abelian_invariants_from_relations([[1, 0], [0, 12]], 2) == [12]
    assert abelian_invariants_from_relations([[2, 0], [0, 4]], 2) == [2, 4]
    with pytest.raises(InputError):
        abelian_invariants_from_relations([[2, 0]], 2)


def test_sparse_matches_dense_random():
    rng = np.random.default_rng(11)
    for _ in range(40):
        m = int(rng.integers(2, 12))
        n = int(rng.integers(2, 12))
        M = [[0] * n for _ in range(m)]
        trips = []
        for _ in range(int(rng.integers(3, m * n))):
            r = int(rng.integers(m))
            c = int(rng.integers(n))
            v = int(rng.integers(-3, 4))
            M[r][c] += v
            trips.append((r, c, v))
        diag = smith_normal_form(M, with_transforms=False).diagonal
        dense_rank = sum(1 for d in diag if d)
        dense_factors = sorted(d for d in diag if d > 1)
        rank, factors = sparse_rank_invariants(m, n, trips)
        assert rank == dense_rank
        assert factors == dense_factors


def test_zero_and_empty():
    assert smith_normal_form([[0]]).diagonal == (0,)
    rank, factors = sparse_rank_invariants(5, 5, [])
    assert rank == 0 and factors == []
