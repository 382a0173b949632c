"""Exact integer linear algebra: Smith/Hermite forms and sparse elimination.

Everything here works with arbitrary-precision Python ints.  Counts that
can exceed machine range (group orders p^n) are never materialized here;
callers pass relation matrices whose entries stay small.
"""

from __future__ import annotations

from math import gcd
from typing import NamedTuple

from .errors import InputError


def gcdex(a: int, b: int):
    """Extended gcd: returns (g, x, y) with g = ax + by, g >= 0."""
    old_r, r = a, b
    old_x, x = 1, 0
    old_y, y = 0, 1
    while r:
        q = old_r // r
        old_r, r = r, old_r - q * r
        old_x, x = x, old_x - q * x
        old_y, y = y, old_y - q * y
    if old_r < 0:
        old_r, old_x, old_y = -old_r, -old_x, -old_y
    return old_r, old_x, old_y


class SnfResult(NamedTuple):
    diagonal: tuple         # d_1 | d_2 | ... (non-negative, padded with 0)
    U: list                 # unimodular row transform
    V: list                 # unimodular column transform; U*M*V = diag


def smith_normal_form(M, with_transforms=True):
    """Smith normal form with unimodular certificates.

    M is a rectangular matrix (list of rows).  Pivoting picks the smallest
    absolute nonzero entry of the remaining submatrix, which keeps entry
    growth manageable.  Returns SnfResult; U and V are None when
    with_transforms is False.
    """
    A = [[int(x) for x in row] for row in M]
    m = len(A)
    n = len(A[0]) if m else 0
    if any(len(row) != n for row in A):
        raise InputError("ragged matrix")
    U = [[1 if i == j else 0 for j in range(m)] for i in range(m)] if with_transforms else None
    V = [[1 if i == j else 0 for j in range(n)] for i in range(n)] if with_transforms else None

    def swap_rows(r1, r2):
        A[r1], A[r2] = A[r2], A[r1]
        if U is not None:
            U[r1], U[r2] = U[r2], U[r1]

    def swap_cols(c1, c2):
        for row in A:
            row[c1], row[c2] = row[c2], row[c1]
        if V is not None:
            for row in V:
                row[c1], row[c2] = row[c2], row[c1]

    def add_row(dst, src, q):
        # row_dst += q * row_src
        Ad, As = A[dst], A[src]
        for c in range(n):
            Ad[c] += q * As[c]
        if U is not None:
            Ud, Us = U[dst], U[src]
            for c in range(m):
                Ud[c] += q * Us[c]

    def add_col(dst, src, q):
        for row in A:
            row[dst] += q * row[src]
        if V is not None:
            for row in V:
                row[dst] += q * row[src]

    def negate_row(r):
        A[r] = [-x for x in A[r]]
        if U is not None:
            U[r] = [-x for x in U[r]]

    t = 0
    limit = min(m, n)
    while t < limit:
        # smallest absolute nonzero pivot in the trailing submatrix
        best = None
        for r in range(t, m):
            row = A[r]
            for c in range(t, n):
                v = row[c]
                if v:
                    a = abs(v)
                    if best is None or a < best[0]:
                        best = (a, r, c)
                        if a == 1:
                            break
            if best is not None and best[0] == 1:
                break
        if best is None:
            break
        _, r, c = best
        if r != t:
            swap_rows(t, r)
        if c != t:
            swap_cols(t, c)
        if A[t][t] < 0:
            negate_row(t)
        dirty = False
        for r in range(t + 1, m):
            v = A[r][t]
            if v:
                q = v // A[t][t]
                if q:
                    add_row(r, t, -q)
                if A[r][t]:
                    dirty = True
        for c in range(t + 1, n):
            v = A[t][c]
            if v:
                q = v // A[t][t]
                if q:
                    add_col(c, t, -q)
                if A[t][c]:
                    dirty = True
        if dirty:
            continue  # remainders became new smaller candidates
        # pivot must divide the whole trailing submatrix for the chain property
        d = A[t][t]
        offender = None
        for r in range(t + 1, m):
            row = A[r]
            for c in range(t + 1, n):
                if row[c] % d:
                    offender = r
                    break
            if offender is not None:
                break
        if offender is not None:
            add_row(t, offender, 1)
            continue
        t += 1
    diag = tuple(A[i][i] for i in range(limit))
    for i in range(len(diag) - 1):
        if diag[i + 1] and diag[i] and diag[i + 1] % diag[i]:
            raise AssertionError("divisibility chain broken (bug)")
    return SnfResult(diag, U, V)


def matmul(X, Y):
    rx = len(X)
    inner = len(Y)
    cy = len(Y[0]) if inner else 0
    assert all(len(r) == inner for r in X) or inner == 0
    out = [[0] * cy for _ in range(rx)]
    for i in range(rx):
        Xi = X[i]
        Oi = out[i]
        for k in range(inner):
            x = Xi[k]
            if x:
                Yk = Y[k]
                for j in range(cy):
                    Oi[j] += x * Yk[j]
    return out


def det(M) -> int:
    """Exact determinant by fraction-free (Bareiss) elimination."""
    A = [[int(x) for x in row] for row in M]
    n = len(A)
    if n == 0:
        return 1
    sign = 1
    prev = 1
    for k in range(n - 1):
        if A[k][k] == 0:
            for r in range(k + 1, n):
                if A[r][k]:
                    A[k], A[r] = A[r], A[k]
                    sign = -sign
                    break
            else:
                return 0
        for i in range(k + 1, n):
            for j in range(k + 1, n):
                A[i][j] = (A[i][j] * A[k][k] - A[i][k] * A[k][j]) // prev
            A[i][k] = 0
        prev = A[k][k]
    return sign * A[n - 1][n - 1]


def hermite_row_echelon(rows, ncols):
    """Row-style Hermite echelon of the lattice spanned by the given rows.

    Only integer row operations are used, so the row space is preserved.
    Returns a dict {pivot column: row}, rows having positive pivots and
    entries above each pivot reduced into [0, pivot).
    """
    basis = {}
    work = [list(r) for r in rows]
    for r in work:
        while True:
            lead = -1
            for c in range(ncols):
                if r[c]:
                    lead = c
                    break
            if lead < 0:
                break
            if lead not in basis:
                if r[lead] < 0:
                    r = [-x for x in r]
                basis[lead] = r
                break
            b = basis[lead]
            bp, rp = b[lead], r[lead]
            if rp % bp == 0:
                q = rp // bp
                for c in range(lead, ncols):
                    r[c] -= q * b[c]
            else:
                g, x, y = gcdex(bp, rp)
                nb = [x * b[c] + y * r[c] for c in range(ncols)]
                nr = [(bp // g) * r[c] - (rp // g) * b[c] for c in range(ncols)]
                basis[lead] = nb
                r = nr
    # reduce entries above pivots
    cols = sorted(basis)
    for idx, c in enumerate(cols):
        b = basis[c]
        d = b[c]
        for c2 in cols[idx + 1:]:
            b2 = basis[c2]
            v = b[c2]
            q = v // b2[c2]
            if q:
                for cc in range(c2, ncols):
                    b[cc] -= q * b2[cc]
    return basis


def abelian_invariants_from_relations(rows, ncols):
    """Invariant factors of Z^ncols / <rows>, which must be finite.

    Returns the ascending list of invariant factors > 1, or raises
    InputError when the quotient is infinite.
    """
    res = smith_normal_form([list(r) for r in rows] or [[0] * ncols], with_transforms=False)
    diag = list(res.diagonal)
    rank = sum(1 for d in diag if d)
    if rank < ncols:
        raise InputError("quotient is infinite (relation matrix not of full column rank)")
    return [d for d in diag if d > 1]


# -- sparse elimination for homology-sized matrices --------------------------

def sparse_rank_invariants(nrows, ncols, triplets, progress=None):
    """Rank and invariant factors of a sparse integer matrix.

    triplets: iterable of (row, col, value).  Unit pivots are eliminated
    first, ordered by a minimum-fill heuristic; whatever remains is handed
    to the dense Smith routine.  Returns (rank, [invariant factors > 1]).
    """
    rows = {}
    cols = {}
    for r, c, v in triplets:
        if not v:
            continue
        rv = rows.setdefault(r, {})
        nv = rv.get(c, 0) + int(v)
        if nv:
            rv[c] = nv
            cols.setdefault(c, set()).add(r)
        else:
            del rv[c]
            s = cols.get(c)
            if s:
                s.discard(r)
    for r in [r for r, rv in rows.items() if not rv]:
        del rows[r]
    for c in [c for c, cs in cols.items() if not cs]:
        del cols[c]

    rank = 0
    ones = 0
    import heapq
    # candidate heap of (+fill score, row, col) over unit entries
    heap = []
    for r, rv in rows.items():
        for c, v in rv.items():
            if v in (1, -1):
                heap.append(((len(rv) - 1) * (len(cols[c]) - 1), r, c))
    heapq.heapify(heap)
    processed = 0
    while heap:
        score, r, c = heapq.heappop(heap)
        rv = rows.get(r)
        if rv is None or c not in rv or rv[c] not in (1, -1):
            continue
        cur = (len(rv) - 1) * (len(cols[c]) - 1)
        if cur > score:
            heapq.heappush(heap, (cur, r, c))
            continue
        piv = rv[c]
        prow = dict(rv)
        # remove pivot row
        for cc in prow:
            cols[cc].discard(r)
            if not cols[cc]:
                del cols[cc]
        del rows[r]
        # eliminate pivot column from remaining rows
        targets = list(cols.get(c, ()))
        for r2 in targets:
            rv2 = rows[r2]
            q = rv2[c] * piv  # piv in {1,-1}: multiplier rv2[c]/piv = rv2[c]*piv
            for cc, vv in prow.items():
                nv = rv2.get(cc, 0) - q * vv
                if nv:
                    if cc not in rv2:
                        cols.setdefault(cc, set()).add(r2)
                    rv2[cc] = nv
                else:
                    if cc in rv2:
                        del rv2[cc]
                        s = cols.get(cc)
                        if s:
                            s.discard(r2)
                            if not s:
                                del cols[cc]
                if nv in (1, -1):
                    heapq.heappush(heap, ((len(rv2) - 1) * (len(cols.get(cc, ())) - 1 if cols.get(cc) else 0), r2, cc))
            if not rv2:
                del rows[r2]
        if c in cols and not cols[c]:
            del cols[c]
        rank += 1
        ones += 1
        processed += 1
        if progress and processed % 2000 == 0:
            progress(processed)
    # dense residue
    if rows:
        rindex = {r: i for i, r in enumerate(rows)}
        cindex = {}
        for rv in rows.values():
            for c in rv:
                if c not in cindex:
                    cindex[c] = len(cindex)
        dense = [[0] * len(cindex) for _ in range(len(rindex))]
        for r, rv in rows.items():
            for c, v in rv.items():
                dense[rindex[r]][cindex[c]] = v
        res = smith_normal_form(dense, with_transforms=False)
        extra = [d for d in res.diagonal if d]
        rank += len(extra)
        factors = [d for d in extra if d > 1]
    else:
        factors = []
    return rank, sorted(factors)
