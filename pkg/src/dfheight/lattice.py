"""Small exact LLL and integer kernel bases.

Only what the Siegel construction needs.
"""
from __future__ import annotations

from fractions import Fraction
from typing import List, Sequence


def _dot(u: Sequence, v: Sequence):
    return sum(a * b for a, b in zip(u, v))


def lll_reduce(basis: Sequence[Sequence[int]]) -> List[List[int]]:
    """LLL-reduce the rows of ``basis`` (linearly independent), parameter 3/4.

    Integral variant: Gram determinants ``d`` and scaled coefficients
    ``lam`` stay integers throughout, so no rational arithmetic is needed.
    """
    b = [None] + [list(map(int, v)) for v in basis]  # 1-based
    n = len(b) - 1
    if n <= 1:
        return b[1:]
    d = [1] + [0] * n
    lam = [[0] * (n + 1) for _ in range(n + 1)]
    d[1] = _dot(b[1], b[1])
    if d[1] == 0:
        raise ValueError("basis vectors must be independent")

    def red(k, l):
        if 2 * abs(lam[k][l]) > d[l]:
            q = (2 * lam[k][l] + d[l]) // (2 * d[l])
            b[k] = [x - q * y for x, y in zip(b[k], b[l])]
            lam[k][l] -= q * d[l]
            for i in range(1, l):
                lam[k][i] -= q * lam[l][i]

    def swap(k, kmax):
        b[k], b[k - 1] = b[k - 1], b[k]
        for j in range(1, k - 1):
            lam[k][j], lam[k - 1][j] = lam[k - 1][j], lam[k][j]
        lk = lam[k][k - 1]
        B = (d[k - 2] * d[k] + lk * lk) // d[k - 1]
        for i in range(k + 1, kmax + 1):
            t = lam[i][k]
            lam[i][k] = (d[k] * lam[i][k - 1] - lk * t) // d[k - 1]
            lam[i][k - 1] = (B * t + lk * lam[i][k]) // d[k]
        d[k - 1] = B

    k, kmax = 2, 1
    while k <= n:
        if k > kmax:
            kmax = k
            for j in range(1, k + 1):
                u = _dot(b[k], b[j])
                for i in range(1, j):
                    u = (d[i] * u - lam[k][i] * lam[j][i]) // d[i - 1]
                if j < k:
                    lam[k][j] = u
                else:
                    if u == 0:
                        raise ValueError("basis vectors must be independent")
                    d[k] = u
        red(k, k - 1)
        if 4 * d[k] * d[k - 2] < 3 * d[k - 1] ** 2 - 4 * lam[k][k - 1] ** 2:
            swap(k, kmax)
            k = max(2, k - 1)
        else:
            for l in range(k - 2, 0, -1):
                red(k, l)
            k += 1
    return b[1:]


def rational_rank(rows: Sequence[Sequence[int]]) -> int:
    A = [[Fraction(x) for x in r] for r in rows]
    rank = 0
    ncols = len(A[0]) if A else 0
    for c in range(ncols):
        piv = next((i for i in range(rank, len(A)) if A[i][c]), None)
        if piv is None:
            continue
        A[rank], A[piv] = A[piv], A[rank]
        for i in range(len(A)):
            if i != rank and A[i][c]:
                f = A[i][c] / A[rank][c]
                A[i] = [x - f * y for x, y in zip(A[i], A[rank])]
        rank += 1
    return rank


def integer_kernel_basis(A: Sequence[Sequence[int]]) -> List[List[int]]:
    """LLL-reduced basis of ``{c in Z^k : A c = 0}``.

    Uses the embedding ``[I | W A^T]``; once the weight W is large enough the
    first ``k - rank`` reduced rows carry zero tails and span the kernel lattice.
    """
    rows = len(A)
    k = len(A[0]) if rows else 0
    nullity = k - rational_rank(A) if rows else k
    if nullity == 0:
        return []
    W = 1 << 20
    while True:
        emb = [[1 if i == j else 0 for j in range(k)] + [W * A[r][i] for r in range(rows)]
               for i in range(k)]
        red = lll_reduce(emb)
        ker = [v[:k] for v in red if not any(v[k:])]
        if len(ker) == nullity:
            return ker
        W <<= 20
