import math
import random
from fractions import Fraction

import pytest

from dfheight.auxpoly import (BinomialPoly, binom, derivative_form_coefficients, eval_binomial_poly,
                              siegel_bound, siegel_vanishing_poly, twist_series)
from dfheight.corpus import CORPUS
from dfheight.errors import PreconditionFailed, SchemaError
from dfheight.lattice import integer_kernel_basis, lll_reduce


def _gram_schmidt(B):
    Bs, mu = [], [[Fraction(0)] * len(B) for _ in B]
    for i, b in enumerate(B):
        v = [Fraction(x) for x in b]
        for j in range(i):
            num = sum(Fraction(x) * y for x, y in zip(b, Bs[j]))
            mu[i][j] = num / sum(y * y for y in Bs[j])
            v = [x - mu[i][j] * y for x, y in zip(v, Bs[j])]
        Bs.append(v)
    return Bs, mu


def _det(M):
    M = [[Fraction(x) for x in r] for r in M]
    n, det = len(M), Fraction(1)
    for c in range(n):
        p = next((i for i in range(c, n) if M[i][c]), None)
        if p is None:
            return Fraction(0)
        if p != c:
            M[c], M[p] = M[p], M[c]
            det = -det
        det *= M[c][c]
        for i in range(c + 1, n):
            f = M[i][c] / M[c][c]
            M[i] = [x - f * y for x, y in zip(M[i], M[c])]
    return det


def test_lll_is_reduced_and_unimodular():
    rng = random.Random(1)
    for _ in range(40):
        k = rng.randint(2, 5)
        while True:
            B = [[rng.randint(-50, 50) for _ in range(k)] for _ in range(k)]
            if _det(B):
                break
        R = lll_reduce(B)
        assert abs(_det(R)) == abs(_det(B))
        Bs, mu = _gram_schmidt(R)
        norms = [sum(x * x for x in v) for v in Bs]
        for i in range(k):
            for j in range(i):
                assert abs(mu[i][j]) <= Fraction(1, 2)
        for i in range(1, k):
            assert norms[i] >= (Fraction(3, 4) - mu[i][i - 1] ** 2) * norms[i - 1]


def test_integer_kernel_basis_spans_kernel():
    A = [[binom(m, i) for i in range(5)] for m in (2, 4)]
    basis = integer_kernel_basis(A)
    assert len(basis) == 3
    for v in basis:
        assert all(sum(a * x for a, x in zip(row, v)) == 0 for row in A)


def test_binom_examples():
    assert eval_binomial_poly(BinomialPoly((0, 1, -1)), 3) == 0
    assert eval_binomial_poly(BinomialPoly((1,)), -7) == 1
    assert eval_binomial_poly(BinomialPoly((0, 0, 1)), 4) == 6
    assert binom(-3, 2) == 6 and binom(5, 7) == 0


def test_binomial_poly_text():
    P = BinomialPoly.parse("1,0,-1,1,1")
    assert P.to_text() == "1,0,-1,1,1"
    for bad in ("", "1,x", "0,0"):
        with pytest.raises(SchemaError):
            BinomialPoly.parse(bad)


def test_binomial_poly_is_integer_valued():
    P = BinomialPoly((3, -2, 5, 1))
    poly = P.to_polynomial()
    for m in range(-10, 11):
        assert poly(Fraction(m)) == P(m)


def test_siegel_examples():
    assert siegel_vanishing_poly([3], 5).c == (0, 1, -1)
    P = siegel_vanishing_poly([1], 5)
    assert P(1) == 0 and max(map(abs, P.c)) < siegel_bound(5, 1)
    assert P.c == (0, 0, 1)     # shorter than (-1, 1, 0) under the max-norm, then length, rule
    P = siegel_vanishing_poly([2, 4], 10)
    assert P(2) == P(4) == 0 and max(map(abs, P.c)) < 2100


@pytest.mark.parametrize("indices,n", [([], 5), ([2, 2], 9), ([0], 5), ([6], 5), ([1, 2], 8)])
def test_siegel_preconditions(indices, n):
    with pytest.raises(PreconditionFailed):
        siegel_vanishing_poly(indices, n)


def test_siegel_is_deterministic():
    assert siegel_vanishing_poly([3, 7, 11], 40) == siegel_vanishing_poly([11, 3, 7], 40)


def test_twist_examples(series):
    g = series("geometric2")
    assert twist_series(g, BinomialPoly((1,))).coefficients(20) == g.coefficients(20)
    t = twist_series(series("log1p"), BinomialPoly((0, 1))).coefficients(10)
    assert t == [0] + [(-1) ** (k + 1) for k in range(1, 11)]
    t = twist_series(series("exp"), BinomialPoly((0, 1))).coefficients(10)
    assert t == [0] + [Fraction(1, math.factorial(k - 1)) for k in range(1, 11)]


def test_twist_matches_derivative_form_across_corpus():
    rng = random.Random(8)
    for e in CORPUS.values():
        s = e.series()
        for _ in range(2):
            L = rng.randint(1, 3)
            nn = rng.randint(4 * L + 1, 30)
            P = siegel_vanishing_poly(sorted(rng.sample(range(1, nn + 1), L)), nn)
            assert len(P.c) <= 2 * L + 1
            pre = s.coefficients(120 + len(P.c))
            assert twist_series(s, P).coefficients(120) == derivative_form_coefficients(pre, P.c, 120)
