import random
from fractions import Fraction

import pytest

from dfheight.corpus import CORPUS
from dfheight.errors import PreconditionFailed
from dfheight.hankel import (agreement, bareiss_det, hankel_det, hankel_det_audit, hankel_is_zero,
                             hankel_matrix, hankel_probably_zero, hankel_scan, kernel_approximant,
                             kronecker_guess, kronecker_guess_details, pade_from_vanishing_run)
from dfheight.numeric import MP
from dfheight.poly import Polynomial, RationalFunction
from dfheight.series import PrefixSeries


def cofactor_det(M):
    if len(M) == 1:
        return M[0][0]
    total = 0
    for j in range(len(M)):
        minor = [row[:j] + row[j + 1:] for row in M[1:]]
        if M[0][j]:
            total = total + (-1) ** j * M[0][j] * cofactor_det(minor)
    return total


def test_det_examples(series):
    assert hankel_det(series("geometric2"), 0, 1) == 0
    assert hankel_det(series("exp"), 0, 1) == Fraction(-1, 2)
    assert hankel_det(series("hilbertish"), 0, 2) == Fraction(1, 2160)


def test_det_matches_cofactor_oracle_on_corpus():
    for e in CORPUS.values():
        s = e.series()
        coeffs = s.coefficients(12)
        for ell in range(3):
            for m in range(5):
                M = hankel_matrix(coeffs, ell, m)
                assert hankel_det(s, ell, m) == cofactor_det(M), (e.name, ell, m)


def test_fraction_free_audit(series):
    for name in ("exp", "log1p", "hilbertish", "halflog"):
        s = series(name)
        for m in range(6):
            (int_det, scales), field_det = hankel_det_audit(s, 1, m)
            prod = 1
            for c in scales:
                prod *= c
            assert Fraction(int_det) == prod * field_det


def test_bareiss_against_cofactor():
    rng = random.Random(3)
    for _ in range(50):
        k = rng.randint(1, 5)
        M = [[rng.randint(-9, 9) for _ in range(k)] for _ in range(k)]
        assert bareiss_det([r[:] for r in M]) == cofactor_det(M)


def test_modular_filter_never_misses_a_zero(series):
    for name in ("geometric2", "nzn", "altperiodic", "exp", "log1p", "gauss_i"):
        s = series(name)
        for m in range(12):
            if hankel_is_zero(s, 0, m):
                assert hankel_probably_zero(s, 0, m)


def test_kronecker_direction_for_rational_corpus():
    # reduced denominator degree q  =>  Delta_n = 0 for n >= q
    rational = {"geometric2": 1, "halfgeom": 1, "invgeom": 1, "nzn": 2, "altperiodic": 2}
    for name, q in rational.items():
        s = CORPUS[name].series()
        for k in range(q, 31):
            assert hankel_is_zero(s, 0, k), (name, k)


def test_kernel_approximant_examples(series):
    P, Q = kernel_approximant(series("geometric2"), 0, 1)
    assert Q == Polynomial([1, -2]) and P == Polynomial([1])
    assert kernel_approximant(series("exp"), 0, 1) is None
    zero = PrefixSeries([0] * 12)
    P, Q = kernel_approximant(zero, 1, 2)
    assert P.is_zero() and Q == Polynomial([1])


def test_zero_filter_biconditional_random_sequences():
    rng = random.Random(11)
    for _ in range(200):
        seq = [rng.randint(-2, 2) for _ in range(9)]
        s = PrefixSeries(seq)
        for ell in range(3):
            for m in range(4):
                if ell + 2 * m > 8:
                    continue
                zero = hankel_det(s, ell, m) == 0
                res = kernel_approximant(s, ell, m)
                assert zero == (res is not None)
                if res is not None:
                    P, Q = res
                    assert Q.degree <= m and (P.is_zero() or P.degree <= ell + m - 1 or ell + m == 0)
                    got = agreement(P, Q, seq[: ell + 2 * m + 1])
                    assert got is None


def test_no_approximant_when_det_nonzero_brute_force():
    # length-2 windows: ell = 0, m = 1 and entries from a small box
    box = range(-2, 3)
    rng = random.Random(5)
    for _ in range(30):
        seq = [rng.randint(-3, 3) for _ in range(3)]
        s = PrefixSeries(seq)
        if hankel_det(s, 0, 1) == 0:
            continue
        for q0 in box:
            for q1 in box:
                if q0 == q1 == 0:
                    continue
                Q = Polynomial([q0, q1])
                # P has degree <= 0 and must match Q f through z^2
                p0 = q0 * seq[0]
                assert agreement(Polynomial([p0]), Q, seq) is not None


def test_pade_examples(series):
    P, Q = pade_from_vanishing_run(series("geometric2"), 1, 3)
    assert P == Polynomial([1]) and Q == Polynomial([1, -2])
    P, Q = pade_from_vanishing_run(series("nzn"), 2, 2)
    assert P == Polynomial([0, 1]) and Q == Polynomial([1, -2, 1])
    P, Q = pade_from_vanishing_run(PrefixSeries([1, 1] + [0] * 10), 2, 1)
    assert P == Polynomial([1, 1]) and Q == Polynomial([1])
    with pytest.raises(PreconditionFailed):
        pade_from_vanishing_run(series("exp"), 1, 1)


def test_kronecker_examples(series):
    det = kronecker_guess_details(series("geometric2"), 12, 5)
    assert det.rational == RationalFunction(1, Polynomial([1, -2]))
    assert det.validated_through >= det.reconstruction_horizon + 20
    assert kronecker_guess(series("log1p"), 40, 5) is None
    assert kronecker_guess(series("nzn"), 12, 4) == RationalFunction(Polynomial([0, 1]),
                                                                    Polynomial([1, -2, 1]))


def test_scan_csv_and_log_abs(series):
    scan = hankel_scan(series("hilbertish"), 3)
    lines = scan.to_csv(12).splitlines()
    assert lines[0] == "n,delta_exact,is_zero,log_abs"
    assert lines[3].startswith("2,1/2160,0,")
    e = scan.entries[2]
    assert abs(e.log_abs - MP.log(MP.mpf(1) / 2160)) < MP.mpf(10) ** -60
    zero_scan = hankel_scan(series("geometric2"), 3)
    assert zero_scan.to_csv().splitlines()[2] == "1,0,1,"


def test_tiny_determinants_keep_magnitude(series):
    scan = hankel_scan(series("hilbertish"), 25)
    last = scan.entries[-1]
    assert last.log_abs < -800      # |Delta_25| underflows any double
    assert MP.isfinite(last.log_abs)
