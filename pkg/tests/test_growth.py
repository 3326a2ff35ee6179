import math
import random
from fractions import Fraction

import numpy as np
import pytest

from dfheight.errors import PreconditionFailed, SchemaError
from dfheight.growth import (ALPHAS, IndexSet, LcmAccumulator, counterexample_set, growth_profile,
                             kappa_density_check, log_lcm_naive, upper_density)
from dfheight.numeric import MP


def test_profile_examples(series):
    p = growth_profile(series("log1p"), 10)
    assert p.den == [1, 1, 2, 3, 4, 5, 6, 7, 8, 9, 10]
    assert abs(p.log_lcm[10] - MP.log(2520)) < MP.mpf(10) ** -60
    p = growth_profile(series("exp"), 5)
    assert p.den == [1, 1, 2, 6, 24, 120]
    assert all(p.h[k].equals_log(math.factorial(k)) for k in range(6))
    p = growth_profile(series("geometric2"), 5)
    assert p.den == [1] * 6 and all(x == 0 for x in p.log_lcm)
    assert all(p.h[k].equals_log(2 ** k) for k in range(6))


def test_profile_exclusion(series):
    p = growth_profile(series("log1p"), 10, IndexSet.from_indices(range(2, 11), 10))
    assert all(x == 0 for x in p.log_lcm)
    assert p.to_csv(6).splitlines()[3].endswith(",1")


def test_profile_invariants(series):
    p = growth_profile(series("halflog"), 300)
    assert len(p.h) == len(p.den) == len(p.log_lcm) == 301
    assert all(a <= b for a, b in zip(p.log_lcm, p.log_lcm[1:]))


def test_lcm_audit_against_big_integer(series):
    s = series("halflog")
    p = growth_profile(s, 2000)
    rng = random.Random(4)
    for n in rng.sample(range(1, 2001), 20):
        ref = log_lcm_naive(p.den[: n + 1])
        assert abs(p.log_lcm[n] - ref) < MP.mpf(10) ** -50


def test_lcm_accumulator_exact():
    acc = LcmAccumulator()
    vals = [12, 18, 35, 2 ** 40, 3 ** 5 * 7, 1]
    for v in vals:
        acc.add(v)
    ref = 1
    for v in vals:
        ref = ref * v // math.gcd(ref, v)
    assert acc.exact() == ref == acc.value


def test_upper_density_examples():
    N = 10_000
    ev = IndexSet.from_predicate(lambda k: k % 2 == 0, N)
    assert abs(upper_density(ev).top - Fraction(1, 2)) <= Fraction(1, N)
    assert upper_density(IndexSet(np.zeros(N + 1, dtype=bool))).top == 0
    M = 10 ** 6
    sq = np.zeros(M + 1, dtype=bool)
    sq[np.arange(1, 1001) ** 2] = True
    assert upper_density(IndexSet(sq)).top <= Fraction(1, 1000) + Fraction(1, 2000)
    with pytest.raises(PreconditionFailed):
        upper_density(IndexSet(np.zeros(1, dtype=bool)))


def test_kappa_examples(series):
    half = Fraction(1, 2)
    kc = kappa_density_check(growth_profile(series("log1p"), 400), half)
    assert kc.passed and kc.density.top >= Fraction(99, 100)
    kc = kappa_density_check(growth_profile(series("geometric2"), 400), half)
    # only n = 1, 2 satisfy 1 >= n/2, so the top-half estimate is 2/200
    assert not kc.passed and kc.density.top == Fraction(1, 100)
    kc = kappa_density_check(growth_profile(series("exp"), 400), 1)
    assert kc.passed and kc.density.top >= Fraction(99, 100)


def test_counterexample_small():
    cs = counterexample_set(4, "log")
    assert cs.S.indices() == [3]
    assert cs.c[:2] == [1.0, 1.9]


def test_counterexample_degenerate_alpha(monkeypatch):
    monkeypatch.setitem(ALPHAS, "huge", lambda x: 1e12)
    cs = counterexample_set(2 ** 12, "huge")
    for k in range(1, len(cs.c)):
        assert cs.c[k] == pytest.approx(min(1.9 * cs.c[k - 1], k + 1))


def test_counterexample_1024_trends():
    cs = counterexample_set(1024, "log")
    assert len(cs.S) > 0
    assert [r.n for r in cs.rows] == [2 ** k for k in range(1, 11)]
    ratios = [r.ratio for r in cs.rows[-3:]]
    assert ratios[0] > ratios[1] > ratios[2]
    # the density itself is 0.42 here; the construction only drives it to 0 slowly
    assert cs.rows[-1].density < 0.5


def test_counterexample_lcm_matches_naive():
    N = 3000
    cs = counterexample_set(N, "loglog")
    outside = [i for i in range(1, N + 1) if i not in cs.S]
    ref = log_lcm_naive(outside)
    assert abs(cs.rows[-1].log_lcm_over_n * N - float(ref)) < 1e-6


def test_complement_density_rises():
    tops = []
    for N in (2 ** 14, 2 ** 15, 2 ** 16):
        cs = counterexample_set(N, "log")
        tops.append(upper_density(cs.S.complement()).top)
    assert tops[0] < tops[1] < tops[2]


def test_unknown_alpha():
    with pytest.raises(SchemaError):
        counterexample_set(16, "exp")
