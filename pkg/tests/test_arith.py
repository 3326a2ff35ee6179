import math
import random
from fractions import Fraction

import pytest
from hypothesis import given, settings, strategies as st

from dfheight.arith import (QuadElement, coerce, denominator, format_element, height,
                            height_property_check, is_algebraic_integer, minimal_polynomial,
                            parse_element)
from dfheight.errors import PreconditionFailed, SchemaError
from dfheight.numeric import MP

PHI = QuadElement(Fraction(1, 2), Fraction(1, 2), 5)


def test_height_examples():
    assert height(Fraction(1)).value == 0
    assert height(Fraction(2, 3)).equals_log(3)
    h = height(PHI)
    target = MP.log((1 + MP.sqrt(5)) / 2) / 2
    assert h.lo <= target <= h.hi
    assert h.width() <= MP.ldexp(1, -64) * (1 + abs(h.value))


def test_quadratic_height_matches_root_finding():
    x = QuadElement(Fraction(3, 7), Fraction(-2, 5), 3)
    a0, a1, a2 = minimal_polynomial(x)
    roots = MP.polyroots([a0, a1, a2])
    mahler = a0 * MP.fprod(max(1, abs(r)) for r in roots)
    assert abs(height(x).value - MP.log(mahler) / 2) < MP.mpf(10) ** -60


def test_denominator_examples():
    assert denominator(Fraction(3, 4)) == 4
    assert denominator(PHI) == 1
    assert denominator(QuadElement(0, Fraction(1, 2), 2)) == 2
    assert is_algebraic_integer(QuadElement(0, 1, -1))


def _brute_den(x: QuadElement) -> int:
    t, n = x.trace(), x.norm()
    D = 1
    while True:
        if (D * t).denominator == 1 and (D * D * n).denominator == 1:
            return D
        D += 1


def test_quadratic_denominator_against_brute_force():
    rng = random.Random(7)
    ds = [d for d in range(-50, 51) if d not in (0, 1) and all(d % (p * p) for p in range(2, 8))]
    for _ in range(400):
        d = rng.choice(ds)
        a = Fraction(rng.randint(-30, 30), rng.randint(1, 24))
        b = Fraction(rng.randint(-30, 30), rng.randint(1, 24))
        x = QuadElement(a, b, d)
        if b == 0:
            continue
        assert denominator(x) == _brute_den(x), x


def test_height_property_examples():
    assert height_property_check(2, 1, 3, []) == (True, True, True)
    assert height(Fraction(8)).equals_log(8)
    assert height_property_check(Fraction(2, 3), Fraction(3, 2), 1, [])[2]
    assert height_property_check(1, 1, 1, [Fraction(1, 2), Fraction(1, 3)])[1]
    with pytest.raises(PreconditionFailed):
        height_property_check(0, 1, 2, [])


def test_height_properties_on_many_big_rationals():
    rng = random.Random(2024)
    for _ in range(10_000):
        a = Fraction(rng.randint(-2 ** 256, 2 ** 256) or 1, rng.randint(1, 2 ** 256))
        b = Fraction(rng.randint(-2 ** 256, 2 ** 256), rng.randint(1, 2 ** 256))
        m = rng.randint(-4, 4)
        assert height_property_check(a, b, m, [a, b]) == (True, True, True)


rationals = st.fractions(max_denominator=10 ** 12).filter(lambda q: q != 0)


@given(rationals)
def test_height_inverse_and_denominator_bound(q):
    assert height(q).exp2() == height(1 / q).exp2()
    assert height(q).exp2() >= denominator(q) ** 2


@settings(max_examples=200)
@given(st.integers(-40, 40), st.integers(1, 30), st.integers(-40, 40).filter(bool),
       st.integers(1, 30), st.sampled_from([-7, -3, -2, -1, 2, 3, 5, 6, 7, 10]))
def test_quadratic_height_bounds(an, ad, bn, bd, d):
    x = QuadElement(Fraction(an, ad), Fraction(bn, bd), d)
    h = height(x)
    assert h.lo <= h.hi
    assert h.hi >= MP.log(denominator(x)) / 2 - MP.mpf(10) ** -50
    hi = height(x.inverse())
    assert abs(hi.value - h.value) < MP.mpf(10) ** -50


@given(st.fractions(max_denominator=10 ** 9))
def test_rational_canonical_round_trip(q):
    txt = format_element(q)
    back = parse_element(txt)
    assert back == q and back.denominator > 0 and math.gcd(back.numerator, back.denominator) == 1


def test_quadratic_round_trip():
    x = QuadElement(Fraction(-3, 4), Fraction(5, 2), -7)
    assert format_element(x) == "(-3/4)+(5/2)*sqrt(-7)"
    assert parse_element(format_element(x)) == x


@pytest.mark.parametrize("bad", ["", "1/0", "abc", "(1)+(2)*sqrt(4)", "1.5"])
def test_parse_rejects(bad):
    with pytest.raises(SchemaError):
        parse_element(bad)


def test_coerce_lifts_into_field():
    x = coerce("3", -1)
    assert isinstance(x, QuadElement) and x.d == -1 and x.a == 3
