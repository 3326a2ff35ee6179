"""Exact field elements of Q and Q(sqrt d), Weil heights and denominators.

Rationals are plain :class:`fractions.Fraction` values.  Quadratic elements
``a + b*sqrt(d)`` are :class:`QuadElement` instances; mixing two different
quadratic fields raises :class:`DegreeOverflow`.

Text format::

    "p/q" or "p"                  rationals
    "(a)+(b)*sqrt(d)"             quadratic elements, a and b rational text
"""
from __future__ import annotations

import math
import re
from dataclasses import dataclass
from fractions import Fraction
from functools import lru_cache
from typing import Optional, Sequence, Tuple, Union

import sympy
from mpmath.ctx_iv import MPIntervalContext

from .errors import DegreeOverflow, PreconditionFailed, SchemaError
from .numeric import MP, log_int

FieldElement = Union[Fraction, "QuadElement"]


@lru_cache(maxsize=256)
def _squarefree(d: int) -> bool:
    return all(e == 1 for e in sympy.factorint(abs(d)).values())


def _frac(x) -> Fraction:
    if isinstance(x, Fraction):
        return x
    if isinstance(x, int):
        return Fraction(x)
    if isinstance(x, str):
        return parse_rational(x)
    raise TypeError(f"cannot coerce {x!r} to Fraction")


class QuadElement:
    """The element ``a + b*sqrt(d)`` of the quadratic field Q(sqrt d)."""

    __slots__ = ("a", "b", "d")

    def __init__(self, a=0, b=0, d: int = -1):
        d = int(d)
        if d in (0, 1) or not _squarefree(d):
            raise SchemaError(f"sqrt({d}) does not define a quadratic field")
        self.a = _frac(a)
        self.b = _frac(b)
        self.d = d

    # -- coercion -------------------------------------------------------
    def _lift(self, other) -> Optional["QuadElement"]:
        if isinstance(other, QuadElement):
            if other.d != self.d:
                if other.b == 0:
                    return QuadElement(other.a, 0, self.d)
                if self.b == 0:
                    return None  # handled by caller via swap
                raise DegreeOverflow(
                    f"Q(sqrt {self.d}) and Q(sqrt {other.d}) do not share a quadratic field")
            return other
        if isinstance(other, (int, Fraction)):
            return QuadElement(other, 0, self.d)
        return NotImplemented

    def _binary(self, other, op):
        o = self._lift(other)
        if o is NotImplemented:
            return NotImplemented
        if o is None:
            # self is rational, other carries the field
            return op(QuadElement(self.a, 0, other.d), other)
        return op(self, o)

    # -- arithmetic -----------------------------------------------------
    def __add__(self, other):
        return self._binary(other, lambda x, y: QuadElement(x.a + y.a, x.b + y.b, x.d))

    __radd__ = __add__

    def __sub__(self, other):
        return self._binary(other, lambda x, y: QuadElement(x.a - y.a, x.b - y.b, x.d))

    def __rsub__(self, other):
        return self._binary(other, lambda x, y: QuadElement(y.a - x.a, y.b - x.b, x.d))

    def __mul__(self, other):
        return self._binary(other, lambda x, y: QuadElement(
            x.a * y.a + x.d * x.b * y.b, x.a * y.b + x.b * y.a, x.d))

    __rmul__ = __mul__

    def __truediv__(self, other):
        o = self._lift(other)
        if o is NotImplemented:
            return NotImplemented
        if o is None:
            return QuadElement(self.a, 0, other.d) / other
        return self * o.inverse()

    def __rtruediv__(self, other):
        return self.inverse() * other

    def __neg__(self):
        return QuadElement(-self.a, -self.b, self.d)

    def __pos__(self):
        return self

    def __pow__(self, m: int):
        if not isinstance(m, int):
            return NotImplemented
        if m < 0:
            return self.inverse() ** (-m)
        result = QuadElement(1, 0, self.d)
        base = self
        while m:
            if m & 1:
                result = result * base
            base = base * base
            m >>= 1
        return result

    def inverse(self) -> "QuadElement":
        n = self.norm()
        if n == 0:
            raise ZeroDivisionError("inverse of zero")
        return QuadElement(self.a / n, -self.b / n, self.d)

    def conjugate(self) -> "QuadElement":
        return QuadElement(self.a, -self.b, self.d)

    def norm(self) -> Fraction:
        return self.a * self.a - self.d * self.b * self.b

    def trace(self) -> Fraction:
        return 2 * self.a

    def is_rational(self) -> bool:
        return self.b == 0

    # -- comparison -----------------------------------------------------
    def __eq__(self, other):
        if isinstance(other, QuadElement):
            if self.b == 0 and other.b == 0:
                return self.a == other.a
            return self.d == other.d and self.a == other.a and self.b == other.b
        if isinstance(other, (int, Fraction)):
            return self.b == 0 and self.a == other
        return NotImplemented

    def __hash__(self):
        if self.b == 0:
            return hash(self.a)
        return hash((self.a, self.b, self.d))

    def __bool__(self):
        return bool(self.a) or bool(self.b)

    def __repr__(self):
        return f"QuadElement({format_element(self)!r})"

    def __str__(self):
        return format_element(self)

    def to_complex(self):
        """mpmath complex value at working precision."""
        root = MP.sqrt(MP.mpf(self.d)) if self.d > 0 else MP.mpc(0, MP.sqrt(-self.d))
        return MP.mpf(self.a.numerator) / self.a.denominator + \
            (MP.mpf(self.b.numerator) / self.b.denominator) * root


# ---------------------------------------------------------------------------
# text format
# ---------------------------------------------------------------------------
_RAT_RE = re.compile(r"^\s*([+-]?\d+)\s*(?:/\s*(\d+))?\s*$")
_QUAD_RE = re.compile(r"^\s*\((.+)\)\s*\+\s*\((.+)\)\s*\*\s*sqrt\(\s*([+-]?\d+)\s*\)\s*$")


def parse_rational(text: str) -> Fraction:
    m = _RAT_RE.match(text)
    if not m:
        raise SchemaError(f"not a rational: {text!r}")
    den = int(m.group(2)) if m.group(2) is not None else 1
    if den == 0:
        raise SchemaError(f"zero denominator in {text!r}")
    return Fraction(int(m.group(1)), den)


def parse_element(text: str) -> FieldElement:
    if not isinstance(text, str):
        raise SchemaError(f"field element must be a string, got {text!r}")
    m = _QUAD_RE.match(text)
    if m:
        return QuadElement(parse_rational(m.group(1)), parse_rational(m.group(2)), int(m.group(3)))
    return parse_rational(text)


def format_rational(q: Fraction) -> str:
    q = Fraction(q)
    if q.denominator == 1:
        return str(q.numerator)
    return f"{q.numerator}/{q.denominator}"


def format_element(x) -> str:
    if isinstance(x, QuadElement):
        return f"({format_rational(x.a)})+({format_rational(x.b)})*sqrt({x.d})"
    return format_rational(x)


def coerce(x, d: Optional[int] = None) -> FieldElement:
    """Normalize ints/strings to field elements, optionally lifting into Q(sqrt d)."""
    if isinstance(x, str):
        x = parse_element(x)
    elif isinstance(x, float):
        raise SchemaError(f"floats are not exact field elements: {x!r}")
    elif isinstance(x, int):
        x = Fraction(x)
    if d is not None and isinstance(x, Fraction):
        return QuadElement(x, 0, d)
    return x


# ---------------------------------------------------------------------------
# heights
# ---------------------------------------------------------------------------
@dataclass(frozen=True)
class HeightValue:
    """A logarithmic Weil height.

    When ``arg`` is set the value is exactly ``weight * log(arg)`` with
    ``weight`` in {1, 1/2}; ``lo == hi`` in that case.  Otherwise the value is
    only known through the enclosure ``[lo, hi]``.
    """

    lo: object
    hi: object
    arg: Optional[Fraction] = None
    weight: Fraction = Fraction(1)

    @property
    def value(self):
        return (self.lo + self.hi) / 2

    @property
    def exact(self) -> bool:
        return self.arg is not None

    def width(self):
        return self.hi - self.lo

    def __float__(self):
        return float(self.value)

    def exp2(self) -> Optional[Fraction]:
        """``exp(2h)`` as an exact rational, when available."""
        if self.arg is None:
            return None
        return self.arg ** int(2 * self.weight)

    def equals_log(self, q) -> bool:
        """Exact test ``h == log(q)`` (only for exact heights)."""
        if self.arg is None:
            raise ValueError("height only known by enclosure")
        return self.exp2() == Fraction(q) ** 2


def _exact_height(arg: Fraction, weight=Fraction(1)) -> HeightValue:
    v = weight * (MP.log(arg.numerator) - MP.log(arg.denominator))
    return HeightValue(v, v, Fraction(arg), Fraction(weight))


def minimal_polynomial(x: FieldElement) -> Tuple[int, ...]:
    """Primitive integer minimal polynomial, highest degree first, positive lead."""
    if isinstance(x, QuadElement) and x.b != 0:
        t, n = x.trace(), x.norm()
        scale = t.denominator * n.denominator // math.gcd(t.denominator, n.denominator)
        coeffs = [scale, int(-t * scale), int(n * scale)]
    else:
        q = x.a if isinstance(x, QuadElement) else Fraction(x)
        coeffs = [q.denominator, -q.numerator]
    g = 0
    for c in coeffs:
        g = math.gcd(g, c)
    return tuple(c // g for c in coeffs)


def height(x: FieldElement, prec: int = 256) -> HeightValue:
    """Absolute logarithmic Weil height of a rational or quadratic number."""
    if isinstance(x, QuadElement) and x.b != 0:
        return _quad_height(x, prec)
    q = x.a if isinstance(x, QuadElement) else Fraction(x)
    return _exact_height(Fraction(max(abs(q.numerator), q.denominator)))


def _quad_height(x: QuadElement, prec: int) -> HeightValue:
    a0, a1, a2 = minimal_polynomial(x)
    half = Fraction(1, 2)
    if x.d < 0:
        # complex conjugate roots with |alpha|^2 = a2/a0
        return _exact_height(Fraction(max(a0, a2)), half)
    disc = a1 * a1 - 4 * a0 * a2
    while True:
        iv = MPIntervalContext()
        iv.prec = prec + 64
        s = iv.sqrt(iv.mpf(disc))
        r1 = (iv.mpf(-a1) + s) / (2 * a0)
        r2 = (iv.mpf(-a1) - s) / (2 * a0)
        big = []
        undecided = False
        for r in (r1, r2):
            m = abs(r)
            if m.a > 1:
                big.append(m)
            elif m.b < 1:
                continue
            else:
                undecided = True
        if not undecided:
            break
        prec *= 2
    if not big:
        return _exact_height(Fraction(a0), half)
    if len(big) == 2:
        return _exact_height(Fraction(abs(a2)), half)
    enc = iv.log(iv.mpf(a0) * big[0]) / 2
    # rounding into the 256-bit context may cut the interval; widen by a few ulps
    lo, hi = MP.mpf(enc.a), MP.mpf(enc.b)
    lo -= MP.ldexp(abs(lo) + 1, -(MP.prec - 8))
    hi += MP.ldexp(abs(hi) + 1, -(MP.prec - 8))
    return HeightValue(lo, hi, None, half)


def denominator(x: FieldElement) -> int:
    """Smallest positive integer D with D*x an algebraic integer."""
    if isinstance(x, QuadElement) and x.b != 0:
        t, n = x.trace(), x.norm()
        need = {}
        for p, e in sympy.factorint(t.denominator).items():
            need[p] = max(need.get(p, 0), e)
        for p, e in sympy.factorint(n.denominator).items():
            need[p] = max(need.get(p, 0), (e + 1) // 2)
        out = 1
        for p, e in need.items():
            out *= p ** e
        return out
    q = x.a if isinstance(x, QuadElement) else Fraction(x)
    return q.denominator


def is_algebraic_integer(x: FieldElement) -> bool:
    return denominator(x) == 1


# ---------------------------------------------------------------------------
# height inequalities
# ---------------------------------------------------------------------------
def _prod_exp2(values: Sequence[HeightValue]) -> Optional[Fraction]:
    out = Fraction(1)
    for v in values:
        e = v.exp2()
        if e is None:
            return None
        out *= e
    return out


def _le(lhs: Sequence[HeightValue], rhs: Sequence[HeightValue], extra: int) -> bool:
    """sum(lhs) <= sum(rhs) + log(extra), exactly when possible."""
    el, er = _prod_exp2(lhs), _prod_exp2(rhs)
    if el is not None and er is not None:
        return el <= er * extra * extra
    lo = sum((v.lo for v in lhs), MP.mpf(0))
    hi = sum((v.hi for v in rhs), MP.mpf(0)) + log_int(extra)
    return lo <= hi


def height_property_check(a: FieldElement, b: FieldElement, m: int,
                          r_terms: Sequence[FieldElement]) -> Tuple[bool, bool, bool]:
    """Check the three elementary height inequalities on concrete inputs.

    (i)   h(a^m) == |m| h(a)
    (ii)  h(sum r) <= sum h(r) + log(len r)
    (iii) h(ab) <= h(a) + h(b) + log 2
    """
    a, b = coerce(a), coerce(b)
    if a == 0:
        raise PreconditionFailed("property (i) needs a != 0")
    ha = height(a)
    hp = height(a ** m)
    if ha.exact and hp.exact:
        ok1 = hp.exp2() == ha.exp2() ** abs(m)
    else:
        tol = ha.width() * abs(m) + hp.width() + MP.ldexp(1, -60) * (1 + abs(hp.value))
        ok1 = abs(hp.value - abs(m) * ha.value) <= tol

    terms = [coerce(r) for r in r_terms]
    if terms:
        total = terms[0]
        for r in terms[1:]:
            total = total + r
        ok2 = _le([height(total)], [height(r) for r in terms], len(terms))
    else:
        ok2 = True

    ok3 = _le([height(a * b)], [ha, height(b)], 2)
    return ok1, ok2, ok3
