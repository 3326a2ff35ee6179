"""Dense univariate polynomials and reduced rational functions over Q or Q(sqrt d)."""
from __future__ import annotations

import math
from fractions import Fraction
from typing import Iterable, List, Optional, Sequence, Set

from sympy.polys.domains import ZZ
from sympy.polys.euclidtools import dup_gcd
from sympy.polys.factortools import dup_factor_list

from .arith import QuadElement, coerce, format_element

ZERO = Fraction(0)
ONE = Fraction(1)
NEG_INF = float("-inf")


def _trim(coeffs: List) -> List:
    while coeffs and not coeffs[-1]:
        coeffs.pop()
    return coeffs


class Polynomial:
    """Immutable polynomial, coefficients stored lowest degree first.

    The zero polynomial has no coefficients and degree ``-inf``.
    """

    __slots__ = ("coeffs",)

    def __init__(self, coeffs: Iterable = ()):
        self.coeffs = tuple(_trim([coerce(c) for c in coeffs]))

    # -- constructors ---------------------------------------------------
    @classmethod
    def constant(cls, c) -> "Polynomial":
        return cls([c])

    @classmethod
    def monomial(cls, k: int, c=ONE) -> "Polynomial":
        return cls([ZERO] * k + [c])

    @classmethod
    def z(cls) -> "Polynomial":
        return cls([ZERO, ONE])

    # -- basic queries --------------------------------------------------
    @property
    def degree(self):
        return len(self.coeffs) - 1 if self.coeffs else NEG_INF

    def is_zero(self) -> bool:
        return not self.coeffs

    def __len__(self):
        return len(self.coeffs)

    def __getitem__(self, i: int):
        if 0 <= i < len(self.coeffs):
            return self.coeffs[i]
        return ZERO

    def lc(self):
        return self.coeffs[-1] if self.coeffs else ZERO

    def order(self):
        """Index of the lowest nonzero coefficient (``inf`` for zero)."""
        for i, c in enumerate(self.coeffs):
            if c:
                return i
        return math.inf

    def is_rational(self) -> bool:
        return all(not isinstance(c, QuadElement) or c.b == 0 for c in self.coeffs)

    def __bool__(self):
        return bool(self.coeffs)

    def __eq__(self, other):
        if isinstance(other, Polynomial):
            return self.coeffs == other.coeffs
        if isinstance(other, (int, Fraction, QuadElement)):
            return self.coeffs == Polynomial([other]).coeffs
        return NotImplemented

    def __hash__(self):
        return hash(self.coeffs)

    def __repr__(self):
        return f"Polynomial({self.to_text()!r})"

    def to_text(self, var: str = "z") -> str:
        if not self.coeffs:
            return "0"
        parts = []
        for i, c in enumerate(self.coeffs):
            if not c:
                continue
            mono = "" if i == 0 else (var if i == 1 else f"{var}^{i}")
            txt = format_element(c)
            if mono:
                parts.append(f"({txt})*{mono}")
            else:
                parts.append(f"({txt})")
        return " + ".join(parts)

    # -- arithmetic -----------------------------------------------------
    @staticmethod
    def _wrap(other) -> Optional["Polynomial"]:
        if isinstance(other, Polynomial):
            return other
        if isinstance(other, (int, Fraction, QuadElement)):
            return Polynomial([other])
        return None

    def __add__(self, other):
        o = self._wrap(other)
        if o is None:
            return NotImplemented
        n = max(len(self.coeffs), len(o.coeffs))
        return Polynomial([self[i] + o[i] for i in range(n)])

    __radd__ = __add__

    def __neg__(self):
        return Polynomial([-c for c in self.coeffs])

    def __sub__(self, other):
        o = self._wrap(other)
        if o is None:
            return NotImplemented
        n = max(len(self.coeffs), len(o.coeffs))
        return Polynomial([self[i] - o[i] for i in range(n)])

    def __rsub__(self, other):
        return (-self) + other

    def __mul__(self, other):
        if isinstance(other, (int, Fraction, QuadElement)):
            return Polynomial([c * other for c in self.coeffs])
        if not isinstance(other, Polynomial):
            return NotImplemented
        if not self.coeffs or not other.coeffs:
            return Polynomial()
        out = [ZERO] * (len(self.coeffs) + len(other.coeffs) - 1)
        for i, a in enumerate(self.coeffs):
            if not a:
                continue
            for j, b in enumerate(other.coeffs):
                if b:
                    out[i + j] = out[i + j] + a * b
        return Polynomial(out)

    __rmul__ = __mul__

    def __pow__(self, k: int):
        out = Polynomial([ONE])
        for _ in range(k):
            out = out * self
        return out

    def __call__(self, x):
        acc = ZERO
        for c in reversed(self.coeffs):
            acc = acc * x + c
        return acc

    def derivative(self) -> "Polynomial":
        return Polynomial([i * c for i, c in enumerate(self.coeffs)][1:])

    def shift(self, k) -> "Polynomial":
        """The polynomial ``P(z + k)``."""
        out = Polynomial()
        lin = Polynomial([k, ONE])
        for c in reversed(self.coeffs):
            out = out * lin + c
        return out

    def truncate(self, n: int) -> "Polynomial":
        """Keep the coefficients of z^0 .. z^(n-1)."""
        return Polynomial(self.coeffs[:n])

    def scale(self, c) -> "Polynomial":
        return self * c

    def divmod(self, other: "Polynomial"):
        if other.is_zero():
            raise ZeroDivisionError("polynomial division by zero")
        rem = list(self.coeffs)
        dq = len(other.coeffs) - 1
        inv = 1 / other.lc() if not isinstance(other.lc(), QuadElement) else other.lc().inverse()
        quot = [ZERO] * max(len(rem) - dq, 0)
        for k in range(len(rem) - 1 - dq, -1, -1):
            c = rem[k + dq] * inv
            if not c:
                continue
            quot[k] = c
            for j, b in enumerate(other.coeffs):
                rem[k + j] = rem[k + j] - c * b
        return Polynomial(quot), Polynomial(rem[:dq] if dq > 0 else [])

    def __floordiv__(self, other):
        return self.divmod(other)[0]

    def __mod__(self, other):
        return self.divmod(other)[1]

    def divides(self, other: "Polynomial") -> bool:
        """True when self | other."""
        return (other % self).is_zero()

    def monic(self) -> "Polynomial":
        if self.is_zero():
            return self
        lc = self.lc()
        inv = lc.inverse() if isinstance(lc, QuadElement) else 1 / lc
        return self * inv

    def content_free_integer(self) -> List[int]:
        """Primitive integer coefficients (lowest first) of a rational polynomial."""
        fr = [c.a if isinstance(c, QuadElement) else Fraction(c) for c in self.coeffs]
        den = 1
        for c in fr:
            den = den * c.denominator // math.gcd(den, c.denominator)
        ints = [int(c * den) for c in fr]
        g = 0
        for c in ints:
            g = math.gcd(g, c)
        return [c // g for c in ints] if g else ints

    # -- roots ----------------------------------------------------------
    def integer_roots(self) -> Set[int]:
        """All integer roots (exact, via factorization over Z)."""
        if self.is_zero():
            raise ValueError("zero polynomial has every integer as a root")
        if self.is_rational():
            return _int_roots_rational(self)
        rat = Polynomial([c.a if isinstance(c, QuadElement) else c for c in self.coeffs])
        irr = Polynomial([c.b if isinstance(c, QuadElement) else ZERO for c in self.coeffs])
        roots = _int_roots_rational(rat) if rat else None
        roots_b = _int_roots_rational(irr) if irr else None
        if roots is None:
            return roots_b
        if roots_b is None:
            return roots
        return roots & roots_b

    def nonnegative_integer_roots(self) -> List[int]:
        return sorted(r for r in self.integer_roots() if r >= 0)


def _int_roots_rational(p: Polynomial) -> Set[int]:
    if p.degree == 0:
        return set()
    ints = p.content_free_integer()
    roots = set()
    k = 0
    while ints[k] == 0:
        k += 1
    if k:
        roots.add(0)
    ints = ints[k:]
    if len(ints) == 1:
        return roots
    _, factors = dup_factor_list([ZZ(c) for c in reversed(ints)], ZZ)
    for f, _mult in factors:
        if len(f) == 2:
            a, b = int(f[0]), int(f[1])
            if b % a == 0:
                roots.add(-b // a)
    return roots


def poly_gcd(f: Polynomial, g: Polynomial) -> Polynomial:
    """Monic gcd."""
    if f.is_zero():
        return g.monic()
    if g.is_zero():
        return f.monic()
    if f.is_rational() and g.is_rational():
        fi = f.content_free_integer()
        gi = g.content_free_integer()
        h = dup_gcd([ZZ(c) for c in reversed(fi)], [ZZ(c) for c in reversed(gi)], ZZ)
        return Polynomial([Fraction(int(c)) for c in reversed(h)]).monic()
    a, b = f, g
    while not b.is_zero():
        a, b = b, a % b
    return a.monic()


def falling_factorial_poly(shift: int, j: int) -> Polynomial:
    """(n + shift)(n + shift - 1)...(n + shift - j + 1) as a polynomial in n."""
    out = Polynomial([ONE])
    for i in range(j):
        out = out * Polynomial([Fraction(shift - i), ONE])
    return out


class RationalFunction:
    """Reduced quotient ``num/den``.

    ``gcd(num, den) == 1``; when ``den(0) != 0`` it is scaled so ``den(0) == 1``,
    otherwise ``den`` is monic.
    """

    __slots__ = ("num", "den")

    def __init__(self, num, den=None):
        num = num if isinstance(num, Polynomial) else Polynomial([num])
        if den is None:
            den = Polynomial([ONE])
        elif not isinstance(den, Polynomial):
            den = Polynomial([den])
        if den.is_zero():
            raise ZeroDivisionError("rational function with zero denominator")
        if num.is_zero():
            self.num, self.den = Polynomial(), Polynomial([ONE])
            return
        if den.degree > 0:
            g = poly_gcd(num, den)
            if g.degree > 0:
                num, den = num // g, den // g
        c = den[0] if den[0] else den.lc()
        inv = c.inverse() if isinstance(c, QuadElement) else 1 / c
        self.num, self.den = num * inv, den * inv

    @classmethod
    def from_poly(cls, p: Polynomial) -> "RationalFunction":
        return cls(p)

    def is_zero(self) -> bool:
        return self.num.is_zero()

    def is_polynomial(self) -> bool:
        return self.den.degree == 0

    def __eq__(self, other):
        if isinstance(other, RationalFunction):
            return self.num == other.num and self.den == other.den
        if isinstance(other, (Polynomial, int, Fraction, QuadElement)):
            return self == RationalFunction(other)
        return NotImplemented

    def __hash__(self):
        return hash((self.num, self.den))

    def __repr__(self):
        return f"RationalFunction({self.to_text()!r})"

    def to_text(self, var: str = "z") -> str:
        return f"({self.num.to_text(var)})/({self.den.to_text(var)})"

    @staticmethod
    def _wrap(o):
        if isinstance(o, RationalFunction):
            return o
        if isinstance(o, (Polynomial, int, Fraction, QuadElement)):
            return RationalFunction(o)
        return None

    def __add__(self, other):
        o = self._wrap(other)
        if o is None:
            return NotImplemented
        if self.den == o.den:
            return RationalFunction(self.num + o.num, self.den)
        return RationalFunction(self.num * o.den + o.num * self.den, self.den * o.den)

    __radd__ = __add__

    def __neg__(self):
        return RationalFunction(-self.num, self.den)

    def __sub__(self, other):
        o = self._wrap(other)
        if o is None:
            return NotImplemented
        return self + (-o)

    def __rsub__(self, other):
        return (-self) + other

    def __mul__(self, other):
        o = self._wrap(other)
        if o is None:
            return NotImplemented
        return RationalFunction(self.num * o.num, self.den * o.den)

    __rmul__ = __mul__

    def inverse(self) -> "RationalFunction":
        if self.is_zero():
            raise ZeroDivisionError("inverse of zero rational function")
        return RationalFunction(self.den, self.num)

    def __truediv__(self, other):
        o = self._wrap(other)
        if o is None:
            return NotImplemented
        return self * o.inverse()

    def __rtruediv__(self, other):
        return self.inverse() * other

    def derivative(self) -> "RationalFunction":
        return RationalFunction(self.num.derivative() * self.den - self.num * self.den.derivative(),
                                self.den * self.den)

    def __call__(self, x):
        return self.num(x) / self.den(x)

    def max_degree(self) -> int:
        return max(self.num.degree, self.den.degree)

    def taylor(self, n: int) -> List:
        """First ``n`` Taylor coefficients at 0 (needs ``den(0) != 0``)."""
        d0 = self.den[0]
        if not d0:
            raise ZeroDivisionError("rational function has a pole at 0")
        inv = d0.inverse() if isinstance(d0, QuadElement) else 1 / d0
        out = []
        for k in range(n):
            acc = self.num[k]
            for j in range(1, min(k, len(self.den) - 1) + 1):
                acc = acc - self.den[j] * out[k - j]
            out.append(acc * inv)
        return out


def series_mul(a: Sequence, b: Sequence, n: int) -> List:
    """Truncated product of two coefficient lists, first ``n`` terms."""
    out = [ZERO] * n
    for i, x in enumerate(a[:n]):
        if not x:
            continue
        for j, y in enumerate(b[: n - i]):
            if y:
                out[i + j] = out[i + j] + x * y
    return out


def series_order(coeffs: Sequence) -> float:
    for i, c in enumerate(coeffs):
        if c:
            return i
    return math.inf
