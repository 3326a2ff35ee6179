"""Integer-valued auxiliary polynomials built from short lattice vectors, and twisted series."""
from __future__ import annotations

import itertools
import math
from dataclasses import dataclass
from fractions import Fraction
from typing import List, Sequence, Tuple

from .errors import PreconditionFailed, SchemaError
from .lattice import integer_kernel_basis
from .poly import Polynomial, falling_factorial_poly
from .series import DerivedSeries, PRecurrence, SeriesHandle


def binom(m: int, i: int) -> int:
    """``C(m, i)`` for any integer m, via the falling factorial."""
    if i < 0:
        return 0
    num = 1
    for k in range(i):
        num *= m - k
    return num // math.factorial(i)


@dataclass(frozen=True)
class BinomialPoly:
    """``P(z) = sum_i c[i] * C(z, i)``; integer valued on the integers."""

    c: Tuple[int, ...]

    def __post_init__(self):
        if not self.c or not any(self.c):
            raise SchemaError("binomial polynomial needs a nonzero coefficient")
        object.__setattr__(self, "c", tuple(int(x) for x in self.c))

    def __call__(self, m: int) -> int:
        return eval_binomial_poly(self, m)

    def to_polynomial(self) -> Polynomial:
        out = Polynomial()
        for i, ci in enumerate(self.c):
            if ci:
                out = out + falling_factorial_poly(0, i) * Fraction(ci, math.factorial(i))
        return out

    def height(self) -> int:
        return max(abs(x) for x in self.c)

    def to_text(self) -> str:
        return ",".join(str(x) for x in self.c)

    @classmethod
    def parse(cls, text: str) -> "BinomialPoly":
        try:
            vals = [int(t) for t in text.split(",")]
        except ValueError as exc:
            raise SchemaError(f"bad coefficient list {text!r}") from exc
        return cls(tuple(vals))


def eval_binomial_poly(P: BinomialPoly, m: int) -> int:
    return sum(ci * binom(m, i) for i, ci in enumerate(P.c))


def siegel_bound(n: int, L: int) -> int:
    return n * math.comb(n, 2 * L)


def _rank_key(v: Sequence[int]):
    return (max(abs(x) for x in v), sum(x * x for x in v), tuple(v))


def _normalize_sign(v: Sequence[int]) -> Tuple[int, ...]:
    for x in v:
        if x:
            return tuple(v) if x > 0 else tuple(-y for y in v)
    return tuple(v)


def siegel_vanishing_poly(indices: Sequence[int], n: int) -> BinomialPoly:
    """Short integer ``c`` with ``sum c_i C(m, i) = 0`` for every m in ``indices``.

    The kernel lattice of the binomial matrix is reduced with LLL; small
    combinations of the reduced basis are then compared by max-norm, then
    Euclidean norm, with the sign fixed so the first nonzero entry is
    positive and the lexicographically smallest survivor returned.
    """
    idx = sorted(int(i) for i in indices)
    L = len(idx)
    if L == 0:
        raise PreconditionFailed("need at least one index")
    if len(set(idx)) != L:
        raise PreconditionFailed("indices must be distinct")
    if idx[0] < 1:
        raise PreconditionFailed("indices must be at least 1")
    if idx[-1] > n:
        raise PreconditionFailed("indices must not exceed n")
    if n <= 4 * L:
        raise PreconditionFailed(f"need n > 4L, got n={n}, L={L}")
    A = [[binom(m, i) for i in range(2 * L + 1)] for m in idx]
    basis = integer_kernel_basis(A)
    bound = siegel_bound(n, L)
    best = _search(basis, width=1)
    if max(abs(x) for x in best) >= bound:
        best = _search(basis, width=2)
    if max(abs(x) for x in best) >= bound:
        raise AssertionError("no kernel vector within the Siegel bound was found")
    for row in A:
        assert sum(ci * x for ci, x in zip(best, row)) == 0
    return BinomialPoly(best)


def _search(basis: List[List[int]], width: int) -> Tuple[int, ...]:
    """Best vector among combinations with coefficients in [-width, width]."""
    head = basis[: min(len(basis), 6)]
    rest = basis[len(head):]
    k = len(basis[0])
    best = None
    for coeffs in itertools.product(range(-width, width + 1), repeat=len(head)):
        if not any(coeffs):
            continue
        v = [0] * k
        for a, b in zip(coeffs, head):
            if a:
                v = [x + a * y for x, y in zip(v, b)]
        v = _normalize_sign(v)
        if best is None or _rank_key(v) < _rank_key(best):
            best = v
    for b in rest:
        v = _normalize_sign(b)
        if _rank_key(v) < _rank_key(best):
            best = v
    return best


def twist_recurrence(rec: PRecurrence, P: Polynomial) -> PRecurrence:
    """Recurrence for ``b_n = P(n) a_n``.

    Multiplying ``sum_j B_j(n) a_{n+j} = 0`` by ``prod_k P(n+k)`` gives
    ``sum_j B_j(n) prod_{k != j} P(n+k) b_{n+j} = 0``.
    """
    r = rec.order
    shifted = [P.shift(Fraction(k)) for k in range(r + 1)]
    B = []
    for j, Bj in enumerate(rec.B):
        term = Bj
        for k in range(r + 1):
            if k != j:
                term = term * shifted[k]
        B.append(term)
    return PRecurrence(B, rec.offset)


def twist_series(s: SeriesHandle, P: BinomialPoly) -> SeriesHandle:
    """The series ``sum P(n) a_n z^n``."""
    name = f"{s.name}*[{P.to_text()}]"
    if s.recurrence is None:
        return DerivedSeries(s, lambda n, a: a * eval_binomial_poly(P, n), name)
    poly = P.to_polynomial()
    if poly.degree == 0:
        rec = s.recurrence
    else:
        rec = twist_recurrence(s.recurrence, poly)
    need = rec.required_initial()
    parent = s.coefficients(max(need - 1, len(s.initial) - 1, 0))
    init = [a * eval_binomial_poly(P, n) for n, a in enumerate(parent)]
    return SeriesHandle(rec, init, name=name, d=s.d)


def derivative_form_coefficients(coeffs: Sequence, c: Sequence[int], N: int) -> List:
    """``[z^n] sum_j c_j z^j f^(j)(z) / j!`` for n = 0..N, by formal differentiation."""
    out = [coeffs[0] * 0 for _ in range(N + 1)]
    for j, cj in enumerate(c):
        if not cj:
            continue
        # f^(j)/j! has coefficient C(k+j, j) a_{k+j} at z^k; shift by z^j
        for n in range(j, N + 1):
            k = n - j
            out[n] = out[n] + cj * math.comb(k + j, j) * coeffs[k + j]
    return out


__all__ = ["BinomialPoly", "binom", "eval_binomial_poly", "siegel_bound",
           "siegel_vanishing_poly", "twist_series", "twist_recurrence",
           "derivative_form_coefficients"]
