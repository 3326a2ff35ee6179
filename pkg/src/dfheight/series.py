"""D-finite series: operators, P-recurrences, coefficient streams and the
rational-approximation machinery built on top of them."""
from __future__ import annotations

import math
import threading
from dataclasses import dataclass, field
from fractions import Fraction
from typing import Callable, List, Optional, Sequence, Tuple

from .arith import QuadElement, coerce, format_element
from .errors import (InconsistentInitialTerms, InsufficientData, SchemaError,
                     SingularIndexUncovered, SingularMatrix, ZeroAtOrigin)
from .poly import (ONE, ZERO, Polynomial, RationalFunction, falling_factorial_poly,
                   series_mul)


def _as_poly(p) -> Polynomial:
    if isinstance(p, Polynomial):
        return p
    if isinstance(p, (list, tuple)):
        return Polynomial(p)
    return Polynomial([p])


def _inv(c):
    return c.inverse() if isinstance(c, QuadElement) else 1 / Fraction(c)


# ---------------------------------------------------------------------------
# operators and recurrences
# ---------------------------------------------------------------------------
class DiffOperator:
    """``A[0] D^p + A[1] D^(p-1) + ... + A[p]`` with polynomial ``A[i]``."""

    __slots__ = ("A", "p", "delta")

    def __init__(self, A: Sequence):
        polys = tuple(_as_poly(a) for a in A)
        if not polys or polys[0].is_zero():
            raise SchemaError("leading operator coefficient A_0 must be nonzero")
        self.A = polys
        self.p = len(polys) - 1
        self.delta = max(max(a.degree, 0) for a in polys)

    def __repr__(self):
        return "DiffOperator([" + ", ".join(a.to_text() for a in self.A) + "])"

    def __eq__(self, other):
        return isinstance(other, DiffOperator) and self.A == other.A

    def __hash__(self):
        return hash(self.A)

    def apply_rational(self, R: RationalFunction) -> RationalFunction:
        """``L(R)`` computed with exact rational-function calculus."""
        out = RationalFunction(0)
        deriv = R
        derivs = [R]
        for _ in range(self.p):
            deriv = deriv.derivative()
            derivs.append(deriv)
        for i, a in enumerate(self.A):
            if not a.is_zero():
                out = out + derivs[self.p - i] * RationalFunction(a)
        return out

    def apply_truncated(self, coeffs: Sequence, N: int) -> List:
        """Coefficients 0..N of ``L f`` given at least N+p+1 coefficients of f."""
        need = N + self.p + 1
        if len(coeffs) < need:
            raise InsufficientData(f"need {need} coefficients, have {len(coeffs)}")
        out = [ZERO] * (N + 1)
        for i, a in enumerate(self.A):
            j = self.p - i
            dj = [falling(n + j, j) * coeffs[n + j] for n in range(N + 1)]
            prod = series_mul(list(a.coeffs), dj, N + 1)
            out = [x + y for x, y in zip(out, prod)]
        return out


def falling(x: int, j: int) -> int:
    """x (x-1) ... (x-j+1)."""
    out = 1
    for k in range(j):
        out *= x - k
    return out


class PRecurrence:
    """``sum_j B[j](n) a_{n+j} = 0`` for every ``n >= offset``."""

    __slots__ = ("B", "offset", "order", "singular_indices", "_int_rows")

    def __init__(self, B: Sequence, offset: int = 0):
        polys = [_as_poly(b) for b in B]
        while polys and polys[-1].is_zero():
            polys.pop()
        if not polys:
            raise SchemaError("recurrence has no nonzero coefficient")
        if offset < 0:
            raise SchemaError("recurrence offset must be nonnegative")
        self.B = tuple(polys)
        self.offset = int(offset)
        self.order = len(polys) - 1
        self.singular_indices = tuple(self.B[-1].nonnegative_integer_roots())
        self._int_rows = None
        if all(b.is_rational() for b in self.B):
            # integer coefficient rows make term generation much cheaper
            den = 1
            for b in self.B:
                for c in b.coeffs:
                    c = c.a if isinstance(c, QuadElement) else c
                    den = den * c.denominator // math.gcd(den, c.denominator)
            self._int_rows = [
                [int((c.a if isinstance(c, QuadElement) else c) * den) for c in b.coeffs]
                for b in self.B
            ]

    def __repr__(self):
        body = ", ".join(b.to_text("n") for b in self.B)
        return f"PRecurrence([{body}], offset={self.offset})"

    def __eq__(self, other):
        return (isinstance(other, PRecurrence) and self.B == other.B
                and self.offset == other.offset)

    def __hash__(self):
        return hash((self.B, self.offset))

    def coeff_values(self, n: int) -> List:
        if self._int_rows is not None:
            vals = []
            for row in self._int_rows:
                acc = 0
                for c in reversed(row):
                    acc = acc * n + c
                vals.append(acc)
            return vals
        return [b(Fraction(n)) for b in self.B]

    def singular_n(self) -> List[int]:
        """Singular values of ``n`` at or beyond the offset."""
        return [n for n in self.singular_indices if n >= self.offset]

    def required_initial(self) -> int:
        """How many leading terms a user must supply."""
        need = self.offset + self.order
        for n in self.singular_n():
            need = max(need, n + self.order + 1)
        return need

    def residual(self, terms: Sequence, n: int):
        vals = self.coeff_values(n)
        acc = ZERO
        for j, v in enumerate(vals):
            if v:
                acc = acc + v * terms[n + j]
        return acc


def ode_to_recurrence(L: DiffOperator) -> PRecurrence:
    """Coefficient extraction of ``[z^n] L f``.

    ``z^k D^j`` contributes ``(n-k+1)...(n-k+j) a_{n-k+j}``.  The result is
    shifted so every index is nonnegative; no common factor is divided out,
    since that could enlarge the solution space.
    """
    contrib = {}
    for i, a in enumerate(L.A):
        j = L.p - i
        for k, alpha in enumerate(a.coeffs):
            if not alpha:
                continue
            t = j - k
            term = falling_factorial_poly(t, j) * alpha
            contrib[t] = contrib.get(t, Polynomial()) + term
    contrib = {t: c for t, c in contrib.items() if not c.is_zero()}
    if not contrib:
        raise SchemaError("operator annihilates every power series")
    t_min, t_max = min(contrib), max(contrib)
    B = []
    for t in range(t_min, t_max + 1):
        c = contrib.get(t, Polynomial())
        B.append(c.shift(Fraction(-t_min)))
    return PRecurrence(B, offset=max(0, t_min))


def _pre_offset_checks(L: DiffOperator) -> List[Tuple[int, List]]:
    """Equations ``[z^n] L f = 0`` that the shifted recurrence does not cover.

    They exist only when some ``z^k D^j`` has ``k > j``; returned as
    (n, [(index, coefficient), ...]) pairs.
    """
    t_min = min(L.p - i - k for i, a in enumerate(L.A)
                for k, c in enumerate(a.coeffs) if c)
    eqs = []
    for n in range(0, max(0, -t_min)):
        row = []
        for i, a in enumerate(L.A):
            j = L.p - i
            for k, alpha in enumerate(a.coeffs):
                idx = n - k + j
                if alpha and n - k >= 0:
                    row.append((idx, alpha * falling(idx, j)))
        eqs.append((n, row))
    return eqs


# ---------------------------------------------------------------------------
# series handles
# ---------------------------------------------------------------------------
class SeriesHandle:
    """Power series given by a P-recurrence plus enough initial terms.

    The coefficient cache only ever grows; extension is serialized by a lock
    and readers receive immutable tuples.
    """

    def __init__(self, recurrence: PRecurrence, initial: Sequence, name: str = "series",
                 d: Optional[int] = None, operator: Optional[DiffOperator] = None):
        self.recurrence = recurrence
        self.name = name
        self.d = d
        self.operator = operator
        init = [coerce(x, d) for x in initial]
        need = recurrence.required_initial()
        if len(init) < need:
            missing = [n + recurrence.order for n in recurrence.singular_n()
                       if n + recurrence.order >= len(init)]
            where = f" (singular index {missing[0]})" if missing else ""
            raise SingularIndexUncovered(
                f"{name}: recurrence needs {need} initial terms, got {len(init)}{where}")
        self._check_consistency(init)
        if operator is not None:
            for n, row in _pre_offset_checks(operator):
                if all(idx < len(init) for idx, _ in row):
                    acc = sum((c * init[idx] for idx, c in row), ZERO)
                    if acc:
                        raise InconsistentInitialTerms(
                            f"{name}: initial terms violate the operator at z^{n}")
        self._initial = tuple(init)
        self._cache: Tuple = tuple(init)
        self._lock = threading.Lock()

    def _check_consistency(self, init: Sequence) -> None:
        rec = self.recurrence
        n = rec.offset
        while n + rec.order < len(init):
            if rec.residual(init, n):
                raise InconsistentInitialTerms(
                    f"{self.name}: initial terms violate the recurrence at n={n}")
            n += 1

    @property
    def initial(self) -> Tuple:
        return self._initial

    def cached(self) -> int:
        return len(self._cache)

    def snapshot(self) -> Tuple:
        """Frozen prefix, safe to share between threads."""
        return self._cache

    def _extend(self, upto: int) -> None:
        rec = self.recurrence
        r = rec.order
        with self._lock:
            terms = list(self._cache)
            while len(terms) <= upto:
                m = len(terms)
                n = m - r
                vals = rec.coeff_values(n)
                lead = vals[r]
                if not lead:
                    raise SingularIndexUncovered(f"{self.name}: a_{m} sits on a singular index")
                acc = ZERO
                for j in range(r):
                    v = vals[j]
                    if v:
                        acc = acc + v * terms[n + j]
                if isinstance(lead, QuadElement):
                    terms.append(-acc * lead.inverse())
                else:
                    terms.append(-acc / lead)
            self._cache = tuple(terms)

    def coefficients(self, N: int) -> List:
        """``a_0 .. a_N`` exactly."""
        if N < 0:
            return []
        if N >= len(self._cache):
            self._extend(N)
        return list(self._cache[: N + 1])

    def coefficient(self, n: int):
        if n >= len(self._cache):
            self._extend(n)
        return self._cache[n]

    def __repr__(self):
        return f"SeriesHandle({self.name!r}, {self.recurrence!r})"


class PrefixSeries(SeriesHandle):
    """A series known only through an explicit coefficient list.

    Used for inputs that are not D-finite (test harness only).
    """

    def __init__(self, coeffs: Sequence, name: str = "prefix", d: Optional[int] = None):
        self.recurrence = None
        self.name = name
        self.d = d
        self.operator = None
        self._initial = tuple(coerce(x, d) for x in coeffs)
        self._cache = self._initial
        self._lock = threading.Lock()

    def _extend(self, upto: int) -> None:
        raise InsufficientData(f"{self.name}: only {len(self._cache)} coefficients known")


class DerivedSeries(SeriesHandle):
    """Coefficients ``fn(n, parent_a_n)`` computed lazily over a parent stream."""

    def __init__(self, parent: SeriesHandle, fn: Callable, name: str,
                 recurrence: Optional[PRecurrence] = None):
        self.parent = parent
        self.fn = fn
        self.recurrence = recurrence
        self.name = name
        self.d = parent.d
        self.operator = None
        self._initial = ()
        self._cache = ()
        self._lock = threading.Lock()

    def _extend(self, upto: int) -> None:
        src = self.parent.coefficients(upto)
        with self._lock:
            terms = list(self._cache)
            for n in range(len(terms), upto + 1):
                terms.append(self.fn(n, src[n]))
            self._cache = tuple(terms)


def series_from_operator(L: DiffOperator, initial: Sequence, name: str = "series",
                         d: Optional[int] = None) -> SeriesHandle:
    return SeriesHandle(ode_to_recurrence(L), initial, name=name, d=d, operator=L)


def series_from_recurrence(B: Sequence, initial: Sequence, offset: int = 0,
                           name: str = "series", d: Optional[int] = None) -> SeriesHandle:
    return SeriesHandle(PRecurrence(B, offset), initial, name=name, d=d)


def coefficients(s: SeriesHandle, N: int) -> List:
    return s.coefficients(N)


def verify_annihilation(s: SeriesHandle, L: DiffOperator, N: int) -> bool:
    """Check ``[z^n] L f == 0`` for n = 0..N by formal differentiation."""
    if N < L.p + L.delta:
        raise InsufficientData(f"N must be at least p + delta = {L.p + L.delta}")
    coeffs = s.coefficients(N + L.p)
    return not any(L.apply_truncated(coeffs, N))


# ---------------------------------------------------------------------------
# derivative reduction and basis change
# ---------------------------------------------------------------------------
def reduce_derivative_numerators(L: DiffOperator, j: int) -> List[Polynomial]:
    """Polynomials ``N_1..N_p`` with ``f^(p+j) = sum_i N_i / A_0^(j+1) f^(p-i)``."""
    A0 = L.A[0]
    dA0 = A0.derivative()
    p = L.p
    num = [Polynomial()] + [-L.A[i] for i in range(1, p + 1)]  # 1-based
    for jj in range(j):
        nxt = [Polynomial()]
        for i in range(1, p + 1):
            t = num[i].derivative() * A0 - dA0 * num[i] * (jj + 1) - num[1] * L.A[i]
            if i < p:
                t = t + A0 * num[i + 1]
            nxt.append(t)
        num = nxt
    for i in range(1, p + 1):
        if num[i].degree > L.delta * (j + 1):
            raise AssertionError("derivative reduction exceeded its degree bound")
    return num[1:]


def reduce_derivative(L: DiffOperator, j: int) -> List[RationalFunction]:
    """Coefficients of ``f^(p+j)`` in the basis ``f, f', ..., f^(p-1)``."""
    nums = reduce_derivative_numerators(L, j)
    den = L.A[0] ** (j + 1)
    p = L.p
    # nums[i-1] multiplies f^(p-i); basis position k = p - i
    return [RationalFunction(nums[p - k - 1], den) for k in range(p)]


def _derivative_in_basis(L: DiffOperator, m: int, cache: dict) -> List[RationalFunction]:
    p = L.p
    if m < p:
        return [RationalFunction(ONE if k == m else ZERO) for k in range(p)]
    if m not in cache:
        cache[m] = reduce_derivative(L, m - p)
    return cache[m]


def _mat_inverse(C: List[List[RationalFunction]]) -> List[List[RationalFunction]]:
    n = len(C)
    M = [list(row) + [RationalFunction(ONE if i == j else ZERO) for j in range(n)]
         for i, row in enumerate(C)]
    for col in range(n):
        piv = None
        best = None
        for r in range(col, n):
            if not M[r][col].is_zero():
                score = M[r][col].max_degree()
                if best is None or score < best:
                    piv, best = r, score
        if piv is None:
            raise SingularMatrix("basis change matrix is singular")
        M[col], M[piv] = M[piv], M[col]
        inv = M[col][col].inverse()
        M[col] = [x * inv for x in M[col]]
        for r in range(n):
            if r != col and not M[r][col].is_zero():
                fac = M[r][col]
                M[r] = [x - fac * y for x, y in zip(M[r], M[col])]
    return [row[n:] for row in M]


def mat_mul(X, Y):
    n, k, m = len(X), len(Y), len(Y[0])
    out = []
    for i in range(n):
        row = []
        for j in range(m):
            acc = RationalFunction(0)
            for t in range(k):
                if not X[i][t].is_zero() and not Y[t][j].is_zero():
                    acc = acc + X[i][t] * Y[t][j]
            row.append(acc)
        out.append(row)
    return out


def basis_change_matrix(L: DiffOperator, P_list: Sequence):
    """Matrices ``(C, B)`` with ``(g, g', ...)^T = C (f, f', ...)^T`` and ``B = C^-1``.

    Here ``g = sum_i P_i f^(i)``.
    """
    P_list = [_as_poly(P) for P in P_list]
    p = L.p
    n = max([len(P_list) - 1, p - 1] + [max(P.degree, 0) for P in P_list])
    cache: dict = {}
    binom = math.comb
    C = []
    for k in range(p):
        row = [RationalFunction(0) for _ in range(p)]
        for i, P in enumerate(P_list):
            dP = P
            ders = [P]
            for _ in range(k):
                dP = dP.derivative()
                ders.append(dP)
            for t in range(k + 1):
                coef = ders[k - t] * binom(k, t)
                if coef.is_zero():
                    continue
                vec = _derivative_in_basis(L, i + t, cache)
                for col in range(p):
                    if not vec[col].is_zero():
                        row[col] = row[col] + vec[col] * RationalFunction(coef)
        C.append(row)
    B = _mat_inverse(C)
    bound = (2 * L.delta + 1) * n * p
    for row in B:
        for e in row:
            if max(e.num.degree, e.den.degree) > bound:
                raise AssertionError(f"basis change entry exceeds degree bound {bound}")
    return C, B


# ---------------------------------------------------------------------------
# the rational approximation principle
# ---------------------------------------------------------------------------
def exceptional_orders(L: DiffOperator) -> List[int]:
    """Nonnegative integer roots of the indicial-type polynomial chi."""
    best = None
    members = []
    for i, a in enumerate(L.A):
        if a.is_zero():
            continue
        e = a.order()
        key = i + e
        if best is None or key < best:
            best, members = key, [(i, a[e])]
        elif key == best:
            members.append((i, a[e]))
    chi = Polynomial()
    for i, alpha in members:
        chi = chi + falling_factorial_poly(0, L.p - i) * alpha
    roots = chi.nonnegative_integer_roots()
    assert len(roots) <= L.p
    return roots


def exceptional_polynomial(L: DiffOperator) -> Polynomial:
    best = min(i + a.order() for i, a in enumerate(L.A) if not a.is_zero())
    chi = Polynomial()
    for i, a in enumerate(L.A):
        if not a.is_zero() and i + a.order() == best:
            chi = chi + falling_factorial_poly(0, L.p - i) * a[a.order()]
    return chi


@dataclass(frozen=True)
class ApproxVerdict:
    kind: str  # ForcedEqual | AnnihilatedButExceptional | Inconclusive
    m: Optional[int]  # None means no disagreement up to the cap
    threshold: int
    cap: int
    annihilates: Optional[bool] = None
    exceptional: Tuple[int, ...] = field(default_factory=tuple)

    def to_dict(self):
        return {"verdict": self.kind, "order": "inf" if self.m is None else self.m,
                "threshold": self.threshold, "cap": self.cap,
                "annihilates": self.annihilates, "exceptional": list(self.exceptional)}


def agreement_order(P: Polynomial, Q: Polynomial, coeffs: Sequence) -> Optional[int]:
    """First index where ``P - Q f`` has a nonzero coefficient, ``None`` if none."""
    n = len(coeffs)
    qf = series_mul(list(Q.coeffs), list(coeffs), n)
    for k in range(n):
        if P[k] - qf[k]:
            return k
    return None


def rational_approx_principle(L: DiffOperator, P, Q, s: SeriesHandle,
                              cap: Optional[int] = None) -> ApproxVerdict:
    P, Q = _as_poly(P), _as_poly(Q)
    if not Q[0]:
        raise ZeroAtOrigin("Q(0) must be nonzero")
    ell = max(P.degree, Q.degree, 0)
    threshold = (L.p + 2) * ell + L.delta + L.p
    if cap is None:
        cap = max(4 * threshold, threshold + 1)
    m = agreement_order(P, Q, s.coefficients(cap))
    T = tuple(exceptional_orders(L))
    if m is not None and m <= threshold:
        return ApproxVerdict("Inconclusive", m, threshold, cap, None, T)
    ann = L.apply_rational(RationalFunction(P, Q)).is_zero()
    if not ann:
        # exceptional order: report it, claim nothing
        return ApproxVerdict("Inconclusive", m, threshold, cap, False, T)
    if m is not None and m in T:
        return ApproxVerdict("AnnihilatedButExceptional", m, threshold, cap, True, T)
    return ApproxVerdict("ForcedEqual", m, threshold, cap, True, T)


def describe(s: SeriesHandle, N: int) -> List[str]:
    return [format_element(c) for c in s.coefficients(N)]
