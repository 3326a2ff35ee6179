"""Exact Hankel determinants, kernel approximants, Pade reconstruction and
Kronecker-style rationality guessing."""
from __future__ import annotations

import math
from dataclasses import dataclass
from fractions import Fraction
from functools import lru_cache
from typing import List, Optional, Sequence, Tuple

import numpy as np
from sympy import prevprime
from sympy.ntheory import sqrt_mod

from .arith import QuadElement, format_element
from .errors import PreconditionFailed
from .numeric import MP, fmt
from .poly import ONE, ZERO, Polynomial, RationalFunction, poly_gcd, series_mul
from .series import SeriesHandle


# ---------------------------------------------------------------------------
# exact determinants
# ---------------------------------------------------------------------------
def hankel_matrix(coeffs: Sequence, ell: int, m: int) -> List[List]:
    return [[coeffs[ell + i + j] for j in range(m + 1)] for i in range(m + 1)]


def _lcm(a: int, b: int) -> int:
    return a * b // math.gcd(a, b)


def bareiss_det(M: List[List[int]]) -> int:
    """Fraction-free determinant of an integer matrix (row pivoting)."""
    n = len(M)
    if n == 0:
        return 1
    A = [list(r) for r in M]
    sign = 1
    prev = 1
    for k in range(n - 1):
        if A[k][k] == 0:
            for r in range(k + 1, n):
                if A[r][k] != 0:
                    A[k], A[r] = A[r], A[k]
                    sign = -sign
                    break
            else:
                return 0
        akk = A[k][k]
        rowk = A[k]
        for i in range(k + 1, n):
            rowi = A[i]
            aik = rowi[k]
            for j in range(k + 1, n):
                rowi[j] = (akk * rowi[j] - aik * rowk[j]) // prev
            rowi[k] = 0
        prev = akk
    return sign * A[n - 1][n - 1]


def scaled_integer_matrix(M: List[List[Fraction]]) -> Tuple[List[List[int]], List[int]]:
    """Rows multiplied by the lcm of their denominators."""
    rows, scales = [], []
    for row in M:
        L = 1
        for x in row:
            L = _lcm(L, Fraction(x).denominator)
        rows.append([int(Fraction(x) * L) for x in row])
        scales.append(L)
    return rows, scales


def det_fraction_free(M: List[List[Fraction]]) -> Fraction:
    ints, scales = scaled_integer_matrix(M)
    prod = 1
    for s in scales:
        prod *= s
    return Fraction(bareiss_det(ints), prod)


def det_field(M: List[List]) -> object:
    """Gaussian elimination over Q or Q(sqrt d)."""
    n = len(M)
    A = [list(r) for r in M]
    det = ONE
    for k in range(n):
        piv = next((r for r in range(k, n) if A[r][k]), None)
        if piv is None:
            return ZERO * A[0][0] if n else ONE
        if piv != k:
            A[k], A[piv] = A[piv], A[k]
            det = -det
        akk = A[k][k]
        det = det * akk
        inv = akk.inverse() if isinstance(akk, QuadElement) else 1 / akk
        for i in range(k + 1, n):
            if A[i][k]:
                f = A[i][k] * inv
                A[i] = [x - f * y for x, y in zip(A[i], A[k])]
    return det


def _is_rational_list(xs) -> bool:
    return all(not isinstance(x, QuadElement) or x.b == 0 for x in xs)


def _to_fraction(x) -> Fraction:
    return x.a if isinstance(x, QuadElement) else Fraction(x)


def hankel_det(s: SeriesHandle, ell: int, m: int):
    """``det (a_{ell+i+j})_{0<=i,j<=m}`` exactly."""
    coeffs = s.coefficients(ell + 2 * m)
    M = hankel_matrix(coeffs, ell, m)
    flat = coeffs[ell: ell + 2 * m + 1]
    if _is_rational_list(flat):
        det = det_fraction_free([[_to_fraction(x) for x in row] for row in M])
        if s.d is not None:
            return QuadElement(det, 0, s.d)
        return det
    return det_field(M)


def hankel_det_audit(s: SeriesHandle, ell: int, m: int):
    """Both elimination paths, for cross-checking: (fraction-free, field)."""
    coeffs = s.coefficients(ell + 2 * m)
    M = hankel_matrix(coeffs, ell, m)
    field_det = det_field(M)
    if not _is_rational_list(coeffs[ell: ell + 2 * m + 1]):
        return None, field_det
    frac = [[_to_fraction(x) for x in row] for row in M]
    ints, scales = scaled_integer_matrix(frac)
    return (bareiss_det(ints), scales), field_det


# ---------------------------------------------------------------------------
# modular zero tests
# ---------------------------------------------------------------------------
@lru_cache(maxsize=None)
def _primes(d: Optional[int], count: int = 3) -> Tuple[Tuple[int, int], ...]:
    """Primes below 2**31, each with a square root of d when d is given."""
    out = []
    p = 2 ** 31
    while len(out) < count:
        p = prevprime(p)
        if d is None:
            out.append((p, 0))
            continue
        if d % p == 0:
            continue
        r = sqrt_mod(d % p, p)
        if r is not None:
            out.append((p, int(r)))
    return tuple(out)


def _mod(x, p: int, root: int) -> Optional[int]:
    if isinstance(x, QuadElement):
        a, b = x.a, x.b
        if a.denominator % p == 0 or b.denominator % p == 0:
            return None
        return (a.numerator * pow(a.denominator, -1, p)
                + b.numerator * pow(b.denominator, -1, p) * root) % p
    x = Fraction(x)
    if x.denominator % p == 0:
        return None
    return x.numerator * pow(x.denominator, -1, p) % p


def det_mod(M: np.ndarray, p: int) -> int:
    A = M.copy()
    n = A.shape[0]
    det = 1
    for c in range(n):
        nz = np.nonzero(A[c:, c])[0]
        if nz.size == 0:
            return 0
        r = c + int(nz[0])
        if r != c:
            A[[c, r]] = A[[r, c]]
            det = -det
        piv = int(A[c, c])
        det = det * piv % p
        inv = pow(piv, -1, p)
        row = (A[c, c:] * inv) % p
        if c + 1 < n:
            col = A[c + 1:, c].copy()
            A[c + 1:, c:] = (A[c + 1:, c:] - np.outer(col, row) % p) % p
    return det % p


def _mod_coeffs(coeffs: Sequence, d: Optional[int]):
    """Residues of the coefficients for the first prime that divides no denominator."""
    for p, root in _primes(d):
        vals = [_mod(x, p, root) for x in coeffs]
        if all(v is not None for v in vals):
            return p, np.array(vals, dtype=np.int64)
    return None, None


def hankel_probably_zero(s: SeriesHandle, ell: int, m: int) -> bool:
    """False means certainly nonzero; True means zero modulo every prime tried."""
    coeffs = s.coefficients(ell + 2 * m)[ell:]
    seen = False
    for p, root in _primes(s.d):
        vals = [_mod(x, p, root) for x in coeffs]
        if any(v is None for v in vals):
            continue
        seen = True
        arr = np.array(vals, dtype=np.int64)
        idx = np.arange(m + 1)
        M = arr[idx[:, None] + idx[None, :]]
        if det_mod(M, p) != 0:
            return False
    if not seen:
        return not hankel_det(s, ell, m)
    return True


def hankel_is_zero(s: SeriesHandle, ell: int, m: int) -> bool:
    """Exact zero test, using a modular filter first."""
    if not hankel_probably_zero(s, ell, m):
        return False
    return not hankel_det(s, ell, m)


# ---------------------------------------------------------------------------
# scans
# ---------------------------------------------------------------------------
def log_abs(x):
    """``log|x|`` at working precision from the exact value."""
    if isinstance(x, QuadElement):
        if x.b == 0:
            return log_abs(x.a)
        if x.d < 0:
            n = x.norm()
            return (MP.log(n.numerator) - MP.log(n.denominator)) / 2
        with MP.workprec(MP.prec * 4):
            v = MP.mpf(x.a.numerator) / x.a.denominator + \
                MP.mpf(x.b.numerator) / x.b.denominator * MP.sqrt(x.d)
            return MP.log(abs(v))
    x = Fraction(x)
    if x == 0:
        return MP.ninf
    return MP.log(abs(x.numerator)) - MP.log(x.denominator)


@dataclass(frozen=True)
class HankelEntry:
    n: int
    delta: object
    is_zero: bool
    log_abs: object


@dataclass
class HankelScan:
    entries: List[HankelEntry]

    def nonzero(self) -> List[HankelEntry]:
        return [e for e in self.entries if not e.is_zero]

    def to_csv(self, digits: int = 30) -> str:
        lines = ["n,delta_exact,is_zero,log_abs"]
        for e in self.entries:
            la = "" if e.is_zero else fmt(e.log_abs, digits)
            lines.append(f"{e.n},{format_element(e.delta)},{int(e.is_zero)},{la}")
        return "\n".join(lines) + "\n"


def hankel_scan(s: SeriesHandle, n_max: int, n_min: int = 0) -> HankelScan:
    entries = []
    for n in range(n_min, n_max + 1):
        delta = hankel_det(s, 0, n)
        z = not delta
        entries.append(HankelEntry(n, delta, z, None if z else log_abs(delta)))
    return HankelScan(entries)


# ---------------------------------------------------------------------------
# kernel approximants and Pade
# ---------------------------------------------------------------------------
def _rref_first_kernel_vector(M: List[List]) -> Optional[List]:
    """Kernel vector attached to the first free column of the reduced echelon form."""
    rows = [list(r) for r in M]
    ncols = len(rows[0]) if rows else 0
    pivots = []
    r = 0
    for c in range(ncols):
        piv = next((i for i in range(r, len(rows)) if rows[i][c]), None)
        if piv is None:
            # first free column: read off the kernel vector
            v = [ZERO] * ncols
            v[c] = ONE
            for i, pc in enumerate(pivots):
                v[pc] = -rows[i][c]
            return v
        rows[r], rows[piv] = rows[piv], rows[r]
        pv = rows[r][c]
        inv = pv.inverse() if isinstance(pv, QuadElement) else 1 / pv
        rows[r] = [x * inv for x in rows[r]]
        for i in range(len(rows)):
            if i != r and rows[i][c]:
                f = rows[i][c]
                rows[i] = [x - f * y for x, y in zip(rows[i], rows[r])]
        pivots.append(c)
        r += 1
    return None


def _normalize_lowest(Q: Polynomial) -> Polynomial:
    k = Q.order()
    c = Q[k]
    return Q * (c.inverse() if isinstance(c, QuadElement) else 1 / c)


def kernel_approximant(s: SeriesHandle, ell: int, m: int) -> Optional[Tuple[Polynomial, Polynomial]]:
    """``(P, Q)`` with ``deg Q <= m``, ``deg P <= ell+m-1`` and
    ``P - Q f = O(z^(ell+2m+1))``, or ``None`` when the determinant is nonzero."""
    coeffs = s.coefficients(ell + 2 * m)
    # row i, column k: coefficient of Q_k in [z^(ell+m+i)] (Q f)
    M = [[coeffs[ell + m + i - k] if ell + m + i - k >= 0 else ZERO for k in range(m + 1)]
         for i in range(m + 1)]
    v = _rref_first_kernel_vector(M)
    if v is None:
        return None
    Q = _normalize_lowest(Polynomial(v))
    P = Polynomial(series_mul(list(Q.coeffs), coeffs, ell + m))
    got = agreement(P, Q, coeffs)
    assert got is None or got >= ell + 2 * m + 1, "kernel approximant contract violated"
    return P, Q


def agreement(P: Polynomial, Q: Polynomial, coeffs: Sequence) -> Optional[int]:
    n = len(coeffs)
    qf = series_mul(list(Q.coeffs), list(coeffs), n)
    for k in range(n):
        if P[k] - qf[k]:
            return k
    return None


def _reduce_pq(P: Polynomial, Q: Polynomial) -> Tuple[Polynomial, Polynomial]:
    g = poly_gcd(P, Q) if not P.is_zero() else Polynomial([ONE])
    if g.degree > 0:
        P, Q = P // g, Q // g
    if P.is_zero():
        return P, Polynomial([ONE])
    c = Q[0] if Q[0] else Q.lc()
    inv = c.inverse() if isinstance(c, QuadElement) else 1 / c
    return P * inv, Q * inv


def pade_from_vanishing_run(s: SeriesHandle, m: int, d: int) -> Tuple[Polynomial, Polynomial]:
    """Reconstruct ``P/Q`` from ``Delta_m = ... = Delta_{m+d} = 0``."""
    pairs = []
    for i in range(d + 1):
        if not hankel_is_zero(s, 0, m + i):
            raise PreconditionFailed(f"Delta_{m + i} is not zero")
        pq = kernel_approximant(s, 0, m + i)
        assert pq is not None
        pairs.append(pq)
    for (P0, Q0), (P1, Q1) in zip(pairs, pairs[1:]):
        assert P0 * Q1 == P1 * Q0, "consecutive approximants disagree"
    P, Q = _reduce_pq(*pairs[0])
    if not Q[0]:
        raise PreconditionFailed("reconstructed denominator vanishes at 0")
    assert P.degree <= m - 1 or P.is_zero()
    assert Q.degree <= m
    coeffs = s.coefficients(m + d)
    got = agreement(P, Q, coeffs)
    assert got is None, "Pade approximant fails the agreement order"
    return P, Q


@dataclass
class KroneckerResult:
    rational: Optional[RationalFunction]
    run_start: Optional[int]
    reconstruction_horizon: Optional[int]
    validated_through: Optional[int]
    scanned: int

    def __bool__(self):
        return self.rational is not None


def kronecker_guess_details(s: SeriesHandle, n_max: int, window: int,
                            extra: int = 20) -> KroneckerResult:
    if window < 2:
        raise PreconditionFailed("window must be at least 2")
    run = 0
    for n in range(n_max + 1):
        if hankel_probably_zero(s, 0, n):
            run += 1
            if run >= window:
                m = n - window + 1
                if all(hankel_is_zero(s, 0, k) for k in range(m, n + 1)):
                    break
                run = 0
        else:
            run = 0
    else:
        return KroneckerResult(None, None, None, None, n_max)
    P, Q = pade_from_vanishing_run(s, m, window - 1)
    recon = 2 * (m + window - 1)
    horizon = max(recon + max(extra, window), s.cached() - 1)
    try:
        coeffs = s.coefficients(horizon)
    except PreconditionFailed:
        coeffs = list(s.snapshot())
        horizon = len(coeffs) - 1
    if horizon - recon < window:
        return KroneckerResult(None, m, recon, None, n_max)
    if agreement(P, Q, coeffs) is not None:
        return KroneckerResult(None, m, recon, None, n_max)
    return KroneckerResult(RationalFunction(P, Q), m, recon, horizon, n_max)


def kronecker_guess(s: SeriesHandle, n_max: int, window: int) -> Optional[RationalFunction]:
    return kronecker_guess_details(s, n_max, window).rational
