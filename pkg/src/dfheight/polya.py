"""Disk-case Polya bounds for Hankel determinants and decay fits on exact scans."""
from __future__ import annotations

import math
from dataclasses import dataclass, field
from fractions import Fraction
from typing import List, Optional, Sequence, Tuple

from .arith import QuadElement
from .errors import InsufficientData, MajorantViolated, PreconditionFailed, RadiusTooLarge
from .hankel import HankelScan
from .numeric import MP, fmt, mpf, round_up
from .series import SeriesHandle


def _real(x) -> Fraction:
    if isinstance(x, Fraction):
        return x
    if isinstance(x, int):
        return Fraction(x)
    return Fraction(str(x))


def _abs_mp(x):
    if isinstance(x, QuadElement):
        if x.b == 0:
            return abs(mpf(x.a))
        if x.d < 0:
            return MP.sqrt(mpf(x.norm()))
        return abs(mpf(x.a) + mpf(x.b) * MP.sqrt(x.d))
    return abs(mpf(x))


def _complex_mp(x):
    if isinstance(x, QuadElement):
        if x.d < 0:
            return MP.mpc(mpf(x.a), mpf(x.b) * MP.sqrt(-x.d))
        return MP.mpc(mpf(x.a) + mpf(x.b) * MP.sqrt(x.d), 0)
    return MP.mpc(mpf(x), 0)


def _majorant_ok(a, n: int, A: Fraction, rho0: Fraction) -> bool:
    if isinstance(a, QuadElement) and a.b != 0:
        if a.d < 0:
            return a.norm() * rho0 ** (2 * n) <= A * A
        return _abs_mp(a) * mpf(rho0) ** n <= mpf(A) * (1 + MP.ldexp(1, -200))
    q = a.a if isinstance(a, QuadElement) else Fraction(a)
    return abs(q) * rho0 ** n <= A


@dataclass(frozen=True)
class SupNormBound:
    value: object
    grid_max: object
    safety: object
    tail: object
    terms: int


def sup_norm_details(s: SeriesHandle, r, majorant: Tuple, grid: int = 256,
                     tail_tol=Fraction(1, 10 ** 12)) -> SupNormBound:
    r = _real(r)
    A, rho0 = _real(majorant[0]), _real(majorant[1])
    if r <= 0 or grid < 1:
        raise PreconditionFailed("radius and grid must be positive")
    if r >= rho0:
        raise RadiusTooLarge(f"r = {r} must be below the majorant radius {rho0}")
    q = r / rho0
    tail_tol = _real(tail_tol)
    # smallest M with A q^(M+1) / (1 - q) <= tail_tol
    M = 0
    if A > 0:
        while A * q ** (M + 1) / (1 - q) > tail_tol:
            M += 1
    coeffs = s.coefficients(M)
    for n, a in enumerate(coeffs):
        if a and not _majorant_ok(a, n, A, rho0):
            raise MajorantViolated(f"|a_{n}| exceeds {A} * {rho0}^-{n}")
    tail = round_up(mpf(A * q ** (M + 1) / (1 - q)))
    rr = mpf(r)
    cvals = [_complex_mp(a) for a in coeffs]
    best = MP.zero
    for k in range(grid):
        z = rr * MP.expjpi(MP.mpf(2 * k) / grid)
        acc = MP.mpc(0)
        for c in reversed(cvals):
            acc = acc * z + c
        v = abs(acc)
        if v > best:
            best = v
    deriv = MP.zero
    rpow = MP.one
    for n in range(1, len(cvals)):
        deriv += n * abs(cvals[n]) * rpow
        rpow *= rr
    safety = round_up(MP.pi * rr / grid * deriv)
    total = round_up(round_up(best) + safety + tail)
    return SupNormBound(total, best, safety, tail, M)


def sup_norm_on_circle(s: SeriesHandle, r, majorant: Tuple, grid: int = 256,
                       tail_tol=Fraction(1, 10 ** 12)):
    """Rigorous upper bound for ``max |f|`` on ``|z| = r``."""
    return sup_norm_details(s, r, majorant, grid, tail_tol).value


@dataclass(frozen=True)
class DiskBoundInput:
    M: object
    r: object
    C: object = 1
    C1: object = 1
    C2: object = 1

    def __post_init__(self):
        if _to_mp(self.r) <= 1:
            raise PreconditionFailed("radius must exceed 1")
        if self.M < 0:
            raise PreconditionFailed("M must be nonnegative")


def _to_mp(x):
    if hasattr(x, "_mpf_"):
        return x
    return mpf(_real(x))


def polya_bound(inp: DiskBoundInput, n: int):
    """``(n+1)! (C M)^(n+1) r^(-n(n+1))``."""
    CM = _to_mp(inp.C) * _to_mp(inp.M)
    if CM == 0:
        return MP.zero
    val = MP.factorial(n + 1) * CM ** (n + 1) * _to_mp(inp.r) ** (-n * (n + 1))
    return round_up(val)


def polya_bound_twisted(inp: DiskBoundInput, c: Sequence, n: int):
    """``(n+1)! C1^(n+1) (sum_j |c_j| j! C2^j)^(n+1) r^(-n(n+1))``."""
    C2 = _to_mp(inp.C2)
    S = MP.zero
    for j, cj in enumerate(c):
        S += abs(_to_mp(cj)) * math.factorial(j) * C2 ** j
    if S == 0:
        return MP.zero
    val = (MP.factorial(n + 1) * _to_mp(inp.C1) ** (n + 1) * S ** (n + 1)
           * _to_mp(inp.r) ** (-n * (n + 1)))
    return round_up(val)


@dataclass
class FitReport:
    sigma: object
    residual: object
    n_used: List[int]
    beta: object = None
    gamma: object = None
    implied_r: object = field(init=False)

    def __post_init__(self):
        self.implied_r = MP.exp(self.sigma)

    def to_dict(self, digits: int = 30) -> dict:
        return {"sigma": fmt(self.sigma, digits), "residual": fmt(self.residual, digits),
                "n_used": list(self.n_used), "implied_r": fmt(self.implied_r, digits)}


def decay_exponent_fit(scan: HankelScan, n_min: int = 0, n_max: Optional[int] = None) -> FitReport:
    """Least squares ``-log|Delta_n| ~ sigma n(n+1) + beta (n+1) + gamma``.

    The linear term absorbs the ``(n+1) log|c|`` shift caused by scaling the
    series by ``c``, so ``sigma`` is scale invariant.
    """
    pts = [e for e in scan.entries if not e.is_zero and e.n >= n_min
           and (n_max is None or e.n <= n_max)]
    if len(pts) < 5:
        raise InsufficientData(f"need 5 nonzero determinants, have {len(pts)}")
    rows = [(MP.mpf(e.n * (e.n + 1)), MP.mpf(e.n + 1), MP.one) for e in pts]
    ys = [-e.log_abs for e in pts]
    G = MP.matrix(3, 3)
    rhs = MP.matrix(3, 1)
    for row, y in zip(rows, ys):
        for i in range(3):
            rhs[i] += row[i] * y
            for j in range(3):
                G[i, j] += row[i] * row[j]
    sol = MP.lu_solve(G, rhs)
    res = MP.sqrt(MP.fsum((y - sum(r * c for r, c in zip(row, sol))) ** 2
                          for row, y in zip(rows, ys)))
    return FitReport(sol[0], res, [e.n for e in pts], sol[1], sol[2])


def exact_le(x, bound) -> bool:
    """``|x| <= bound`` for an exact field element and a real bound.

    ``|x|`` is rounded upward first, so a True answer is trustworthy.
    """
    if not x:
        return bound >= 0
    return round_up(_abs_mp(x)) <= bound


@dataclass(frozen=True)
class SoundnessRow:
    n: int
    delta: object
    bound: object
    sound: bool


def polya_soundness(s: SeriesHandle, inp: DiskBoundInput, n_max: int) -> List[SoundnessRow]:
    """Compare every exact ``Delta_n`` (n <= n_max) against the disk bound."""
    from .hankel import hankel_det
    rows = []
    for n in range(n_max + 1):
        delta = hankel_det(s, 0, n)
        bound = polya_bound(inp, n)
        rows.append(SoundnessRow(n, delta, bound, exact_le(delta, bound)))
    return rows
