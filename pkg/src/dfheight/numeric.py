"""High-precision real helpers shared by the bound and report code.

Private mpmath contexts are used so that callers who change the global
``mpmath.mp`` precision do not perturb results.
"""
from __future__ import annotations

from fractions import Fraction

from mpmath.ctx_iv import MPIntervalContext
from mpmath.ctx_mp import MPContext

PREC = 256

MP = MPContext()
MP.prec = PREC

IV = MPIntervalContext()
IV.prec = PREC

# relative inflation applied to upper bounds computed in round-to-nearest
_UP = MP.mpf(1) + MP.ldexp(1, -(PREC - 16))


def mpf(x) -> "MP.mpf":
    if isinstance(x, Fraction):
        return MP.mpf(x.numerator) / x.denominator
    return MP.mpf(x)


def round_up(x):
    """Nudge a nonnegative value computed at working precision upward."""
    return x * _UP if x > 0 else x


def round_down(x):
    return x / _UP if x > 0 else x


def log_int(n: int):
    return MP.log(MP.mpf(n))


def log_abs_fraction(q: Fraction):
    if q == 0:
        return MP.ninf
    return MP.log(abs(q.numerator)) - MP.log(q.denominator)


def fmt(x, digits: int = 30) -> str:
    """Deterministic decimal text for a real (``-inf`` and ``inf`` allowed)."""
    x = MP.mpf(x)
    if MP.isinf(x):
        return "-inf" if x < 0 else "inf"
    if x == 0:
        return "0.0"
    return MP.nstr(x, digits, strip_zeros=False)
