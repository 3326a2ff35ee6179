"""Height and denominator profiles, lcm growth, density estimates and the
zero-density exclusion set with sub-exponential lcm."""
from __future__ import annotations

import math
from dataclasses import dataclass
from fractions import Fraction
from typing import Callable, Dict, Iterable, List, Optional

import numpy as np
from sympy import factorint

from .arith import HeightValue, denominator, format_element, height
from .errors import PreconditionFailed, SchemaError
from .numeric import MP, fmt, log_int
from .series import SeriesHandle


# ---------------------------------------------------------------------------
# index sets and densities
# ---------------------------------------------------------------------------
class IndexSet:
    """Subset of ``[0, N]`` stored as a boolean mask."""

    __slots__ = ("mask", "N")

    def __init__(self, mask: np.ndarray):
        self.mask = np.asarray(mask, dtype=bool)
        self.N = len(self.mask) - 1

    @classmethod
    def from_indices(cls, indices: Iterable[int], N: int) -> "IndexSet":
        m = np.zeros(N + 1, dtype=bool)
        for i in indices:
            if 0 <= i <= N:
                m[i] = True
        return cls(m)

    @classmethod
    def from_predicate(cls, pred: Callable[[int], bool], N: int) -> "IndexSet":
        return cls(np.array([bool(pred(n)) for n in range(N + 1)], dtype=bool))

    def complement(self) -> "IndexSet":
        return IndexSet(~self.mask)

    def __contains__(self, n: int) -> bool:
        return 0 <= n <= self.N and bool(self.mask[n])

    def __len__(self):
        return int(self.mask.sum())

    def indices(self) -> List[int]:
        return [int(i) for i in np.nonzero(self.mask)[0]]

    def counts(self) -> np.ndarray:
        """``counts[n] = |S cap [1, n]|``."""
        m = self.mask.copy()
        if len(m):
            m[0] = False
        return np.cumsum(m.astype(np.int64))


@dataclass(frozen=True)
class DensityEstimate:
    top: Fraction      # max of |S cap [1,n]|/n over the top half (limsup proxy)
    bottom: Fraction   # same over the bottom half
    last: Fraction     # value at n = N

    @property
    def monotone(self) -> bool:
        return self.top >= self.bottom

    def __float__(self):
        return float(self.top)


def upper_density(S: IndexSet) -> DensityEstimate:
    N = S.N
    if N < 1:
        raise PreconditionFailed("horizon must be at least 1")
    c = S.counts()
    n = np.arange(N + 1)
    half = N // 2

    def best(lo, hi):
        if hi < lo:
            return Fraction(0)
        ratios = c[lo: hi + 1] / n[lo: hi + 1]
        # float argmax, then settle near-ties exactly
        near = np.nonzero(ratios >= ratios.max() * (1 - 1e-9))[0] + lo
        return max(Fraction(int(c[i]), int(i)) for i in near)

    top = best(max(half, 1), N)
    bottom = best(1, max(half - 1, 0))
    return DensityEstimate(top, bottom, Fraction(int(c[N]), N))


# ---------------------------------------------------------------------------
# lcm accumulation
# ---------------------------------------------------------------------------
class LcmAccumulator:
    """Running lcm kept as a prime-exponent map plus ``log``.

    The exact integer is also retained so each update only needs to factor
    ``d / gcd(d, lcm)``, which stays small even when ``d`` is huge.
    """

    def __init__(self):
        self.exponents: Dict[int, int] = {}
        self.value = 1
        self.log = MP.zero

    def add(self, d: int) -> None:
        d = int(d)
        if d <= 0:
            raise ValueError("denominators are positive")
        g = math.gcd(d, self.value)
        u = d // g
        if u == 1:
            return
        # exponent increments are exactly the valuations of u
        for p, e in factorint(u).items():
            self.exponents[p] = self.exponents.get(p, 0) + e
            self.log += e * log_int(p)
        self.value *= u

    def exact(self) -> int:
        out = 1
        for p, e in self.exponents.items():
            out *= p ** e
        return out


@dataclass
class GrowthProfile:
    N: int
    coeffs: List
    h: List[HeightValue]
    den: List[int]
    log_lcm: List
    mask: Optional[IndexSet] = None

    def excluded(self, n: int) -> bool:
        return self.mask is not None and n in self.mask

    def to_csv(self, digits: int = 30) -> str:
        lines = ["n,a_n,h,den,log_lcm,excluded"]
        for n in range(self.N + 1):
            lines.append(",".join([str(n), format_element(self.coeffs[n]),
                                   fmt(self.h[n].value, digits), str(self.den[n]),
                                   fmt(self.log_lcm[n], digits), str(int(self.excluded(n)))]))
        return "\n".join(lines) + "\n"


def growth_profile(s: SeriesHandle, N: int, exclude: Optional[IndexSet] = None) -> GrowthProfile:
    coeffs = s.coefficients(N)
    acc = LcmAccumulator()
    hs, dens, logs = [], [], []
    for n, a in enumerate(coeffs):
        d = denominator(a)
        hs.append(height(a))
        dens.append(d)
        if exclude is None or n not in exclude:
            acc.add(d)
        logs.append(acc.log)
    return GrowthProfile(N, coeffs, hs, dens, logs, exclude)


@dataclass(frozen=True)
class KappaCheck:
    density: DensityEstimate
    passed: bool
    members: IndexSet


def kappa_density_check(profile: GrowthProfile, kappa, floor=Fraction(1, 20)) -> KappaCheck:
    kappa = Fraction(kappa) if not isinstance(kappa, str) else Fraction(kappa)
    if kappa <= 0:
        raise PreconditionFailed("kappa must be positive")
    mask = np.array([profile.den[n] >= kappa * n for n in range(profile.N + 1)], dtype=bool)
    S = IndexSet(mask)
    est = upper_density(S)
    return KappaCheck(est, est.top > Fraction(floor), S)


# ---------------------------------------------------------------------------
# the zero-density set with sub-exponential lcm
# ---------------------------------------------------------------------------
ALPHAS: Dict[str, Callable[[float], float]] = {
    "log": lambda x: math.log2(x + 2),
    "loglog": lambda x: math.log2(math.log2(x + 2) + 2),
    "pow01": lambda x: (x + 1) ** 0.1,
    "pow025": lambda x: (x + 1) ** 0.25,
}


def get_alpha(name: str) -> Callable[[float], float]:
    if name not in ALPHAS:
        raise SchemaError(f"unknown alpha {name!r}; choose from {sorted(ALPHAS)}")
    return ALPHAS[name]


def prime_sieve(n: int) -> np.ndarray:
    if n < 2:
        return np.zeros(0, dtype=np.int64)
    is_p = np.ones(n + 1, dtype=bool)
    is_p[:2] = False
    for p in range(2, int(n ** 0.5) + 1):
        if is_p[p]:
            is_p[p * p:: p] = False
    return np.nonzero(is_p)[0]


@dataclass(frozen=True)
class CounterexampleRow:
    n: int
    count: int
    density: float
    ratio: float        # |S cap [1,n]| log n / (n alpha(n))
    log_lcm_over_n: float


@dataclass
class CounterexampleSet:
    S: IndexSet
    c: List[float]
    rows: List[CounterexampleRow]
    alpha: str

    def to_csv(self, digits: int = 12) -> str:
        lines = ["n,count,density,ratio,log_lcm_over_n"]
        for r in self.rows:
            lines.append(f"{r.n},{r.count},{fmt(r.density, digits)},{fmt(r.ratio, digits)},"
                         f"{fmt(r.log_lcm_over_n, digits)}")
        return "\n".join(lines) + "\n"


def counterexample_set(N: int, alpha: str = "log") -> CounterexampleSet:
    """Build ``S = union S_k`` and report density and lcm diagnostics."""
    if N < 2:
        raise PreconditionFailed("horizon must be at least 2")
    a = get_alpha(alpha)
    primes = prime_sieve(N)
    mask = np.zeros(N + 1, dtype=bool)
    cs = [min(1.0, a(1))]
    k = 1
    while 2 ** (k - 1) < N:
        if k > 1:
            cs.append(min(1.9 * cs[-1], float(k), a(2 ** (k - 1))))
        ck = cs[-1]
        lo, hi = 2 ** (k - 1), 2 ** k
        thresh = hi / ck
        ps = primes[(primes > thresh) & (primes <= hi)]
        for p in ps:
            p = int(p)
            start = (lo // p + 1) * p
            mask[start: min(hi, N) + 1: p] = True
        k += 1
    S = IndexSet(mask)
    log_lcm = _log_lcm_outside(mask, primes, N)
    counts = S.counts()
    checkpoints = []
    j = 1
    while 2 ** j <= N:
        checkpoints.append(2 ** j)
        j += 1
    if checkpoints[-1] != N:
        checkpoints.append(N)
    rows = []
    for n in checkpoints:
        cnt = int(counts[n])
        rows.append(CounterexampleRow(n, cnt, cnt / n, cnt * math.log(n) / (n * a(n)),
                                      float(log_lcm[n]) / n))
    return CounterexampleSet(S, cs, rows, alpha)


def _log_lcm_outside(mask: np.ndarray, primes: np.ndarray, N: int) -> np.ndarray:
    """``log lcm{i <= n : i not in S}`` for every n <= N.

    A prime power q contributes ``log p`` from the first multiple of q lying
    outside S onwards.
    """
    events = np.zeros(N + 2, dtype=np.float64)
    for p in primes:
        p = int(p)
        lp = math.log(p)
        q = p
        while q <= N:
            mult = np.arange(q, N + 1, q)
            outside = np.nonzero(~mask[mult])[0]
            if outside.size:
                events[mult[outside[0]]] += lp
            q *= p
    return np.cumsum(events)[: N + 1]


def log_lcm_naive(values: Iterable[int]) -> object:
    L = 1
    for v in values:
        L = L * v // math.gcd(L, v)
    return log_int(L)
