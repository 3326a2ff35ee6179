"""Growth-class fitting, quasipolynomial and pole detection, Gevrey order,
and the three-branch evidence report."""
from __future__ import annotations

import math
from dataclasses import dataclass, field
from fractions import Fraction
from typing import Dict, List, Optional, Sequence, Tuple

import numpy as np

from .arith import QuadElement, format_rational, height
from .auxpoly import BinomialPoly, siegel_vanishing_poly, twist_series
from .errors import InsufficientData, PreconditionFailed
from .growth import (IndexSet, counterexample_set, growth_profile, kappa_density_check,
                     upper_density)
from .hankel import (agreement, hankel_probably_zero, hankel_scan, kronecker_guess_details,
                     log_abs, pade_from_vanishing_run, hankel_is_zero)
from .numeric import MP, fmt
from .poly import ONE, ZERO, Polynomial, RationalFunction, poly_gcd
from .polya import decay_exponent_fit
from .series import SeriesHandle

CLASSES = ("Constant", "LogN", "Linear", "NLogN")


# ---------------------------------------------------------------------------
# growth classes
# ---------------------------------------------------------------------------
@dataclass(frozen=True)
class ClassifyConfig:
    band: Tuple[float, float] = (0.1, 10.0)
    density_floor: float = 0.1
    window: float = 0.5            # evidence window [window * N, N]
    step_min: float = 0.2          # median increment per doubling that counts as growth
    superlog_ratio: float = 1.5    # increment ratio separating log n from power growth
    superlog_min: float = 3 * math.log(2)
    nlogn_step: float = math.log(2) / 2   # growth of h/n per doubling for n log n


@dataclass
class GrowthClass:
    tag: str
    evidence: Dict[str, Dict[str, float]]
    fit: Dict[str, float] = field(default_factory=dict)

    def to_dict(self, digits: int = 30) -> dict:
        return {
            "class": self.tag,
            "evidence": {k: {kk: fmt(vv, digits) for kk, vv in v.items()}
                         for k, v in self.evidence.items()},
            "fit": {k: fmt(v, digits) for k, v in self.fit.items()},
        }


def _g(name: str, n: np.ndarray) -> np.ndarray:
    if name == "Constant":
        return np.ones_like(n, dtype=float)
    if name == "LogN":
        return np.log(n)
    if name == "Linear":
        return n.astype(float)
    return n * np.log(n)


def height_values(coeffs: Sequence) -> np.ndarray:
    return np.array([float(height(a).value) for a in coeffs], dtype=float)


def _window_median(h: np.ndarray, active: np.ndarray, lo: int, hi: int) -> float:
    sel = active[lo: hi + 1]
    vals = h[lo: hi + 1][sel] if sel.any() else h[lo: hi + 1]
    return float(np.median(vals))


def growth_classify(s: SeriesHandle, N: int, config: ClassifyConfig = ClassifyConfig()) -> GrowthClass:
    """Largest of Constant < LogN < Linear < NLogN supported by the tail of ``h(a_n)``.

    Medians of ``h`` over the dyadic windows ending at N, N/2 and N/4 are
    compared.  Bounded heights give increments near 0, ``log n`` gives
    increments near ``log 2``, and power growth doubles the increment; the
    median of ``h/n`` then separates ``n`` from ``n log n``.  Medians make the
    rule insensitive to the bounded oscillation that rescaling introduces.
    """
    if N < 64:
        raise PreconditionFailed("horizon must be at least 64")
    coeffs = s.coefficients(N)
    h = height_values(coeffs)
    active = np.array([bool(a) for a in coeffs])
    n_all = np.arange(N + 1)

    lo = max(2, int(math.ceil(config.window * N)))
    sel = (n_all >= lo) & active
    if not sel.any():
        sel = n_all >= lo
    n = n_all[sel].astype(float)
    hw = h[sel]
    evidence = {}
    for name in CLASSES:
        r = hw / _g(name, n)
        inband = (r >= config.band[0]) & (r <= config.band[1])
        evidence[name] = {"median_ratio": float(np.median(r)),
                          "band_density": float(inband.mean()) if inband.size else 0.0}

    bounds = [(N // 2 + 1, N), (N // 4 + 1, N // 2), (N // 8 + 1, N // 4)]
    m = [_window_median(h, active, a, b) for a, b in bounds]
    mids = [(a + b) / 2 for a, b in bounds]
    step1, step2 = m[0] - m[1], m[1] - m[2]
    slope_step = m[0] / mids[0] - m[1] / mids[1]
    fit = {"median_top": m[0], "median_mid": m[1], "median_low": m[2],
           "step_top": step1, "step_low": step2, "per_n_step": slope_step}

    if step1 < config.step_min:
        tag = "Constant" if step2 < config.step_min else "Unknown"
    elif step1 >= config.superlog_min and step1 >= config.superlog_ratio * step2:
        tag = "NLogN" if slope_step >= config.nlogn_step else "Linear"
    elif step1 < config.superlog_min:
        tag = "LogN"
    else:
        tag = "Unknown"
    return GrowthClass(tag, evidence, fit)


# ---------------------------------------------------------------------------
# quasipolynomial detection
# ---------------------------------------------------------------------------
@dataclass
class QuasiPolynomial:
    s: int
    Q: List[RationalFunction]
    branch: List[str]  # "polynomial" or "rational" per residue

    def to_dict(self) -> dict:
        return {"s": self.s, "Q": [q.to_text("n") for q in self.Q]}

    def __call__(self, n: int):
        q, i = divmod(n, self.s)
        return self.Q[i](Fraction(q))


def _solve_kernel(rows: List[List]) -> Optional[List]:
    from .hankel import _rref_first_kernel_vector
    return _rref_first_kernel_vector(rows)


def _interpolate(ks: Sequence[int], vals: Sequence) -> Polynomial:
    """Newton interpolation through (k, value) pairs."""
    n = len(ks)
    coef = list(vals)
    for j in range(1, n):
        for i in range(n - 1, j - 1, -1):
            coef[i] = (coef[i] - coef[i - 1]) / (ks[i] - ks[i - j])
    out = Polynomial([coef[-1]])
    for i in range(n - 2, -1, -1):
        out = out * Polynomial([-Fraction(ks[i]), ONE]) + coef[i]
    return out


def _fit_residue(ks: List[int], vals: List, deg_max: int, min_check: int):
    """Polynomial, then rational, description of ``vals`` as a function of k."""
    for deg in range(0, deg_max + 1):
        if deg + 1 + min_check > len(ks):
            break
        P = _interpolate(ks[: deg + 1], vals[: deg + 1])
        if all(P(Fraction(k)) == v for k, v in zip(ks[deg + 1:], vals[deg + 1:])):
            return RationalFunction(P), "polynomial"
    for total in range(1, deg_max + 1):
        for dv in range(1, total + 1):
            du = total - dv
            npts = du + dv + 1
            if npts + min_check > len(ks):
                continue
            rows = []
            for k, v in zip(ks[:npts], vals[:npts]):
                kf = Fraction(k)
                rows.append([-(kf ** t) for t in range(du + 1)] + [v * kf ** t for t in range(dv + 1)])
            vec = _solve_kernel(rows)
            if vec is None:
                continue
            U = Polynomial(vec[: du + 1])
            V = Polynomial(vec[du + 1:])
            if V.is_zero():
                continue
            ok = True
            for k, v in zip(ks, vals):
                vk = V(Fraction(k))
                if not vk or vk * v != U(Fraction(k)):
                    ok = False
                    break
            if ok:
                return RationalFunction(U, V), "rational"
    return None


def quasipolynomial_detect(s: SeriesHandle, N: int, s_max: int = 6, deg_max: int = 8,
                           min_check: int = 5) -> Optional[QuasiPolynomial]:
    """Smallest modulus s with ``a_{s k + i} = Q_i(k)`` on the tail [N/2, N]."""
    coeffs = s.coefficients(N)
    start = N // 2
    for mod in range(1, s_max + 1):
        Qs, kinds = [], []
        for i in range(mod):
            k0 = max(0, -(-(start - i) // mod))
            ks = [k for k in range(k0, (N - i) // mod + 1)]
            vals = [coeffs[mod * k + i] for k in ks]
            res = _fit_residue(ks, vals, deg_max, min_check)
            if res is None:
                break
            Qs.append(res[0])
            kinds.append(res[1])
        else:
            return QuasiPolynomial(mod, Qs, kinds)
    return None


# ---------------------------------------------------------------------------
# root-of-unity poles
# ---------------------------------------------------------------------------
@dataclass(frozen=True)
class PoleVerdict:
    kind: str  # AllRootsOfUnity | HasOtherPole | Undetermined
    M: Optional[int] = None
    N: Optional[int] = None
    reason: str = ""

    def __str__(self):
        if self.kind == "AllRootsOfUnity":
            return f"AllRootsOfUnity({self.M},{self.N})"
        return self.kind


def _is_integer_poly(P: Polynomial) -> bool:
    for c in P.coeffs:
        if isinstance(c, QuadElement):
            if c.b != 0 or c.a.denominator != 1:
                return False
        elif Fraction(c).denominator != 1:
            return False
    return True


def root_of_unity_poles(R: RationalFunction, M_max: int = 60) -> PoleVerdict:
    """Does ``den(R)`` divide ``(1 - z^M)^N``?"""
    den = R.den
    if den.degree <= 0:
        return PoleVerdict("AllRootsOfUnity", 1, 0, "no finite poles")
    if not den[0]:
        return PoleVerdict("HasOtherPole", reason="pole at 0")
    den = den * (1 / den[0] if not isinstance(den[0], QuadElement) else den[0].inverse())
    if not _is_integer_poly(den):
        return PoleVerdict("HasOtherPole", reason="non-integral coefficient")
    lead = den.lc()
    lead = lead.a if isinstance(lead, QuadElement) else lead
    if abs(lead) != 1:
        return PoleVerdict("HasOtherPole", reason="leading coefficient is not a unit")
    D = den.degree
    for k, c in enumerate(den.coeffs):
        c = c.a if isinstance(c, QuadElement) else c
        if abs(c) > math.comb(D, k):
            return PoleVerdict("HasOtherPole", reason="coefficient exceeds the unit-circle bound")
    g = poly_gcd(den, den.derivative())
    sqf = den // g if g.degree > 0 else den
    mult = 1
    power = sqf
    while not den.divides(power):
        power = power * sqf
        mult += 1
    for M in range(1, M_max + 1):
        target = Polynomial([ONE] + [ZERO] * (M - 1) + [-ONE])
        if sqf.divides(target):
            assert den.divides(target ** mult)
            return PoleVerdict("AllRootsOfUnity", M, mult)
    return PoleVerdict("Undetermined", reason=f"no M <= {M_max} found")


# ---------------------------------------------------------------------------
# Gevrey order
# ---------------------------------------------------------------------------
@dataclass
class GevreyResult:
    s_hat: Optional[Fraction]
    passing: List[Fraction]

    def text(self) -> Optional[str]:
        if self.s_hat is None:
            return None
        return format_rational(self.s_hat)


def gevrey_details(s: SeriesHandle, N: int, b_max: int = 4) -> GevreyResult:
    if N < 100:
        raise PreconditionFailed("horizon must be at least 100")
    coeffs = s.coefficients(N)
    lo = N // 2
    ns, logs = [], []
    for n in range(lo, N + 1):
        a = coeffs[n]
        if a:
            ns.append(n)
            logs.append(float(log_abs(a)))
    if len(ns) < 10:
        return GevreyResult(None, [])
    ns_a = np.array(ns, dtype=float)
    loga = np.array(logs)
    lfact = np.array([float(MP.loggamma(n + 1)) for n in ns])
    cands = sorted({Fraction(a, b) for b in range(1, b_max + 1) for a in range(-4 * b, 4 * b + 1)
                    if abs(Fraction(a, b).numerator) <= 4})
    tol = 1.0 / (2 * b_max * b_max)
    passing = []
    for sv in cands:
        x = (loga + float(sv) * lfact) / ns_a
        ratio = math.exp(x[-1] - x[0])
        slope = np.polyfit(np.log(ns_a), x, 1)[0]
        if 0.2 <= ratio <= 5 and abs(slope) <= tol and np.all(np.isfinite(x)):
            passing.append(sv)
    return GevreyResult(passing[0] if len(passing) == 1 else None, passing)


def gevrey_estimate(s: SeriesHandle, N: int, b_max: int = 4) -> Optional[Fraction]:
    return gevrey_details(s, N, b_max).s_hat


# ---------------------------------------------------------------------------
# branch evidence for the main dichotomy
# ---------------------------------------------------------------------------
@dataclass
class BranchEvidence:
    height_linear: bool
    den_linear: bool
    rational_roots_of_unity: bool
    details: Dict[str, object]

    def fired(self) -> List[str]:
        out = []
        if self.height_linear:
            out.append("i")
        if self.den_linear:
            out.append("ii")
        if self.rational_roots_of_unity:
            out.append("iii")
        return out


def branch_evidence(s: SeriesHandle, N: int = 2000, c_height: float = 0.1,
                    kappa=Fraction(1, 10), floor: float = 0.1,
                    n_max: int = 30, window: int = 5) -> BranchEvidence:
    """Evidence for the three alternatives at finite horizon.

    (i) ``h(a_n) >= c n`` on a set with density estimate >= floor.
    (ii) ``den(a_n) >= kappa n`` on such a set, reported only when (i) is
    absent since the alternatives overlap.
    (iii) a quasipolynomial description with polynomial pieces, backed by a
    validated rational guess whose poles are all roots of unity.
    """
    prof = growth_profile(s, N)
    hv = np.array([float(x.value) for x in prof.h])
    mask_h = hv >= c_height * np.arange(N + 1)
    mask_h[0] = False
    dens_h = upper_density(IndexSet(mask_h))
    ev_i = float(dens_h.top) >= floor
    kc = kappa_density_check(prof, kappa, floor=Fraction(floor).limit_denominator(1000))
    ev_ii_raw = float(kc.density.top) >= floor
    ev_ii = ev_ii_raw and not ev_i
    kg = kronecker_guess_details(s, n_max, window)
    poles = root_of_unity_poles(kg.rational) if kg.rational is not None else None
    qp = None
    if poles is not None and poles.kind == "AllRootsOfUnity":
        qp = quasipolynomial_detect(s, N)
    ev_iii = qp is not None and all(k == "polynomial" for k in qp.branch)
    details = {"height_density": dens_h.top, "den_density": kc.density.top,
               "den_linear_raw": ev_ii_raw, "rational": kg.rational,
               "poles": poles, "quasipolynomial": qp}
    return BranchEvidence(ev_i, ev_ii, ev_iii, details)


# ---------------------------------------------------------------------------
# trichotomy report
# ---------------------------------------------------------------------------
@dataclass
class ApproxAttempt:
    n: int
    P: BinomialPoly
    excluded: List[int]
    run_start: Optional[int]
    u: Optional[Polynomial] = None
    v: Optional[Polynomial] = None
    order: Optional[int] = None    # None = no disagreement within available terms
    threshold: int = 0

    @property
    def achieved(self) -> bool:
        return self.run_start is not None and (self.order is None or self.order > self.threshold)


@dataclass
class TrichotomyReport:
    boundary_score: float
    boundary_fires: bool
    boundary_details: Dict[str, object]
    lcm_evidence: Dict[str, object]
    attempts: List[ApproxAttempt]

    @property
    def best(self) -> Optional[ApproxAttempt]:
        good = [a for a in self.attempts if a.run_start is not None]
        if not good:
            return None
        return max(good, key=lambda a: (a.order is None, a.order or 0))

    def to_dict(self, digits: int = 30) -> dict:
        b = self.best
        return {
            "boundary": {"score": fmt(self.boundary_score, digits), "fires": self.boundary_fires,
                         **{k: (fmt(v, digits) if hasattr(v, "_mpf_") or isinstance(v, float)
                                else v) for k, v in self.boundary_details.items()}},
            "lcm": {k: fmt(v, digits) for k, v in self.lcm_evidence.items()},
            "approximation": None if b is None else {
                "n": b.n, "P": b.P.to_text(), "excluded": b.excluded,
                "u": b.u.to_text() if b.u is not None else None,
                "v": b.v.to_text() if b.v is not None else None,
                "order": "inf" if b.order is None else b.order,
                "threshold": b.threshold, "achieved": b.achieved},
        }


def _boundary(s: SeriesHandle, N: int, fit_n: int = 20):
    coeffs = s.coefficients(N)
    lo = N // 2
    window = coeffs[lo: N + 1]
    support = sum(1 for a in window if a) / len(window)
    gap = 1.0 - support
    decay_fail = False
    sigma = None
    try:
        scan = hankel_scan(s, min(fit_n, N // 2))
        rep = decay_exponent_fit(scan)
        sigma = rep.sigma
        decay_fail = rep.sigma <= 0
    except InsufficientData:
        pass
    score = max(gap, 0.5 if decay_fail else 0.0)
    return score, {"support_density": support, "sigma": sigma if sigma is not None else "none",
                   "decay_failed": decay_fail}


def _lcm_evidence(s: SeriesHandle, N: int) -> Dict[str, object]:
    plain = growth_profile(s, N)
    sparse = counterexample_set(N, "log").S
    excl = growth_profile(s, N, exclude=sparse)
    out = {}
    for frac, tag in ((4, "quarter"), (2, "half"), (1, "full")):
        n = N // frac
        out[f"log_lcm_over_n_{tag}"] = plain.log_lcm[n] / n
        out[f"log_lcm_sparse_over_n_{tag}"] = excl.log_lcm[n] / n
    return out


def _approximation_attempt(s: SeriesHandle, n: int, C: int, window: int) -> ApproxAttempt:
    from .arith import denominator
    Cn = C * n
    coeffs = s.coefficients(2 * Cn)
    cap = min((Cn - 1) // 4, (n - 1) // 2)
    small = [j for j in range(1, Cn + 1) if denominator(coeffs[j]) <= 2][:cap]
    P = siegel_vanishing_poly(small, Cn) if small else BinomialPoly((1,))
    g = twist_series(s, P)
    run = 0
    start = None
    for m in range(n, Cn + 1):
        if hankel_probably_zero(g, 0, m):
            run += 1
            if run >= window:
                cand = m - window + 1
                if all(hankel_is_zero(g, 0, k) for k in range(cand, m + 1)):
                    start = cand
                    break
                run = 0
        else:
            run = 0
    att = ApproxAttempt(n, P, small, start, threshold=Cn)
    if start is None:
        return att
    u, v = pade_from_vanishing_run(g, start, window - 1)
    att.u, att.v = u, v
    att.order = agreement(u, v, g.coefficients(2 * Cn))
    return att


def trichotomy_report(s: SeriesHandle, N: int, C: int = 3, window: int = 4) -> TrichotomyReport:
    score, bdetails = _boundary(s, N)
    lcm = _lcm_evidence(s, N)
    attempts = []
    n = 16
    while 2 * C * n <= N:
        attempts.append(_approximation_attempt(s, n, C, window))
        n *= 2
    return TrichotomyReport(score, score >= 0.5, bdetails, lcm, attempts)
