"""Seeded random property checks shared by the CLI and the test suite."""
from __future__ import annotations

import random
from dataclasses import dataclass, field
from fractions import Fraction
from typing import List

from .auxpoly import derivative_form_coefficients, siegel_bound, siegel_vanishing_poly, twist_series
from .errors import SingularMatrix
from .poly import Polynomial, RationalFunction
from .series import DiffOperator, SeriesHandle, basis_change_matrix, mat_mul


@dataclass
class CheckSummary:
    name: str
    instances: int = 0
    failures: List[str] = field(default_factory=list)

    @property
    def ok(self) -> bool:
        return self.instances > 0 and not self.failures

    def to_dict(self) -> dict:
        return {"check": self.name, "instances": self.instances, "failures": self.failures,
                "ok": self.ok}


def random_siegel_instance(rng: random.Random, L_max: int = 5, n_max: int = 60):
    L = rng.randint(1, L_max)
    n = rng.randint(4 * L + 1, max(4 * L + 1, n_max))
    indices = sorted(rng.sample(range(1, n + 1), L))
    return indices, n


def siegel_twist_check(series: List[SeriesHandle], count: int = 100, seed: int = 0,
                       order: int = 120) -> CheckSummary:
    """Vanishing, the size bound, and the twist versus derivative-form identity."""
    rng = random.Random(seed)
    out = CheckSummary("siegel_twist")
    prefixes = [s.coefficients(order + 2 * 5 + 1) for s in series]
    for k in range(count):
        indices, n = random_siegel_instance(rng)
        P = siegel_vanishing_poly(indices, n)
        tag = f"#{k} indices={indices} n={n}"
        if any(P(m) != 0 for m in indices):
            out.failures.append(f"{tag}: P does not vanish")
        if max(abs(c) for c in P.c) >= siegel_bound(n, len(indices)):
            out.failures.append(f"{tag}: coefficient bound violated")
        for s, pre in zip(series, prefixes):
            twisted = twist_series(s, P).coefficients(order)
            direct = derivative_form_coefficients(pre, P.c, order)
            if twisted != direct:
                out.failures.append(f"{tag}: twist of {s.name} disagrees")
        out.instances += 1
    return out


def _rand_poly(rng: random.Random, deg: int, nonzero: bool = False) -> Polynomial:
    while True:
        P = Polynomial([Fraction(rng.randint(-3, 3)) for _ in range(deg + 1)])
        if not nonzero or not P.is_zero():
            return P


def random_basis_change_instance(rng: random.Random):
    p = rng.randint(1, 3)
    delta = rng.randint(0, 2)
    A = [_rand_poly(rng, delta, nonzero=(i == 0)) for i in range(p + 1)]
    L = DiffOperator(A)
    P_list = [_rand_poly(rng, rng.randint(0, 2)) for _ in range(rng.randint(1, p + 1))]
    return L, P_list


def basis_change_check(count: int = 100, seed: int = 0) -> CheckSummary:
    """``B C = I`` and the degree bound on random invertible instances."""
    rng = random.Random(seed)
    out = CheckSummary("basis_change")
    attempts = 0
    while out.instances < count:
        attempts += 1
        if attempts > 50 * count:
            out.failures.append("could not draw enough invertible instances")
            break
        L, P_list = random_basis_change_instance(rng)
        if all(P.is_zero() for P in P_list):
            continue
        try:
            C, B = basis_change_matrix(L, P_list)
        except SingularMatrix:
            continue
        except AssertionError as exc:
            out.failures.append(f"#{out.instances}: {exc}")
            out.instances += 1
            continue
        prod = mat_mul(B, C)
        p = L.p
        ident = all(prod[i][j] == RationalFunction(1 if i == j else 0)
                    for i in range(p) for j in range(p))
        if not ident:
            out.failures.append(f"#{out.instances}: B*C is not the identity for {L!r}")
        out.instances += 1
    return out
