"""Worst-case and best-case behaviour in closed form."""

from __future__ import annotations

import math
from dataclasses import dataclass
from fractions import Fraction

from .function_space import FunctionSpec

# Bisection stopping width for the curve crossing.
CROSSING_TOL = 1e-9
# Above this run count runs_for_error trusts the float logarithm instead
# of checking the exact rational power.
EXACT_POWER_LIMIT = 10_000


@dataclass(frozen=True)
class WorstCaseCurve:
    eta: float
    quantum_eps: float
    classical_eps: float


@dataclass(frozen=True)
class BestCaseStats:
    fail_probability: Fraction
    not_constant_probability: Fraction
    constant_indication_probability: Fraction


def worst_case_function(n_domain: int, m_range: int) -> FunctionSpec:
    """f = 0 everywhere except f(N-1) = 1."""
    if n_domain < 2 or m_range < 2:
        raise ValueError("worst case needs N >= 2 and M >= 2")
    return FunctionSpec(n_domain, m_range, (0,) * (n_domain - 1) + (1,))


def worst_case_pr(n_domain: int) -> Fraction:
    """Probability that the worst-case g projects onto the constants."""
    if n_domain < 2:
        raise ValueError("worst case needs N >= 2")
    n = Fraction(n_domain)
    return 1 - 2 / n + 2 / n ** 2


def worst_case_indication_pr(n_domain: int, m_range: int) -> Fraction:
    """Finite-M counterpart: the FAIL share 1/M removed."""
    return worst_case_pr(n_domain) - Fraction(1, m_range)


def runs_for_error(n_domain: int, epsilon: float) -> int:
    """Smallest k with worst_case_pr(N)**k <= epsilon."""
    if not 0 < epsilon < 1:
        raise ValueError(f"epsilon must be in (0, 1), got {epsilon}")
    pr = worst_case_pr(n_domain)
    k = max(1, math.ceil(math.log(epsilon) / math.log(pr)))
    if k > EXACT_POWER_LIMIT:
        return k
    # guard the float ceiling with the exact power in both directions
    eps = Fraction(epsilon)
    while k > 1 and pr ** (k - 1) <= eps:
        k -= 1
    while pr ** k > eps:
        k += 1
    return k


def quantum_limit_eps(eta: float) -> float:
    return math.exp(-2.0 * eta)


def classical_limit_eps(eta: float) -> float:
    return 1.0 - eta


def figure1_curve(samples: int) -> list[WorstCaseCurve]:
    if samples < 2:
        raise ValueError("need at least 2 samples")
    out = []
    for i in range(samples):
        eta = i / (samples - 1)
        out.append(WorstCaseCurve(eta, quantum_limit_eps(eta),
                                  classical_limit_eps(eta)))
    return out


def crossing_point(tol: float = CROSSING_TOL) -> float:
    """Positive root of exp(-2 eta) = 1 - eta, by bisection."""
    lo, hi = 0.5, 1.0          # difference < 0 at 0.5, > 0 at 1
    while hi - lo > tol:
        mid = 0.5 * (lo + hi)
        if quantum_limit_eps(mid) < classical_limit_eps(mid):
            lo = mid
        else:
            hi = mid
    return 0.5 * (lo + hi)


def best_case_stats(n_domain: int) -> BestCaseStats:
    """Outcome class probabilities for any permutation of N = M points."""
    if n_domain < 2:
        raise ValueError("best case needs N = M >= 2")
    fail = Fraction(1, n_domain)
    return BestCaseStats(fail, 1 - fail, Fraction(0))
