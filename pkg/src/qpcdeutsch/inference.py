"""Exact posterior probability that f is constant after k indications.

All quantities are ``fractions.Fraction``; rounding happens only when a
caller formats the result.
"""

from __future__ import annotations

from dataclasses import dataclass
from fractions import Fraction

from .combinatorics import profile_multiplicities
from .ftm import profile_likelihood


@dataclass(frozen=True)
class PosteriorQuery:
    n_domain: int
    m_range: int
    k_runs: int

    def __post_init__(self):
        if self.n_domain < 1 or self.m_range < 1:
            raise ValueError("N and M must be positive")
        if self.k_runs < 0:
            raise ValueError("k must be non-negative")


@dataclass(frozen=True)
class PosteriorRow:
    k: int
    quantum: Fraction | None
    classical: Fraction | None


def prior_constant(n_domain: int, m_range: int) -> Fraction:
    return Fraction(m_range, m_range ** n_domain)


def joint_constant(q: PosteriorQuery) -> Fraction:
    """Pr(const and k indications) = M**(1-N) * (1 - 1/M)**k."""
    return (prior_constant(q.n_domain, q.m_range)
            * (1 - Fraction(1, q.m_range)) ** q.k_runs)


def evidence_terms(q: PosteriorQuery) -> list[tuple]:
    """(profile, multiplicity, likelihood, term) per profile, canonical order."""
    scale = Fraction(1, q.m_range ** q.n_domain)
    out = []
    for pm in profile_multiplicities(q.n_domain, q.m_range):
        lik = profile_likelihood(pm.profile, q.m_range)
        out.append((pm.profile, pm.count, lik, scale * lik ** q.k_runs * pm.count))
    return out


def quantum_evidence(q: PosteriorQuery) -> Fraction:
    # k = 0 is defined directly; the profile sum would hit 0**0.
    if q.k_runs == 0:
        return Fraction(1)
    return sum((t[3] for t in evidence_terms(q)), Fraction(0))


def quantum_posterior(q: PosteriorQuery) -> Fraction:
    if q.k_runs == 0:
        return prior_constant(q.n_domain, q.m_range)
    return joint_constant(q) / quantum_evidence(q)


def classical_posterior(q: PosteriorQuery) -> Fraction:
    """Posterior after k sampled points all agree: M**(k-N).

    The closed form holds for k >= 1; with no samples the posterior is the
    prior M**(1-N), which the formula also gives at k = 1.
    """
    if q.k_runs > q.n_domain:
        raise ValueError(
            f"classical sampling needs k <= N, got k={q.k_runs} > N={q.n_domain}")
    if q.k_runs == 0:
        return prior_constant(q.n_domain, q.m_range)
    return Fraction(1, q.m_range ** (q.n_domain - q.k_runs))


def posterior_table(n_domain: int, m_range: int, k_max: int,
                    quantum: bool = True,
                    classical: bool = True) -> list[PosteriorRow]:
    """Rows k = 1..k_max. The classical column requires k_max <= N."""
    if classical and k_max > n_domain:
        raise ValueError(
            f"classical column needs kmax <= N, got {k_max} > {n_domain}")
    rows = []
    if quantum:
        terms = [(count, lik) for _, count, lik, _ in
                 evidence_terms(PosteriorQuery(n_domain, m_range, 0))]
    for k in range(1, k_max + 1):
        q = PosteriorQuery(n_domain, m_range, k)
        qv = None
        if quantum:
            # reuse the profile sum across k
            evidence = sum((c * lik ** k for c, lik in terms), Fraction(0))
            evidence /= m_range ** n_domain
            qv = joint_constant(q) / evidence
        cv = classical_posterior(q) if classical else None
        rows.append(PosteriorRow(k, qv, cv))
    return rows
