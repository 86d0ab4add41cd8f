"""Invariant suites behind ``qpcdeutsch selfcheck``.

Each suite returns None on success or a short description of the first
violation found.
"""

from __future__ import annotations

from fractions import Fraction

import numpy as np

from . import asymptotics as asy
from .combinatorics import (check_total, enumerate_profiles, partition_count,
                            profile_multiplicities)
from .ftm import (TOL, ZERO_TOL, FtmOutcome, OutcomeClass, amplitude,
                  ftm_matrix, outcome_distribution, pr_constant_indication,
                  pr_constant_subspace)
from .function_space import FunctionSpec, enumerate_all, sample_uniform
from .inference import PosteriorQuery, classical_posterior, quantum_evidence
from .montecarlo import (ExperimentConfig, brute_force_evidences,
                         brute_force_profiles, run_experiment)


def orthonormality(max_size: int) -> str | None:
    for M in range(1, max_size + 1):
        for N in range(1, max_size + 1):
            basis = np.stack([ftm_matrix(a, b, M, N).ravel()
                              for a in range(M) for b in range(N)])
            gram = basis.conj() @ basis.T
            err = np.abs(gram - np.eye(M * N)).max()
            if err > TOL:
                return f"M={M} N={N}: Gram matrix off identity by {err:.3g}"
    return None


def normalization(samples: int, max_size: int, seed: int = 0) -> str | None:
    rng = np.random.default_rng(seed)
    for _ in range(samples):
        N = int(rng.integers(1, max_size + 1))
        M = int(rng.integers(1, max_size + 1))
        f = sample_uniform(N, M, rng)
        dist = outcome_distribution(f)
        total = dist.probabilities.sum()
        if abs(total - 1) > TOL:
            return f"f={f} M={M}: probabilities sum to {total!r}"
        if abs(dist.probability(0, 0) - 1 / M) > ZERO_TOL:
            return f"f={f} M={M}: FAIL probability {dist.probability(0, 0)!r}"
        if N > 1 and dist.probabilities[0, 1:].max() > ZERO_TOL:
            return f"f={f} M={M}: nonzero ERROR probability"
        exact = float(pr_constant_indication(f))
        if abs(dist.probabilities[1:, 0].sum() - exact) > TOL:
            return f"f={f} M={M}: complex and rational paths disagree"
    return None


def deutsch_case() -> str | None:
    for f in enumerate_all(2, 2):
        dist = outcome_distribution(f)
        totals = dist.class_totals
        want = (OutcomeClass.CONSTANT_INDICATION if len(set(f.values)) == 1
                else OutcomeClass.NOT_CONSTANT)
        if abs(totals[want] - 0.5) > TOL or abs(totals[OutcomeClass.FAIL] - 0.5) > TOL:
            return f"f={f}: distribution {totals}"
    if quantum_evidence(PosteriorQuery(2, 2, 1)) != Fraction(1, 4):
        return "evidence(2,2,1) != 1/4"
    return None


def combinatorics(max_size: int) -> str | None:
    for N in range(1, max_size + 1):
        for M in range(1, max_size + 1):
            if not check_total(N, M):
                return f"N={N} M={M}: multiplicities do not sum to M**N"
            if len(enumerate_profiles(N, M)) != partition_count(N, M):
                return f"N={N} M={M}: profile count != partition count"
    return None


def _sweep(limit: int, max_size: int = 24):
    for N in range(1, max_size + 1):
        for M in range(1, max_size + 1):
            if M ** N <= limit:
                yield N, M


def oracle_evidence(limit: int) -> str | None:
    for N, M in _sweep(limit):
        brute = brute_force_evidences(N, M, (1, 2, 3))
        for k in (1, 2, 3):
            if brute[k] != quantum_evidence(PosteriorQuery(N, M, k)):
                return f"N={N} M={M} k={k}: profile sum != enumeration"
    return None


def profile_histogram(limit: int) -> str | None:
    for N, M in _sweep(limit):
        found = brute_force_profiles(N, M)
        for pm in profile_multiplicities(N, M):
            n, squares = found.get(pm.profile.counts, (0, set()))
            if n != pm.count:
                return f"N={N} M={M} {pm.profile.counts}: {n} != {pm.count}"
            if squares != {pm.profile.sum_squares()}:
                return f"N={N} M={M} {pm.profile.counts}: likelihood mismatch"
        if len(found) != len(enumerate_profiles(N, M)):
            return f"N={N} M={M}: enumeration found extra profiles"
    return None


def permutations(max_size: int) -> str | None:
    for N in range(2, max_size + 1):
        f = FunctionSpec(N, N, tuple(range(N)))
        if pr_constant_indication(f) != 0:
            return f"N={N}: identity permutation has constant indications"
        fail = abs(amplitude(f, FtmOutcome(0, 0))) ** 2
        if abs(fail - 1 / N) > ZERO_TOL:
            return f"N={N}: FAIL probability {fail!r}"
    return None


def classical(max_size: int) -> str | None:
    for N in range(1, max_size + 1):
        for M in range(1, max_size + 1):
            for k in range(1, N + 1):
                if classical_posterior(PosteriorQuery(N, M, k)) != Fraction(M) ** (k - N):
                    return f"N={N} M={M} k={k}"
    return None


def worst_case(max_n: int) -> str | None:
    for N in range(2, max_n + 1):
        for M in (2, 3, 7):
            g = asy.worst_case_function(N, M)
            if pr_constant_subspace(g) != asy.worst_case_pr(N):
                return f"N={N} M={M}"
    eta = asy.crossing_point()
    if not 0.79 < eta < 0.80:
        return f"crossing point {eta}"
    for e in (0.1, 0.2, 0.3, 0.4, 0.5, 0.6, 0.7):
        if not asy.quantum_limit_eps(e) < asy.classical_limit_eps(e):
            return f"quantum not below classical at eta={e}"
    if not asy.quantum_limit_eps(0.9) > asy.classical_limit_eps(0.9):
        return "no reversal at eta=0.9"
    return None


def montecarlo(trials: int) -> str | None:
    est = run_experiment(ExperimentConfig(3, 2, 1, trials, 42))
    if not est.agrees():
        return f"estimate {est.estimate} vs exact {est.exact}"
    if not est.fail_agrees(2):
        return f"FAIL frequency {est.fail_frequency}"
    if est.error_outcomes:
        return f"{est.error_outcomes} ERROR outcomes"
    return None


def suites(level: str):
    full = level == "full"
    return [
        ("orthonormality", lambda: orthonormality(8)),
        ("normalization", lambda: normalization(200, 12)),
        ("deutsch", deutsch_case),
        ("combinatorics", lambda: combinatorics(24 if full else 12)),
        ("oracle-evidence", lambda: oracle_evidence(10**6 if full else 10**4)),
        ("profile-histogram", lambda: profile_histogram(10**6 if full else 10**4)),
        ("permutations", lambda: permutations(32 if full else 12)),
        ("classical", lambda: classical(24 if full else 10)),
        ("worst-case", lambda: worst_case(64)),
        ("montecarlo", lambda: montecarlo(10**6 if full else 10**5)),
    ]


def run(level: str, out) -> bool:
    ok = True
    for name, check in suites(level):
        try:
            problem = check()
        except Exception as exc:  # a crashing suite counts as a failure
            problem = f"{type(exc).__name__}: {exc}"
        if problem is None:
            print(f"PASS {name}", file=out)
        else:
            ok = False
            print(f"FAIL {name}: {problem}", file=out)
    return ok

