"""Exit criteria, one test per criterion, each with its tolerance and
runtime budget pinned here."""

import json
import math
import time
from fractions import Fraction

import numpy as np
import pytest

from qpcdeutsch import cli
from qpcdeutsch.asymptotics import (classical_limit_eps, crossing_point,
                                    figure1_curve, quantum_limit_eps,
                                    worst_case_function)
from qpcdeutsch.combinatorics import (enumerate_profiles, partition_count,
                                      profile_multiplicities)
from qpcdeutsch.ftm import (FtmOutcome, OutcomeClass, amplitude, ftm_matrix,
                            outcome_distribution, pr_constant_indication,
                            pr_constant_subspace, profile_likelihood)
from qpcdeutsch.function_space import (FunctionSpec, RowProfile,
                                       enumerate_all, is_constant,
                                       row_profile, sample_uniform)
from qpcdeutsch.inference import (PosteriorQuery, classical_posterior,
                                  quantum_evidence, quantum_posterior)
from qpcdeutsch.montecarlo import (ExperimentConfig, brute_force_evidences,
                                   brute_force_profiles, run_experiment)

COMPLEX_TOL = 1e-10
ZERO_TOL = 1e-12
# (N, M) pairs swept by the enumeration oracles: M**N <= 1e6, N, M <= 24
ORACLE_LIMIT = 10**6
SWEEP_MAX = 24


def oracle_sweep():
    for n in range(1, SWEEP_MAX + 1):
        for m in range(1, SWEEP_MAX + 1):
            if m ** n <= ORACLE_LIMIT:
                yield n, m


class Budget:
    def __init__(self, seconds):
        self.seconds = seconds

    def __enter__(self):
        self.start = time.perf_counter()
        return self

    def __exit__(self, *exc):
        self.elapsed = time.perf_counter() - self.start
        if exc[0] is None:
            assert self.elapsed < self.seconds, (
                f"took {self.elapsed:.1f}s, budget {self.seconds}s")


@pytest.mark.acceptance(1, "Deutsch recovery N=M=2")
def test_deutsch_recovery():
    with Budget(1):
        for f in enumerate_all(2, 2):
            dist = outcome_distribution(f)
            totals = dist.class_totals
            flag = (OutcomeClass.CONSTANT_INDICATION if is_constant(f)
                    else OutcomeClass.NOT_CONSTANT)
            other = (OutcomeClass.NOT_CONSTANT if is_constant(f)
                     else OutcomeClass.CONSTANT_INDICATION)
            assert abs(totals[flag] - 0.5) < COMPLEX_TOL
            assert abs(totals[OutcomeClass.FAIL] - 0.5) < COMPLEX_TOL
            assert totals[other] < COMPLEX_TOL
            assert totals[OutcomeClass.ERROR] < COMPLEX_TOL
            # rational path
            expected = Fraction(1, 2) if is_constant(f) else Fraction(0)
            assert pr_constant_indication(f) == expected
            assert pr_constant_subspace(f) - pr_constant_indication(f) == Fraction(1, 2)
        assert quantum_posterior(PosteriorQuery(2, 2, 1)) == 1


@pytest.mark.acceptance(2, "FAIL universality, 200 random functions")
def test_fail_universality():
    rng = np.random.default_rng(20260101)
    with Budget(5):
        for _ in range(200):
            n = int(rng.integers(1, 13))
            m = int(rng.integers(1, 13))
            f = sample_uniform(n, m, rng)
            p = abs(amplitude(f, FtmOutcome(0, 0))) ** 2
            assert abs(p - 1 / m) < ZERO_TOL
            assert abs(outcome_distribution(f).probability(0, 0) - 1 / m) < ZERO_TOL


@pytest.mark.acceptance(3, "FTM orthonormality and completeness, N,M <= 8")
def test_ftm_basis_validity():
    rng = np.random.default_rng(3)
    with Budget(10):
        for m in range(1, 9):
            for n in range(1, 9):
                basis = np.stack([ftm_matrix(a, b, m, n).ravel()
                                  for a in range(m) for b in range(n)])
                gram = basis.conj() @ basis.T
                assert np.abs(gram - np.eye(m * n)).max() < COMPLEX_TOL
                # resolution of the identity
                assert np.abs(basis.T @ basis.conj() - np.eye(m * n)).max() < COMPLEX_TOL
                for _ in range(10):
                    f = sample_uniform(n, m, rng)
                    total = outcome_distribution(f).probabilities.sum()
                    assert abs(total - 1) < COMPLEX_TOL


@pytest.mark.acceptance(4, "Row-profile likelihood equals per-function likelihood")
def test_grouped_likelihood_correction():
    with Budget(60):
        for n, m in oracle_sweep():
            found = brute_force_profiles(n, m)
            assert len(found) == len(enumerate_profiles(n, m))
            for counts, (_, squares) in found.items():
                # every function with this profile has the same sum of
                # squared row sums, and it matches the profile formula
                assert len(squares) == 1
                (sq,) = squares
                lik = Fraction(sq, n * n) - Fraction(1, m)
                assert profile_likelihood(RowProfile(counts), m) == lik
        for n in range(2, 33):
            ident = FunctionSpec(n, n, tuple(range(n)))
            assert pr_constant_indication(ident) == 0
            assert pr_constant_subspace(ident) - pr_constant_indication(ident) == Fraction(1, n)
            dist = outcome_distribution(ident)
            assert abs(dist.class_totals[OutcomeClass.FAIL] - 1 / n) < ZERO_TOL
            assert dist.class_totals[OutcomeClass.CONSTANT_INDICATION] < COMPLEX_TOL
        # direct per-function check on a few small spaces
        for n, m in [(3, 2), (4, 3), (5, 4), (6, 3)]:
            for f in enumerate_all(n, m):
                assert profile_likelihood(row_profile(f), m) == pr_constant_indication(f)


@pytest.mark.acceptance(5, "Combinatorial completeness, N,M <= 24")
def test_combinatorial_completeness():
    with Budget(5):
        for n in range(1, 25):
            for m in range(1, 25):
                pms = profile_multiplicities(n, m)
                assert sum(pm.count for pm in pms) == m ** n
                assert len(pms) == partition_count(n, m)


@pytest.mark.acceptance(6, "Posterior oracle equivalence, M**N <= 1e6, k = 1..3")
def test_posterior_oracle_equivalence():
    with Budget(120):
        for n, m in oracle_sweep():
            brute = brute_force_evidences(n, m, (1, 2, 3))
            for k in (1, 2, 3):
                assert quantum_evidence(PosteriorQuery(n, m, k)) == brute[k], (n, m, k)
        assert quantum_posterior(PosteriorQuery(3, 2, 1)) == Fraction(3, 4)
        assert classical_posterior(PosteriorQuery(3, 2, 1)) == Fraction(1, 4)


@pytest.mark.acceptance(7, "Classical posterior M**(k-N), N,M <= 24")
def test_classical_formula():
    with Budget(1):
        for n in range(1, 25):
            for m in range(1, 25):
                for k in range(1, n + 1):
                    assert classical_posterior(PosteriorQuery(n, m, k)) == Fraction(m) ** (k - n)
                assert classical_posterior(PosteriorQuery(n, m, n)) == 1


@pytest.mark.acceptance(8, "Worst case probability and figure-1 curves")
def test_worst_case():
    with Budget(1):
        for n in range(2, 65):
            expected = 1 - Fraction(2, n) + Fraction(2, n * n)
            for m in (2, 3, 5, 24):
                assert pr_constant_subspace(worst_case_function(n, m)) == expected
        for c in figure1_curve(11):
            e = round(c.eta, 10)
            if 0.1 <= e <= 0.7:
                assert c.quantum_eps < c.classical_eps
        for eta in (0.1, 0.2, 0.3, 0.4, 0.5, 0.6, 0.7):
            assert quantum_limit_eps(eta) < classical_limit_eps(eta)
        assert quantum_limit_eps(0.9) > classical_limit_eps(0.9)
        assert 0.79 < crossing_point() < 0.80
        assert abs(figure1_curve(2)[-1].quantum_eps - math.exp(-2)) < ZERO_TOL


@pytest.mark.acceptance(9, "Quantum beats classical at k=1,2 for figure presets")
def test_figure_presets_quantum_advantage():
    with Budget(60):
        for n, m in [(8, 2), (16, 2), (16, 8), (24, 24)]:
            for k in (1, 2):
                q = PosteriorQuery(n, m, k)
                assert quantum_posterior(q) > classical_posterior(q)


@pytest.mark.acceptance(10, "Monte-Carlo consistency, 1e6 trials")
def test_montecarlo_consistency(capsys):
    with Budget(60):
        est = run_experiment(ExperimentConfig(3, 2, 1, 10**6, 42))
        assert est.exact == Fraction(3, 4)
        assert abs(est.estimate - 0.75) <= 4 * est.std_error
        p = 0.5
        sd = math.sqrt(p * (1 - p) / est.total_outcomes)
        assert abs(est.fail_frequency - p) <= 3 * sd
        argv = ["montecarlo", "--n", "3", "--m", "2", "--k", "1",
                "--trials", str(10**6), "--seed", "42"]
        assert cli.main(argv) == 0
        first = capsys.readouterr().out
        assert cli.main(argv) == 0
        second = capsys.readouterr().out
        assert first == second
        report = json.loads(first)
        assert report["conditioning_events"] == est.conditioning_events
        assert report["agreement"] is True
