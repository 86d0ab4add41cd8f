import math
from collections import Counter
from fractions import Fraction

import numpy as np
import pytest

from qpcdeutsch.ftm import OutcomeClass, classify_outcome
from qpcdeutsch.function_space import (FunctionSpec, ResourceLimitError,
                                       make_constant)
from qpcdeutsch.inference import PosteriorQuery, quantum_evidence
from qpcdeutsch.montecarlo import (ExperimentConfig, brute_force_evidence,
                                   brute_force_evidences,
                                   brute_force_profiles, run_experiment,
                                   sample_outcome)


def draw_classes(f, draws, seed):
    rng = np.random.default_rng(seed)
    return Counter(classify_outcome(sample_outcome(f, rng), f.m_range, f.n_domain)
                   for _ in range(draws))


def test_sample_outcome_constant_deutsch():
    draws = 100_000
    counts = draw_classes(make_constant(2, 2, 1), draws, 0)
    sigma = math.sqrt(0.25 / draws)
    assert set(counts) == {OutcomeClass.FAIL, OutcomeClass.CONSTANT_INDICATION}
    assert abs(counts[OutcomeClass.FAIL] / draws - 0.5) < 3 * sigma


def test_sample_outcome_permutation_never_indicates():
    counts = draw_classes(FunctionSpec(4, 4, (2, 0, 3, 1)), 100_000, 1)
    assert counts[OutcomeClass.CONSTANT_INDICATION] == 0
    assert counts[OutcomeClass.ERROR] == 0


def test_sample_outcome_frequencies():
    f = FunctionSpec(3, 2, (0, 1, 0))
    draws = 100_000
    counts = draw_classes(f, draws, 2)
    p = 1 / 18
    assert abs(counts[OutcomeClass.CONSTANT_INDICATION] / draws - p) < 4 * math.sqrt(p * (1 - p) / draws)
    assert counts[OutcomeClass.ERROR] == 0


def test_config_validation():
    with pytest.raises(ValueError):
        ExperimentConfig(3, 2, 0, 10, 1)
    with pytest.raises(ValueError):
        ExperimentConfig(3, 2, 1, 0, 1)
    with pytest.raises(ValueError):
        ExperimentConfig(3, 2, 1, 10, -1)


def test_experiment_three_by_two():
    est = run_experiment(ExperimentConfig(3, 2, 1, 200_000, 7))
    assert est.exact == Fraction(3, 4)
    assert est.constant_and_conditioned <= est.conditioning_events <= est.trials
    assert est.conditioning_events + est.not_constant_verdicts == est.trials
    assert est.agrees()
    assert est.fail_agrees(2)
    assert est.error_outcomes == 0


def test_experiment_deutsch_is_certain():
    est = run_experiment(ExperimentConfig(2, 2, 1, 50_000, 3))
    assert est.estimate == 1.0 and est.std_error == 0.0
    assert est.agrees()


@pytest.mark.parametrize("n, m, k", [(8, 2, 1), (4, 3, 2), (5, 2, 3)])
def test_experiment_tracks_exact_posterior(n, m, k):
    est = run_experiment(ExperimentConfig(n, m, k, 300_000, 11))
    assert est.agrees()


def test_determinism_across_workers():
    cfg = ExperimentConfig(4, 3, 2, 200_000, 2024)
    a = run_experiment(cfg)
    b = run_experiment(cfg, workers=4)
    assert a == b
    assert run_experiment(ExperimentConfig(4, 3, 2, 200_000, 2025)) != a


def test_undefined_estimate():
    # a single trial at M=50 that ends in a not-constant verdict
    est = run_experiment(ExperimentConfig(6, 50, 3, 1, 0))
    assert not est.defined
    assert est.estimate is None and est.std_error is None
    assert not est.agrees()


def test_brute_force_evidence_values():
    assert brute_force_evidence(2, 2, 1) == Fraction(1, 4)
    assert brute_force_evidence(3, 2, 1) == Fraction(1, 6)
    assert brute_force_evidence(4, 3, 0) == 1


def test_brute_force_matches_hand_enumeration():
    # per-function likelihoods summed with plain Python over enumerate_all
    from qpcdeutsch.ftm import pr_constant_indication
    from qpcdeutsch.function_space import enumerate_all
    for n, m, k in [(4, 3, 2), (3, 5, 3)]:
        hand = sum(pr_constant_indication(f) ** k for f in enumerate_all(n, m))
        assert brute_force_evidence(n, m, k) == hand / m ** n


def test_brute_force_many_k():
    got = brute_force_evidences(5, 3, (0, 1, 2, 3))
    for k, v in got.items():
        assert v == quantum_evidence(PosteriorQuery(5, 3, k))


def test_brute_force_cap():
    with pytest.raises(ResourceLimitError):
        brute_force_evidence(8, 10, 1, cap=10**6)


def test_brute_force_profiles():
    found = brute_force_profiles(3, 2)
    assert found == {(1, 0, 0, 1): (2, {9}), (0, 1, 1, 0): (6, {5})}
