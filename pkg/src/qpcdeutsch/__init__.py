"""Generalized Deutsch algorithm: deciding whether f: {0..N-1} -> {0..M-1}
is constant with one superposed evaluation and a Fourier-basis measurement,
plus exact Bayesian comparison against classical point sampling."""

from .function_space import (FunctionSpec, ResourceLimitError, RowProfile,
                             enumerate_all, is_constant, make_constant,
                             row_profile, row_sums, sample_uniform)
from .ftm import (FtmOutcome, OutcomeClass, amplitude, classify_outcome,
                  final_matrix, ftm_entry, outcome_distribution,
                  pr_constant_indication, pr_constant_subspace, pr_k_alpha)
from .combinatorics import (check_total, enumerate_profiles, multiplicity,
                            profile_multiplicities)
from .inference import (PosteriorQuery, classical_posterior, joint_constant,
                        posterior_table, quantum_evidence, quantum_posterior)
from .asymptotics import (best_case_stats, figure1_curve, runs_for_error,
                          worst_case_function, worst_case_pr)
from .montecarlo import (ExperimentConfig, PosteriorEstimate,
                         brute_force_evidence, run_experiment, sample_outcome)

__version__ = "0.1.0"
