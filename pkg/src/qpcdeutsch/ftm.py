"""Final register state, Fourier-basis measurement and outcome classes.

The register after computing f is held as an M x N matrix with entries
delta(m, f(n)) / sqrt(N). The measured observable has the MN Fourier
transform matrices F(alpha, beta) as eigenstates, so outcome amplitudes are
the 2-D DFT of the state matrix.

Two numeric paths coexist: probabilities of beta = 0 outcomes are exact
rationals computed from integer row sums, while the full (alpha, beta)
grid is floating-point complex.
"""

from __future__ import annotations

import cmath
import enum
import math
from dataclasses import dataclass
from fractions import Fraction

import numpy as np

from .combinatorics import enumerate_profiles
from .function_space import FunctionSpec, RowProfile, row_sums

# Comparison tolerance for computed probabilities and amplitudes.
TOL = 1e-10
# Tolerance for quantities that vanish structurally (ERROR amplitudes,
# FAIL offset).
ZERO_TOL = 1e-12


class OutcomeClass(str, enum.Enum):
    CONSTANT_INDICATION = "CONSTANT_INDICATION"
    FAIL = "FAIL"
    NOT_CONSTANT = "NOT_CONSTANT"
    ERROR = "ERROR"


# Names of the N = M = 2 flag states for each class.
DEUTSCH_FLAGS = {
    OutcomeClass.CONSTANT_INDICATION: "SAME",
    OutcomeClass.FAIL: "FAIL",
    OutcomeClass.NOT_CONSTANT: "DIFFERENT",
    OutcomeClass.ERROR: "ERROR",
}


@dataclass(frozen=True)
class FtmOutcome:
    alpha: int
    beta: int


@dataclass(frozen=True)
class FunctionMatrix:
    m_rows: int
    n_cols: int
    entries: np.ndarray

    def norm(self) -> float:
        return float(np.linalg.norm(self.entries))


@dataclass(frozen=True)
class OutcomeDistribution:
    m_range: int
    n_domain: int
    probabilities: np.ndarray
    class_totals: dict

    def probability(self, alpha: int, beta: int) -> float:
        return float(self.probabilities[alpha, beta])

    def rows(self):
        """(alpha, beta, probability, class) in row-major order."""
        for alpha in range(self.m_range):
            for beta in range(self.n_domain):
                yield (alpha, beta, float(self.probabilities[alpha, beta]),
                       classify_outcome(FtmOutcome(alpha, beta),
                                        self.m_range, self.n_domain))


def final_matrix(f: FunctionSpec) -> FunctionMatrix:
    entries = np.zeros((f.m_range, f.n_domain))
    entries[list(f.values), np.arange(f.n_domain)] = 1.0 / math.sqrt(f.n_domain)
    return FunctionMatrix(f.m_range, f.n_domain, entries)


def ftm_entry(alpha: int, beta: int, m: int, n: int, M: int, N: int) -> complex:
    return (cmath.exp(2j * math.pi * alpha * m / M)
            * cmath.exp(2j * math.pi * beta * n / N) / math.sqrt(M * N))


def ftm_matrix(alpha: int, beta: int, M: int, N: int) -> np.ndarray:
    m = np.arange(M)[:, None]
    n = np.arange(N)[None, :]
    return (np.exp(2j * np.pi * alpha * m / M) * np.exp(2j * np.pi * beta * n / N)
            / math.sqrt(M * N))


def scalar_product(a: np.ndarray, b: np.ndarray) -> complex:
    """Tr(A^dagger B)."""
    return complex(np.sum(np.conj(a) * b))


def amplitude(f: FunctionSpec, outcome: FtmOutcome) -> complex:
    """Projection Tr(F(alpha,beta)^dagger F) of the final state.

    Summed over n ascending; amplitude(f, (0, 0)) is 1/sqrt(M) for every f.
    """
    M, N = f.m_range, f.n_domain
    if not (0 <= outcome.alpha < M and 0 <= outcome.beta < N):
        raise ValueError(f"outcome {outcome} outside {M}x{N} grid")
    total = 0j
    for n, v in enumerate(f.values):
        total += cmath.exp(-2j * math.pi * (outcome.alpha * v % M) / M
                           - 2j * math.pi * (outcome.beta * n % N) / N)
    return total / (math.sqrt(M) * N)


def _phases(size: int) -> np.ndarray:
    k = np.arange(size)
    return np.exp(-2j * np.pi * (np.outer(k, k) % size) / size)


def amplitude_grid(values: np.ndarray, m_range: int) -> np.ndarray:
    """Amplitudes for a batch of value rows, shape (batch, M, N).

    The sum over n is a matrix product in fixed order, so results do not
    depend on how a batch is split.
    """
    values = np.atleast_2d(values)
    N = values.shape[1]
    wm = _phases(m_range)            # (alpha, m)
    wn = _phases(N)                  # (beta, n)
    row_phase = wm[:, values]        # (alpha, batch, n)
    grid = np.einsum("abn,cn->bac", row_phase, wn)
    return grid / (math.sqrt(m_range) * N)


def classify_outcome(outcome: FtmOutcome, M: int, N: int) -> OutcomeClass:
    if not (0 <= outcome.alpha < M and 0 <= outcome.beta < N):
        raise ValueError(f"outcome {outcome} outside {M}x{N} grid")
    if outcome.alpha == 0:
        return OutcomeClass.FAIL if outcome.beta == 0 else OutcomeClass.ERROR
    if outcome.beta == 0:
        return OutcomeClass.CONSTANT_INDICATION
    return OutcomeClass.NOT_CONSTANT


def class_grid(M: int, N: int) -> np.ndarray:
    """Array of OutcomeClass labels indexed by (alpha, beta)."""
    grid = np.empty((M, N), dtype=object)
    for a in range(M):
        for b in range(N):
            grid[a, b] = classify_outcome(FtmOutcome(a, b), M, N)
    return grid


def _class_totals(probs: np.ndarray) -> dict:
    return {
        OutcomeClass.CONSTANT_INDICATION: float(probs[1:, 0].sum()),
        OutcomeClass.FAIL: float(probs[0, 0]),
        OutcomeClass.NOT_CONSTANT: float(probs[1:, 1:].sum()),
        OutcomeClass.ERROR: float(probs[0, 1:].sum()),
    }


def outcome_distribution(f: FunctionSpec) -> OutcomeDistribution:
    """Probabilities |amplitude|**2 over the whole (alpha, beta) grid.

    Values below ZERO_TOL are roundoff from cancelling phases and are
    stored as exact zeros.
    """
    amps = amplitude_grid(np.asarray([f.values]), f.m_range)[0]
    probs = np.abs(amps) ** 2
    probs[probs < ZERO_TOL] = 0.0
    return OutcomeDistribution(f.m_range, f.n_domain, probs, _class_totals(probs))


def pr_k_alpha(f: FunctionSpec, alpha: int) -> Fraction:
    """Probability of projecting onto the alpha-th constant function."""
    if not 0 <= alpha < f.m_range:
        raise ValueError(f"alpha={alpha} outside 0..{f.m_range - 1}")
    return Fraction(row_sums(f)[alpha] ** 2, f.n_domain ** 2)


def pr_constant_subspace(f: FunctionSpec) -> Fraction:
    """Probability of projecting onto the span of the constant functions."""
    return Fraction(sum(s * s for s in row_sums(f)), f.n_domain ** 2)


def pr_constant_indication(f: FunctionSpec) -> Fraction:
    return pr_constant_subspace(f) - Fraction(1, f.m_range)


def profile_likelihood(profile: RowProfile, m_range: int) -> Fraction:
    """Single-run constant-indication probability shared by a profile.

    Each of the j_l rows holding l ones contributes l**2 / N**2.
    """
    n = profile.n_domain
    return Fraction(profile.sum_squares(), n * n) - Fraction(1, m_range)


def grouped_square_likelihood(profile: RowProfile, m_range: int) -> Fraction:
    """The grouped form sum (l * j_l)**2 / N**2 - 1/M, kept for comparison.

    It matches profile_likelihood only when at most one row is occupied
    per l; for permutations it is wrong (it gives 1 - 1/M instead of 0).
    """
    n = profile.n_domain
    grouped = sum((l * j) ** 2 for l, j in enumerate(profile.counts))
    return Fraction(grouped, n * n) - Fraction(1, m_range)


def constancy_witnesses(n_domain: int, m_range: int) -> list[RowProfile]:
    """Profiles of non-constant functions that can still yield a
    constant-indication outcome.

    Constancy is decidable with zero error by this measurement exactly when
    the list is empty.
    """
    witnesses = []
    for profile in enumerate_profiles(n_domain, m_range):
        if profile.counts[n_domain] == 1:
            continue                                  # the constant profile
        if profile_likelihood(profile, m_range) > 0:
            witnesses.append(profile)
    return witnesses


def constancy_is_zero_error(n_domain: int, m_range: int) -> bool:
    return not constancy_witnesses(n_domain, m_range)
