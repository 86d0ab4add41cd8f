"""Stochastic validation and brute-force enumeration oracles.

Trials are processed in fixed-size blocks. Block b draws from a stream
derived from (seed, b) alone, so results are identical whether blocks run
serially or on a pool of workers.
"""

from __future__ import annotations

import math
from collections import Counter
from concurrent.futures import ThreadPoolExecutor
from dataclasses import dataclass, field
from fractions import Fraction

import numpy as np

from .ftm import ZERO_TOL, FtmOutcome, amplitude_grid, outcome_distribution
from .function_space import (FunctionSpec, all_values_array, check_cap,
                             row_sums_array)
from .inference import PosteriorQuery, quantum_posterior

BLOCK_SIZE = 1 << 16
# Enumeration chunk for the brute-force oracles.
CHUNK = 1 << 17
# Agreement thresholds in standard errors.
POSTERIOR_SIGMAS = 4.0
FAIL_SIGMAS = 3.0


@dataclass(frozen=True)
class ExperimentConfig:
    n_domain: int
    m_range: int
    k_target: int
    trials: int
    seed: int

    def __post_init__(self):
        if self.n_domain < 1 or self.m_range < 1:
            raise ValueError("N and M must be positive")
        if self.trials < 1 or self.k_target < 1:
            raise ValueError("trials and k must be at least 1")
        if not 0 <= self.seed < 2**64:
            raise ValueError("seed must be a 64-bit unsigned integer")


@dataclass
class PosteriorEstimate:
    trials: int
    conditioning_events: int
    constant_and_conditioned: int
    not_constant_verdicts: int
    fail_outcomes: int
    error_outcomes: int
    total_outcomes: int
    estimate: float | None = None
    std_error: float | None = None
    exact: Fraction | None = field(default=None, compare=False)

    @property
    def defined(self) -> bool:
        return self.conditioning_events > 0

    @property
    def fail_frequency(self) -> float:
        return self.fail_outcomes / self.total_outcomes

    def agrees(self, sigmas: float = POSTERIOR_SIGMAS) -> bool:
        if not self.defined or self.exact is None:
            return False
        return abs(self.estimate - float(self.exact)) <= sigmas * self.std_error

    def fail_agrees(self, m_range: int, sigmas: float = FAIL_SIGMAS) -> bool:
        p = 1.0 / m_range
        sd = math.sqrt(p * (1 - p) / self.total_outcomes)
        return abs(self.fail_frequency - p) <= sigmas * sd


def _cdf_table(values: np.ndarray, m_range: int) -> np.ndarray:
    """Normalized cumulative outcome distributions, one row per function."""
    probs = np.abs(amplitude_grid(values, m_range)) ** 2
    probs = probs.reshape(values.shape[0], -1)
    probs[probs < ZERO_TOL] = 0.0
    cdf = np.cumsum(probs, axis=1)
    cdf /= cdf[:, -1:]
    return cdf


def sample_outcome(f: FunctionSpec, rng: np.random.Generator) -> FtmOutcome:
    """Draw one measurement outcome by inverse CDF over row-major (alpha, beta)."""
    probs = outcome_distribution(f).probabilities.ravel()
    cdf = np.cumsum(probs)
    cdf /= cdf[-1]
    idx = int(np.searchsorted(cdf, rng.random(), side="right"))
    idx = min(idx, probs.size - 1)
    return FtmOutcome(idx // f.n_domain, idx % f.n_domain)


def block_stream(seed: int, block: int) -> np.random.Generator:
    return np.random.Generator(
        np.random.Philox(np.random.SeedSequence(seed, spawn_key=(block,))))


def _run_block(config: ExperimentConfig, block: int, size: int) -> np.ndarray:
    """Counts for one block: [conditioned, const&conditioned, aborted,
    fails, errors, outcomes]."""
    N, M, k = config.n_domain, config.m_range, config.k_target
    rng = block_stream(config.seed, block)
    values = rng.integers(0, M, size=(size, N))
    constant = np.all(values == values[:, :1], axis=1)

    # distributions are shared by trials that drew the same function
    uniq, inverse = np.unique(values, axis=0, return_inverse=True)
    inverse = inverse.ravel()
    cdf = _cdf_table(uniq, M)

    hits = np.zeros(size, dtype=np.int64)
    active = np.arange(size)
    conditioned = np.zeros(size, dtype=bool)
    aborted = 0
    fails = errors = outcomes = 0
    while active.size:
        u = rng.random(active.size)
        idx = (cdf[inverse[active]] <= u[:, None]).sum(axis=1)
        alpha, beta = idx // N, idx % N
        outcomes += active.size
        fails += int(np.count_nonzero(idx == 0))
        errors += int(np.count_nonzero((alpha == 0) & (beta > 0)))
        indication = (alpha > 0) & (beta == 0)
        verdict = (alpha > 0) & (beta > 0)
        hits[active[indication]] += 1
        done = hits[active] >= k
        conditioned[active[done]] = True
        aborted += int(np.count_nonzero(verdict))
        active = active[~(done | verdict)]
    return np.array([
        np.count_nonzero(conditioned),
        np.count_nonzero(conditioned & constant),
        aborted, fails, errors, outcomes,
    ], dtype=np.int64)


def run_experiment(config: ExperimentConfig, workers: int = 1,
                   with_exact: bool = True) -> PosteriorEstimate:
    """Simulate the k-indication protocol over uniformly drawn functions.

    Per trial: draw f, then measure repeatedly. FAIL outcomes are discarded;
    a NOT_CONSTANT outcome ends the trial without conditioning; k
    constant indications end it as a conditioning event.
    """
    sizes = [min(BLOCK_SIZE, config.trials - start)
             for start in range(0, config.trials, BLOCK_SIZE)]
    jobs = list(enumerate(sizes))
    if workers > 1:
        with ThreadPoolExecutor(max_workers=workers) as pool:
            parts = list(pool.map(lambda j: _run_block(config, *j), jobs))
    else:
        parts = [_run_block(config, b, s) for b, s in jobs]
    totals = np.sum(parts, axis=0)
    est = PosteriorEstimate(
        trials=config.trials,
        conditioning_events=int(totals[0]),
        constant_and_conditioned=int(totals[1]),
        not_constant_verdicts=int(totals[2]),
        fail_outcomes=int(totals[3]),
        error_outcomes=int(totals[4]),
        total_outcomes=int(totals[5]),
    )
    if est.conditioning_events:
        p = est.constant_and_conditioned / est.conditioning_events
        est.estimate = p
        est.std_error = math.sqrt(p * (1 - p) / est.conditioning_events)
    if with_exact:
        est.exact = quantum_posterior(
            PosteriorQuery(config.n_domain, config.m_range, config.k_target))
    return est


def _sum_squares_histogram(n_domain: int, m_range: int,
                           cap: int | None = None) -> Counter:
    """How many functions have each value of sum over rows of (row sum)**2."""
    total = check_cap(n_domain, m_range, cap)
    hist = Counter()
    for start in range(0, total, CHUNK):
        values = all_values_array(n_domain, m_range, start, start + CHUNK)
        sums = row_sums_array(values, m_range)
        sq, counts = np.unique((sums * sums).sum(axis=1), return_counts=True)
        hist.update(dict(zip(sq.tolist(), counts.tolist())))
    return hist


def brute_force_evidence(n_domain: int, m_range: int, k: int,
                         cap: int | None = None) -> Fraction:
    """Pr(k indications) by walking every one of the M**N functions.

    Each function contributes M**-N * (sum_alpha s_alpha**2 / N**2 - 1/M)**k
    with s_alpha its row sums.
    """
    if k == 0:
        check_cap(n_domain, m_range, cap)
        return Fraction(1)
    hist = _sum_squares_histogram(n_domain, m_range, cap)
    nn = n_domain * n_domain
    total = Fraction(0)
    for sq, count in sorted(hist.items()):
        total += count * (Fraction(sq, nn) - Fraction(1, m_range)) ** k
    return total / m_range ** n_domain


def brute_force_evidences(n_domain: int, m_range: int, ks,
                          cap: int | None = None) -> dict:
    """brute_force_evidence for several k from a single enumeration pass."""
    hist = _sum_squares_histogram(n_domain, m_range, cap)
    nn = n_domain * n_domain
    out = {}
    for k in ks:
        if k == 0:
            out[k] = Fraction(1)
            continue
        total = sum((c * (Fraction(sq, nn) - Fraction(1, m_range)) ** k
                     for sq, c in sorted(hist.items())), Fraction(0))
        out[k] = total / m_range ** n_domain
    return out


def brute_force_profiles(n_domain: int, m_range: int,
                         cap: int | None = None) -> dict:
    """Map row profile -> (number of functions, set of sum-of-squares seen).

    Built by enumerating every function, independently of the partition
    generator.
    """
    total = check_cap(n_domain, m_range, cap)
    width = n_domain + 1
    nn = n_domain * n_domain
    fast_keys = (m_range + 1) ** width * (nn + 1) < 2**62
    radix = np.array([(m_range + 1) ** l for l in range(width)], dtype=np.int64)
    found: dict = {}
    for start in range(0, total, CHUNK):
        values = all_values_array(n_domain, m_range, start, start + CHUNK)
        batch = values.shape[0]
        sums = row_sums_array(values, m_range)
        flat = (np.arange(batch)[:, None] * width + sums).ravel()
        prof = np.bincount(flat, minlength=batch * width).reshape(batch, width)
        sq = (sums * sums).sum(axis=1)
        if fast_keys:
            # mixed-radix scalar key: profile digits in base M+1, then sq
            key = prof @ radix * (nn + 1) + sq
            uniq, counts = np.unique(key, return_counts=True)
            rows = []
            for kv in uniq.tolist():
                kv, square = divmod(kv, nn + 1)
                digits = []
                for _ in range(width):
                    kv, d = divmod(kv, m_range + 1)
                    digits.append(d)
                rows.append(digits + [square])
        else:
            keys = np.concatenate([prof, sq[:, None]], axis=1)
            uniq, counts = np.unique(keys, axis=0, return_counts=True)
            rows = uniq.tolist()
        for row, c in zip(rows, counts.tolist()):
            profile = tuple(row[:-1])
            n, squares = found.get(profile, (0, set()))
            found[profile] = (n + c, squares | {row[-1]})
    return found
