"""Row-profile index set and exact multiplicities.

Everything here is integer arithmetic; no floats.
"""

from __future__ import annotations

import threading
from dataclasses import dataclass
from typing import Iterator

from .function_space import RowProfile


@dataclass(frozen=True)
class ProfileMultiplicity:
    profile: RowProfile
    count: int


_factorials = [1]
_factorial_lock = threading.Lock()


def factorial(n: int) -> int:
    if n < 0:
        raise ValueError("factorial of a negative number")
    if n >= len(_factorials):
        with _factorial_lock:
            while len(_factorials) <= n:
                _factorials.append(_factorials[-1] * len(_factorials))
    return _factorials[n]


def partitions_at_most(n: int, max_parts: int,
                       max_part: int | None = None) -> Iterator[tuple[int, ...]]:
    """Partitions of n into at most max_parts parts, parts non-increasing.

    Generated in reverse lexicographic order, largest first part first:
    for n=4 the sequence is (4,), (3,1), (2,2), (2,1,1), (1,1,1,1).
    """
    if max_part is None:
        max_part = n
    if n == 0:
        yield ()
        return
    if max_parts == 0:
        return
    for first in range(min(n, max_part), 0, -1):
        # remaining n-first must fit in max_parts-1 parts of size <= first
        if first * max_parts < n:
            break
        for rest in partitions_at_most(n - first, max_parts - 1, first):
            yield (first,) + rest


def profile_from_partition(parts: tuple[int, ...], n_domain: int,
                           m_range: int) -> RowProfile:
    counts = [0] * (n_domain + 1)
    for p in parts:
        counts[p] += 1
    counts[0] = m_range - len(parts)
    return RowProfile(tuple(counts))


def enumerate_profiles(n_domain: int, m_range: int) -> list[RowProfile]:
    """Every (j_0..j_N) with sum l*j_l = N and sum j_l = M, in canonical order.

    Canonical order is lexicographic on (j_N, ..., j_1), descending, so the
    constant-function profile (j_N = 1) always comes first.
    """
    if n_domain < 1 or m_range < 1:
        raise ValueError("N and M must be positive")
    profiles = [profile_from_partition(p, n_domain, m_range)
                for p in partitions_at_most(n_domain, m_range)]
    profiles.sort(key=lambda pr: pr.counts[:0:-1], reverse=True)
    return profiles


def multiplicity(profile: RowProfile, n_domain: int, m_range: int) -> int:
    """Number of functions whose matrix has the given row profile.

    Column arrangements N!/prod (l!)^j_l times row arrangements
    M!/prod j_l!.
    """
    profile.validate(n_domain, m_range)
    return _multiplicity(profile.counts, n_domain, m_range)


def _multiplicity(counts: tuple[int, ...], n_domain: int, m_range: int) -> int:
    factorial(max(n_domain, m_range))
    fact = _factorials
    columns = fact[n_domain]
    rows = fact[m_range]
    for l, j in enumerate(counts):
        if j:
            columns //= fact[l] ** j
            rows //= fact[j]
    return columns * rows


def profile_multiplicities(n_domain: int,
                           m_range: int) -> list[ProfileMultiplicity]:
    # generated profiles are valid by construction
    return [ProfileMultiplicity(p, _multiplicity(p.counts, n_domain, m_range))
            for p in enumerate_profiles(n_domain, m_range)]


def check_total(n_domain: int, m_range: int) -> bool:
    total = sum(pm.count for pm in profile_multiplicities(n_domain, m_range))
    return total == m_range ** n_domain


def partition_count(n: int, max_parts: int) -> int:
    """p(n, <= k parts) by the recurrence p(n,k) = p(n,k-1) + p(n-k,k).

    Independent of the generator above; used to cross-check it.
    """
    # table[i][k] = partitions of i into at most k parts
    table = [[0] * (max_parts + 1) for _ in range(n + 1)]
    for k in range(max_parts + 1):
        table[0][k] = 1
    for i in range(1, n + 1):
        for k in range(1, max_parts + 1):
            table[i][k] = table[i][k - 1] + (table[i - k][k] if i >= k else 0)
    return table[n][max_parts]
