"""Problem instances f: {0..N-1} -> {0..M-1} and the space they live in."""

from __future__ import annotations

import itertools
from collections import Counter
from dataclasses import dataclass
from typing import Iterator, Sequence

import numpy as np

# Largest M**N that enumerate_all / brute-force oracles will walk.
ENUMERATION_CAP = 10**7


class ResourceLimitError(RuntimeError):
    """Raised when an enumeration would exceed the configured cap."""


@dataclass(frozen=True)
class FunctionSpec:
    n_domain: int
    m_range: int
    values: tuple[int, ...]

    def __post_init__(self):
        if self.n_domain < 1 or self.m_range < 1:
            raise ValueError("domain and range sizes must be positive")
        values = tuple(int(v) for v in self.values)
        object.__setattr__(self, "values", values)
        if len(values) != self.n_domain:
            raise ValueError(
                f"expected {self.n_domain} values, got {len(values)}")
        for n, v in enumerate(values):
            if not 0 <= v < self.m_range:
                raise ValueError(
                    f"f({n}) = {v} is outside 0..{self.m_range - 1}")

    @classmethod
    def from_values(cls, values: Sequence[int], m_range: int) -> "FunctionSpec":
        return cls(len(values), m_range, tuple(values))

    @classmethod
    def parse(cls, text: str, m_range: int) -> "FunctionSpec":
        """Parse a comma-separated literal such as ``"0,1,0"``.

        N is the number of entries. Raises ValueError on anything that is
        not a non-empty list of integers in ``0..m_range-1``.
        """
        parts = [p.strip() for p in text.split(",")]
        if not parts or any(p == "" for p in parts):
            raise ValueError(f"malformed function literal {text!r}")
        try:
            values = [int(p) for p in parts]
        except ValueError:
            raise ValueError(f"malformed function literal {text!r}") from None
        return cls.from_values(values, m_range)

    def __str__(self):
        return ",".join(str(v) for v in self.values)


@dataclass(frozen=True)
class RowProfile:
    """Occupancy tuple (j_0, ..., j_N): j_l rows of the matrix hold l ones."""

    counts: tuple[int, ...]

    def __post_init__(self):
        object.__setattr__(self, "counts", tuple(int(c) for c in self.counts))

    @property
    def n_domain(self) -> int:
        return len(self.counts) - 1

    @property
    def m_range(self) -> int:
        return sum(self.counts)

    def validate(self, n_domain: int, m_range: int) -> None:
        c = self.counts
        if len(c) != n_domain + 1:
            raise ValueError(f"profile {c} must have {n_domain + 1} entries")
        if any(not 0 <= j <= m_range for j in c):
            raise ValueError(f"profile {c} has an entry outside 0..{m_range}")
        if sum(l * j for l, j in enumerate(c)) != n_domain:
            raise ValueError(f"profile {c} does not place {n_domain} ones")
        if sum(c) != m_range:
            raise ValueError(f"profile {c} does not have {m_range} rows")

    def sum_squares(self) -> int:
        """Sum over rows of (ones in row)**2."""
        return sum(j * l * l for l, j in enumerate(self.counts))


def make_constant(n_domain: int, m_range: int, value: int) -> FunctionSpec:
    if not 0 <= value < m_range:
        raise ValueError(f"constant value {value} is outside 0..{m_range - 1}")
    return FunctionSpec(n_domain, m_range, (value,) * n_domain)


def row_sums(f: FunctionSpec) -> tuple[int, ...]:
    counts = [0] * f.m_range
    for v in f.values:
        counts[v] += 1
    return tuple(counts)


def row_profile(f: FunctionSpec) -> RowProfile:
    occupancy = Counter(row_sums(f))
    return RowProfile(tuple(occupancy.get(l, 0) for l in range(f.n_domain + 1)))


def is_constant(f: FunctionSpec) -> bool:
    return len(set(f.values)) == 1


def sample_uniform(n_domain: int, m_range: int,
                   rng: np.random.Generator) -> FunctionSpec:
    values = rng.integers(0, m_range, size=n_domain)
    return FunctionSpec(n_domain, m_range, tuple(values.tolist()))


def check_cap(n_domain: int, m_range: int, cap: int | None = None) -> int:
    """Return M**N, raising ResourceLimitError if it exceeds the cap."""
    cap = ENUMERATION_CAP if cap is None else cap
    total = m_range ** n_domain
    if total > cap:
        raise ResourceLimitError(
            f"{m_range}**{n_domain} = {total} functions exceeds the "
            f"enumeration cap {cap}")
    return total


def enumerate_all(n_domain: int, m_range: int,
                  cap: int | None = None) -> Iterator[FunctionSpec]:
    """Yield every function once, in lexicographic order of its values."""
    check_cap(n_domain, m_range, cap)
    for values in itertools.product(range(m_range), repeat=n_domain):
        yield FunctionSpec(n_domain, m_range, values)


def all_values_array(n_domain: int, m_range: int, start: int = 0,
                     stop: int | None = None) -> np.ndarray:
    """Value rows of functions start..stop-1 in lexicographic order.

    Row i holds the base-M digits of i, most significant first, so the
    ordering agrees with enumerate_all.
    """
    total = m_range ** n_domain
    stop = total if stop is None else min(stop, total)
    idx = np.arange(start, stop, dtype=np.int64)
    out = np.empty((idx.size, n_domain), dtype=np.int64)
    for col in range(n_domain - 1, -1, -1):
        out[:, col] = idx % m_range
        idx //= m_range
    return out


def row_sums_array(values: np.ndarray, m_range: int) -> np.ndarray:
    """Row sums for a batch of value rows, shape (batch, M)."""
    batch = values.shape[0]
    flat = (np.arange(batch)[:, None] * m_range + values).ravel()
    return np.bincount(flat, minlength=batch * m_range).reshape(batch, m_range)
