"""Segmented odd-only sieve of Eratosthenes and last-digit pair tallies.

Primes are streamed segment by segment as numpy ``int64`` arrays, so memory
is bounded by the segment size rather than by the number of primes produced.
"""

from __future__ import annotations

import math
from dataclasses import dataclass, field
from math import gcd
from typing import Iterator

import numpy as np

from .errors import CapacityError

DEFAULT_SEGMENT = 1 << 22  # odd candidates per segment
MAX_PRIME_COUNT = 200_000_000


def small_primes(limit: int) -> np.ndarray:
    """All primes ``<= limit`` from a plain (unsegmented) sieve."""
    if limit < 2:
        return np.zeros(0, dtype=np.int64)
    flags = np.ones(limit + 1, dtype=bool)
    flags[:2] = False
    flags[4::2] = False
    for p in range(3, math.isqrt(limit) + 1, 2):
        if flags[p]:
            flags[p * p :: 2 * p] = False
    return np.flatnonzero(flags).astype(np.int64)


def is_prime(n: int) -> bool:
    if n < 2:
        return False
    if n % 2 == 0:
        return n == 2
    for q in range(3, math.isqrt(n) + 1, 2):
        if n % q == 0:
            return False
    return True


def next_prime(n: int) -> int:
    """Smallest prime strictly greater than ``n``."""
    m = max(n + 1, 2)
    while not is_prime(m):
        m += 1
    return m


def prime_segments(
    lo: int, hi: int, segment_size: int = DEFAULT_SEGMENT
) -> Iterator[np.ndarray]:
    """Yield sorted arrays of the primes in ``[lo, hi)``, one per segment.

    Only odd candidates are stored; ``segment_size`` counts odd numbers.
    """
    if hi <= lo or hi <= 2:
        return
    if lo <= 2:
        yield np.array([2], dtype=np.int64)
        lo = 3
    if lo % 2 == 0:
        lo += 1
    base = small_primes(math.isqrt(hi - 1) + 1)[1:]  # odd base primes
    span = 2 * segment_size
    while lo < hi:
        top = min(lo + span, hi)
        count = (top - lo + 1) // 2
        flags = np.ones(count, dtype=bool)
        sq_limit = math.isqrt(top - 1)
        active = base[base <= sq_limit]
        if active.size:
            # first odd multiple of p that is >= max(p*p, lo)
            first = np.maximum(active * active, (lo + active - 1) // active * active)
            first += np.where(first % 2 == 0, active, 0)
            offsets = (first - lo) // 2
            for p, off in zip(active.tolist(), offsets.tolist()):
                if off < count:
                    flags[off::p] = False
        if lo == 1:
            flags[0] = False
        yield lo + 2 * np.flatnonzero(flags).astype(np.int64)
        lo = top if top % 2 == 1 else top + 1


def prime_count_upper(n: int) -> int:
    """An integer upper bound for the n-th prime (Rosser's bound, n >= 6)."""
    if n < 6:
        return 13
    ln = math.log(n)
    return int(n * (ln + math.log(ln))) + 3


def first_n_primes(
    n: int, segment_size: int = DEFAULT_SEGMENT, ceiling: int = MAX_PRIME_COUNT
) -> Iterator[np.ndarray]:
    """Stream the first ``n`` primes as a sequence of numpy chunks."""
    if n > ceiling:
        raise CapacityError(
            f"{n} primes requested; the configured ceiling is {ceiling} "
            f"(sieving to about {prime_count_upper(n):.3g})"
        )
    remaining = n
    if remaining <= 0:
        return
    for chunk in prime_segments(2, prime_count_upper(n) + 1, segment_size):
        if chunk.size >= remaining:
            yield chunk[:remaining]
            return
        remaining -= chunk.size
        yield chunk


def iter_first_n_primes(n: int, **kwargs) -> Iterator[int]:
    for chunk in first_n_primes(n, **kwargs):
        yield from chunk.tolist()


def primes_in_range(lo: int, hi: int, segment_size: int = DEFAULT_SEGMENT) -> np.ndarray:
    """Primes in the half-open range ``[lo, hi)`` as a single array."""
    parts = list(prime_segments(lo, hi, segment_size))
    if not parts:
        return np.zeros(0, dtype=np.int64)
    return np.concatenate(parts)


def units(base: int) -> list[int]:
    return [a for a in range(1, base) if gcd(a, base) == 1]


@dataclass(frozen=True)
class PairCensus:
    """Counts of (p_k mod B, p_{k+1} mod B) over consecutive primes.

    Pairs in which either prime divides ``base`` are tallied in ``skipped``.
    """

    base: int
    prime_count: int
    counts: dict[tuple[int, int], int] = field(default_factory=dict)
    skipped: int = 0

    def total(self) -> int:
        return sum(self.counts.values()) + self.skipped

    def to_csv(self) -> str:
        lines = ["a,b,count"]
        lines += [f"{a},{b},{c}" for (a, b), c in sorted(self.counts.items())]
        lines.append(f"#skipped={self.skipped}")
        return "\n".join(lines) + "\n"

    @classmethod
    def from_csv(cls, text: str, base: int, prime_count: int = 0) -> "PairCensus":
        counts = {}
        skipped = 0
        for line in text.splitlines():
            line = line.strip()
            if not line or line == "a,b,count":
                continue
            if line.startswith("#skipped="):
                skipped = int(line.split("=", 1)[1])
                continue
            a, b, c = (int(x) for x in line.split(","))
            counts[(a, b)] = c
        return cls(base, prime_count, counts, skipped)


PAIR_WINDOWS = ("first", "above-base")


def pair_census(
    n: int, base: int, window: str = "first", segment_size: int = DEFAULT_SEGMENT
) -> PairCensus:
    """Tally last-digit pairs of consecutive primes.

    ``window="first"`` counts the n - 1 pairs among the first ``n`` primes,
    routing pairs that touch a prime dividing ``base`` to ``skipped``.
    ``window="above-base"`` counts ``n`` pairs (p, next prime) for the first
    ``n`` primes p > base, so no pair is skipped.
    """
    if base < 3:
        raise ValueError("base must be at least 3")
    if window not in PAIR_WINDOWS:
        raise ValueError(f"unknown window {window!r}; expected one of {PAIR_WINDOWS}")
    unit_mask = np.array([gcd(r, base) == 1 for r in range(base)])
    tally = np.zeros(base * base, dtype=np.int64)
    if window == "first":
        stream = first_n_primes(n, segment_size=segment_size)
    else:
        below = int(small_primes(base).size)
        stream = (c[c > base] for c in first_n_primes(n + below + 1, segment_size=segment_size))
    prev = None
    for chunk in stream:
        res = chunk % base
        if prev is not None:
            res = np.concatenate(([prev], res))
        if res.size >= 2:
            codes = res[:-1] * base + res[1:]
            tally += np.bincount(codes, minlength=base * base)
        if res.size:
            prev = int(res[-1])
    counts = {}
    skipped = 0
    for a in range(base):
        for b in range(base):
            c = int(tally[a * base + b])
            if unit_mask[a] and unit_mask[b]:
                counts[(a, b)] = c
            else:
                skipped += c
    return PairCensus(base, n, counts, skipped)


def observed_class_ratios(census: PairCensus):
    """Sum pair counts by class h = (b - a) mod B and normalize by the class of gap 2."""
    from .residue import ClassAggregate, gap_classes

    base = census.base
    totals = {h: 0 for h in gap_classes(base)}
    for (a, b), c in census.counts.items():
        h = (b - a) % base
        totals[h] = totals.get(h, 0) + c
    norm = 2 % base
    if not totals.get(norm):
        raise ValueError(f"normalizing class {norm} is empty")
    ratios = {h: t / totals[norm] for h, t in totals.items()}
    return ClassAggregate(base, totals, norm, ratios)
