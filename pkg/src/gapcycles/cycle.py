"""Cycles of gaps G(p#) and exact censuses of their driving terms.

G(p#) is the cyclic sequence of differences between consecutive integers
in ``[1, p# + 1]`` that are coprime to ``p#``.  Two constructions are
provided: a segmented coprimality sieve (:func:`enumerate_gap_cycle`), which
streams and scales to 29#, and the stage-by-stage fusion recursion
(:func:`fuse_cycle`), which is kept for small primes as a cross-check.
"""

from __future__ import annotations

import math
import warnings
from dataclasses import dataclass, field
from typing import Iterable, Iterator

import numpy as np

from .errors import CapacityError, TruncationWarning
from .primesieve import is_prime, next_prime, small_primes

DEFAULT_SEGMENT = 1 << 24
DEFAULT_CEILING = 29
DEFAULT_JMAX = 128


def primes_upto(p: int) -> list[int]:
    return small_primes(p).tolist()


def primorial(p: int) -> int:
    return math.prod(primes_upto(p))


def totient_primorial(p: int) -> int:
    return math.prod(q - 1 for q in primes_upto(p))


@dataclass(frozen=True)
class GapCycle:
    """A fully materialized cycle of gaps G(p#), starting at the gap after 1."""

    stage_prime: int
    gaps: tuple[int, ...]

    def __len__(self) -> int:
        return len(self.gaps)

    def __iter__(self):
        return iter(self.gaps)

    @property
    def modulus(self) -> int:
        return sum(self.gaps)

    def generators(self) -> list[int]:
        """The generators 1 = c_0 < c_1 < ... < c_{n-1} < p#."""
        out = [1]
        for g in self.gaps[:-1]:
            out.append(out[-1] + g)
        return out

    def rotated(self, k: int) -> "GapCycle":
        k %= len(self.gaps)
        return GapCycle(self.stage_prime, self.gaps[k:] + self.gaps[:k])


def _check_stage(p: int, ceiling: int) -> None:
    if not is_prime(p) or p < 3:
        raise ValueError(f"{p} is not an odd prime")
    if p > ceiling:
        n = totient_primorial(p)
        raise CapacityError(
            f"G({p}#) has {n:,} gaps over {primorial(p):,} candidates; "
            f"the configured ceiling is p={ceiling} "
            f"(a full pass needs roughly {primorial(p) // 2:,} sieve bytes streamed)"
        )


def enumerate_gap_cycle(
    p: int, segment_size: int = DEFAULT_SEGMENT, ceiling: int = DEFAULT_CEILING
) -> Iterator[np.ndarray]:
    """Stream the gaps of G(p#) in order, one numpy chunk per sieve segment.

    ``segment_size`` counts odd candidates.  Chunks concatenate to the full
    cycle, which closes with the gap from ``p# - 1`` to ``p# + 1``.
    """
    _check_stage(p, ceiling)
    modulus = primorial(p)
    odd_primes = primes_upto(p)[1:]
    top = modulus + 2  # candidates are odd numbers in [3, p# + 1]
    lo = 3
    prev = 1
    while lo < top:
        hi = min(lo + 2 * segment_size, top)
        count = (hi - lo + 1) // 2
        flags = np.ones(count, dtype=bool)
        for q in odd_primes:
            # first odd multiple of q at or above lo, as an odd-index offset
            first = -(-lo // q) * q
            if first % 2 == 0:
                first += q
            flags[(first - lo) // 2 :: q] = False
        gens = lo + 2 * np.flatnonzero(flags).astype(np.int64)
        if gens.size:
            gaps = np.diff(gens, prepend=prev)
            prev = int(gens[-1])
            yield gaps
        lo = hi if hi % 2 else hi + 1


def gap_cycle(p: int, **kwargs) -> GapCycle:
    """Materialize G(p#) from the sieve constructor."""
    chunks = list(enumerate_gap_cycle(p, **kwargs))
    return GapCycle(p, tuple(np.concatenate(chunks).tolist()))


def fuse_cycle(prev: GapCycle, p: int) -> GapCycle:
    """Build G(p#) from G(p_prev#) by concatenation and fusion.

    ``p`` copies of the previous cycle are laid end to end; every candidate
    ``p * c`` with ``c`` a generator of the previous cycle is closed, which
    merges the two gaps on either side of it.
    """
    if not is_prime(p) or next_prime(prev.stage_prime) != p:
        raise ValueError(
            f"fusion runs stage by stage: expected {next_prime(prev.stage_prime)}, got {p}"
        )
    closures = {p * c for c in prev.generators()}
    out: list[int] = []
    position = 1
    pending = 0
    for _ in range(p):
        for g in prev.gaps:
            position += g
            pending += g
            if position not in closures:
                out.append(pending)
                pending = 0
    return GapCycle(p, tuple(out))


def fusion_chain(p: int) -> GapCycle:
    """G(p#) obtained by fusing upward from G(3#) = (4, 2)."""
    cycle = GapCycle(3, (4, 2))
    while cycle.stage_prime < p:
        cycle = fuse_cycle(cycle, next_prime(cycle.stage_prime))
    if cycle.stage_prime != p:
        raise ValueError(f"{p} is not a prime >= 3")
    return cycle


@dataclass(frozen=True)
class DrivingTermCensus:
    """Counts n_{g,j}: cyclic runs of j consecutive gaps summing to g.

    Absent ``(g, j)`` keys are zero.  ``truncated`` is set when some run
    longer than ``jmax`` still sums to at most ``gmax``.
    """

    stage_prime: int
    gmax: int
    jmax: int
    counts: dict[tuple[int, int], int] = field(default_factory=dict)
    truncated: bool = False

    def n(self, g: int, j: int) -> int:
        return self.counts.get((g, j), 0)

    def gaps(self) -> list[int]:
        return sorted({g for g, _ in self.counts})

    def longest(self, g: int) -> int:
        return max((j for gg, j in self.counts if gg == g), default=0)

    def vector(self, g: int, length: int | None = None) -> tuple[int, ...]:
        """(n_{g,1}, ..., n_{g,J}); J defaults to the longest driving term."""
        length = self.longest(g) if length is None else length
        return tuple(self.n(g, j) for j in range(1, length + 1))

    def total(self, g: int) -> int:
        return sum(c for (gg, _), c in self.counts.items() if gg == g)

    def merge(self, other: "DrivingTermCensus") -> "DrivingTermCensus":
        """Pointwise sum of two partial censuses over disjoint window sets."""
        if (self.stage_prime, self.gmax, self.jmax) != (
            other.stage_prime,
            other.gmax,
            other.jmax,
        ):
            raise ValueError("censuses disagree on stage or window limits")
        counts = dict(self.counts)
        for key, c in other.counts.items():
            counts[key] = counts.get(key, 0) + c
        return DrivingTermCensus(
            self.stage_prime,
            self.gmax,
            self.jmax,
            counts,
            self.truncated or other.truncated,
        )

    def to_text(self, provenance: str | None = None) -> str:
        lines = [
            f"CENSUS v1 p={self.stage_prime} gmax={self.gmax} "
            f"jmax={self.jmax} truncated={int(self.truncated)}"
        ]
        if provenance:
            lines.append(provenance)
        for (g, j), c in sorted(self.counts.items()):
            if c:
                lines.append(f"{g} {j} {c}")
        return "\n".join(lines) + "\n"

    @classmethod
    def from_text(cls, text: str) -> "DrivingTermCensus":
        lines = [ln.strip() for ln in text.splitlines() if ln.strip()]
        if not lines or not lines[0].startswith("CENSUS v1 "):
            raise ValueError("not a CENSUS v1 file")
        header = dict(tok.split("=", 1) for tok in lines[0].split()[2:])
        counts = {}
        for line in lines[1:]:
            if line.startswith("PROPAGATED"):
                continue
            g, j, c = line.split()
            counts[(int(g), int(j))] = int(c)
        return cls(
            int(header["p"]),
            int(header["gmax"]),
            int(header["jmax"]),
            counts,
            header.get("truncated", "0") == "1",
        )


class _WindowCounter:
    """Counts windows by their end index over a stream of positions."""

    def __init__(self, gmax: int, jmax: int):
        self.gmax = gmax
        self.jmax = jmax
        self.table = np.zeros((gmax // 2 + 1, jmax + 1), dtype=np.int64)
        self.tail = np.zeros(1, dtype=np.int64)
        self.truncated = False

    def feed(self, positions: np.ndarray, replay: bool = False) -> None:
        """Count windows ending in ``positions``.

        In ``replay`` mode (the wraparound pass over the head of the cycle)
        a window of length j may only end at the first j - 1 replayed
        positions, so every cyclic start is counted exactly once.
        """
        comb = np.concatenate((self.tail, positions))
        m = self.tail.size
        nbins = self.table.shape[0]
        for j in range(1, self.jmax + 2):
            lo = max(m, j)
            hi = min(comb.size, m + j - 1) if replay else comb.size
            if hi <= lo:
                continue
            d = comb[lo:hi] - comb[lo - j : hi - j]
            hit = d[d <= self.gmax]
            if j > self.jmax:
                self.truncated |= bool(hit.size)
            elif hit.size:
                self.table[:, j] += np.bincount(hit // 2, minlength=nbins)
            elif not replay:
                # longer windows over the same ends only grow
                break
        keep = self.jmax + 1
        self.tail = comb[-keep:] if comb.size > keep else comb

    def count_starts(self, pos: np.ndarray, period: int) -> None:
        """Count windows starting at the first ``period`` positions of ``pos``."""
        nbins = self.table.shape[0]
        for j in range(1, self.jmax + 2):
            d = pos[j : j + period] - pos[:period]
            hit = d[d <= self.gmax]
            if j > self.jmax:
                self.truncated |= bool(hit.size)
            elif hit.size:
                self.table[:, j] += np.bincount(hit // 2, minlength=nbins)


def census_driving_terms(
    chunks: Iterable[np.ndarray] | GapCycle,
    gmax: int,
    jmax: int = DEFAULT_JMAX,
    stage_prime: int | None = None,
) -> DrivingTermCensus:
    """Exact census of driving terms over one full pass of a gap cycle.

    ``chunks`` is a stream of gap arrays (as from :func:`enumerate_gap_cycle`)
    or a :class:`GapCycle`.  Runs that cross the wrap point are counted.
    """
    if gmax < 1 or jmax < 1:
        raise ValueError("gmax and jmax must be positive")
    if isinstance(chunks, GapCycle):
        stage_prime = chunks.stage_prime
        chunks = [np.asarray(chunks.gaps, dtype=np.int64)]
    counter = _WindowCounter(gmax, jmax)
    head: list[np.ndarray] = []
    head_len = 0
    offset = 0
    for gaps in chunks:
        gaps = np.asarray(gaps, dtype=np.int64)
        if not gaps.size:
            continue
        if head_len <= jmax:
            head.append(gaps[: jmax + 1 - head_len])
            head_len += head[-1].size
        pos = offset + np.cumsum(gaps)
        offset = int(pos[-1])
        counter.feed(pos)
    if not head:
        raise ValueError("empty cycle")
    replay = np.concatenate(head)
    if replay.size <= jmax:
        # windows may wrap more than once around a short cycle
        counter = _WindowCounter(gmax, jmax)
        reps = -(-(jmax + 1) // replay.size) + 1
        pos = np.concatenate(([0], np.cumsum(np.tile(replay, reps))))
        counter.count_starts(pos, replay.size)
    else:
        counter.feed(offset + np.cumsum(replay), replay=True)

    counts = {}
    rows, cols = np.nonzero(counter.table)
    for r, j in zip(rows.tolist(), cols.tolist()):
        counts[(2 * r, j)] = int(counter.table[r, j])
    if counter.truncated:
        warnings.warn(
            f"runs longer than jmax={jmax} still sum to <= {gmax}; counts undercount",
            TruncationWarning,
            stacklevel=2,
        )
    return DrivingTermCensus(stage_prime or 0, gmax, jmax, counts, counter.truncated)


def census_of_stage(
    p: int,
    gmax: int,
    jmax: int = DEFAULT_JMAX,
    segment_size: int = DEFAULT_SEGMENT,
    ceiling: int = DEFAULT_CEILING,
) -> DrivingTermCensus:
    """Census of G(p#) streamed straight from the sieve constructor."""
    return census_driving_terms(
        enumerate_gap_cycle(p, segment_size, ceiling), gmax, jmax, stage_prime=p
    )
