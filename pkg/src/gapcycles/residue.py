"""Residue classes of gaps and of last-digit pairs in an arbitrary base."""

from __future__ import annotations

from dataclasses import dataclass
from fractions import Fraction
from typing import Mapping

from .primesieve import units

DEFAULT_GMAX = 420


def odd_prime_factors(n: int) -> list[int]:
    out = []
    m = n
    while m % 2 == 0 and m:
        m //= 2
    q = 3
    while q * q <= m:
        if m % q == 0:
            out.append(q)
            while m % q == 0:
                m //= q
        q += 2
    if m > 1:
        out.append(m)
    return out


def w_infinity(g: int) -> Fraction:
    """Asymptotic ratio of gap ``g`` to gap 2: prod over odd q | g of (q-1)/(q-2)."""
    if g <= 0 or g % 2:
        raise ValueError(f"gap must be a positive even integer, got {g}")
    out = Fraction(1)
    for q in odd_prime_factors(g):
        out *= Fraction(q - 1, q - 2)
    return out


def underrepresentation(g: int, p0: int) -> Fraction:
    """Factor by which a census at stage ``p0`` undercounts the total for ``g``.

    Only odd prime factors of ``g`` above ``p0`` contribute.
    """
    out = Fraction(1)
    for q in odd_prime_factors(g):
        if q > p0:
            out *= Fraction(q - 1, q - 2)
    return out


@dataclass(frozen=True)
class ResidueScheme:
    base: int
    digits: tuple[int, ...]
    pair_map: dict[int, tuple[tuple[int, int], ...]]

    @property
    def classes(self) -> list[int]:
        return sorted(self.pair_map)

    def class_of(self, a: int, b: int) -> int:
        return (b - a) % self.base


def digit_pair_classes(base: int) -> ResidueScheme:
    """Group the ordered pairs of units mod ``base`` by their difference."""
    if base < 3:
        raise ValueError("base must be at least 3")
    digits = tuple(units(base))
    pair_map: dict[int, list[tuple[int, int]]] = {}
    for a in digits:
        for b in digits:
            pair_map.setdefault((b - a) % base, []).append((a, b))
    return ResidueScheme(base, digits, {h: tuple(v) for h, v in sorted(pair_map.items())})


def class_gaps(base: int, h: int, count: int) -> list[int]:
    """The first ``count`` positive even gaps congruent to ``h`` mod ``base``."""
    h %= base
    if base % 2 == 0 and h % 2:
        raise ValueError(f"odd class {h} holds no gaps in even base {base}")
    step = base if base % 2 == 0 else 2 * base
    first = h if h % 2 == 0 else h + base
    if first == 0:
        first = step
    return [first + k * step for k in range(count)]


def class_mean_asymptotic(base: int, h: int, count: int) -> Fraction:
    """Mean of ``w_infinity`` over the first ``count`` gaps of class ``h``."""
    if count < 1:
        raise ValueError("count must be positive")
    gaps = class_gaps(base, h, count)
    return sum((w_infinity(g) for g in gaps), Fraction(0)) / count


@dataclass(frozen=True)
class ClassAggregate:
    base: int
    totals: dict[int, object]
    normalizer: int
    ratios: dict[int, object]


def class_ratios(values: Mapping[int, object], base: int, normalizer: int = 2) -> ClassAggregate:
    """Sum per-gap values by class ``g mod base`` and normalize by ``normalizer``'s class.

    Works with exact rationals or floats; the arithmetic follows the input.
    """
    if not values:
        raise ValueError("no gap values supplied")
    totals: dict[int, object] = {}
    for g, v in sorted(values.items()):
        h = g % base
        totals[h] = totals[h] + v if h in totals else v
    norm_class = normalizer % base
    denom = totals.get(norm_class)
    if not denom:
        raise ValueError(f"normalizing class {norm_class} is empty")
    ratios = {h: t / denom for h, t in totals.items()}
    return ClassAggregate(base, totals, norm_class, ratios)


def asymptotic_class_ratios(base: int, gmax: int = DEFAULT_GMAX) -> ClassAggregate:
    return class_ratios({g: w_infinity(g) for g in range(2, gmax + 1, 2)}, base)


def gap_classes(base: int) -> list[int]:
    """Classes h that even gaps can occupy, in the order h = 2, 4, ..., 0."""
    seen = []
    g = 2
    while True:
        h = g % base
        if h in seen:
            return seen
        seen.append(h)
        g += 2


def class_table_csv(
    base: int,
    w_current: Mapping[int, float] | None,
    w_infinity_ratios: Mapping[int, object],
) -> str:
    """Rows ``base,h,pairs,W_current,W_infinity`` in gap-class order."""
    scheme = digit_pair_classes(base)
    lines = ["base,h,pairs,W_current,W_infinity"]
    for h in gap_classes(base):
        pairs = " ".join(f"({a};{b})" for a, b in scheme.pair_map.get(h, ()))
        cur = "" if w_current is None else f"{float(w_current[h]):.6f}"
        lines.append(f"{base},{h},{pairs},{cur},{float(w_infinity_ratios[h]):.6f}")
    return "\n".join(lines) + "\n"

