"""Exact population dynamics of gaps across stages of the sieve.

Between consecutive stages p_prev -> p the counts of driving terms for a gap
evolve by a banded integer recurrence::

    n_j <- (p - j - 1) * n_j + j * n_{j+1}

Dividing by the growth (p - 2) of the twin count gives the rational system
matrix with diagonal a_j(p) = (p-j-1)/(p-2) and superdiagonal j/(p-2).  Its
eigenvectors are Pascal matrices that do not depend on p, which yields the
closed form and the polynomial model in the decay parameter lambda = a_2^k.
"""

from __future__ import annotations

import math
from dataclasses import dataclass, field
from fractions import Fraction
from typing import Iterable, Sequence

import numpy as np

from .cycle import DrivingTermCensus
from .errors import CapacityError
from .primesieve import is_prime, next_prime, prime_segments, primes_in_range, small_primes
from .residue import underrepresentation

EULER_GAMMA = 0.5772156649015329
EXACT_STEP_LIMIT = 5000
LAMBDA_CEILING = 10**9
EXACT_PRODUCT_LIMIT = 10**5


@dataclass(frozen=True)
class PopulationVector:
    gap: int
    stage_prime: int
    entries: tuple[int, ...]

    def total(self) -> int:
        return sum(self.entries)


@dataclass(frozen=True)
class RatioVector:
    gap: int
    stage_prime: int
    entries: tuple[Fraction, ...]

    def __len__(self) -> int:
        return len(self.entries)


def population(census: DrivingTermCensus, g: int, length: int | None = None) -> PopulationVector:
    return PopulationVector(g, census.stage_prime, census.vector(g, length))


def ratios(census: DrivingTermCensus, g: int, length: int | None = None) -> RatioVector:
    """w_{g,j} = n_{g,j} / n_{2,1} as exact rationals."""
    twins = census.n(2, 1)
    if not twins:
        raise ValueError("census has no twin gaps to normalize by")
    return RatioVector(
        g, census.stage_prime, tuple(Fraction(n, twins) for n in census.vector(g, length))
    )


@dataclass(frozen=True)
class TransferMatrix:
    prime: int
    dim: int

    def integer_form(self) -> list[list[int]]:
        p, J = self.prime, self.dim
        m = [[0] * J for _ in range(J)]
        for j in range(1, J + 1):
            m[j - 1][j - 1] = p - j - 1
            if j < J:
                m[j - 1][j] = j
        return m

    def rational_form(self) -> list[list[Fraction]]:
        d = self.prime - 2
        return [[Fraction(x, d) for x in row] for row in self.integer_form()]

    def diagonal(self) -> list[Fraction]:
        return [Fraction(self.prime - j - 1, self.prime - 2) for j in range(1, self.dim + 1)]

    def superdiagonal(self) -> list[Fraction]:
        return [Fraction(j, self.prime - 2) for j in range(1, self.dim)]


def _check_rows(entries: Sequence, p: int, gap: int) -> None:
    for j, n in enumerate(entries, start=1):
        if n and p - j - 1 < 0:
            raise ValueError(
                f"gap {gap}: row j={j} has coefficient p-j-1={p - j - 1} < 0 at p={p}; "
                f"the recurrence needs p > j + 1"
            )


def transfer_step(pop: PopulationVector, p_next: int, consecutive: bool = True) -> PopulationVector:
    """Advance raw counts by one sieve stage."""
    if p_next <= pop.stage_prime or not is_prime(p_next):
        raise ValueError(f"{p_next} is not a prime above {pop.stage_prime}")
    if consecutive and p_next != next_prime(pop.stage_prime):
        raise ValueError(
            f"exact recurrence steps one prime at a time: expected {next_prime(pop.stage_prime)}"
        )
    n = pop.entries
    _check_rows(n, p_next, pop.gap)
    J = len(n)
    out = tuple(
        (p_next - j - 1) * n[j - 1] + (j * n[j] if j < J else 0) for j in range(1, J + 1)
    )
    return PopulationVector(pop.gap, p_next, out)


@dataclass
class Propagation:
    """Census-shaped result of a propagation run.

    In ``normalized`` mode the values are ratios w_{g,j} (floats); in
    ``exact`` mode they are the raw integer counts n_{g,j}.
    """

    census: DrivingTermCensus
    mode: str
    start: int
    steps: int
    dropped: list[int] = field(default_factory=list)

    def provenance(self) -> str:
        return (
            f"PROPAGATED from={self.start} to={self.census.stage_prime} "
            f"mode={self.mode} steps={self.steps}"
        )

    def to_text(self) -> str:
        return self.census.to_text(self.provenance())


def primes_between(p0: int, pk: int) -> list[int]:
    """Primes in the half-open interval (p0, pk]."""
    return primes_in_range(p0 + 1, pk + 1).tolist()


def _admissible(vec: Sequence, primes: Sequence[int]) -> bool:
    if not primes:
        return True
    longest = max((j for j, n in enumerate(vec, start=1) if n), default=0)
    return primes[0] - longest - 1 >= 0


def propagate_range(
    census: DrivingTermCensus,
    p_target: int,
    mode: str = "exact",
    gaps: Iterable[int] | None = None,
    step_limit: int = EXACT_STEP_LIMIT,
    drop_inadmissible: bool = False,
) -> Propagation:
    """Apply the stage recurrence for every prime in (census prime, p_target].

    Gaps whose driving terms are too long for the first step are rejected,
    or skipped and listed in ``dropped`` when ``drop_inadmissible`` is set.
    """
    if mode not in ("exact", "normalized"):
        raise ValueError(f"unknown mode {mode!r}")
    if p_target <= census.stage_prime:
        raise ValueError("target prime must exceed the census stage")
    primes = primes_between(census.stage_prime, p_target)
    if mode == "exact" and len(primes) > step_limit:
        raise CapacityError(
            f"{len(primes)} exact steps exceed the limit of {step_limit}; "
            f"use mode='normalized'"
        )
    chosen = sorted(census.gaps() if gaps is None else gaps)
    vectors: dict[int, tuple] = {}
    dropped = []
    for g in chosen:
        vec = census.vector(g)
        if not _admissible(vec, primes):
            if drop_inadmissible:
                dropped.append(g)
                continue
            _check_rows(vec, primes[0], g)
        vectors[g] = vec
    if mode == "exact":
        out = {}
        for g, vec in vectors.items():
            pop = PopulationVector(g, census.stage_prime, vec)
            for p in primes:
                pop = transfer_step(pop, p, consecutive=False)
            out[g] = pop.entries
    else:
        twins = census.n(2, 1)
        out = {g: _normalized_run([n / twins for n in vec], primes) for g, vec in vectors.items()}
    counts = {(g, j): v for g, vec in out.items() for j, v in enumerate(vec, start=1) if v}
    result = DrivingTermCensus(p_target, census.gmax, census.jmax, counts, census.truncated)
    return Propagation(result, mode, census.stage_prime, len(primes), dropped)


def _normalized_run(w: list[float], primes: Iterable[int]) -> list[float]:
    J = len(w)
    w = np.array(w, dtype=np.float64)
    j = np.arange(1, J + 1, dtype=np.float64)
    for p in primes:
        nxt = (p - j - 1) * w
        nxt[:-1] += j[:-1] * w[1:]
        w = nxt / (p - 2)
    return w.tolist()


def first_crossover(
    census: DrivingTermCensus,
    g: int,
    ceiling: int = 10**8,
    segment_size: int = 1 << 20,
) -> int | None:
    """First prime p at which n_{g,1}(p#) exceeds n_{2,1}(p#), in normalized mode."""
    twins = census.n(2, 1)
    w = np.array([n / twins for n in census.vector(g)], dtype=np.float64)
    J = w.size
    j = np.arange(1, J + 1, dtype=np.float64)
    if w[0] > 1.0:
        return census.stage_prime
    for chunk in prime_segments(census.stage_prime + 1, ceiling + 1, segment_size):
        for p in chunk.tolist():
            nxt = (p - j - 1) * w
            nxt[:-1] += j[:-1] * w[1:]
            w = nxt / (p - 2)
            if w[0] > 1.0:
                return p
    return None


@dataclass(frozen=True)
class EigenSystem:
    """Pascal eigenvectors of the system matrix: M(p) = R diag(a_j(p)) L, L R = I."""

    dim: int
    R: tuple[tuple[int, ...], ...]
    L: tuple[tuple[int, ...], ...]

    def eigenvalues(self, p: int) -> list[Fraction]:
        return [Fraction(p - j - 1, p - 2) for j in range(1, self.dim + 1)]

    def left_times_right(self) -> list[list[int]]:
        J = self.dim
        out = [[0] * J for _ in range(J)]
        for i in range(J):
            for j in range(i, J):
                out[i][j] = sum(self.L[i][k] * self.R[k][j] for k in range(i, j + 1))
        return out

    def reconstruct_scaled(self, p: int) -> list[list[int]]:
        """(p - 2) * R diag(a(p)) L, which is an integer matrix."""
        J = self.dim
        lam = [p - k - 1 for k in range(1, J + 1)]
        out = [[0] * J for _ in range(J)]
        for i in range(J):
            for j in range(i, J):
                out[i][j] = sum(self.R[i][k] * lam[k] * self.L[k][j] for k in range(i, j + 1))
        return out

    def reconstruct(self, p: int) -> list[list[Fraction]]:
        d = p - 2
        return [[Fraction(x, d) for x in row] for row in self.reconstruct_scaled(p)]


def eigen_basis(J: int) -> EigenSystem:
    if J < 1:
        raise ValueError("dimension must be positive")
    R = tuple(
        tuple((-1) ** (i + j) * math.comb(j, i) if i <= j else 0 for j in range(J))
        for i in range(J)
    )
    L = tuple(tuple(math.comb(j, i) if i <= j else 0 for j in range(J)) for i in range(J))
    return EigenSystem(J, R, L)


def left_coefficients(w0: Sequence, degree: int | None = None) -> list:
    """l_i = L_i . w0 for i = 1..degree+1 (all rows by default)."""
    J = len(w0)
    rows = J if degree is None else degree + 1
    zero = w0[0] * 0 if J else 0
    return [
        sum((math.comb(j, i) * w0[j] for j in range(i, J)), zero) for i in range(rows)
    ]


def eigen_products(p0: int, pk: int, J: int) -> list[Fraction]:
    """a_j^k = prod over primes p in (p0, pk] of (p-j-1)/(p-2), j = 1..J."""
    primes = primes_between(p0, pk)
    out = []
    for j in range(1, J + 1):
        num = math.prod(p - j - 1 for p in primes)
        den = math.prod(p - 2 for p in primes)
        out.append(Fraction(num, den))
    return out


def closed_form_w1(w0: RatioVector | Sequence, products: Sequence) -> Fraction:
    """w_{g,1} after k stages: sum_i (-1)^(i+1) a_i^k (L_i . w0)."""
    entries = w0.entries if isinstance(w0, RatioVector) else tuple(w0)
    if len(products) != len(entries):
        raise ValueError(
            f"{len(products)} eigenvalue products for a vector of length {len(entries)}"
        )
    coeffs = left_coefficients(entries)
    return sum(
        ((-1) ** i * a * l for i, (a, l) in enumerate(zip(products, coeffs))), Fraction(0)
    )


def eigen_products_float(p0: int, pk: int, J: int) -> np.ndarray:
    """Float a_j^k for j = 1..J, accumulated as sums of logarithms."""
    j = np.arange(1, J + 1, dtype=np.float64)
    logs = np.zeros(J)
    for chunk in prime_segments(p0 + 1, pk + 1):
        p = chunk.astype(np.float64)[:, None]
        ok = p - j - 1 > 0
        if not ok.all():
            raise ValueError(f"a_j^k changes sign for j >= {int(p.min()) - 1}")
        logs += np.log((p - j - 1) / (p - 2)).sum(axis=0)
    return np.exp(logs)


def approximation_gap(w0: RatioVector, pk: int, degree: int) -> tuple[float, float]:
    """(exact closed form, truncated polynomial) for w_{g,1} at stage ``pk``.

    The polynomial replaces a_j^k by lambda^(j-1); the difference measures
    that approximation for one gap.
    """
    J = len(w0.entries)
    a = eigen_products_float(w0.stage_prime, pk, J)
    coeffs = [float(c) for c in left_coefficients(w0.entries)]
    exact = math.fsum((-1) ** i * a[i] * coeffs[i] for i in range(J))
    model = poly_model(w0, degree, clamp=True)
    return exact, poly_eval(model, float(a[1]))


@dataclass(frozen=True)
class PolynomialModel:
    gap: int
    base_prime: int
    degree: int
    coefficients: tuple[Fraction, ...]

    @property
    def asymptote(self) -> Fraction:
        return self.coefficients[0]


def poly_model(w0: RatioVector, degree: int, clamp: bool = False) -> PolynomialModel:
    """Truncated expansion of w_{g,1} in powers of lambda = a_2^k.

    With ``clamp`` a degree beyond the vector length is reduced to len - 1
    instead of rejected; higher coefficients would all be zero.
    """
    J = len(w0.entries)
    if degree + 1 > J:
        if not clamp:
            raise ValueError(f"degree {degree} needs {degree + 1} entries; gap {w0.gap} has {J}")
        degree = J - 1
    return PolynomialModel(
        w0.gap, w0.stage_prime, degree, tuple(left_coefficients(w0.entries, degree))
    )


def poly_eval(model: PolynomialModel, lam):
    """sum_i (-1)^(i+1) l_i lam^(i-1).

    Evaluated exactly: a float ``lam`` is converted to its exact binary
    fraction, because the coefficients grow like binomials and float Horner
    cancels catastrophically at high degree.  Returns a Fraction for a
    Fraction argument and a correctly rounded float otherwise.
    """
    exact = lam if isinstance(lam, Fraction) else Fraction(float(lam))
    a, b = exact.numerator, exact.denominator
    den = math.lcm(*(Fraction(c).denominator for c in model.coefficients))
    acc = 0
    bpow = 1
    for c in reversed(model.coefficients):
        acc = acc * -a + int(c * den) * bpow
        bpow *= b
    total_den = den * (bpow // b)
    if isinstance(lam, Fraction):
        return Fraction(acc, total_den)
    return acc / total_den


@dataclass(frozen=True)
class LambdaPath:
    base_prime: int
    target_prime: int
    value: float
    exact: Fraction | None
    primes: int


def lambda_exact(
    p0: int,
    pk: int,
    ceiling: int = LAMBDA_CEILING,
    exact_limit: int = EXACT_PRODUCT_LIMIT,
) -> LambdaPath:
    """a_2^k = prod over primes in (p0, pk] of (p-3)/(p-2).

    The float is accumulated as a sum of logarithms; the rational is formed
    only when ``pk <= exact_limit``.
    """
    if pk < p0:
        raise ValueError("pk must be at least p0")
    if pk > ceiling:
        raise CapacityError(
            f"enumerating primes to {pk:.3g} exceeds the ceiling {ceiling:.3g}; "
            f"use lambda_bounds instead"
        )
    log_sum = 0.0
    count = 0
    for chunk in prime_segments(p0 + 1, int(pk) + 1):
        log_sum += float(np.sum(np.log1p(-1.0 / (chunk - 2.0))))
        count += chunk.size
    exact = None
    if pk <= exact_limit:
        primes = primes_between(p0, int(pk))
        exact = Fraction(_tree_prod(p - 3 for p in primes), _tree_prod(p - 2 for p in primes))
    return LambdaPath(p0, int(pk), math.exp(log_sum), exact, count)


def _tree_prod(values: Iterable[int]) -> int:
    vals = list(values)
    if not vals:
        return 1
    while len(vals) > 1:
        vals = [
            vals[i] * vals[i + 1] if i + 1 < len(vals) else vals[i]
            for i in range(0, len(vals), 2)
        ]
    return vals[0]


def mertens_c0(p0: int) -> Fraction:
    """c_0 = prod over primes q <= p0 of q/(q-1)."""
    out = Fraction(1)
    for q in small_primes(p0).tolist():
        out *= Fraction(q, q - 1)
    return out


def _bound_constants(p0: int) -> tuple[float, float]:
    c0 = mertens_c0(p0)
    scale = math.exp(-EULER_GAMMA)
    low = float(Fraction(p0 - 1, p0) * c0) * scale
    high = float(c0) * scale
    return low, high


def lambda_bounds(p0: int, pk: float) -> tuple[float, float]:
    """Mertens-theorem bounds (lower, upper) on a_2^k with the o(1) term set to 0.

    The lower bound should use the prime preceding ``pk``; ``pk`` itself is
    used, which is negligible at the scales where the bounds matter.
    """
    if p0 < 5 or pk < p0:
        raise ValueError("need pk >= p0 >= 5")
    low, high = _bound_constants(p0)
    ln = math.log(pk)
    return low / ln, high / ln


def lambda_bounds_log10(p0: int, log10_pk: float) -> tuple[float, float]:
    """:func:`lambda_bounds` for a prime given by its base-10 logarithm."""
    low, high = _bound_constants(p0)
    ln = log10_pk * math.log(10)
    return low / ln, high / ln


def lambda_invert_log10(lam: float, p0: int) -> tuple[float, float]:
    """log10 of the prime interval (p_low, p_high) at which a_2^k = ``lam``."""
    if not 0 < lam < 1:
        raise ValueError("lambda must lie in (0, 1)")
    low, high = _bound_constants(p0)
    lo10 = low / lam / math.log(10)
    hi10 = high / lam / math.log(10)
    if hi10 < math.log10(p0):
        raise ValueError(f"lambda={lam} corresponds to primes below p0={p0}")
    return lo10, hi10


def lambda_invert(lam: float, p0: int) -> tuple[float, float]:
    """Prime interval (p_low, p_high) at which a_2^k = ``lam``; may be inf."""
    lo10, hi10 = lambda_invert_log10(lam, p0)
    return _pow10(lo10), _pow10(hi10)


def _pow10(x: float) -> float:
    try:
        return 10.0**x
    except OverflowError:
        return math.inf


def format_magnitude(log10_value: float, digits: int = 4) -> str:
    """Render 10**log10_value in scientific notation without overflow."""
    exponent = math.floor(log10_value)
    mantissa = 10 ** (log10_value - exponent)
    if round(mantissa, digits) >= 10:
        mantissa /= 10
        exponent += 1
    return f"{mantissa:.{digits}f}e{exponent:+d}"


def model_ratios(
    census: DrivingTermCensus,
    gaps: Iterable[int],
    correct_large_factors: bool = False,
) -> dict[int, RatioVector]:
    """Initial ratio vectors, optionally rescaled for prime factors above the stage."""
    out = {}
    for g in gaps:
        rv = ratios(census, g)
        if correct_large_factors:
            f = underrepresentation(g, census.stage_prime)
            if f != 1:
                rv = RatioVector(g, rv.stage_prime, tuple(x * f for x in rv.entries))
        out[g] = rv
    return out
