"""Squarefree counts and Euler-ratio sums over digit-pattern sets.

Every statistic is computed by two independent routes: a direct sieve
over the members, and a Moebius decomposition driven by congruence
counts.  The direct route is the oracle; the decomposition must agree
(exactly for squarefree counts, to 1e-9 relative for Euler sums).
"""

from __future__ import annotations

import math
import random
import warnings
from dataclasses import dataclass
from fractions import Fraction
from functools import lru_cache

import numpy as np

from .errors import ResourceCapError, ValidationError
from .patterns import DigitPattern, member_array
from . import primes

SQUAREFREE_DENSITY = 8 / math.pi**2  # 0.810569...

MOEBIUS_LIMIT_CAP = 1 << 26
DEFAULT_SIEVE_BUDGET = 1 << 26
DEFAULT_RATIONAL_CAP = 1 << 16
EULER_AGREEMENT_RTOL = 1e-9


def _pow2_ceil(n: int) -> int:
    return 1 << max(n, 1).bit_length() if n & (n - 1) else max(n, 1)


@lru_cache(maxsize=4)
def _squarefree_flags(limit: int) -> np.ndarray:
    """Boolean flags for 0..limit; 0 is flagged not squarefree."""
    flags = np.ones(limit + 1, dtype=bool)
    flags[0] = False
    for d in range(2, math.isqrt(limit) + 1):
        flags[d * d :: d * d] = False
    flags.setflags(write=False)
    return flags


@lru_cache(maxsize=4)
def _spf_table(limit: int) -> np.ndarray:
    """Smallest prime factor for 0..limit (spf[0] = spf[1] = 0)."""
    spf = np.zeros(limit + 1, dtype=np.int64)
    for i in range(2, math.isqrt(limit) + 1):
        if spf[i] == 0:
            block = spf[i * i :: i]
            block[block == 0] = i
    rest = np.nonzero(spf[2:] == 0)[0] + 2
    spf[rest] = rest
    spf.setflags(write=False)
    return spf


@lru_cache(maxsize=4)
def _moebius_cached(limit: int) -> np.ndarray:
    mu = np.ones(limit + 1, dtype=np.int8)
    mu[0] = 0
    for p in primes.primes_upto(limit):
        p = int(p)
        mu[p::p] *= -1
        if p * p <= limit:
            mu[p * p :: p * p] = 0
    mu.setflags(write=False)
    return mu


def moebius_table(limit: int) -> np.ndarray:
    """Moebius function values as an int8 array indexed 0..limit.

    Index 0 is a placeholder zero; mu[1] = 1.  Built by a multiplicative
    sieve over primes (one sign flip per prime, one zero pass per prime
    square), which vectorizes far better than the textbook linear sieve.
    """
    if not 1 <= limit <= MOEBIUS_LIMIT_CAP:
        raise ValidationError(f"moebius limit must be in [1, {MOEBIUS_LIMIT_CAP}], got {limit}")
    return _moebius_cached(_pow2_ceil(limit))[: limit + 1]


def _factor_member(s: int, spf: np.ndarray | None) -> list[int]:
    """Distinct prime factors of s >= 1."""
    out = []
    m = s
    if spf is not None and s < len(spf):
        while m > 1:
            p = int(spf[m])
            out.append(p)
            while m % p == 0:
                m //= p
        return out
    d = 2
    while d * d <= m:
        if m % d == 0:
            out.append(d)
            while m % d == 0:
                m //= d
        d += 1 if d == 2 else 2
    if m > 1:
        out.append(m)
    return out


@dataclass(frozen=True)
class SquarefreeReport:
    statistic: str
    n: int
    k: int
    kappa: float
    count: int
    total: int
    ratio: float
    predicted: float
    method: str
    outside_proved_range: bool  # not starred, or kappa >= 2/5: density no longer guaranteed

    def record(self) -> dict:
        return {
            "statistic": self.statistic,
            "n": self.n,
            "k": self.k,
            "kappa": self.kappa,
            "value": self.count,
            "total": self.total,
            "ratio": self.ratio,
            "predicted": self.predicted,
            "method": self.method,
            "outside_proved_range": self.outside_proved_range,
        }


def _squarefree_report(pattern: DigitPattern, count: int, method: str) -> SquarefreeReport:
    total = pattern.member_count()
    return SquarefreeReport(
        statistic="squarefree_count",
        n=pattern.n,
        k=pattern.k,
        kappa=pattern.kappa,
        count=count,
        total=total,
        ratio=count / total,
        predicted=SQUAREFREE_DENSITY,
        method=method,
        outside_proved_range=not (pattern.starred and pattern.kappa < 2 / 5),
    )


def squarefree_count_direct(
    pattern: DigitPattern, *, sieve_budget: int = DEFAULT_SIEVE_BUDGET
) -> SquarefreeReport:
    """Count squarefree members by direct sieve (0 counts as not squarefree)."""
    members = member_array(pattern)
    maxm = int(members[-1])
    if maxm <= sieve_budget:
        flags = _squarefree_flags(_pow2_ceil(maxm))
        count = int(np.count_nonzero(flags[members]))
    else:
        # Trial division by prime squares, vectorized one prime at a time.
        alive = np.ones(len(members), dtype=bool)
        if members[0] == 0:
            alive[0] = False
            members = members[1:]
            alive_view = alive[1:]
        else:
            alive_view = alive
        for p in primes.primes_upto(math.isqrt(maxm)):
            p2 = np.uint64(int(p) * int(p))
            alive_view &= (members % p2) != 0
        count = int(np.count_nonzero(alive))
    return _squarefree_report(pattern, count, "direct-sieve")


def squarefree_count_moebius(
    pattern: DigitPattern, *, indicator_budget: int = DEFAULT_SIEVE_BUDGET
) -> SquarefreeReport:
    """Count squarefree members via S = sum_q mu(q) * #{members divisible by q^2}.

    The sum runs over q <= isqrt(max member); larger q have q^2 beyond every
    member and contribute nothing, so the truncation is exact.  A member 0
    is divisible by every q^2 and is excluded up front to match the
    squarefree(0) = False convention of the direct route.
    """
    members = member_array(pattern)
    maxm = int(members[-1])
    has_zero = int(members[0] == 0)
    qmax = math.isqrt(maxm) if maxm >= 1 else 0
    if qmax < 1:
        # all members are 0 or 1
        count = int(np.count_nonzero(members == 1))
        return _squarefree_report(pattern, count, "moebius")
    if qmax > MOEBIUS_LIMIT_CAP:
        raise ResourceCapError(f"members up to {maxm} need a Moebius table past the {MOEBIUS_LIMIT_CAP} cap")
    mu = moebius_table(qmax)
    # Member 0 is divisible by every q^2; keeping it would add a stray
    # Mertens term, so all counts below exclude it (squarefree(0) = False).
    total_terms = 0
    if maxm + 1 <= indicator_budget:
        ind = np.zeros(maxm + 1, dtype=np.uint8)
        ind[members] = 1
        for q in range(1, qmax + 1):
            m = int(mu[q])
            if m == 0:
                continue
            q2 = q * q
            total_terms += m * int(ind[q2::q2].sum(dtype=np.int64))
    else:
        for q in range(1, qmax + 1):
            m = int(mu[q])
            if m == 0:
                continue
            q2 = np.uint64(q * q)
            total_terms += m * (int(np.count_nonzero(members % q2 == 0)) - has_zero)
    return _squarefree_report(pattern, total_terms, "moebius")


@dataclass(frozen=True)
class EulerReport:
    statistic: str
    n: int
    k: int
    kappa: float
    value: float  # sum of phi(s)/s over members (0 excluded)
    value_exact: Fraction | None  # set in rational mode
    total: int
    ratio: float
    predicted: float
    method: str
    agreement: float  # relative gap between the two routes

    def record(self) -> dict:
        return {
            "statistic": "euler_ratio_sum",
            "n": self.n,
            "k": self.k,
            "kappa": self.kappa,
            "value": self.value,
            "total": self.total,
            "ratio": self.ratio,
            "predicted": self.predicted,
            "method": self.method,
            "agreement": self.agreement,
        }


def _pairwise_fraction_sum(terms: list[Fraction]) -> Fraction:
    # balanced tree keeps intermediate denominators small
    def rec(lo: int, hi: int) -> Fraction:
        if hi - lo == 1:
            return terms[lo]
        mid = (lo + hi) // 2
        return rec(lo, mid) + rec(mid, hi)

    return rec(0, len(terms)) if terms else Fraction(0)


def _euler_exact(members: np.ndarray, spf: np.ndarray | None, mu: np.ndarray) -> tuple[Fraction, Fraction, dict[int, int]]:
    """Both Euler routes in exact rational arithmetic.

    Returns (per-member product route, Moebius/congruence route, counts),
    where counts[q] = #{members divisible by q} for every squarefree q
    dividing some member.
    """
    route1_terms: list[Fraction] = []
    counts: dict[int, int] = {}
    for s in map(int, members):
        if s == 0:
            continue
        ps = _factor_member(s, spf)
        num = den = 1
        for p in ps:
            num *= p - 1
            den *= p
        route1_terms.append(Fraction(num, den))
        divs = [1]
        for p in ps:
            divs += [d * p for d in divs]
        for d in divs:
            counts[d] = counts.get(d, 0) + 1
    route1 = _pairwise_fraction_sum(route1_terms)
    route2_terms = [Fraction(int(mu[q]) * c, q) for q, c in counts.items() if mu[q] != 0]
    route2 = _pairwise_fraction_sum(route2_terms)
    return route1, route2, counts


def _spot_check_counts(members: np.ndarray, counts: dict[int, int], seed: int = 7) -> None:
    """Verify a sample of divisor-aggregated counts against residue tests."""
    rng = random.Random(seed)
    qs = sorted(counts)
    sample = qs if len(qs) <= 16 else rng.sample(qs, 16)
    nonzero = members[members != np.uint64(0)]
    for q in sample:
        direct = int(np.count_nonzero(nonzero % np.uint64(q) == 0))
        if direct != counts[q]:
            raise AssertionError(f"divisor count mismatch at q={q}: {counts[q]} vs {direct}")


@lru_cache(maxsize=2)
def _euler_ratio_sieve(limit: int) -> np.ndarray:
    """phi(s)/s for 0..limit via the Euler product over primes."""
    r = np.ones(limit + 1, dtype=np.float64)
    r[0] = 0.0
    for p in primes.primes_upto(limit):
        p = int(p)
        r[p::p] *= 1.0 - 1.0 / p
    r.setflags(write=False)
    return r


def _weighted_multiple_sum(weights: np.ndarray, ind: np.ndarray) -> float:
    """sum_q weights[q] * (number of flagged multiples of q), exactly.

    Hybrid evaluation: a strided scan for small q, and for large q a
    pass over the blocks where floor(limit/q) is constant, which turns
    the harmonic loop into O(limit/K + K^2) vectorized slices.
    """
    limit = len(ind) - 1
    kcap = 256
    q0 = max(1, limit // kcap)
    parts = []
    for q in range(1, q0 + 1):
        w = weights[q]
        if w != 0.0:
            parts.append(w * float(ind[q::q].sum()))
    for m in range(1, kcap):
        lo = max(q0, limit // (m + 1))
        hi = limit // m
        if hi <= lo:
            continue
        wblock = weights[lo + 1 : hi + 1]
        for j in range(1, m + 1):
            parts.append(float(np.dot(wblock, ind[j * (lo + 1) : j * hi + 1 : j])))
    return math.fsum(parts)


def euler_ratio_sum(
    pattern: DigitPattern,
    *,
    rational_cap: int = DEFAULT_RATIONAL_CAP,
    sieve_budget: int = DEFAULT_SIEVE_BUDGET,
) -> EulerReport:
    """Sum of phi(s)/s over the members, by two routes.

    Route (i) multiplies (1 - 1/p) over the prime factors of each member;
    route (ii) evaluates sum_q mu(q)/q * #{members divisible by q}.  Up to
    ``rational_cap`` members both run in exact rational arithmetic and must
    agree exactly; above it both run in double precision and must agree to
    1e-9 relative.  A member 0 is excluded from the sum with a warning.
    """
    members = member_array(pattern)
    total = pattern.member_count()
    maxm = int(members[-1])
    if members[0] == 0:
        warnings.warn("member 0 excluded from Euler sum (phi(0)/0 undefined)", stacklevel=2)
        if total == 1:
            raise ValidationError("degenerate pattern {0} has an empty Euler sum")
    if maxm > MOEBIUS_LIMIT_CAP:
        raise ResourceCapError(f"max member {maxm} exceeds the Moebius-route cap {MOEBIUS_LIMIT_CAP}")
    spf = _spf_table(_pow2_ceil(maxm)) if maxm <= sieve_budget else None
    if total <= rational_cap:
        mu = moebius_table(max(maxm, 1))
        route1, route2, counts = _euler_exact(members, spf, mu)
        _spot_check_counts(members, counts)
        if route1 != route2:
            raise AssertionError("exact Euler routes disagree; this is a bug")
        value = float(route1)
        agreement = 0.0
        exact: Fraction | None = route1
        method = "rational"
    else:
        if maxm > sieve_budget:
            raise ResourceCapError(f"max member {maxm} exceeds sieve budget {sieve_budget}")
        ratio_table = _euler_ratio_sieve(_pow2_ceil(maxm))
        route1_f = math.fsum(ratio_table[members].tolist())
        mu = moebius_table(maxm)
        weights = np.zeros(maxm + 1, dtype=np.float64)
        qs = np.arange(1, maxm + 1, dtype=np.float64)
        weights[1:] = mu[1 : maxm + 1].astype(np.float64) / qs
        ind = np.zeros(maxm + 1, dtype=np.int64)
        ind[members] = 1
        ind[0] = 0
        route2_f = _weighted_multiple_sum(weights, ind)
        agreement = abs(route1_f - route2_f) / abs(route1_f)
        if agreement > EULER_AGREEMENT_RTOL:
            raise AssertionError(f"Euler routes disagree by {agreement:.3e} relative; this is a bug")
        value = route1_f
        exact = None
        method = "float"
    return EulerReport(
        statistic="euler_ratio_sum",
        n=pattern.n,
        k=pattern.k,
        kappa=pattern.kappa,
        value=value,
        value_exact=exact,
        total=total,
        ratio=value / total,
        predicted=SQUAREFREE_DENSITY,
        method=method,
        agreement=agreement,
    )
