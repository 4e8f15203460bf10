"""Legendre symbols, exponential sums and quadratic-residue splits.

The quadratic character mod p is evaluated from a precomputed table for
small p and by modular exponentiation above the table threshold.
"""

from __future__ import annotations

import cmath
import math
import warnings
from dataclasses import dataclass
from typing import Iterable, Sequence

import numpy as np

from .errors import ResourceCapError, ValidationError
from .patterns import (
    DEFAULT_HISTOGRAM_CAP,
    DEFAULT_MEMBER_CAP,
    DigitPattern,
    congruence_histogram,
    residue_array,
)
from . import primes

CHAR_TABLE_CAP = 1 << 22


def legendre(a: int, p: int) -> int:
    """Legendre symbol (a/p) in {-1, 0, +1} via Euler's criterion."""
    primes.require_odd_prime(p)
    a %= p
    if a == 0:
        return 0
    r = pow(a, (p - 1) // 2, p)
    return -1 if r == p - 1 else 1


class CharContext:
    """Quadratic character mod an odd prime, with an optional lookup table."""

    def __init__(self, p: int, *, table_cap: int = CHAR_TABLE_CAP):
        primes.require_odd_prime(p)
        self.p = p
        self._table: np.ndarray | None = None
        if p <= table_cap:
            vals = np.full(p, -1, dtype=np.int8)
            idx = np.arange(p, dtype=np.int64)
            vals[(idx * idx) % p] = 1
            vals[0] = 0
            vals.setflags(write=False)
            self._table = vals

    def chi(self, a: int) -> int:
        a %= self.p
        if self._table is not None:
            return int(self._table[a])
        if a == 0:
            return 0
        r = pow(a, (self.p - 1) // 2, self.p)
        return -1 if r == self.p - 1 else 1

    def chi_array(self, residues: np.ndarray) -> np.ndarray:
        """Vectorized character values for residues already reduced mod p."""
        if self._table is not None:
            return self._table[residues]
        return np.array([self.chi(int(a)) for a in residues], dtype=np.int8)


@dataclass(frozen=True)
class ExpSumResult:
    """One exponential sum over the member set."""

    re: float
    im: float
    terms: int  # number of summands
    normalized: float  # |sum| / terms
    reference: float  # 2^(-sqrt(n)), the small-q decay level

    @property
    def value(self) -> complex:
        return complex(self.re, self.im)

    @property
    def magnitude(self) -> float:
        return abs(self.value)


def exp_sum(pattern: DigitPattern, a: int, q: int, *, cap: int = DEFAULT_MEMBER_CAP) -> ExpSumResult:
    """Sum of exp(2*pi*i*a*s/q) over all members s.

    Goes through the residue histogram (q terms) when q is small next to
    the member count, otherwise sums member by member.
    """
    if q < 1:
        raise ValidationError(f"denominator must be >= 1, got {q}")
    total = pattern.member_count()
    a_mod = a % q
    if q == 1 or a_mod == 0:
        value = complex(total, 0.0)
    elif q <= min(total // 4, DEFAULT_HISTOGRAM_CAP):
        prof = congruence_histogram(pattern, q, cap=cap)
        phases = np.exp((2j * math.pi * a_mod / q) * np.arange(q, dtype=np.float64))
        value = complex(np.dot(prof.counts.astype(np.float64), phases))
    else:
        res = residue_array(pattern, q, cap=cap)
        if a_mod * (q - 1) < (1 << 63):
            ar = (res * np.uint64(a_mod)) % np.uint64(q)
            value = complex(np.exp((2j * math.pi / q) * ar.astype(np.float64)).sum())
        else:
            # too wide for 64-bit products; fall back to exact Python ints
            value = sum(cmath.exp(2j * math.pi * ((a_mod * int(r)) % q) / q) for r in res)
    mag = abs(value)
    return ExpSumResult(
        re=value.real,
        im=value.imag,
        terms=total,
        normalized=mag / total,
        reference=2.0 ** (-math.sqrt(pattern.n)),
    )


@dataclass(frozen=True)
class QrSplit:
    """Member counts by quadratic-residue class mod p."""

    p: int
    plus: int
    minus: int
    zero: int
    deviation: float  # |plus/total - 1/2|

    @property
    def total(self) -> int:
        return self.plus + self.minus + self.zero


def qr_split(
    pattern: DigitPattern, p: int, *, cap: int = DEFAULT_MEMBER_CAP, table_cap: int = CHAR_TABLE_CAP
) -> QrSplit:
    """Split the member set into residues / non-residues / multiples of p.

    The equidistribution statement targets primes in the dyadic window
    (2^n, 2^(n+1)); outside it the split is still computed but a warning
    is emitted.
    """
    ctx = CharContext(p, table_cap=table_cap)
    if not (1 << pattern.n) < p < (1 << (pattern.n + 1)):
        warnings.warn(
            f"prime {p} outside the dyadic window (2^{pattern.n}, 2^{pattern.n + 1})",
            stacklevel=2,
        )
    res = residue_array(pattern, p, cap=cap)
    if ctx._table is not None:
        chis = ctx._table[res.astype(np.int64)]
        plus = int(np.count_nonzero(chis == 1))
        minus = int(np.count_nonzero(chis == -1))
        zero = int(np.count_nonzero(chis == 0))
    else:
        plus = minus = zero = 0
        for r in res:
            c = ctx.chi(int(r))
            if c == 1:
                plus += 1
            elif c == -1:
                minus += 1
            else:
                zero += 1
    total = pattern.member_count()
    return QrSplit(p=p, plus=plus, minus=minus, zero=zero, deviation=abs(plus / total - 0.5))


@dataclass(frozen=True)
class DoubleCharSum:
    """Exact value of sum_{a in A} sum_{b in B} chi(a + b)."""

    value: int
    normalized: float  # |value| / (#A * #B)
    size_a: int
    size_b: int
    # Applicability of the cancellation corollary for a given eta:
    # #A >= p^(1/2 + eta) and #B >= p^eta.
    eta: float
    cond_a: bool
    cond_b: bool


def double_char_sum(
    set_a: Iterable[int],
    set_b: Iterable[int],
    ctx: CharContext,
    *,
    eta: float = 0.05,
    pair_budget: int = 1 << 26,
) -> DoubleCharSum:
    """Exact double character sum over two subsets of F_p."""
    a = np.array(sorted(set_a), dtype=np.int64)
    b = np.array(sorted(set_b), dtype=np.int64)
    p = ctx.p
    for arr, name in ((a, "A"), (b, "B")):
        if arr.size == 0:
            raise ValidationError(f"set {name} is empty")
        if arr[0] < 0 or arr[-1] >= p:
            raise ValidationError(f"set {name} has elements outside [0, {p})")
    if a.size * b.size > pair_budget:
        raise ResourceCapError(f"{a.size * b.size} pairs exceed budget {pair_budget}")
    if ctx._table is not None:
        sums = (a[:, None] + b[None, :]) % p
        value = int(ctx._table[sums].sum(dtype=np.int64))
    else:
        value = sum(ctx.chi(int(x + y)) for x in a for y in b)
    size_a, size_b = int(a.size), int(b.size)
    return DoubleCharSum(
        value=value,
        normalized=abs(value) / (size_a * size_b),
        size_a=size_a,
        size_b=size_b,
        eta=eta,
        cond_a=size_a >= p ** (0.5 + eta),
        cond_b=size_b >= p**eta,
    )


@dataclass(frozen=True)
class MomentStat:
    """Moment of maximal partial character sums over spaced windows."""

    value: int
    reference: float  # p^(1/2 + 1/(2 nu)) * H^(2 nu - 2)
    points: int
    window: int
    nu: int


def moment_char_sum(points: Sequence[int], window: int, nu: int, ctx: CharContext) -> MomentStat:
    """sum_j max_{h <= H} |sum_{i=1..h} chi(i + w_j)|^(2 nu), exactly.

    Points must be strictly increasing with consecutive gaps >= H, and the
    last window must stay inside [0, p).
    """
    if not points:
        raise ValidationError("empty point list")
    if window < 1:
        raise ValidationError(f"window must be >= 1, got {window}")
    if nu < 1:
        raise ValidationError(f"nu must be >= 1, got {nu}")
    pts = [int(w) for w in points]
    if pts[0] < 0 or pts[-1] >= ctx.p:
        raise ValidationError("points must lie in [0, p)")
    for w0, w1 in zip(pts, pts[1:]):
        if w1 - w0 < window:
            raise ValidationError(f"spacing violation: {w1} - {w0} < {window}")
    if pts[-1] + window >= ctx.p:
        raise ValidationError(f"window [{pts[-1] + 1}, {pts[-1] + window}] exceeds p = {ctx.p}")
    total = 0
    for w in pts:
        prefix = 0
        best = 0
        for i in range(1, window + 1):
            prefix += ctx.chi(w + i)
            best = max(best, abs(prefix))
        total += best ** (2 * nu)
    reference = ctx.p ** (0.5 + 0.5 / nu) * float(window) ** (2 * nu - 2)
    return MomentStat(value=total, reference=reference, points=len(pts), window=window, nu=nu)


def spaced_subset(values: Iterable[int], separation: int) -> list[int]:
    """Ascending greedy selection with consecutive gaps > separation.

    Keeps at least #values/(separation + 1) points, which meets the
    #values/(2*separation + 1) guarantee of the thinning step.
    """
    if separation < 1:
        raise ValidationError(f"separation must be >= 1, got {separation}")
    vals = sorted(set(values))
    if not vals:
        raise ValidationError("empty value set")
    out = [vals[0]]
    for v in vals[1:]:
        if v - out[-1] > separation:
            out.append(v)
    return out
