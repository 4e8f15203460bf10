"""Digit patterns and the integer sets they prescribe.

A pattern of bit-length n fixes some binary digits and leaves the rest
free; position 0 is the least significant bit.  The member set consists
of every integer obtainable by filling the free positions, so it has
exactly 2**(free positions) elements.  Text form is MSB-first over the
alphabet {0,1,*}, e.g. "**1" fixes bit 0 to 1 and frees bits 1 and 2.
"""

from __future__ import annotations

from dataclasses import dataclass
from enum import Enum
from typing import Iterable, Iterator, Sequence

import numpy as np

from .errors import ResourceCapError, ValidationError

MIN_BITS = 2
MAX_BITS = 63  # members must fit an unsigned 64-bit word

DEFAULT_MEMBER_CAP = 1 << 28
DEFAULT_HISTOGRAM_CAP = 1 << 24


class DigitSymbol(Enum):
    FIXED0 = "0"
    FIXED1 = "1"
    FREE = "*"


@dataclass(frozen=True)
class DigitPattern:
    """A validated digit template; construct via :func:`make_pattern`."""

    n: int
    symbols: tuple[DigitSymbol, ...]
    fixed_mask: int
    fixed_value: int
    free_positions: tuple[int, ...]

    @property
    def k(self) -> int:
        """Number of fixed positions."""
        return self.n - len(self.free_positions)

    @property
    def kappa(self) -> float:
        return self.k / self.n

    @property
    def starred(self) -> bool:
        """True when bit 0 is fixed to 1, forcing all members odd."""
        return self.symbols[0] is DigitSymbol.FIXED1

    @property
    def degenerate(self) -> bool:
        return not self.free_positions

    def member_count(self) -> int:
        return 1 << len(self.free_positions)

    def max_member(self) -> int:
        return self.fixed_value + sum(1 << i for i in self.free_positions)

    def __str__(self) -> str:
        return pattern_to_string(self)


def make_pattern(
    n: int,
    symbols: Sequence[DigitSymbol],
    *,
    allow_degenerate: bool = False,
) -> DigitPattern:
    """Validate and build a pattern.

    Rejects n outside [2, 63], a symbol sequence of the wrong length, and
    (unless ``allow_degenerate``) fully fixed patterns, which usually
    indicate a configuration bug.
    """
    if not MIN_BITS <= n <= MAX_BITS:
        raise ValidationError(f"bit length must be in [{MIN_BITS}, {MAX_BITS}], got {n}")
    if len(symbols) != n:
        raise ValidationError(f"expected {n} symbols, got {len(symbols)}")
    syms = tuple(symbols)
    for s in syms:
        if not isinstance(s, DigitSymbol):
            raise ValidationError(f"not a DigitSymbol: {s!r}")
    free = tuple(i for i, s in enumerate(syms) if s is DigitSymbol.FREE)
    if not free and not allow_degenerate:
        raise ValidationError("pattern has no free positions (pass allow_degenerate=True if intended)")
    fixed_mask = 0
    fixed_value = 0
    for i, s in enumerate(syms):
        if s is not DigitSymbol.FREE:
            fixed_mask |= 1 << i
            if s is DigitSymbol.FIXED1:
                fixed_value |= 1 << i
    return DigitPattern(n=n, symbols=syms, fixed_mask=fixed_mask, fixed_value=fixed_value, free_positions=free)


_CHAR_TO_SYMBOL = {"0": DigitSymbol.FIXED0, "1": DigitSymbol.FIXED1, "*": DigitSymbol.FREE}


def pattern_from_string(text: str, *, allow_degenerate: bool = False) -> DigitPattern:
    """Parse the MSB-first text form; only '0', '1' and '*' are accepted."""
    bad = set(text) - set(_CHAR_TO_SYMBOL)
    if bad:
        raise ValidationError(f"pattern may only contain 0, 1, *; found {sorted(bad)!r}")
    symbols = [_CHAR_TO_SYMBOL[c] for c in reversed(text)]
    return make_pattern(len(text), symbols, allow_degenerate=allow_degenerate)


def pattern_to_string(pattern: DigitPattern) -> str:
    return "".join(s.value for s in reversed(pattern.symbols))


def member_count(pattern: DigitPattern) -> int:
    """Closed form 2**(n - k); equals the length of enumerate_members."""
    return pattern.member_count()


def enumerate_members(pattern: DigitPattern) -> Iterator[int]:
    """Yield all members in ascending order.

    Walks a binary counter over the free positions; each step updates the
    previous member by one precomputed delta (the flipped-carry mass), so
    the cost per member is O(1) amortized.
    """
    free = pattern.free_positions
    value = pattern.fixed_value
    yield value
    if not free:
        return
    deltas = []
    acc = 0
    for pos in free:
        deltas.append((1 << pos) - acc)
        acc += 1 << pos
    for c in range(1, 1 << len(free)):
        value += deltas[(c & -c).bit_length() - 1]
        yield value


def member_array(pattern: DigitPattern, *, cap: int = DEFAULT_MEMBER_CAP) -> np.ndarray:
    """All members as an ascending uint64 array.

    Doubling construction: each free position appends a shifted copy of
    the block built so far, which preserves ascending order.
    """
    total = pattern.member_count()
    if total > cap:
        raise ResourceCapError(f"member count {total} exceeds cap {cap}")
    out = np.empty(total, dtype=np.uint64)
    out[0] = pattern.fixed_value
    size = 1
    for pos in pattern.free_positions:
        np.add(out[:size], np.uint64(1 << pos), out=out[size : 2 * size])
        size *= 2
    return out


def residue_array(pattern: DigitPattern, q: int, *, cap: int = DEFAULT_MEMBER_CAP) -> np.ndarray:
    """Residues of all members mod q, in member order, as uint64.

    Residues are carried through the same doubling construction as
    :func:`member_array` with a conditional subtract, so no member is
    ever divided by q.
    """
    if q < 2:
        raise ValidationError(f"modulus must be >= 2, got {q}")
    if q > (1 << 63) - 1:
        raise ValidationError(f"modulus must fit 63 bits, got {q}")
    total = pattern.member_count()
    if total > cap:
        raise ResourceCapError(f"member count {total} exceeds cap {cap}")
    out = np.empty(total, dtype=np.uint64)
    out[0] = pattern.fixed_value % q
    qq = np.uint64(q)
    size = 1
    for pos in pattern.free_positions:
        delta = np.uint64(pow(2, pos, q))
        block = out[size : 2 * size]
        np.add(out[:size], delta, out=block)
        np.subtract(block, qq, out=block, where=block >= qq)
        size *= 2
    return out


@dataclass(frozen=True)
class CongruenceProfile:
    """Exact per-residue member counts for one modulus."""

    q: int
    counts: np.ndarray  # int64, length q; counts[c] = #{members = c mod q}

    @property
    def multiples(self) -> int:
        """#members divisible by q."""
        return int(self.counts[0])

    def total(self) -> int:
        return int(self.counts.sum())


def congruence_histogram(
    pattern: DigitPattern,
    q: int,
    *,
    cap: int = DEFAULT_MEMBER_CAP,
    modulus_cap: int = DEFAULT_HISTOGRAM_CAP,
) -> CongruenceProfile:
    """Exact residue histogram of the member set mod q."""
    if q < 2:
        raise ValidationError(f"modulus must be >= 2, got {q}")
    if q > modulus_cap:
        raise ResourceCapError(f"histogram modulus {q} exceeds cap {modulus_cap}")
    res = residue_array(pattern, q, cap=cap)
    counts = np.bincount(res.astype(np.int64), minlength=q)
    return CongruenceProfile(q=q, counts=counts)


@dataclass(frozen=True)
class MultiplesCount:
    """#members divisible by q, with the distance from the uniform share."""

    q: int
    count: int
    expected: float  # member_count / q
    deviation: float  # |count - expected|


def count_multiples(pattern: DigitPattern, q: int, *, cap: int = DEFAULT_MEMBER_CAP) -> MultiplesCount:
    """Count members divisible by q (histogram bin 0, without building the histogram)."""
    res = residue_array(pattern, q, cap=cap)
    count = int(np.count_nonzero(res == 0))
    expected = pattern.member_count() / q
    return MultiplesCount(q=q, count=count, expected=expected, deviation=abs(count - expected))


def random_pattern(rng, n: int, k: int, *, starred: bool = False) -> DigitPattern:
    """Seeded random pattern with exactly k fixed positions.

    With ``starred`` the low bit is fixed to 1 and counts toward k, so all
    members are odd.
    """
    if not 0 < k < n:
        raise ValidationError(f"k must be in (0, {n}), got {k}")
    symbols = [DigitSymbol.FREE] * n
    positions = list(range(n))
    if starred:
        symbols[0] = DigitSymbol.FIXED1
        positions.remove(0)
        k -= 1
    for pos in rng.sample(positions, k):
        symbols[pos] = rng.choice((DigitSymbol.FIXED0, DigitSymbol.FIXED1))
    return make_pattern(n, symbols)


def split_free_positions(
    pattern: DigitPattern, chosen: Iterable[int]
) -> tuple[DigitPattern, DigitPattern]:
    """Split the member set into a carry-free sumset A + B.

    B frees exactly the chosen positions (all other bits 0); A is the
    original pattern with the chosen positions re-fixed to 0.  Supports
    are disjoint, so every member decomposes uniquely as a + b.
    """
    chosen_set = frozenset(chosen)
    free_set = frozenset(pattern.free_positions)
    bad = chosen_set - free_set
    if bad:
        raise ValidationError(f"positions {sorted(bad)} are not free in the pattern")
    a_syms = [
        DigitSymbol.FIXED0 if i in chosen_set else s for i, s in enumerate(pattern.symbols)
    ]
    b_syms = [
        DigitSymbol.FREE if i in chosen_set else DigitSymbol.FIXED0 for i in range(pattern.n)
    ]
    sub_a = make_pattern(pattern.n, a_syms, allow_degenerate=True)
    sub_b = make_pattern(pattern.n, b_syms, allow_degenerate=True)
    return sub_a, sub_b
